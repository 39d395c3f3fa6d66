#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "clustab/selection.hpp"

using namespace clustab;

namespace {

Dataset separated_blobs(int n_per_blob, double spread, std::uint64_t seed) {
  const std::vector<std::vector<double>> centers{
      {0.0, 0.0}, {40.0, 0.0}, {0.0, 40.0}, {40.0, 40.0}, {20.0, 80.0}};
  return make_blobs(static_cast<std::size_t>(n_per_blob) * centers.size(), 2,
                    centers, spread, seed);
}

ClustererConfig kmeans_config() {
  ClustererConfig config;
  config.kind = ClustererKind::kmeans;
  return config;
}

ClassifierConfig knn_config(int n_neighbors) {
  ClassifierConfig config;
  config.kind = ClassifierKind::knn;
  config.knn.n_neighbors = n_neighbors;
  return config;
}

CvGrid small_grid(std::vector<int> ks, int n_rep = 2) {
  CvGrid grid;
  grid.n_fold = 2;
  grid.n_rep = n_rep;
  grid.k_values = std::move(ks);
  grid.n_rnd = 5;
  grid.base_seed = 7;
  return grid;
}

bool results_identical(const StabilityResult& a, const StabilityResult& b) {
  if (a.k_star != b.k_star || a.per_k.size() != b.per_k.size()) return false;
  for (const auto& [k, stats] : a.per_k) {
    const auto& other = b.per_k.at(k);
    if (stats.mean_norm != other.mean_norm || stats.sd != other.sd ||
        stats.ci_lo != other.ci_lo || stats.ci_hi != other.ci_hi ||
        stats.mean_train != other.mean_train) {
      return false;
    }
    for (std::size_t i = 0; i < stats.cells.size(); ++i) {
      if (stats.cells[i].raw_distance != other.cells[i].raw_distance ||
          stats.cells[i].normalized != other.cells[i].normalized ||
          stats.cells[i].random_baseline != other.cells[i].random_baseline) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("selection recovers the planted cluster count with stability zero") {
  const Dataset train = separated_blobs(30, 1.0, 91);
  const StabilityResult result = best_nclust_cv(
      train, kmeans_config(), knn_config(5), small_grid({2, 3, 4, 5, 6}));
  CHECK(result.k_star == 5);
  CHECK(result.per_k.at(5).mean_norm == doctest::Approx(0.0).epsilon(1e-9));
  // ci95 brackets the mean for every k.
  for (const auto& [k, stats] : result.per_k) {
    CHECK(stats.ci_lo <= stats.mean_norm + 1e-12);
    CHECK(stats.ci_hi >= stats.mean_norm - 1e-12);
    CHECK(stats.cells.size() == 4);  // 2 folds x 2 reps
  }
}

TEST_CASE("a singleton k grid selects that k") {
  const Dataset train = separated_blobs(20, 1.5, 92);
  const StabilityResult result = best_nclust_cv(
      train, kmeans_config(), knn_config(5), small_grid({2}));
  CHECK(result.k_star == 2);
}

TEST_CASE("exact mean ties resolve to the largest k") {
  std::map<int, KStats> per_k;
  per_k[3].mean_norm = 0.25;
  per_k[4].mean_norm = 0.25;
  per_k[5].mean_norm = 0.4;
  CHECK(select_k_star(per_k) == 4);
  per_k[5].mean_norm = 0.25 + 5e-13;  // inside the tie window
  CHECK(select_k_star(per_k) == 5);
  per_k[5].mean_norm = 0.26;
  CHECK(select_k_star(per_k) == 4);
}

TEST_CASE("parallel and serial runs are bit-identical") {
  const Dataset train = separated_blobs(24, 2.0, 93);
  const auto serial = best_nclust_cv(train, kmeans_config(), knn_config(5),
                                     small_grid({2, 3, 4}), std::nullopt, 1);
  const auto parallel = best_nclust_cv(train, kmeans_config(), knn_config(5),
                                       small_grid({2, 3, 4}), std::nullopt, 4);
  CHECK(results_identical(serial, parallel));
}

TEST_CASE("mean_norm is invariant under k order because cells are seeded") {
  const Dataset train = separated_blobs(20, 2.0, 94);
  const auto a = best_nclust_cv(train, kmeans_config(), knn_config(5),
                                small_grid({2, 4}));
  const auto b = best_nclust_cv(train, kmeans_config(), knn_config(5),
                                small_grid({4}));
  CHECK(a.per_k.at(4).mean_norm == b.per_k.at(4).mean_norm);
}

TEST_CASE("confidence intervals shrink as repetitions grow") {
  // Overlapping blobs keep the per-cell dispersion positive; the sqrt(cells)
  // denominator then drives the interval width down.
  const Dataset train = separated_blobs(20, 4.0, 95);
  double previous = std::numeric_limits<double>::infinity();
  for (int n_rep : {2, 10, 50}) {
    const auto result = best_nclust_cv(train, kmeans_config(), knn_config(5),
                                       small_grid({3}, n_rep));
    const auto& stats = result.per_k.at(3);
    const double width = stats.ci_hi - stats.ci_lo;
    CHECK(width > 0.0);
    CHECK(width < previous);
    previous = width;
  }
}

TEST_CASE("cell errors abort with the offending coordinates") {
  // Feed indistinct data so kmeans cannot produce k clusters.
  Dataset degenerate;
  degenerate.n_samples = 12;
  degenerate.n_features = 1;
  degenerate.values.assign(12, 3.14);
  CHECK_THROWS_WITH_AS(
      best_nclust_cv(degenerate, kmeans_config(), knn_config(1),
                     small_grid({2})),
      doctest::Contains("cell (k=2"), std::runtime_error);
}

TEST_CASE("fixed-k evaluation on clean blobs scores perfectly") {
  const Dataset train = separated_blobs(40, 1.0, 96);
  const Dataset test = separated_blobs(20, 1.0, 97);
  const EvaluationReport report =
      evaluate(train, test, 5, kmeans_config(), knn_config(15), 5);
  CHECK(report.acc == 1.0);
  CHECK(report.mcc == doctest::Approx(1.0));
  CHECK(report.f1_macro == doctest::Approx(1.0));
  REQUIRE(report.ami.has_value());
  CHECK(*report.ami == doctest::Approx(1.0));
  REQUIRE(report.acc_true.has_value());
  CHECK(*report.acc_true == 1.0);
  CHECK(report.k_train == 5);
  CHECK(report.k_test == 5);
}

TEST_CASE("evaluation works without ground-truth labels") {
  Dataset train = separated_blobs(30, 1.0, 98);
  Dataset test = separated_blobs(15, 1.0, 99);
  train.true_labels.reset();
  test.true_labels.reset();
  const EvaluationReport report =
      evaluate(train, test, 5, kmeans_config(), knn_config(5), 6);
  CHECK(report.acc == 1.0);
  CHECK_FALSE(report.ami.has_value());
  CHECK_FALSE(report.acc_true.has_value());
}

TEST_CASE("auto-k selection groups cells by the found k") {
  const Dataset train = separated_blobs(40, 1.0, 101);
  ClustererConfig dbscan;
  dbscan.kind = ClustererKind::dbscan;
  dbscan.dbscan = {5.0, 5};
  CvGrid grid = small_grid({}, 3);
  const StabilityResult result =
      best_nclust_cv_auto(train, dbscan, knn_config(5), grid);
  CHECK(result.mode == StabilityResult::Mode::auto_k);
  CHECK(result.k_star == 5);
  REQUIRE(result.selected_cell.has_value());
  CHECK(result.per_k.at(5).mean_norm == doctest::Approx(0.0).epsilon(0.05));

  const Dataset test = separated_blobs(20, 1.0, 102);
  const EvaluationReport report =
      evaluate_auto(train, test, result, dbscan, knn_config(5));
  CHECK(report.acc >= 0.95);
  CHECK(report.k_test == 5);
}

TEST_CASE("auto-k fails loudly when every cell degenerates") {
  const Dataset train = separated_blobs(20, 1.0, 103);
  ClustererConfig dbscan;
  dbscan.kind = ClustererKind::dbscan;
  dbscan.dbscan = {1000.0, 2};  // single giant cluster everywhere
  CHECK_THROWS_WITH_AS(
      best_nclust_cv_auto(train, dbscan, knn_config(5), small_grid({})),
      doctest::Contains("all cells"), std::runtime_error);
}

TEST_CASE("grid contract: fixed needs k values, auto forbids them") {
  const Dataset train = separated_blobs(20, 1.0, 104);
  ClustererConfig dbscan;
  dbscan.kind = ClustererKind::dbscan;
  CHECK_THROWS_AS(best_nclust_cv(train, kmeans_config(), knn_config(3),
                                 small_grid({})),
                  std::invalid_argument);
  CHECK_THROWS_AS(best_nclust_cv_auto(train, dbscan, knn_config(3),
                                      small_grid({2, 3})),
                  std::invalid_argument);
  CHECK_THROWS_AS(best_nclust_cv(train, dbscan, knn_config(3),
                                 small_grid({2})),
                  std::invalid_argument);
}
