#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <set>

#include "clustab/rng.hpp"
#include "clustab/stability.hpp"

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

// Diagnostic classifier: ignores the data and emits uniform labels over the
// classes seen at fit time. Its stability should match its own baseline.
ClassifierFit random_dummy_fit() {
  return [](const Dataset&, const LabelVector& labels,
            std::uint64_t seed) -> Predictor {
    std::set<int> classes(labels.begin(), labels.end());
    const std::vector<int> ids(classes.begin(), classes.end());
    auto rng = std::make_shared<Rng>(seed);
    return [ids, rng](const Dataset& data) {
      LabelVector out;
      out.reserve(data.n_samples);
      for (std::size_t i = 0; i < data.n_samples; ++i) {
        out.push_back(ids[rng->below(ids.size())]);
      }
      return out;
    };
  };
}

}  // namespace

TEST_CASE("random_labels frequencies concentrate at 1/k") {
  const LabelVector labels = random_labels(2, 10000, 5);
  const double ones =
      static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  CHECK(ones / 10000.0 == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("random_labels covers every class, even when k = n") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LabelVector labels = random_labels(6, 6, seed);
    std::set<int> seen(labels.begin(), labels.end());
    CHECK(seen.size() == 6);
  }
}

TEST_CASE("random_labels is deterministic and validates inputs") {
  CHECK(random_labels(3, 50, 7) == random_labels(3, 50, 7));
  CHECK_THROWS_AS(random_labels(1, 50, 7), std::invalid_argument);
  CHECK_THROWS_AS(random_labels(8, 5, 7), std::invalid_argument);
}

TEST_CASE("a perfectly clustered cell has normalized stability zero") {
  const Dataset train = separated_blobs(40, 1.0, 61);
  const Dataset validation = separated_blobs(40, 1.0, 62);
  const StabilityCell cell = stability_cell(
      train, validation, kmeans_config(), knn_config(15), 5, 10, 99);
  CHECK(cell.raw_distance == 0.0);
  CHECK(cell.normalized == 0.0);
  CHECK(cell.random_baseline > 0.5);
  CHECK_FALSE(cell.baseline_degenerate);
}

TEST_CASE("cells are bit-identical across reruns with one seed") {
  const Dataset train = separated_blobs(25, 2.5, 63);
  const Dataset validation = separated_blobs(25, 2.5, 64);
  const StabilityCell a = stability_cell(
      train, validation, kmeans_config(), knn_config(5), 3, 5, 1234);
  const StabilityCell b = stability_cell(
      train, validation, kmeans_config(), knn_config(5), 3, 5, 1234);
  CHECK(a.raw_distance == b.raw_distance);
  CHECK(a.random_baseline == b.random_baseline);
  CHECK(a.normalized == b.normalized);
  CHECK(a.train_distance == b.train_distance);
}

TEST_CASE("cell distances live in [0,1] and normalized is non-negative") {
  Rng rng(65);
  for (int trial = 0; trial < 5; ++trial) {
    const Dataset train = separated_blobs(12, 6.0, 100 + trial);
    const Dataset validation = separated_blobs(12, 6.0, 200 + trial);
    const StabilityCell cell =
        stability_cell(train, validation, kmeans_config(), knn_config(3),
                       2 + static_cast<int>(rng.below(4)), 4, 300 + trial);
    CHECK(cell.raw_distance >= 0.0);
    CHECK(cell.raw_distance <= 1.0);
    CHECK(cell.normalized >= 0.0);
    CHECK(cell.train_distance >= 0.0);
    CHECK(cell.train_distance <= 1.0);
  }
}

TEST_CASE("the label-shuffling dummy self-normalizes near one") {
  double total = 0.0;
  int count = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const Dataset train = separated_blobs(20, 1.0, 400 + trial);
    const Dataset validation = separated_blobs(20, 1.0, 500 + trial);
    const StabilityCell cell = stability_cell_with(
        train, validation, kmeans_config(), random_dummy_fit(), 5, 20,
        600 + trial);
    total += cell.normalized;
    ++count;
  }
  CHECK(total / count == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("pre-permutation random distance approaches 1 - 1/k from above") {
  // A uniform predictor against any fixed labeling mismatches with
  // probability 1 - 1/k before alignment; the aligned distance can only be
  // smaller.
  Rng rng(66);
  for (int k = 2; k <= 5; ++k) {
    const std::size_t n = 4000;
    const LabelVector fixed = random_labels(k, n, 71);
    double plain = 0.0;
    LabelVector uniform(n);
    for (auto& label : uniform) label = static_cast<int>(rng.below(k));
    for (std::size_t i = 0; i < n; ++i) plain += uniform[i] != fixed[i];
    plain /= static_cast<double>(n);
    CHECK(plain == doctest::Approx(1.0 - 1.0 / k).epsilon(0.05));
    const double aligned =
        misclassification_distance(uniform, fixed).distance;
    CHECK(aligned <= plain + 1e-12);
  }
}

TEST_CASE("degenerate zero baseline falls back to the raw distance") {
  // A constant-output classifier cannot beat chance, so force a baseline of
  // zero by injecting a fit that always predicts the validation clustering
  // perfectly. Normalized falls back to raw, flagged.
  const Dataset train = separated_blobs(10, 1.0, 77);
  const Dataset validation = separated_blobs(10, 1.0, 78);
  const ClassifierFit perfect = [](const Dataset&, const LabelVector&,
                                   std::uint64_t) -> Predictor {
    return [](const Dataset& data) {
      // Recluster on the fly: mirrors the validation-side clustering.
      return fit_kmeans(data, 5, {}, derive_seed(1234, 2)).labels;
    };
  };
  // Seed 1234 makes the inner validation clustering seed derive_seed(1234,2),
  // so the "classifier" reproduces it exactly, including for random labels.
  const StabilityCell cell = stability_cell_with(
      train, validation, kmeans_config(), perfect, 5, 3, 1234);
  CHECK(cell.random_baseline == 0.0);
  CHECK(cell.baseline_degenerate);
  CHECK(cell.normalized == cell.raw_distance);
}

TEST_CASE("auto-k cells report the found cluster count") {
  const Dataset train = separated_blobs(30, 1.0, 81);
  const Dataset validation = separated_blobs(30, 1.0, 82);
  ClustererConfig dbscan;
  dbscan.kind = ClustererKind::dbscan;
  dbscan.dbscan = {5.0, 5};
  const StabilityCell cell = stability_cell(
      train, validation, dbscan, knn_config(5), std::nullopt, 5, 83);
  CHECK(cell.k == 5);
  CHECK(cell.raw_distance == doctest::Approx(0.0).epsilon(0.02));
}

TEST_CASE("degenerate clusterings raise CellError") {
  const Dataset train = separated_blobs(10, 1.0, 84);
  const Dataset validation = separated_blobs(10, 1.0, 85);
  ClustererConfig dbscan;
  dbscan.kind = ClustererKind::dbscan;
  dbscan.dbscan = {1000.0, 2};  // everything merges into one cluster
  CHECK_THROWS_AS(stability_cell(train, validation, dbscan, knn_config(3),
                                 std::nullopt, 3, 86),
                  CellError);
}

TEST_CASE("k contract mismatches are caller bugs, not cell errors") {
  const Dataset train = separated_blobs(10, 1.0, 87);
  ClustererConfig dbscan;
  dbscan.kind = ClustererKind::dbscan;
  CHECK_THROWS_AS(stability_cell(train, train, kmeans_config(),
                                 knn_config(3), std::nullopt, 3, 88),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      stability_cell(train, train, dbscan, knn_config(3), 4, 3, 88),
      std::invalid_argument);
}
