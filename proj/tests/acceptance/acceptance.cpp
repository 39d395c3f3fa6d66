// Acceptance suite: runs every documented exit criterion against the frozen
// blob fixture and the randomized oracle batteries, printing one line per
// criterion. Exit status is non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <thread>
#include <string>
#include <vector>

#include "clustab/assignment.hpp"
#include "clustab/metrics.hpp"
#include "clustab/rng.hpp"
#include "clustab/selection.hpp"
#include "clustab/stability.hpp"
#include "support/fixture.hpp"
#include "support/oracles.hpp"

using namespace clustab;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s  %s (%s)\n", ok ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(
    const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::string fmt(const char* pattern, auto... args) {
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer), pattern, args...);
  return buffer;
}

// --- criterion 1: blobs end-to-end -------------------------------------------

void blobs_end_to_end() {
  const auto start = std::chrono::steady_clock::now();
  const Dataset data = fixture::blobs();
  auto [plan, train, test] = train_test_split(data, 0.3, fixture::kSplitSeed);

  const StabilityResult result =
      best_nclust_cv(train, fixture::kmeans_config(), fixture::knn15(),
                     fixture::paper_grid(), std::nullopt, /*workers=*/1);
  const EvaluationReport held_out =
      evaluate(train, test, result.k_star, fixture::kmeans_config(),
               fixture::knn15(), derive_seed(fixture::kCvSeed, 1001));
  const double elapsed = seconds_since(start);

  const double mean5 = result.per_k.at(5).mean_norm;
  const bool ok = result.k_star == 5 && mean5 <= 0.01 &&
                  held_out.acc == 1.0 && held_out.mcc == 1.0 &&
                  held_out.ami && *held_out.ami == 1.0 && elapsed < 60.0;
  report("blobs end-to-end (k*=5, stability<=0.01, ACC=MCC=AMI=1, <60s)", ok,
         fmt("k*=%d mean_norm=%.4g acc=%.6f mcc=%.6f ami=%.6f t=%.1fs",
             result.k_star, mean5, held_out.acc, held_out.mcc,
             held_out.ami ? *held_out.ami : -1.0, elapsed));
}

// --- criterion 2: internal-index comparison ----------------------------------

void internal_indices() {
  const Dataset data = fixture::blobs();
  auto [plan, train, test] = train_test_split(data, 0.3, fixture::kSplitSeed);
  const std::vector<int> ks{2, 3, 4, 5, 6};
  const InternalSweep on_train =
      internal_sweep(train, fixture::kmeans_config(), ks, 2001);
  const InternalSweep on_test =
      internal_sweep(test, fixture::kmeans_config(), ks, 2002);

  const double sil_train = on_train.per_k.at(5).silhouette;
  const double sil_test = on_test.per_k.at(5).silhouette;
  const double db_test5 = on_test.per_k.at(5).davies_bouldin;
  const bool ok = on_train.best_silhouette_k == 5 &&
                  on_test.best_silhouette_k == 5 &&
                  std::abs(sil_train - 0.83) <= 0.02 &&
                  std::abs(sil_test - 0.83) <= 0.02 &&
                  std::abs(db_test5 - 0.23) <= 0.03 &&
                  on_train.best_db_k == 4;
  report("internal indices (silhouette 0.83@k=5; DB test 0.23@k=5, train "
         "argbest 4)",
         ok,
         fmt("sil=%.3f/%.3f db_test(5)=%.3f train_db_best=%d "
             "sil_best=%d/%d",
             sil_train, sil_test, db_test5, on_train.best_db_k,
             on_train.best_silhouette_k, on_test.best_silhouette_k));
}

// --- criterion 3: assignment oracle ------------------------------------------

void assignment_oracle() {
  Rng rng(7101);
  int exact = 0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    const int k = 2 + static_cast<int>(rng.below(5));  // up to 6 labels
    const std::size_t n = 5 + rng.below(60);
    LabelVector a(n), b(n);
    for (auto& v : a) v = static_cast<int>(rng.below(k));
    for (auto& v : b) v = static_cast<int>(rng.below(k));
    const double fast = misclassification_distance(a, b).distance;
    const double brute = oracles::misclassification(a, b);
    exact += fast == brute;
  }
  report("assignment oracle (1000 random pairs, exact k! minimum)",
         exact == trials, fmt("%d/%d exact", exact, trials));
}

// --- criterion 4: metric oracles ----------------------------------------------

void metric_oracles() {
  Rng rng(7201);
  int ok_count = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    const std::size_t n = 6 + rng.below(45);  // n <= 50
    const int k = 2 + static_cast<int>(rng.below(4));
    LabelVector a(n), b(n);
    for (auto& v : a) v = static_cast<int>(rng.below(k));
    for (auto& v : b) v = static_cast<int>(rng.below(k));
    Dataset data;
    data.n_samples = n;
    data.n_features = 2;
    for (std::size_t i = 0; i < 2 * n; ++i) {
      data.values.push_back(rng.normal() * 3.0);
    }
    const PRF prf = precision_recall_f1(a, b);
    const auto prf_ref = oracles::prf(a, b);
    const bool match =
        std::abs(mcc(a, b).value - oracles::mcc(a, b)) <= 1e-10 &&
        std::abs(prf.precision_macro - prf_ref.precision) <= 1e-10 &&
        std::abs(prf.recall_macro - prf_ref.recall) <= 1e-10 &&
        std::abs(prf.f1_macro - prf_ref.f1) <= 1e-10 &&
        std::abs(ami(a, b).value - oracles::ami(a, b)) <= 1e-10 &&
        std::abs(silhouette(data, a).value -
                 oracles::silhouette(data, a)) <= 1e-10 &&
        std::abs(davies_bouldin(data, a).value -
                 oracles::davies_bouldin(data, a)) <= 1e-10;
    ok_count += match;
  }
  report("metric oracles (200 instances, all six metrics within 1e-10)",
         ok_count == trials, fmt("%d/%d matched", ok_count, trials));
}

// --- criterion 5: random-label normalization -----------------------------------

void random_label_normalization() {
  // A classifier that outputs uniform random labels must self-normalize:
  // its raw distance matches its own random baseline in expectation.
  const ClassifierFit dummy = [](const Dataset&, const LabelVector& labels,
                                 std::uint64_t seed) -> Predictor {
    const int k = count_clusters(labels);
    auto rng = std::make_shared<Rng>(seed);
    return [k, rng](const Dataset& data) {
      LabelVector out(data.n_samples);
      for (auto& v : out) v = static_cast<int>(rng->below(k));
      return out;
    };
  };
  double total = 0.0;
  const int cells = 100;
  for (int cell = 0; cell < cells; ++cell) {
    const Dataset train =
        make_blobs(200, 2, fixture::blob_centers(), fixture::kBlobStd,
                   9000 + cell);
    const Dataset validation =
        make_blobs(200, 2, fixture::blob_centers(), fixture::kBlobStd,
                   9500 + cell);
    const StabilityCell result = stability_cell_with(
        train, validation, fixture::kmeans_config(), dummy, 5, 10,
        derive_seed(7301, cell));
    total += result.normalized;
  }
  const double mean = total / cells;
  report("random-label normalization (dummy classifier, mean within 1.0+-0.1)",
         std::abs(mean - 1.0) <= 0.1, fmt("mean=%.4f over %d cells", mean,
                                          cells));
}

// --- criterion 6: determinism and parallel speedup ------------------------------

bool identical_results(const StabilityResult& a, const StabilityResult& b) {
  if (a.k_star != b.k_star || a.per_k.size() != b.per_k.size()) return false;
  for (const auto& [k, stats] : a.per_k) {
    if (!b.per_k.count(k)) return false;
    const auto& other = b.per_k.at(k);
    if (stats.mean_norm != other.mean_norm || stats.sd != other.sd ||
        stats.mean_train != other.mean_train ||
        stats.cells.size() != other.cells.size()) {
      return false;
    }
    for (std::size_t i = 0; i < stats.cells.size(); ++i) {
      const auto& x = stats.cells[i];
      const auto& y = other.cells[i];
      if (x.raw_distance != y.raw_distance ||
          x.random_baseline != y.random_baseline ||
          x.normalized != y.normalized ||
          x.train_distance != y.train_distance || x.seed != y.seed) {
        return false;
      }
    }
  }
  return true;
}

void determinism_and_speedup() {
  // Five varied configurations: serial and 4-worker runs must agree bit for
  // bit because every cell derives its seed from (base_seed, rep, fold, k).
  Rng rng(7401);
  bool all_identical = true;
  for (int trial = 0; trial < 5; ++trial) {
    const Dataset train =
        make_blobs(120 + rng.below(80), 2, 3 + static_cast<int>(rng.below(3)),
                   1.0 + rng.real01(), 7500 + trial);
    ClustererConfig clusterer;
    clusterer.kind = trial % 2 == 0 ? ClustererKind::kmeans
                                    : ClustererKind::ward;
    clusterer.kmeans.n_init = 4;
    ClassifierConfig classifier;
    classifier.kind = trial % 2 == 0 ? ClassifierKind::knn
                                     : ClassifierKind::logreg;
    classifier.knn.n_neighbors = 5;
    CvGrid grid;
    grid.n_fold = 2;
    grid.n_rep = 3;
    grid.k_values = {2, 3, 4};
    grid.n_rnd = 5;
    grid.base_seed = rng.next_u64();
    const auto serial =
        best_nclust_cv(train, clusterer, classifier, grid, std::nullopt, 1);
    const auto parallel =
        best_nclust_cv(train, clusterer, classifier, grid, std::nullopt, 4);
    all_identical = all_identical && identical_results(serial, parallel);
  }
  report("determinism (serial == 4 workers, bit-exact, 5 configs)",
         all_identical, all_identical ? "all identical" : "mismatch");

  // Wall-clock: 4 workers vs serial on the blobs grid, best of two runs.
  const Dataset data = fixture::blobs();
  auto [plan, train, test] = train_test_split(data, 0.3, fixture::kSplitSeed);
  const auto timed_run = [&](int workers) {
    double best = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 2; ++attempt) {
      const auto start = std::chrono::steady_clock::now();
      best_nclust_cv(train, fixture::kmeans_config(), fixture::knn15(),
                     fixture::paper_grid(), std::nullopt, workers);
      best = std::min(best, seconds_since(start));
    }
    return best;
  };
  const double serial_time = timed_run(1);
  const double parallel_time = timed_run(4);
  const bool fast_enough = parallel_time <= 0.5 * serial_time;
  report("parallel speedup (4 workers <= 0.5x serial wall-clock)",
         fast_enough,
         fmt("serial=%.2fs parallel=%.2fs ratio=%.3f (host cores: %u)",
             serial_time, parallel_time, parallel_time / serial_time,
             std::thread::hardware_concurrency()));
}

// --- criterion 7: auto-k path ----------------------------------------------------

void auto_k_path() {
  const Dataset data = fixture::blobs();
  auto [plan, train, test] = train_test_split(data, 0.3, fixture::kSplitSeed);
  const double eps =
      kdistance_elbow(train, fixture::kDbscanMinSamples) *
      fixture::kDbscanEpsScale;
  ClustererConfig dbscan;
  dbscan.kind = ClustererKind::dbscan;
  dbscan.dbscan = {eps, fixture::kDbscanMinSamples};
  CvGrid grid = fixture::paper_grid();
  grid.k_values.clear();

  bool ok = false;
  std::string detail;
  try {
    const StabilityResult result = best_nclust_cv_auto(
        train, dbscan, fixture::knn15(), grid, std::nullopt, 1);
    const EvaluationReport held_out =
        evaluate_auto(train, test, result, dbscan, fixture::knn15());
    ok = result.k_star == 5 && held_out.acc >= 0.95;
    detail = fmt("eps=%.3f k*=%d acc=%.4f k_test=%d skipped=%d", eps,
                 result.k_star, held_out.acc, held_out.k_test,
                 result.skipped_cells);
  } catch (const std::exception& error) {
    detail = error.what();
  }
  report("auto-k path (elbow eps, k=5 group selected, test ACC >= 0.95)", ok,
         detail);
}

// --- criterion 8: tie rule ---------------------------------------------------------

void tie_rule() {
  std::map<int, KStats> per_k;
  per_k[2].mean_norm = 0.31;
  per_k[3].mean_norm = 0.171;
  per_k[4].mean_norm = 0.171;  // exact tie with k = 3
  per_k[5].mean_norm = 0.29;
  const int chosen = select_k_star(per_k);
  report("tie rule (equal means at k=3 and k=4 select k*=4)", chosen == 4,
         fmt("selected k*=%d", chosen));
}

}  // namespace

int main() {
  std::puts("acceptance suite");
  blobs_end_to_end();
  internal_indices();
  assignment_oracle();
  metric_oracles();
  random_label_normalization();
  determinism_and_speedup();
  auto_k_path();
  tie_rule();
  if (failures == 0) {
    std::puts("all acceptance criteria passed");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", failures);
  return 1;
}
