#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "clustab/stability.hpp"

namespace clustab {

/// Aggregated stability for one cluster count.
struct KStats {
  double mean_norm = 0.0;
  double sd = 0.0;           // sample standard deviation over cells
  double ci_lo = 0.0;        // normal-approximation 95% interval
  double ci_hi = 0.0;
  double mean_train = 0.0;   // mean resubstitution distance
  std::vector<StabilityCell> cells;
};

/// Output of the cross-validated selection loop.
struct StabilityResult {
  enum class Mode { fixed_k, auto_k };

  Mode mode = Mode::fixed_k;
  std::map<int, KStats> per_k;
  int k_star = 0;  // largest k attaining the minimum mean (1e-12 tie window)
  CvGrid grid;
  /// auto-k only: (rep, fold) of the cell whose trained classifier represents
  /// the selected group (minimum normalized value; ties take the smallest
  /// (rep, fold)).
  std::optional<std::pair<int, int>> selected_cell;
  /// auto-k only: cells skipped because clustering degenerated.
  int skipped_cells = 0;
};

/// Held-out generalization report. acc/mcc/f1/precision/recall compare
/// classifier predictions with the optimally relabeled test clustering;
/// ami and the *_true metrics compare predictions with ground-truth labels
/// when the test set carries them.
struct EvaluationReport {
  double acc = 0.0;
  double mcc = 0.0;
  double f1_macro = 0.0;
  double precision_macro = 0.0;
  double recall_macro = 0.0;
  std::optional<double> ami;
  std::optional<double> acc_true;
  std::optional<double> mcc_true;
  Permutation permutation;  // test clustering label -> prediction label
  int k_train = 0;
  int k_test = 0;
  bool mcc_flagged = false;
};

/// The "max argmin" rule: the largest k whose mean normalized stability lies
/// within 1e-12 of the minimum.
int select_k_star(const std::map<int, KStats>& per_k);

/// Run stability_cell over the full (k x fold x rep) grid and return per-k
/// means with the selected k*. Deterministic for a fixed base_seed
/// regardless of worker count: every cell's seed is
/// derive_seed(base_seed, rep, fold, k). Any cell error aborts with the
/// offending (k, fold, rep) identified.
StabilityResult best_nclust_cv(
    const Dataset& train, const ClustererConfig& clusterer,
    const ClassifierConfig& classifier, const CvGrid& grid,
    const std::optional<std::vector<int>>& stratifier = std::nullopt,
    int workers = 1);

/// Auto-k variant: one cell per (fold, rep), grouped by the cluster count
/// found on the inner-train side. Requires grid.k_values to be empty.
/// Throws when every cell produced fewer than two clusters.
StabilityResult best_nclust_cv_auto(
    const Dataset& train, const ClustererConfig& clusterer,
    const ClassifierConfig& classifier, const CvGrid& grid,
    const std::optional<std::vector<int>>& stratifier = std::nullopt,
    int workers = 1);

/// Fixed-k evaluation: refit the clusterer with k_star on the full training
/// set, train the classifier on those labels, cluster the test set
/// independently, and score predictions against the aligned test clustering.
EvaluationReport evaluate(const Dataset& train, const Dataset& test,
                          int k_star, const ClustererConfig& clusterer,
                          const ClassifierConfig& classifier,
                          std::uint64_t seed);

/// Auto-k evaluation: the classifier comes from the selected
/// cross-validation cell (refit deterministically from the recorded
/// (rep, fold)), and the test set is clustered independently; test-side k
/// may differ from the training-side group.
EvaluationReport evaluate_auto(const Dataset& train, const Dataset& test,
                               const StabilityResult& result,
                               const ClustererConfig& clusterer,
                               const ClassifierConfig& classifier,
                               const std::optional<std::vector<int>>&
                                   stratifier = std::nullopt);

}  // namespace clustab
