#include "clustab/selection.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "clustab/metrics.hpp"
#include "clustab/parallel.hpp"
#include "clustab/rng.hpp"

namespace clustab {

namespace {

constexpr double kTieTolerance = 1e-12;  // "max argmin" float ties

// Means follow the algorithm's nesting: average over folds within each
// repetition, then over repetitions. Dispersion is over all cell values.
KStats aggregate_fixed(std::vector<StabilityCell> cells, int n_fold,
                       int n_rep) {
  KStats stats;
  stats.cells = std::move(cells);
  double norm_total = 0.0;
  double train_total = 0.0;
  for (int rep = 0; rep < n_rep; ++rep) {
    double norm_rep = 0.0;
    double train_rep = 0.0;
    for (const auto& cell : stats.cells) {
      if (cell.rep == rep) {
        norm_rep += cell.normalized;
        train_rep += cell.train_distance;
      }
    }
    norm_total += norm_rep / n_fold;
    train_total += train_rep / n_fold;
  }
  stats.mean_norm = norm_total / n_rep;
  stats.mean_train = train_total / n_rep;

  const double n = static_cast<double>(stats.cells.size());
  double ss = 0.0;
  for (const auto& cell : stats.cells) {
    const double d = cell.normalized - stats.mean_norm;
    ss += d * d;
  }
  stats.sd = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  const double half = 1.96 * stats.sd / std::sqrt(n);
  stats.ci_lo = stats.mean_norm - half;
  stats.ci_hi = stats.mean_norm + half;
  return stats;
}

// Flat means for auto-k groups, whose cell counts are ragged.
KStats aggregate_group(std::vector<StabilityCell> cells) {
  KStats stats;
  stats.cells = std::move(cells);
  const double n = static_cast<double>(stats.cells.size());
  for (const auto& cell : stats.cells) {
    stats.mean_norm += cell.normalized;
    stats.mean_train += cell.train_distance;
  }
  stats.mean_norm /= n;
  stats.mean_train /= n;
  double ss = 0.0;
  for (const auto& cell : stats.cells) {
    const double d = cell.normalized - stats.mean_norm;
    ss += d * d;
  }
  stats.sd = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  const double half = 1.96 * stats.sd / std::sqrt(n);
  stats.ci_lo = stats.mean_norm - half;
  stats.ci_hi = stats.mean_norm + half;
  return stats;
}

struct FoldData {
  Dataset inner;
  Dataset validation;
};

std::vector<std::vector<FoldData>> materialize_folds(
    const Dataset& train, const CvGrid& grid,
    const std::optional<std::vector<int>>& stratifier) {
  std::vector<std::vector<FoldData>> out(grid.n_rep);
  for (int rep = 0; rep < grid.n_rep; ++rep) {
    const auto folds = cv_folds(train.n_samples, grid, rep, stratifier);
    out[rep].reserve(folds.size());
    for (const auto& fold : folds) {
      out[rep].push_back(
          {train.subset(fold.inner_train), train.subset(fold.validation)});
    }
  }
  return out;
}

}  // namespace

int select_k_star(const std::map<int, KStats>& per_k) {
  double min_mean = std::numeric_limits<double>::infinity();
  for (const auto& [k, stats] : per_k) {
    min_mean = std::min(min_mean, stats.mean_norm);
  }
  int k_star = 0;
  for (const auto& [k, stats] : per_k) {
    if (stats.mean_norm <= min_mean + kTieTolerance) k_star = k;
  }
  return k_star;
}

StabilityResult best_nclust_cv(
    const Dataset& train, const ClustererConfig& clusterer,
    const ClassifierConfig& classifier, const CvGrid& grid,
    const std::optional<std::vector<int>>& stratifier, int workers) {
  validate_grid(grid, train.n_samples);
  if (grid.k_values.empty()) {
    throw std::invalid_argument(
        "best_nclust_cv: k_values is empty; use the auto-k variant");
  }
  if (!clusterer.needs_k()) {
    throw std::invalid_argument(
        "best_nclust_cv: auto-k clusterer; use the auto-k variant");
  }
  const auto folds = materialize_folds(train, grid, stratifier);

  struct Task {
    int k;
    int fold;
    int rep;
  };
  std::vector<Task> tasks;
  tasks.reserve(grid.k_values.size() * grid.n_fold * grid.n_rep);
  for (int k : grid.k_values) {
    for (int fold = 0; fold < grid.n_fold; ++fold) {
      for (int rep = 0; rep < grid.n_rep; ++rep) {
        tasks.push_back({k, fold, rep});
      }
    }
  }
  std::vector<StabilityCell> cells(tasks.size());
  run_tasks(tasks.size(), workers, [&](std::size_t i) {
    const Task& t = tasks[i];
    const std::uint64_t seed =
        derive_seed(grid.base_seed, static_cast<std::uint64_t>(t.rep),
                    static_cast<std::uint64_t>(t.fold),
                    static_cast<std::uint64_t>(t.k));
    try {
      cells[i] = stability_cell(folds[t.rep][t.fold].inner,
                                folds[t.rep][t.fold].validation, clusterer,
                                classifier, t.k, grid.n_rnd, seed);
    } catch (const CellError& error) {
      throw std::runtime_error("cell (k=" + std::to_string(t.k) +
                               ", fold=" + std::to_string(t.fold) +
                               ", rep=" + std::to_string(t.rep) +
                               ") failed: " + error.what());
    }
    cells[i].fold = t.fold;
    cells[i].rep = t.rep;
  });

  StabilityResult result;
  result.mode = StabilityResult::Mode::fixed_k;
  result.grid = grid;
  for (int k : grid.k_values) {
    std::vector<StabilityCell> group;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (tasks[i].k == k) group.push_back(cells[i]);
    }
    std::sort(group.begin(), group.end(),
              [](const StabilityCell& a, const StabilityCell& b) {
                return std::pair(a.rep, a.fold) < std::pair(b.rep, b.fold);
              });
    result.per_k[k] = aggregate_fixed(std::move(group), grid.n_fold,
                                      grid.n_rep);
  }
  result.k_star = select_k_star(result.per_k);
  return result;
}

StabilityResult best_nclust_cv_auto(
    const Dataset& train, const ClustererConfig& clusterer,
    const ClassifierConfig& classifier, const CvGrid& grid,
    const std::optional<std::vector<int>>& stratifier, int workers) {
  validate_grid(grid, train.n_samples);
  if (!grid.k_values.empty()) {
    throw std::invalid_argument(
        "best_nclust_cv_auto: k_values must be empty");
  }
  if (clusterer.needs_k()) {
    throw std::invalid_argument(
        "best_nclust_cv_auto: clusterer must infer k");
  }
  const auto folds = materialize_folds(train, grid, stratifier);

  struct Slot {
    std::optional<StabilityCell> cell;
  };
  const std::size_t n_tasks =
      static_cast<std::size_t>(grid.n_fold) * grid.n_rep;
  std::vector<Slot> slots(n_tasks);
  run_tasks(n_tasks, workers, [&](std::size_t i) {
    const int rep = static_cast<int>(i) / grid.n_fold;
    const int fold = static_cast<int>(i) % grid.n_fold;
    const std::uint64_t seed =
        derive_seed(grid.base_seed, static_cast<std::uint64_t>(rep),
                    static_cast<std::uint64_t>(fold), std::uint64_t{0});
    try {
      StabilityCell cell =
          stability_cell(folds[rep][fold].inner, folds[rep][fold].validation,
                         clusterer, classifier, std::nullopt, grid.n_rnd,
                         seed);
      cell.fold = fold;
      cell.rep = rep;
      slots[i].cell = std::move(cell);
    } catch (const CellError&) {
      // Degenerate cells (k_found < 2, all-noise splits) are skipped; the
      // grouping below works with whatever succeeded.
    }
  });

  StabilityResult result;
  result.mode = StabilityResult::Mode::auto_k;
  result.grid = grid;
  std::map<int, std::vector<StabilityCell>> groups;
  for (const auto& slot : slots) {
    if (slot.cell) {
      groups[slot.cell->k].push_back(*slot.cell);
    } else {
      ++result.skipped_cells;
    }
  }
  if (groups.empty()) {
    throw std::runtime_error(
        "best_nclust_cv_auto: clustering found < 2 clusters in all cells");
  }
  for (auto& [k, group] : groups) {
    std::sort(group.begin(), group.end(),
              [](const StabilityCell& a, const StabilityCell& b) {
                return std::pair(a.rep, a.fold) < std::pair(b.rep, b.fold);
              });
    result.per_k[k] = aggregate_group(std::move(group));
  }
  result.k_star = select_k_star(result.per_k);

  const auto& winner = result.per_k.at(result.k_star);
  const StabilityCell* chosen = nullptr;
  for (const auto& cell : winner.cells) {
    if (!chosen || cell.normalized < chosen->normalized ||
        (cell.normalized == chosen->normalized &&
         std::pair(cell.rep, cell.fold) <
             std::pair(chosen->rep, chosen->fold))) {
      chosen = &cell;
    }
  }
  result.selected_cell = std::pair(chosen->rep, chosen->fold);
  return result;
}

namespace {

// Shared scoring tail: compare predictions with the test-side clustering
// under the optimal permutation, then add ground-truth metrics when labels
// exist.
EvaluationReport score_predictions(const LabelVector& predictions,
                                   const LabelVector& test_clustering,
                                   const std::optional<LabelVector>& truth,
                                   int k_train, int k_test) {
  EvaluationReport report;
  const DistanceResult aligned =
      misclassification_distance(predictions, test_clustering);
  report.acc = 1.0 - aligned.distance;
  report.permutation = aligned.permutation;
  report.k_train = k_train;
  report.k_test = k_test;

  const LabelVector relabeled = relabel(test_clustering, aligned.permutation);
  LabelVector truth_side, pred_side;
  for (std::size_t i = 0; i < relabeled.size(); ++i) {
    if (relabeled[i] >= 0) {
      truth_side.push_back(relabeled[i]);
      pred_side.push_back(predictions[i]);
    }
  }
  const MetricValue mcc_value = mcc(truth_side, pred_side);
  report.mcc = mcc_value.value;
  report.mcc_flagged = mcc_value.flagged;
  const PRF prf = precision_recall_f1(truth_side, pred_side);
  report.precision_macro = prf.precision_macro;
  report.recall_macro = prf.recall_macro;
  report.f1_macro = prf.f1_macro;

  if (truth) {
    report.ami = ami(predictions, *truth).value;
    const DistanceResult vs_truth =
        misclassification_distance(predictions, *truth);
    report.acc_true = 1.0 - vs_truth.distance;
    const LabelVector truth_aligned = relabel(*truth, vs_truth.permutation);
    report.mcc_true = mcc(truth_aligned, predictions).value;
  }
  return report;
}

}  // namespace

EvaluationReport evaluate(const Dataset& train, const Dataset& test,
                          int k_star, const ClustererConfig& clusterer,
                          const ClassifierConfig& classifier,
                          std::uint64_t seed) {
  if (test.n_samples == 0) {
    throw std::invalid_argument("evaluate: empty test set");
  }
  const FitResult train_fit =
      fit_clusterer(train, clusterer, k_star, derive_seed(seed, 1));
  if (train_fit.k_found < 2) {
    throw std::runtime_error("evaluate: training clustering has < 2 clusters");
  }
  const TrainedClassifier phi =
      fit_classifier(classifier, train, train_fit.labels);
  const FitResult test_fit =
      fit_clusterer(test, clusterer, k_star, derive_seed(seed, 2));
  const LabelVector predictions = predict(phi, test);
  return score_predictions(predictions, test_fit.labels, test.true_labels,
                           train_fit.k_found, test_fit.k_found);
}

EvaluationReport evaluate_auto(const Dataset& train, const Dataset& test,
                               const StabilityResult& result,
                               const ClustererConfig& clusterer,
                               const ClassifierConfig& classifier,
                               const std::optional<std::vector<int>>&
                                   stratifier) {
  if (result.mode != StabilityResult::Mode::auto_k || !result.selected_cell) {
    throw std::invalid_argument(
        "evaluate_auto: result does not come from the auto-k path");
  }
  if (test.n_samples == 0) {
    throw std::invalid_argument("evaluate_auto: empty test set");
  }
  const auto [rep, fold] = *result.selected_cell;
  // Rebuild the winning cell's inner-train split; folds are pure functions
  // of (n, grid, rep), so this reproduces the cell's classifier exactly.
  const auto folds = cv_folds(train.n_samples, result.grid, rep, stratifier);
  const Dataset inner = train.subset(folds[fold].inner_train);
  const FitResult inner_fit = fit_dbscan(inner, clusterer.dbscan);
  if (inner_fit.k_found < 2) {
    throw std::runtime_error(
        "evaluate_auto: recorded cell no longer yields >= 2 clusters");
  }
  std::vector<std::size_t> keep;
  LabelVector kept_labels;
  for (std::size_t i = 0; i < inner_fit.labels.size(); ++i) {
    if (inner_fit.labels[i] >= 0) {
      keep.push_back(i);
      kept_labels.push_back(inner_fit.labels[i]);
    }
  }
  const TrainedClassifier phi =
      fit_classifier(classifier, inner.subset(keep), kept_labels);
  const FitResult test_fit = fit_dbscan(test, clusterer.dbscan);
  const LabelVector predictions = predict(phi, test);
  return score_predictions(predictions, test_fit.labels, test.true_labels,
                           result.k_star, test_fit.k_found);
}

}  // namespace clustab
