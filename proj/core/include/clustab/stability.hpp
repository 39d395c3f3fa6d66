#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>

#include "clustab/assignment.hpp"
#include "clustab/classification.hpp"
#include "clustab/clustering.hpp"
#include "clustab/dataset.hpp"

namespace clustab {

/// A cross-validation cell that cannot produce a stability value
/// (degenerate clustering or all-noise validation).
class CellError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One train/validate stability measurement.
struct StabilityCell {
  int k = 0;     // requested k, or the inner-train k_found for auto-k
  int fold = 0;
  int rep = 0;
  double raw_distance = 0.0;     // permutation-minimized, in [0, 1]
  double random_baseline = 0.0;  // mean distance of n_rnd random relabelings
  double normalized = 0.0;       // raw / baseline
  double train_distance = 0.0;   // resubstitution misclassification
  Permutation permutation;
  std::uint64_t seed = 0;
  bool baseline_degenerate = false;  // baseline was 0; normalized = raw
};

/// Uniform i.i.d. labels over 0..k-1, redrawn until every label occurs.
/// Requires n >= k.
LabelVector random_labels(int k, std::size_t n, std::uint64_t seed);

/// Prediction closure returned by a classifier fit.
using Predictor = std::function<LabelVector(const Dataset&)>;

/// Fit hook: (train, labels, seed) -> predictor. The seed is ignored by the
/// deterministic built-ins; diagnostic classifiers (e.g. a random-labeling
/// dummy) draw their stream from it.
using ClassifierFit =
    std::function<Predictor(const Dataset&, const LabelVector&, std::uint64_t)>;

/// Built-in classifiers wrapped as a fit hook.
ClassifierFit classifier_fit_fn(const ClassifierConfig& config);

/// One stability cell: cluster the inner-train split, train the classifier
/// on those labels, independently cluster the validation split, and compare
/// classifier predictions with the validation clustering under the optimal
/// label permutation. The raw distance is normalized by the mean distance
/// obtained when the classifier is retrained on n_rnd random labelings.
/// k must be present exactly when the clusterer needs it. Throws CellError
/// on degenerate cells.
StabilityCell stability_cell(const Dataset& inner_train,
                             const Dataset& validation,
                             const ClustererConfig& clusterer,
                             const ClassifierConfig& classifier,
                             std::optional<int> k, int n_rnd,
                             std::uint64_t seed);

/// As above with an injected classifier fit.
StabilityCell stability_cell_with(const Dataset& inner_train,
                                  const Dataset& validation,
                                  const ClustererConfig& clusterer,
                                  const ClassifierFit& fit,
                                  std::optional<int> k, int n_rnd,
                                  std::uint64_t seed);

}  // namespace clustab
