#include "clustab/stability.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "clustab/rng.hpp"

namespace clustab {

LabelVector random_labels(int k, std::size_t n, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("random_labels: k must be >= 2");
  if (n < static_cast<std::size_t>(k)) {
    throw std::invalid_argument("random_labels: need n >= k");
  }
  Rng rng(seed);
  LabelVector labels(n, 0);
  while (true) {
    std::vector<char> seen(static_cast<std::size_t>(k), 0);
    for (auto& label : labels) {
      label = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
      seen[static_cast<std::size_t>(label)] = 1;
    }
    if (std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; })) {
      return labels;
    }
  }
}

ClassifierFit classifier_fit_fn(const ClassifierConfig& config) {
  return [config](const Dataset& train, const LabelVector& labels,
                  std::uint64_t /*seed*/) -> Predictor {
    TrainedClassifier model = fit_classifier(config, train, labels);
    return [model = std::move(model)](const Dataset& data) {
      return predict(model, data);
    };
  };
}

namespace {

// Rows whose label is non-negative, as a (subset, labels) pair.
std::pair<Dataset, LabelVector> strip_noise(const Dataset& data,
                                            const LabelVector& labels) {
  std::vector<std::size_t> keep;
  LabelVector kept_labels;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= 0) {
      keep.push_back(i);
      kept_labels.push_back(labels[i]);
    }
  }
  return {data.subset(keep), std::move(kept_labels)};
}

FitResult cluster_or_cell_error(const Dataset& data,
                                const ClustererConfig& clusterer,
                                std::optional<int> k, std::uint64_t seed,
                                const char* side) {
  try {
    return fit_clusterer(data, clusterer, k, seed);
  } catch (const std::runtime_error& error) {
    throw CellError(std::string(side) + ": " + error.what());
  }
}

}  // namespace

StabilityCell stability_cell_with(const Dataset& inner_train,
                                  const Dataset& validation,
                                  const ClustererConfig& clusterer,
                                  const ClassifierFit& fit,
                                  std::optional<int> k, int n_rnd,
                                  std::uint64_t seed) {
  if (clusterer.needs_k() != k.has_value()) {
    throw std::invalid_argument(
        "stability_cell: k must be supplied exactly when the clusterer "
        "needs it");
  }
  if (n_rnd < 1) throw std::invalid_argument("stability_cell: n_rnd >= 1");
  if (validation.n_samples == 0) throw CellError("empty validation split");

  StabilityCell cell;
  cell.seed = seed;

  // Cluster the inner-train split and train the classifier on its labels.
  const FitResult train_fit = cluster_or_cell_error(
      inner_train, clusterer, k, derive_seed(seed, 1), "inner-train");
  if (train_fit.k_found < 2) {
    throw CellError("inner-train clustering produced < 2 clusters");
  }
  cell.k = k ? *k : train_fit.k_found;
  auto [fit_data, fit_labels] = strip_noise(inner_train, train_fit.labels);
  const Predictor phi = fit(fit_data, fit_labels, derive_seed(seed, 3));

  // Cluster the validation split independently; the distance compares the
  // classifier's predictions with this fresh clustering.
  const FitResult val_fit = cluster_or_cell_error(
      validation, clusterer, k, derive_seed(seed, 2), "validation");
  if (k && val_fit.k_found < 2) {
    throw CellError("validation clustering produced < 2 clusters");
  }

  DistanceResult raw;
  try {
    raw = misclassification_distance(phi(validation), val_fit.labels);
  } catch (const std::runtime_error& error) {
    throw CellError(error.what());
  }
  cell.raw_distance = raw.distance;
  cell.permutation = raw.permutation;
  cell.train_distance =
      misclassification_distance(phi(fit_data), fit_labels).distance;

  // Random-labeling baseline: retrain on uniform labels over the same
  // class count and average the resulting distances.
  double baseline_sum = 0.0;
  for (int r = 0; r < n_rnd; ++r) {
    const std::uint64_t rnd_seed =
        derive_seed(seed, static_cast<std::uint64_t>(16 + r));
    const LabelVector shuffled =
        random_labels(train_fit.k_found, fit_data.n_samples, rnd_seed);
    const Predictor phi_rnd = fit(fit_data, shuffled, derive_seed(rnd_seed, 1));
    baseline_sum +=
        misclassification_distance(phi_rnd(validation), val_fit.labels)
            .distance;
  }
  cell.random_baseline = baseline_sum / static_cast<double>(n_rnd);
  if (cell.random_baseline > 0.0) {
    cell.normalized = cell.raw_distance / cell.random_baseline;
  } else {
    cell.normalized = cell.raw_distance;
    cell.baseline_degenerate = true;
  }
  return cell;
}

StabilityCell stability_cell(const Dataset& inner_train,
                             const Dataset& validation,
                             const ClustererConfig& clusterer,
                             const ClassifierConfig& classifier,
                             std::optional<int> k, int n_rnd,
                             std::uint64_t seed) {
  return stability_cell_with(inner_train, validation, clusterer,
                             classifier_fit_fn(classifier), k, n_rnd, seed);
}

}  // namespace clustab
