#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace clustab {

/// Per-sample integer assignments. Cluster/class ids are >= 0; -1 marks
/// density-clustering noise.
using LabelVector = std::vector<int>;

/// Number of distinct non-noise labels.
int count_clusters(const LabelVector& labels);

/// Remap non-noise labels onto 0..k-1 in order of first occurrence.
/// Noise (-1) passes through.
LabelVector compact_labels(const LabelVector& labels);

/// Row-major numeric sample matrix with optional ground-truth labels.
struct Dataset {
  std::vector<double> values;  // n_samples * n_features
  std::size_t n_samples = 0;
  std::size_t n_features = 0;
  std::vector<std::string> feature_names;  // empty when unnamed
  std::optional<LabelVector> true_labels;
  std::string id;

  double at(std::size_t row, std::size_t col) const {
    return values[row * n_features + col];
  }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * n_features, n_features};
  }

  /// New dataset holding the given rows (in the given order); slices
  /// true_labels alongside.
  Dataset subset(std::span<const std::size_t> rows) const;
};

/// Audit record of one train/test split.
struct SplitPlan {
  std::vector<std::size_t> train_indices;  // sorted ascending
  std::vector<std::size_t> test_indices;   // sorted ascending
  std::uint64_t seed = 0;
  std::optional<std::vector<int>> stratifier;
};

/// Cross-validation grid: k values to try (empty for auto-k clusterers),
/// fold/repetition counts and the random-labeling iteration count.
struct CvGrid {
  int n_fold = 2;
  int n_rep = 1;
  std::vector<int> k_values;  // strictly increasing, each >= 2
  int n_rnd = 10;
  std::uint64_t base_seed = 0;
};

/// Throws std::invalid_argument when the grid cannot run on n_train samples.
void validate_grid(const CvGrid& grid, std::size_t n_train);

/// One fold of one repetition. Index sets are sorted and disjoint; their
/// union is 0..n-1.
struct FoldSplit {
  std::vector<std::size_t> inner_train;
  std::vector<std::size_t> validation;
};

// ---------------------------------------------------------------------------
// Ingestion and generation

/// Strict CSV reader: comma separator, '.' decimal, optional single header
/// row, no quoting. Rejects non-finite cells and ragged rows with the
/// offending row/column named. label_column requires a header.
Dataset load_csv(const std::string& path,
                 const std::optional<std::string>& label_column,
                 bool has_header);

/// Shortest round-trip formatting; inverse of load_csv on numeric content.
void write_csv(const Dataset& data, const std::string& path);

/// Center list, or a count of centers drawn uniformly in
/// [-20, 20]^n_features.
using BlobCenters = std::variant<int, std::vector<std::vector<double>>>;

/// Isotropic Gaussian blobs; samples are divided among centers as evenly as
/// possible and true_labels records the generating center.
Dataset make_blobs(std::size_t n_samples, std::size_t n_features,
                   const BlobCenters& centers, double cluster_std,
                   std::uint64_t seed);

/// Per-feature centering/scaling statistics from a training set.
struct ScaleParams {
  std::vector<double> mean;
  std::vector<double> sd;  // population convention (divide by n)
  std::vector<bool> zero_variance;
};

/// Remove the per-feature mean and scale to unit population variance.
/// Zero-variance features are centered only and flagged.
std::pair<Dataset, ScaleParams> standard_scale(const Dataset& data);

/// Scale with previously fitted statistics (e.g. test data with train stats).
Dataset apply_scale(const Dataset& data, const ScaleParams& params);

/// Deterministic shuffled split; per-stratum Bresenham allocation keeps each
/// stratum's train share within one sample of its global share.
std::tuple<SplitPlan, Dataset, Dataset> train_test_split(
    const Dataset& data, double test_fraction, std::uint64_t seed,
    const std::optional<std::vector<int>>& stratifier = std::nullopt);

/// Folds for repetition `rep`; the shuffle seed is derive_seed(base_seed,
/// rep) so repetitions differ but the whole grid reproduces.
std::vector<FoldSplit> cv_folds(
    std::size_t n, const CvGrid& grid, int rep,
    const std::optional<std::vector<int>>& stratifier = std::nullopt);

}  // namespace clustab
