#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "clustab/clustering.hpp"
#include "clustab/dataset.hpp"

namespace clustab {

/// Metric value plus a degenerate-input flag. Cross-validation cells can
/// legitimately produce constant labelings or singleton clusters, so
/// degenerate cases are pinned conventions rather than errors.
struct MetricValue {
  double value = 0.0;
  bool flagged = false;
};

/// Multiclass Matthews correlation from the contingency table. Labels must
/// be aligned beforehand. A constant side yields 0, flagged.
MetricValue mcc(const LabelVector& a, const LabelVector& b);

struct PRF {
  double precision_macro = 0.0;
  double recall_macro = 0.0;
  double f1_macro = 0.0;
};

/// Unweighted one-vs-rest averages over the union of classes present in
/// either vector. Classes absent from the predictions contribute precision 0.
PRF precision_recall_f1(const LabelVector& truth, const LabelVector& predicted);

/// Adjusted mutual information with the arithmetic-mean normalizer and the
/// hypergeometric expected MI. Label-permutation invariant; 1.0 for
/// identical partitions. A zero normalizer yields 1.0 when the partitions
/// match and 0 flagged otherwise.
MetricValue ami(const LabelVector& a, const LabelVector& b);

/// Mean over samples of (b - a) / max(a, b) with Euclidean distances;
/// singleton clusters score 0. Noise samples (-1) are excluded. Requires
/// >= 2 clusters.
MetricValue silhouette(const Dataset& data, const LabelVector& labels);

/// (1/k) sum_i max_{j != i} (s_i + s_j) / d(c_i, c_j); lower is better.
/// Coincident centroids yield +inf, flagged. Requires >= 2 clusters.
MetricValue davies_bouldin(const Dataset& data, const LabelVector& labels);

struct InternalIndexPoint {
  double silhouette = 0.0;
  double davies_bouldin = 0.0;
};

/// Internal validity indices per cluster count, with both argbests.
struct InternalSweep {
  std::map<int, InternalIndexPoint> per_k;
  int best_silhouette_k = 0;  // maximizes silhouette; ties take the smaller k
  int best_db_k = 0;          // minimizes Davies-Bouldin; ties take the smaller k
};

/// Refit the clusterer per k and record both indices. The seed feeds
/// stochastic clusterers (kmeans restarts).
InternalSweep internal_sweep(const Dataset& data,
                             const ClustererConfig& clusterer,
                             const std::vector<int>& k_values,
                             std::uint64_t seed);

}  // namespace clustab
