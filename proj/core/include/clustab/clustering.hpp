#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clustab/dataset.hpp"

namespace clustab {

enum class ClustererKind { kmeans, ward, dbscan };

std::string to_string(ClustererKind kind);
ClustererKind clusterer_kind_from_string(const std::string& name);

struct KmeansParams {
  int n_init = 10;
  int max_iter = 300;
  double tol = 1e-6;  // max centroid movement between iterations
};

struct DbscanParams {
  double eps = 0.5;
  int min_samples = 5;  // neighborhood size including the point itself
};

struct ClustererConfig {
  ClustererKind kind = ClustererKind::kmeans;
  KmeansParams kmeans;
  DbscanParams dbscan;

  bool needs_k() const { return kind != ClustererKind::dbscan; }
};

/// One agglomerative merge; left/right are cluster ids (0..n-1 are the
/// original points, n+t is the cluster created by merge t).
struct WardMerge {
  int left = 0;
  int right = 0;
  double cost = 0.0;  // linkage distance, non-decreasing over the sequence
  int size = 0;       // samples in the merged cluster
};

struct ClusterModel {
  ClustererKind kind = ClustererKind::kmeans;
  std::size_t n_features = 0;
  // kmeans
  std::vector<double> centroids;  // k * n_features
  double inertia = 0.0;
  std::vector<double> wcss_history;  // per Lloyd iteration, winning restart
  // ward
  std::vector<WardMerge> merges;
  int cut_k = 0;
  // dbscan
  std::vector<std::size_t> core_indices;
  DbscanParams dbscan_params;
};

struct FitResult {
  ClusterModel model;
  LabelVector labels;  // compact 0..k-1; dbscan noise is -1
  int k_found = 0;     // non-noise cluster count
};

/// Lloyd iterations from k-means++ seeding; best of n_init restarts by
/// within-cluster sum of squares. Throws when k is out of range or the data
/// has fewer than k distinct rows.
FitResult fit_kmeans(const Dataset& data, int k, const KmeansParams& params,
                     std::uint64_t seed);

/// Agglomerative clustering with the Ward criterion (Lance-Williams
/// updates), cut to exactly k clusters. Ties merge the lexicographically
/// smallest pair, so results are deterministic.
FitResult fit_ward(const Dataset& data, int k);

/// Density clustering. Core points have >= min_samples neighbors within eps
/// (counting themselves); non-core points join the cluster of their nearest
/// core within eps, otherwise they are noise (-1). k_found may be 0.
FitResult fit_dbscan(const Dataset& data, const DbscanParams& params);

/// Dispatch on config.kind; k is required for kmeans/ward and must be absent
/// for dbscan.
FitResult fit_clusterer(const Dataset& data, const ClustererConfig& config,
                        std::optional<int> k, std::uint64_t seed);

/// eps heuristic: the elbow (farthest point from the chord) of the sorted
/// min_samples-th nearest-neighbor distance curve.
double kdistance_elbow(const Dataset& data, int min_samples);

}  // namespace clustab
