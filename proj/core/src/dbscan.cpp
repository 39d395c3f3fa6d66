#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "clustab/clustering.hpp"

namespace clustab {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);  // keep the smaller index as root
    parent[b] = a;
  }
};

}  // namespace

FitResult fit_dbscan(const Dataset& data, const DbscanParams& params) {
  if (params.eps <= 0.0) throw std::invalid_argument("dbscan: eps must be > 0");
  if (params.min_samples < 1) {
    throw std::invalid_argument("dbscan: min_samples must be >= 1");
  }
  const std::size_t n = data.n_samples;
  const double eps2 = params.eps * params.eps;

  std::vector<std::vector<std::size_t>> neighbors(n);
  for (std::size_t i = 0; i < n; ++i) {
    neighbors[i].push_back(i);  // a point counts itself
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sq_dist(data.row(i), data.row(j)) <= eps2) {
        neighbors[i].push_back(j);
        neighbors[j].push_back(i);
      }
    }
  }

  std::vector<char> core(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    core[i] = neighbors[i].size() >= static_cast<std::size_t>(params.min_samples);
  }

  // Clusters are the connected components of eps-reachable core points.
  // Non-core points attach to the nearest core within eps, which makes the
  // partition independent of the input row order (up to label names).
  UnionFind components(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i]) continue;
    for (std::size_t j : neighbors[i]) {
      if (core[j]) components.unite(i, j);
    }
  }

  LabelVector labels(n, -1);
  int next_label = 0;
  std::vector<int> label_of_root(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i]) continue;
    const std::size_t root = components.find(i);
    if (label_of_root[root] == -1) label_of_root[root] = next_label++;
    labels[i] = label_of_root[root];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) continue;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_core = n;
    for (std::size_t j : neighbors[i]) {
      if (j == i || !core[j]) continue;
      const double d2 = sq_dist(data.row(i), data.row(j));
      if (d2 < best) {
        best = d2;
        best_core = j;
      }
    }
    if (best_core != n) labels[i] = labels[best_core];
  }

  FitResult out;
  out.model.kind = ClustererKind::dbscan;
  out.model.n_features = data.n_features;
  out.model.dbscan_params = params;
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) out.model.core_indices.push_back(i);
  }
  out.labels = std::move(labels);
  out.k_found = next_label;
  return out;
}

double kdistance_elbow(const Dataset& data, int min_samples) {
  const std::size_t n = data.n_samples;
  if (n < 2) throw std::invalid_argument("kdistance_elbow: need >= 2 samples");
  // With self-counting neighborhoods a point is core once it has
  // min_samples - 1 true neighbors, so that is the curve we scan.
  const std::size_t kth = static_cast<std::size_t>(
      std::max(1, min_samples - 1));
  if (kth >= n) {
    throw std::invalid_argument("kdistance_elbow: min_samples too large");
  }
  std::vector<double> kdist(n, 0.0);
  std::vector<double> row(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row.push_back(sq_dist(data.row(i), data.row(j)));
    }
    std::nth_element(row.begin(), row.begin() + (kth - 1), row.end());
    kdist[i] = std::sqrt(row[kth - 1]);
  }
  std::sort(kdist.begin(), kdist.end());

  // Farthest point from the chord between the curve's endpoints.
  const double x0 = 0.0, y0 = kdist.front();
  const double x1 = static_cast<double>(n - 1), y1 = kdist.back();
  const double dx = x1 - x0, dy = y1 - y0;
  const double norm = std::sqrt(dx * dx + dy * dy);
  std::size_t best_index = 0;
  double best_dist = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double px = static_cast<double>(i) - x0;
    const double py = kdist[i] - y0;
    const double dist = norm > 0.0 ? std::abs(dx * py - dy * px) / norm : 0.0;
    if (dist > best_dist) {
      best_dist = dist;
      best_index = i;
    }
  }
  return kdist[best_index];
}

}  // namespace clustab
