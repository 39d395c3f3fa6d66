#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "clustab/clustering.hpp"
#include "clustab/rng.hpp"

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

std::span<const double> centroid_row(const std::vector<double>& centroids,
                                     std::size_t c, std::size_t n_features) {
  return {centroids.data() + c * n_features, n_features};
}

std::size_t count_distinct_rows(const Dataset& data) {
  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < data.n_samples; ++r) {
    const auto row = data.row(r);
    seen.emplace(reinterpret_cast<const char*>(row.data()),
                 row.size() * sizeof(double));
  }
  return seen.size();
}

// k-means++: first centroid uniform, the rest sampled proportionally to the
// squared distance from the nearest chosen centroid.
std::vector<double> plus_plus_init(const Dataset& data, int k, Rng& rng) {
  const std::size_t n = data.n_samples;
  const std::size_t d = data.n_features;
  std::vector<double> centroids;
  centroids.reserve(static_cast<std::size_t>(k) * d);
  std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());

  const std::size_t first = static_cast<std::size_t>(rng.below(n));
  const auto first_row = data.row(first);
  centroids.insert(centroids.end(), first_row.begin(), first_row.end());

  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    const auto last = centroid_row(centroids, static_cast<std::size_t>(c) - 1, d);
    for (std::size_t i = 0; i < n; ++i) {
      min_d2[i] = std::min(min_d2[i], sq_dist(data.row(i), last));
      total += min_d2[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = rng.real01() * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += min_d2[i];
        if (acc > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<std::size_t>(rng.below(n));
    }
    const auto row = data.row(pick);
    centroids.insert(centroids.end(), row.begin(), row.end());
  }
  return centroids;
}

struct LloydOutcome {
  std::vector<double> centroids;
  LabelVector labels;
  double inertia = 0.0;
  std::vector<double> wcss_history;
};

LloydOutcome lloyd(const Dataset& data, int k, const KmeansParams& params,
                   std::vector<double> centroids) {
  const std::size_t n = data.n_samples;
  const std::size_t d = data.n_features;
  const std::size_t kk = static_cast<std::size_t>(k);
  LloydOutcome out;
  out.labels.assign(n, 0);
  std::vector<double> point_d2(n, 0.0);
  std::vector<std::size_t> counts(kk, 0);

  const auto assign = [&]() {
    std::fill(counts.begin(), counts.end(), std::size_t{0});
    double wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = data.row(i);
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (std::size_t c = 0; c < kk; ++c) {
        const double d2 = sq_dist(row, centroid_row(centroids, c, d));
        if (d2 < best) {
          best = d2;
          best_c = static_cast<int>(c);
        }
      }
      out.labels[i] = best_c;
      point_d2[i] = best;
      ++counts[static_cast<std::size_t>(best_c)];
      wcss += best;
    }
    // Empty-cluster repair: seed each empty cluster with the point farthest
    // from its centroid (donor cluster must keep >= 1 member).
    for (std::size_t e = 0; e < kk; ++e) {
      if (counts[e] != 0) continue;
      double far = 0.0;
      std::size_t pick = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[static_cast<std::size_t>(out.labels[i])] < 2) continue;
        if (point_d2[i] > far) {
          far = point_d2[i];
          pick = i;
        }
      }
      if (pick == n) {
        throw std::runtime_error(
            "kmeans: k exceeds the number of distinct samples");
      }
      --counts[static_cast<std::size_t>(out.labels[pick])];
      out.labels[pick] = static_cast<int>(e);
      counts[e] = 1;
      const auto row = data.row(pick);
      std::copy(row.begin(), row.end(), centroids.begin() + e * d);
      wcss -= point_d2[pick];
      point_d2[pick] = 0.0;
    }
    return wcss;
  };

  double wcss = assign();
  out.wcss_history.push_back(wcss);
  for (int iter = 0; iter < params.max_iter; ++iter) {
    std::vector<double> next(kk * d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = data.row(i);
      double* dst = next.data() + static_cast<std::size_t>(out.labels[i]) * d;
      for (std::size_t f = 0; f < d; ++f) dst[f] += row[f];
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < kk; ++c) {
      for (std::size_t f = 0; f < d; ++f) {
        next[c * d + f] /= static_cast<double>(counts[c]);
      }
      shift = std::max(shift, std::sqrt(sq_dist(
                                  centroid_row(next, c, d),
                                  centroid_row(centroids, c, d))));
    }
    centroids = std::move(next);
    wcss = assign();
    out.wcss_history.push_back(wcss);
    if (shift < params.tol) break;
  }
  out.centroids = std::move(centroids);
  out.inertia = wcss;
  return out;
}

}  // namespace

FitResult fit_kmeans(const Dataset& data, int k, const KmeansParams& params,
                     std::uint64_t seed) {
  if (k < 2 || static_cast<std::size_t>(k) > data.n_samples) {
    throw std::invalid_argument("kmeans: k out of range [2, n_samples]");
  }
  if (params.n_init < 1) throw std::invalid_argument("kmeans: n_init >= 1");
  if (count_distinct_rows(data) < static_cast<std::size_t>(k)) {
    throw std::runtime_error(
        "kmeans: k exceeds the number of distinct samples");
  }

  LloydOutcome best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < params.n_init; ++restart) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(restart)));
    LloydOutcome run = lloyd(data, k, params, plus_plus_init(data, k, rng));
    if (run.inertia < best.inertia) best = std::move(run);
  }

  FitResult out;
  out.model.kind = ClustererKind::kmeans;
  out.model.n_features = data.n_features;
  out.model.inertia = best.inertia;
  out.model.wcss_history = std::move(best.wcss_history);
  out.labels = compact_labels(best.labels);
  out.k_found = count_clusters(out.labels);
  // Keep centroid rows aligned with the compacted label ids.
  out.model.centroids.assign(best.centroids.size(), 0.0);
  const std::size_t d = data.n_features;
  for (std::size_t i = 0; i < data.n_samples; ++i) {
    const auto src = static_cast<std::size_t>(best.labels[i]) * d;
    const auto dst = static_cast<std::size_t>(out.labels[i]) * d;
    std::copy(best.centroids.begin() + src, best.centroids.begin() + src + d,
              out.model.centroids.begin() + dst);
  }
  return out;
}

}  // namespace clustab
