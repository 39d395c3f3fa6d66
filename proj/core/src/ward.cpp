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

}  // namespace

// Agglomerative Ward via Lance-Williams updates on squared Euclidean
// distances. Slot i always holds the cluster whose smallest original sample
// index is i, so "lexicographically smallest (i, j)" ties are well defined.
FitResult fit_ward(const Dataset& data, int k) {
  const std::size_t n = data.n_samples;
  if (k < 2 || static_cast<std::size_t>(k) > n) {
    throw std::invalid_argument("ward: k out of range [2, n_samples]");
  }

  std::vector<double> d2(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = sq_dist(data.row(i), data.row(j));
      d2[i * n + j] = v;
      d2[j * n + i] = v;
    }
  }

  std::vector<char> alive(n, 1);
  std::vector<int> size(n, 1);
  std::vector<int> record_id(n);       // scipy-style ids: merge t creates n+t
  std::iota(record_id.begin(), record_id.end(), 0);
  std::vector<int> member_slot(n);     // sample -> current slot
  std::iota(member_slot.begin(), member_slot.end(), 0);

  // Nearest alive neighbor per slot (ties take the smallest index).
  const auto recompute_nn = [&](std::size_t i, std::size_t& nn_j,
                                double& nn_d) {
    nn_d = std::numeric_limits<double>::infinity();
    nn_j = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !alive[j]) continue;
      if (d2[i * n + j] < nn_d) {
        nn_d = d2[i * n + j];
        nn_j = j;
      }
    }
  };
  std::vector<std::size_t> nn(n, n);
  std::vector<double> nn_d(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) recompute_nn(i, nn[i], nn_d[i]);

  std::vector<WardMerge> merges;
  merges.reserve(n - 1);
  std::vector<std::pair<int, int>> merged_slots;  // (i, j) per merge
  merged_slots.reserve(n - 1);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    // Global minimum pair, ordered by (distance, i, j).
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = n, bj = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i] || nn[i] == n) continue;
      const std::size_t lo = std::min(i, nn[i]);
      const std::size_t hi = std::max(i, nn[i]);
      if (nn_d[i] < best || (nn_d[i] == best && (lo < bi || (lo == bi && hi < bj)))) {
        best = nn_d[i];
        bi = lo;
        bj = hi;
      }
    }

    const int si = size[bi];
    const int sj = size[bj];
    WardMerge merge;
    merge.left = record_id[bi];
    merge.right = record_id[bj];
    merge.cost = std::sqrt(d2[bi * n + bj]);
    merge.size = si + sj;
    merges.push_back(merge);
    merged_slots.emplace_back(static_cast<int>(bi), static_cast<int>(bj));

    // Lance-Williams (Ward) update into slot bi; slot bj dies.
    for (std::size_t m = 0; m < n; ++m) {
      if (!alive[m] || m == bi || m == bj) continue;
      const double sm = static_cast<double>(size[m]);
      const double updated =
          ((si + sm) * d2[bi * n + m] + (sj + sm) * d2[bj * n + m] -
           sm * d2[bi * n + bj]) /
          (si + sj + sm);
      d2[bi * n + m] = updated;
      d2[m * n + bi] = updated;
    }
    alive[bj] = 0;
    size[bi] = si + sj;
    record_id[bi] = static_cast<int>(n + step);

    recompute_nn(bi, nn[bi], nn_d[bi]);
    for (std::size_t m = 0; m < n; ++m) {
      if (!alive[m] || m == bi) continue;
      if (nn[m] == bi || nn[m] == bj) {
        recompute_nn(m, nn[m], nn_d[m]);
      } else if (d2[m * n + bi] < nn_d[m]) {
        nn_d[m] = d2[m * n + bi];
        nn[m] = bi;
      }
    }
  }

  // Cut: replay the first n-k merges over a union by slot.
  std::vector<int> slot_of(n);
  std::iota(slot_of.begin(), slot_of.end(), 0);
  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};
  const std::size_t cuts = n - static_cast<std::size_t>(k);
  for (std::size_t t = 0; t < cuts; ++t) {
    const auto [i, j] = merged_slots[t];
    for (std::size_t sample : members[static_cast<std::size_t>(j)]) {
      slot_of[sample] = i;
      members[static_cast<std::size_t>(i)].push_back(sample);
    }
    members[static_cast<std::size_t>(j)].clear();
  }

  FitResult out;
  out.model.kind = ClustererKind::ward;
  out.model.n_features = data.n_features;
  out.model.merges = std::move(merges);
  out.model.cut_k = k;
  out.labels = compact_labels(LabelVector(slot_of.begin(), slot_of.end()));
  out.k_found = count_clusters(out.labels);
  return out;
}

}  // namespace clustab
