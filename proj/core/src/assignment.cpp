#include "clustab/assignment.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace clustab {

Permutation Permutation::inverse() const {
  Permutation inv;
  inv.mapping.assign(mapping.size(), -1);
  for (std::size_t i = 0; i < mapping.size(); ++i) {
    const int image = mapping[i];
    if (image < 0 || image >= static_cast<int>(mapping.size()) ||
        inv.mapping[image] != -1) {
      throw std::invalid_argument("permutation is not a bijection");
    }
    inv.mapping[image] = static_cast<int>(i);
  }
  return inv;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < mapping.size(); ++i) {
    if (mapping[i] != static_cast<int>(i)) return false;
  }
  return true;
}

std::int64_t ContingencyTable::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

ContingencyTable ContingencyTable::transposed() const {
  ContingencyTable out;
  out.rows = cols;
  out.cols = rows;
  out.counts.assign(counts.size(), 0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      out.counts[c * rows + r] = at(r, c);
    }
  }
  return out;
}

ContingencyTable contingency(const LabelVector& a, const LabelVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("contingency: label vectors differ in length");
  }
  int max_a = -1;
  int max_b = -1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || b[i] < 0) {
      throw std::invalid_argument("contingency: negative label");
    }
    max_a = std::max(max_a, a[i]);
    max_b = std::max(max_b, b[i]);
  }
  ContingencyTable table;
  table.rows = static_cast<std::size_t>(max_a + 1);
  table.cols = static_cast<std::size_t>(max_b + 1);
  table.counts.assign(table.rows * table.cols, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++table.counts[static_cast<std::size_t>(a[i]) * table.cols +
                   static_cast<std::size_t>(b[i])];
  }
  return table;
}

namespace {

// Jonker-style augmenting-path Kuhn-Munkres with integer potentials;
// minimizes total cost over a square matrix. Returns row -> column.
std::vector<int> solve_min_assignment(const std::vector<std::int64_t>& cost,
                                      int n) {
  const std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = 0;
      std::int64_t delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur =
            cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (match[j]) row_to_col[match[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

std::pair<Permutation, std::int64_t> hungarian_max_agreement(
    const ContingencyTable& table) {
  if (table.rows == 0 || table.cols == 0) {
    throw std::invalid_argument("hungarian: empty table");
  }
  const int n = static_cast<int>(std::max(table.rows, table.cols));
  // Maximization by negation; padding rows/columns cost 0.
  std::vector<std::int64_t> cost(static_cast<std::size_t>(n) * n, 0);
  for (std::size_t r = 0; r < table.rows; ++r) {
    for (std::size_t c = 0; c < table.cols; ++c) {
      cost[r * n + c] = -table.at(r, c);
    }
  }
  Permutation perm;
  perm.mapping = solve_min_assignment(cost, n);
  std::int64_t agreement = 0;
  for (std::size_t r = 0; r < table.rows; ++r) {
    const int c = perm.mapping[r];
    if (c >= 0 && static_cast<std::size_t>(c) < table.cols) {
      agreement += table.at(r, static_cast<std::size_t>(c));
    }
  }
  return {std::move(perm), agreement};
}

DistanceResult misclassification_distance(const LabelVector& predicted,
                                          const LabelVector& clustered) {
  if (predicted.size() != clustered.size()) {
    throw std::invalid_argument(
        "misclassification_distance: length mismatch");
  }
  LabelVector kept_pred;
  LabelVector kept_clust;
  kept_pred.reserve(predicted.size());
  kept_clust.reserve(clustered.size());
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (clustered[i] < 0) continue;  // density noise: not comparable
    if (predicted[i] < 0) {
      throw std::invalid_argument(
          "misclassification_distance: negative prediction label");
    }
    kept_pred.push_back(predicted[i]);
    kept_clust.push_back(clustered[i]);
  }
  if (kept_pred.empty()) {
    throw std::runtime_error(
        "misclassification_distance: zero comparable samples (all noise)");
  }
  // The permutation is applied to the clustering labels, so rows are the
  // clustering side: sigma maps cluster id -> prediction id.
  const ContingencyTable table = contingency(kept_clust, kept_pred);
  auto [perm, agreement] = hungarian_max_agreement(table);
  DistanceResult out;
  out.n_compared = kept_pred.size();
  out.distance = 1.0 - static_cast<double>(agreement) /
                           static_cast<double>(out.n_compared);
  out.permutation = std::move(perm);
  return out;
}

LabelVector relabel(const LabelVector& labels, const Permutation& perm) {
  LabelVector out;
  out.reserve(labels.size());
  for (int label : labels) {
    if (label < 0) {
      out.push_back(-1);
      continue;
    }
    if (label >= perm.size()) {
      throw std::invalid_argument("relabel: label out of permutation range");
    }
    out.push_back(perm.mapping[label]);
  }
  return out;
}

}  // namespace clustab
