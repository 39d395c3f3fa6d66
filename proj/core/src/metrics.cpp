#include "clustab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "clustab/assignment.hpp"

namespace clustab {

MetricValue mcc(const LabelVector& a, const LabelVector& b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("mcc: need equal-length non-empty vectors");
  }
  const ContingencyTable table = contingency(a, b);
  const double n = static_cast<double>(a.size());
  double correct = 0.0;
  const std::size_t diag = std::min(table.rows, table.cols);
  for (std::size_t i = 0; i < diag; ++i) {
    correct += static_cast<double>(table.at(i, i));
  }
  std::vector<double> row_sum(table.rows, 0.0), col_sum(table.cols, 0.0);
  for (std::size_t r = 0; r < table.rows; ++r) {
    for (std::size_t c = 0; c < table.cols; ++c) {
      row_sum[r] += static_cast<double>(table.at(r, c));
      col_sum[c] += static_cast<double>(table.at(r, c));
    }
  }
  double sum_row2 = 0.0, sum_col2 = 0.0;
  for (double v : row_sum) sum_row2 += v * v;
  for (double v : col_sum) sum_col2 += v * v;
  // Marginal products pair by class id; both sides share the id space.
  double cross = 0.0;
  const std::size_t ids = std::max(table.rows, table.cols);
  for (std::size_t i = 0; i < ids; ++i) {
    const double r = i < table.rows ? row_sum[i] : 0.0;
    const double c = i < table.cols ? col_sum[i] : 0.0;
    cross += r * c;
  }
  const double cov = correct * n - cross;
  // Single sqrt keeps identical labelings at exactly 1.0.
  const double denom = std::sqrt((n * n - sum_row2) * (n * n - sum_col2));
  if (denom == 0.0) return {0.0, true};  // one side constant
  return {cov / denom, false};
}

PRF precision_recall_f1(const LabelVector& truth,
                        const LabelVector& predicted) {
  if (truth.size() != predicted.size() || truth.empty()) {
    throw std::invalid_argument("precision_recall_f1: length mismatch");
  }
  std::set<int> classes(truth.begin(), truth.end());
  classes.insert(predicted.begin(), predicted.end());
  PRF out;
  for (int cls : classes) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const bool in_truth = truth[i] == cls;
      const bool in_pred = predicted[i] == cls;
      tp += in_truth && in_pred;
      fp += !in_truth && in_pred;
      fn += in_truth && !in_pred;
    }
    const double precision = (tp + fp) > 0 ? tp / (tp + fp) : 0.0;
    const double recall = (tp + fn) > 0 ? tp / (tp + fn) : 0.0;
    const double f1 =
        (precision + recall) > 0 ? 2 * precision * recall / (precision + recall)
                                 : 0.0;
    out.precision_macro += precision;
    out.recall_macro += recall;
    out.f1_macro += f1;
  }
  const double k = static_cast<double>(classes.size());
  out.precision_macro /= k;
  out.recall_macro /= k;
  out.f1_macro /= k;
  return out;
}

namespace {

double entropy(const std::vector<double>& counts, double n) {
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= (c / n) * std::log(c / n);
  }
  return h;
}

// Expected mutual information under the hypergeometric (fixed-marginals)
// model, evaluated with log-gamma to stay in range.
double expected_mi(const std::vector<double>& a_counts,
                   const std::vector<double>& b_counts, double n) {
  double emi = 0.0;
  for (double ai : a_counts) {
    for (double bj : b_counts) {
      const double lo = std::max(1.0, ai + bj - n);
      const double hi = std::min(ai, bj);
      for (double nij = lo; nij <= hi; ++nij) {
        const double term = (nij / n) * std::log((n * nij) / (ai * bj));
        const double log_prob =
            std::lgamma(ai + 1) + std::lgamma(bj + 1) +
            std::lgamma(n - ai + 1) + std::lgamma(n - bj + 1) -
            std::lgamma(n + 1) - std::lgamma(nij + 1) -
            std::lgamma(ai - nij + 1) - std::lgamma(bj - nij + 1) -
            std::lgamma(n - ai - bj + nij + 1);
        emi += term * std::exp(log_prob);
      }
    }
  }
  return emi;
}

}  // namespace

MetricValue ami(const LabelVector& a, const LabelVector& b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("ami: need equal-length non-empty vectors");
  }
  const LabelVector ca = compact_labels(a);
  const LabelVector cb = compact_labels(b);
  const ContingencyTable table = contingency(ca, cb);
  const double n = static_cast<double>(a.size());

  std::vector<double> a_counts(table.rows, 0.0), b_counts(table.cols, 0.0);
  for (std::size_t r = 0; r < table.rows; ++r) {
    for (std::size_t c = 0; c < table.cols; ++c) {
      a_counts[r] += static_cast<double>(table.at(r, c));
      b_counts[c] += static_cast<double>(table.at(r, c));
    }
  }
  double mi = 0.0;
  for (std::size_t r = 0; r < table.rows; ++r) {
    for (std::size_t c = 0; c < table.cols; ++c) {
      const double nij = static_cast<double>(table.at(r, c));
      if (nij > 0.0) {
        mi += (nij / n) * std::log((n * nij) / (a_counts[r] * b_counts[c]));
      }
    }
  }
  const double ha = entropy(a_counts, n);
  const double hb = entropy(b_counts, n);
  const double emi = expected_mi(a_counts, b_counts, n);
  const double denom = 0.5 * (ha + hb) - emi;
  if (std::abs(denom) < 1e-15) {
    // Both partitions carry no information (e.g. single cluster each side):
    // identical partitions score 1, anything else is 0, flagged.
    return ca == cb ? MetricValue{1.0, false} : MetricValue{0.0, true};
  }
  return {(mi - emi) / denom, false};
}

namespace {

double euclid(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

// Cluster ids and member lists for non-noise samples.
std::vector<std::vector<std::size_t>> cluster_members(
    const LabelVector& labels) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= 0) groups[labels[i]].push_back(i);
  }
  std::vector<std::vector<std::size_t>> members;
  members.reserve(groups.size());
  for (auto& [label, indices] : groups) members.push_back(std::move(indices));
  return members;
}

}  // namespace

MetricValue silhouette(const Dataset& data, const LabelVector& labels) {
  if (labels.size() != data.n_samples) {
    throw std::invalid_argument("silhouette: label count mismatch");
  }
  const auto members = cluster_members(labels);
  const std::size_t k = members.size();
  if (k < 2) throw std::invalid_argument("silhouette: need >= 2 clusters");

  // Position of each sample's cluster in `members` (ascending label order).
  std::map<int, std::size_t> cluster_pos;
  {
    std::set<int> labels_present;
    for (int label : labels) {
      if (label >= 0) labels_present.insert(label);
    }
    std::size_t pos = 0;
    for (int label : labels_present) cluster_pos[label] = pos++;
  }

  double total = 0.0;
  std::size_t counted = 0;
  std::vector<double> mean_to(k, 0.0);
  for (std::size_t i = 0; i < data.n_samples; ++i) {
    if (labels[i] < 0) continue;
    const std::size_t own = cluster_pos[labels[i]];
    if (members[own].size() == 1) {
      ++counted;  // singleton scores 0 by convention
      continue;
    }
    std::fill(mean_to.begin(), mean_to.end(), 0.0);
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t j : members[c]) {
        if (j != i) mean_to[c] += euclid(data.row(i), data.row(j));
      }
      const double count = static_cast<double>(members[c].size() - (c == own));
      mean_to[c] /= count;
    }
    const double a = mean_to[own];
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != own) b = std::min(b, mean_to[c]);
    }
    total += (b - a) / std::max(a, b);
    ++counted;
  }
  return {total / static_cast<double>(counted), false};
}

MetricValue davies_bouldin(const Dataset& data, const LabelVector& labels) {
  if (labels.size() != data.n_samples) {
    throw std::invalid_argument("davies_bouldin: label count mismatch");
  }
  const auto members = cluster_members(labels);
  const std::size_t k = members.size();
  if (k < 2) throw std::invalid_argument("davies_bouldin: need >= 2 clusters");

  const std::size_t d = data.n_features;
  std::vector<std::vector<double>> centroids(k, std::vector<double>(d, 0.0));
  std::vector<double> spread(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i : members[c]) {
      const auto row = data.row(i);
      for (std::size_t f = 0; f < d; ++f) centroids[c][f] += row[f];
    }
    for (std::size_t f = 0; f < d; ++f) {
      centroids[c][f] /= static_cast<double>(members[c].size());
    }
    for (std::size_t i : members[c]) {
      spread[c] += euclid(data.row(i), centroids[c]);
    }
    spread[c] /= static_cast<double>(members[c].size());
  }

  bool flagged = false;
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      const double dist = euclid(centroids[i], centroids[j]);
      if (dist == 0.0) {
        worst = std::numeric_limits<double>::infinity();
        flagged = true;
        break;
      }
      worst = std::max(worst, (spread[i] + spread[j]) / dist);
    }
    total += worst;
  }
  return {total / static_cast<double>(k), flagged};
}

InternalSweep internal_sweep(const Dataset& data,
                             const ClustererConfig& clusterer,
                             const std::vector<int>& k_values,
                             std::uint64_t seed) {
  if (k_values.empty()) {
    throw std::invalid_argument("internal_sweep: empty k list");
  }
  InternalSweep sweep;
  double best_silhouette = -std::numeric_limits<double>::infinity();
  double best_db = std::numeric_limits<double>::infinity();
  for (int k : k_values) {
    const FitResult fit = fit_clusterer(data, clusterer, k, seed);
    InternalIndexPoint point;
    point.silhouette = silhouette(data, fit.labels).value;
    point.davies_bouldin = davies_bouldin(data, fit.labels).value;
    sweep.per_k[k] = point;
    if (point.silhouette > best_silhouette) {
      best_silhouette = point.silhouette;
      sweep.best_silhouette_k = k;
    }
    if (point.davies_bouldin < best_db) {
      best_db = point.davies_bouldin;
      sweep.best_db_k = k;
    }
  }
  return sweep;
}

}  // namespace clustab
