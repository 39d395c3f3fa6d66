#pragma once

#include <cstdint>
#include <vector>

#include "clustab/dataset.hpp"

namespace clustab {

/// Bijection on label ids 0..size-1. mapping[i] is the image of label i;
/// when built from a padded rectangular problem, images may lie beyond the
/// other side's label range (fresh ids).
struct Permutation {
  std::vector<int> mapping;

  int size() const { return static_cast<int>(mapping.size()); }
  int operator()(int label) const { return mapping[label]; }
  Permutation inverse() const;
  bool is_identity() const;
};

/// Cross-tabulation of two label vectors (labels must be >= 0).
struct ContingencyTable {
  std::vector<std::int64_t> counts;  // rows * cols, row-major
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::int64_t at(std::size_t r, std::size_t c) const {
    return counts[r * cols + c];
  }
  std::int64_t total() const;
  ContingencyTable transposed() const;
};

/// counts[a_i][b_i] over paired labels. Throws on negative labels or length
/// mismatch.
ContingencyTable contingency(const LabelVector& a, const LabelVector& b);

/// Kuhn-Munkres on the negated count matrix: the row->column bijection
/// maximizing the diagonal sum. Rectangular tables are zero-padded to
/// square, so unmatched rows map to fresh column ids.
std::pair<Permutation, std::int64_t> hungarian_max_agreement(
    const ContingencyTable& table);

struct DistanceResult {
  double distance = 0.0;   // in [0, 1]
  Permutation permutation; // clustering label -> prediction label id
  std::size_t n_compared = 0;
};

/// Permutation-minimized misclassification: the fraction of samples where
/// the prediction differs from the optimally relabeled clustering label.
/// Samples whose clustering label is -1 (noise) are excluded. Throws when
/// no comparable samples remain.
DistanceResult misclassification_distance(const LabelVector& predicted,
                                          const LabelVector& clustered);

/// labels[i] -> perm.mapping[labels[i]]; -1 passes through. Throws when a
/// non-noise label is out of the permutation's range.
LabelVector relabel(const LabelVector& labels, const Permutation& perm);

}  // namespace clustab
