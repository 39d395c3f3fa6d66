#include "clustab/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "clustab/rng.hpp"

namespace clustab {

int count_clusters(const LabelVector& labels) {
  std::set<int> distinct;
  for (int label : labels) {
    if (label >= 0) distinct.insert(label);
  }
  return static_cast<int>(distinct.size());
}

LabelVector compact_labels(const LabelVector& labels) {
  std::unordered_map<int, int> remap;
  LabelVector out;
  out.reserve(labels.size());
  for (int label : labels) {
    if (label < 0) {
      out.push_back(-1);
      continue;
    }
    auto [it, inserted] = remap.try_emplace(label, static_cast<int>(remap.size()));
    out.push_back(it->second);
  }
  return out;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.n_samples = rows.size();
  out.n_features = n_features;
  out.feature_names = feature_names;
  out.id = id;
  out.values.reserve(rows.size() * n_features);
  for (std::size_t r : rows) {
    const auto src = row(r);
    out.values.insert(out.values.end(), src.begin(), src.end());
  }
  if (true_labels) {
    LabelVector sliced;
    sliced.reserve(rows.size());
    for (std::size_t r : rows) sliced.push_back((*true_labels)[r]);
    out.true_labels = std::move(sliced);
  }
  return out;
}

void validate_grid(const CvGrid& grid, std::size_t n_train) {
  if (grid.n_fold < 2) throw std::invalid_argument("cv grid: n_fold must be >= 2");
  if (grid.n_rep < 1) throw std::invalid_argument("cv grid: n_rep must be >= 1");
  if (grid.n_rnd < 1) throw std::invalid_argument("cv grid: n_rnd must be >= 1");
  if (static_cast<std::size_t>(grid.n_fold) > n_train) {
    throw std::invalid_argument("cv grid: n_fold exceeds training-set size");
  }
  int prev = 1;
  for (int k : grid.k_values) {
    if (k < 2) throw std::invalid_argument("cv grid: every k must be >= 2");
    if (k <= prev && prev != 1) {
      throw std::invalid_argument("cv grid: k_values must be strictly increasing");
    }
    const double inner = static_cast<double>(n_train) *
                         (grid.n_fold - 1) / grid.n_fold;
    if (static_cast<double>(k) > inner) {
      throw std::invalid_argument(
          "cv grid: k exceeds the inner-train size n*(n_fold-1)/n_fold");
    }
    prev = k;
  }
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
  double value = 0.0;
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end || !std::isfinite(value)) {
    throw std::runtime_error("csv: non-numeric or non-finite cell at row " +
                             std::to_string(row + 1) + ", column " +
                             std::to_string(col + 1));
  }
  return value;
}

}  // namespace

Dataset load_csv(const std::string& path,
                 const std::optional<std::string>& label_column,
                 bool has_header) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("csv: cannot open " + path);

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(file, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && file.eof()) break;
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw std::runtime_error("csv: empty file " + path);

  Dataset out;
  out.id = path;
  std::size_t first_data = 0;
  std::vector<std::string> header;
  if (has_header) {
    header = split_line(lines[0]);
    first_data = 1;
  }
  std::optional<std::size_t> label_index;
  if (label_column) {
    if (!has_header) {
      throw std::runtime_error("csv: label column requires a header row");
    }
    const auto it = std::find(header.begin(), header.end(), *label_column);
    if (it == header.end()) {
      throw std::runtime_error("csv: label column '" + *label_column +
                               "' not found in header");
    }
    label_index = static_cast<std::size_t>(it - header.begin());
  }

  const std::size_t n_rows = lines.size() - first_data;
  if (n_rows < 2) {
    throw std::runtime_error("csv: n_samples >= 2 violated (" +
                             std::to_string(n_rows) + " data rows)");
  }

  LabelVector labels;
  for (std::size_t r = 0; r < n_rows; ++r) {
    const auto cells = split_line(lines[first_data + r]);
    if (has_header && cells.size() != header.size()) {
      throw std::runtime_error("csv: row " + std::to_string(r + 1) +
                               " has " + std::to_string(cells.size()) +
                               " cells, header has " +
                               std::to_string(header.size()));
    }
    const std::size_t width = label_index ? cells.size() - 1 : cells.size();
    if (r == 0) {
      out.n_features = width;
      if (width < 1) throw std::runtime_error("csv: no feature columns");
    } else if (width != out.n_features) {
      throw std::runtime_error("csv: row " + std::to_string(r + 1) +
                               " has inconsistent column count");
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double value = parse_cell(cells[c], first_data + r, c);
      if (label_index && c == *label_index) {
        labels.push_back(static_cast<int>(std::llround(value)));
      } else {
        out.values.push_back(value);
      }
    }
  }
  out.n_samples = n_rows;
  if (label_index) out.true_labels = std::move(labels);
  if (has_header) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (label_index && c == *label_index) continue;
      out.feature_names.push_back(header[c]);
    }
  }
  return out;
}

namespace {

std::string format_double(double value) {
  char buffer[64];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

}  // namespace

void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("csv: cannot write " + path);
  std::vector<std::string> names = data.feature_names;
  if (names.empty()) {
    for (std::size_t c = 0; c < data.n_features; ++c) {
      names.push_back("f" + std::to_string(c));
    }
  }
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (c) file << ',';
    file << names[c];
  }
  if (data.true_labels) file << ",label";
  file << '\n';
  for (std::size_t r = 0; r < data.n_samples; ++r) {
    for (std::size_t c = 0; c < data.n_features; ++c) {
      if (c) file << ',';
      file << format_double(data.at(r, c));
    }
    if (data.true_labels) file << ',' << (*data.true_labels)[r];
    file << '\n';
  }
}

// ---------------------------------------------------------------------------
// Blobs

Dataset make_blobs(std::size_t n_samples, std::size_t n_features,
                   const BlobCenters& centers, double cluster_std,
                   std::uint64_t seed) {
  if (cluster_std < 0.0) {
    throw std::invalid_argument("make_blobs: cluster_std must be >= 0");
  }
  Rng rng(seed);
  std::vector<std::vector<double>> points;
  if (std::holds_alternative<int>(centers)) {
    const int count = std::get<int>(centers);
    if (count < 1) throw std::invalid_argument("make_blobs: need >= 1 center");
    // Centers drawn uniformly in [-20, 20] per coordinate.
    for (int b = 0; b < count; ++b) {
      std::vector<double> point(n_features);
      for (auto& coordinate : point) coordinate = -20.0 + 40.0 * rng.real01();
      points.push_back(std::move(point));
    }
  } else {
    points = std::get<std::vector<std::vector<double>>>(centers);
    for (const auto& point : points) {
      if (point.size() != n_features) {
        throw std::invalid_argument(
            "make_blobs: center dimensionality differs from n_features");
      }
    }
  }
  const std::size_t n_centers = points.size();
  if (n_samples < n_centers) {
    throw std::invalid_argument("make_blobs: fewer samples than centers");
  }

  Dataset out;
  out.n_samples = n_samples;
  out.n_features = n_features;
  out.id = "blobs";
  out.values.reserve(n_samples * n_features);
  LabelVector labels;
  labels.reserve(n_samples);
  const std::size_t base = n_samples / n_centers;
  const std::size_t extra = n_samples % n_centers;
  for (std::size_t b = 0; b < n_centers; ++b) {
    const std::size_t block = base + (b < extra ? 1 : 0);
    for (std::size_t s = 0; s < block; ++s) {
      for (std::size_t f = 0; f < n_features; ++f) {
        out.values.push_back(points[b][f] + cluster_std * rng.normal());
      }
      labels.push_back(static_cast<int>(b));
    }
  }
  out.true_labels = std::move(labels);
  return out;
}

// ---------------------------------------------------------------------------
// Scaling

std::pair<Dataset, ScaleParams> standard_scale(const Dataset& data) {
  if (data.n_samples < 2) {
    throw std::invalid_argument("standard_scale: need >= 2 samples");
  }
  ScaleParams params;
  params.mean.resize(data.n_features, 0.0);
  params.sd.resize(data.n_features, 0.0);
  params.zero_variance.resize(data.n_features, false);
  const double n = static_cast<double>(data.n_samples);
  for (std::size_t c = 0; c < data.n_features; ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < data.n_samples; ++r) sum += data.at(r, c);
    params.mean[c] = sum / n;
    double ss = 0.0;
    for (std::size_t r = 0; r < data.n_samples; ++r) {
      const double d = data.at(r, c) - params.mean[c];
      ss += d * d;
    }
    params.sd[c] = std::sqrt(ss / n);
    if (params.sd[c] <= 1e-13 * (std::abs(params.mean[c]) + 1.0)) {
      params.sd[c] = 0.0;
      params.zero_variance[c] = true;
    }
  }
  return {apply_scale(data, params), params};
}

Dataset apply_scale(const Dataset& data, const ScaleParams& params) {
  if (params.mean.size() != data.n_features) {
    throw std::invalid_argument("apply_scale: feature count mismatch");
  }
  Dataset out = data;
  for (std::size_t r = 0; r < data.n_samples; ++r) {
    for (std::size_t c = 0; c < data.n_features; ++c) {
      double value = data.at(r, c) - params.mean[c];
      if (!params.zero_variance[c]) value /= params.sd[c];
      out.values[r * data.n_features + c] = value;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Splitting

namespace {

// Groups 0..n-1 by stratum value, strata in ascending value order. Without a
// stratifier everything lands in a single group.
std::vector<std::vector<std::size_t>> strata_groups(
    std::size_t n, const std::optional<std::vector<int>>& stratifier) {
  if (!stratifier) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return {std::move(all)};
  }
  if (stratifier->size() != n) {
    throw std::invalid_argument("stratifier length differs from sample count");
  }
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[(*stratifier)[i]].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  out.reserve(groups.size());
  for (auto& [value, indices] : groups) out.push_back(std::move(indices));
  return out;
}

}  // namespace

std::tuple<SplitPlan, Dataset, Dataset> train_test_split(
    const Dataset& data, double test_fraction, std::uint64_t seed,
    const std::optional<std::vector<int>>& stratifier) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("train_test_split: fraction must be in (0,1)");
  }
  Rng rng(seed);
  SplitPlan plan;
  plan.seed = seed;
  plan.stratifier = stratifier;
  // Bresenham allocation within each shuffled stratum: every 1/fraction-th
  // sample goes to the test side, so per-stratum counts deviate from the
  // exact proportion by less than one sample.
  for (auto& group : strata_groups(data.n_samples, stratifier)) {
    rng.shuffle(group);
    double acc = 0.0;
    for (std::size_t index : group) {
      acc += test_fraction;
      if (acc >= 1.0 - 1e-12) {
        acc -= 1.0;
        plan.test_indices.push_back(index);
      } else {
        plan.train_indices.push_back(index);
      }
    }
  }
  if (plan.train_indices.empty() || plan.test_indices.empty()) {
    throw std::invalid_argument(
        "train_test_split: fraction yields an empty part");
  }
  std::sort(plan.train_indices.begin(), plan.train_indices.end());
  std::sort(plan.test_indices.begin(), plan.test_indices.end());
  Dataset train = data.subset(plan.train_indices);
  Dataset test = data.subset(plan.test_indices);
  return {std::move(plan), std::move(train), std::move(test)};
}

std::vector<FoldSplit> cv_folds(
    std::size_t n, const CvGrid& grid, int rep,
    const std::optional<std::vector<int>>& stratifier) {
  if (rep < 0 || rep >= grid.n_rep) {
    throw std::invalid_argument("cv_folds: rep out of range");
  }
  if (static_cast<std::size_t>(grid.n_fold) > n) {
    throw std::invalid_argument("cv_folds: n_fold exceeds sample count");
  }
  Rng rng(derive_seed(grid.base_seed, static_cast<std::uint64_t>(rep)));
  std::vector<int> fold_of(n, 0);
  for (auto& group : strata_groups(n, stratifier)) {
    rng.shuffle(group);
    for (std::size_t j = 0; j < group.size(); ++j) {
      fold_of[group[j]] = static_cast<int>(j % grid.n_fold);
    }
  }
  std::vector<FoldSplit> folds(grid.n_fold);
  for (std::size_t i = 0; i < n; ++i) {
    for (int f = 0; f < grid.n_fold; ++f) {
      if (fold_of[i] == f) {
        folds[f].validation.push_back(i);
      } else {
        folds[f].inner_train.push_back(i);
      }
    }
  }
  return folds;
}

}  // namespace clustab
