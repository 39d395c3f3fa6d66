#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clustab/selection.hpp"

namespace clustab {

/// Named hyperparameter with the values to try (integers are passed as
/// exact doubles). Expansion order is alphabetical by name; duplicate
/// values are dropped, keeping the first occurrence.
struct ParamValues {
  std::string name;
  std::vector<double> values;
};

/// One clusterer/classifier pair plus optional per-side hyperparameter
/// grids layered over the base configs.
struct SearchPair {
  ClustererConfig clusterer;
  ClassifierConfig classifier;
  std::vector<ParamValues> clusterer_grid;
  std::vector<ParamValues> classifier_grid;
};

struct SearchSpace {
  std::vector<SearchPair> pairs;
  CvGrid grid;
  std::optional<int> true_k;
};

struct ConcreteConfig {
  ClustererConfig clusterer;
  ClassifierConfig classifier;
};

/// Canonical one-line description, e.g. "knn(n_neighbors=15)/kmeans".
std::string describe(const ConcreteConfig& config);

/// Stable 64-bit hash of the canonical description; per-config seeds are
/// derive_seed(base_seed, hash), so outcomes are independent of execution
/// order.
std::uint64_t config_hash(const ConcreteConfig& config);

/// Cartesian product of the per-parameter value lists for one pair,
/// deterministic order. Throws on an unknown parameter name or an empty
/// value list.
std::vector<ConcreteConfig> expand_pair(const SearchPair& pair);

/// All pairs expanded, in listed order.
std::vector<ConcreteConfig> expand_grid(const SearchSpace& space);

struct SearchEntry {
  ConcreteConfig config;
  int k_star = 0;
  double mean_norm = 0.0;
  double sd = 0.0;
  std::optional<EvaluationReport> evaluation;
};

struct FailedEntry {
  ConcreteConfig config;
  std::string error;
};

/// Leaderboard: ranked ascending by stability at k*, exact ties broken by
/// cheaper algorithm complexity (dbscan < kmeans < ward; logreg = knn),
/// then by the lexical config description.
struct SearchOutcome {
  std::vector<SearchEntry> ranked;
  std::vector<FailedEntry> failed;
  std::size_t best = 0;  // index into ranked
  std::optional<std::size_t> best_matching_true_k;
};

/// Run the selection loop for every concrete config and rank the outcomes.
/// Individual config failures are recorded, not fatal. When a test set is
/// supplied each successful entry is also evaluated on it.
SearchOutcome search(
    const Dataset& train, const SearchSpace& space,
    const std::optional<std::vector<int>>& stratifier = std::nullopt,
    const Dataset* test = nullptr, int workers = 1);

}  // namespace clustab
