#include "clustab/gridsearch.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "clustab/hash.hpp"
#include "clustab/rng.hpp"

namespace clustab {

namespace {

std::string format_value(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

int as_int(const std::string& name, double value) {
  const double rounded = std::llround(value);
  if (rounded != value) {
    throw std::invalid_argument("grid parameter '" + name +
                                "' must be an integer");
  }
  return static_cast<int>(rounded);
}

void apply_clusterer_param(ClustererConfig& config, const std::string& name,
                           double value) {
  if (config.kind == ClustererKind::kmeans) {
    if (name == "n_init") { config.kmeans.n_init = as_int(name, value); return; }
    if (name == "max_iter") { config.kmeans.max_iter = as_int(name, value); return; }
    if (name == "tol") { config.kmeans.tol = value; return; }
  } else if (config.kind == ClustererKind::dbscan) {
    if (name == "eps") { config.dbscan.eps = value; return; }
    if (name == "min_samples") { config.dbscan.min_samples = as_int(name, value); return; }
  }
  throw std::invalid_argument("unknown " + to_string(config.kind) +
                              " parameter '" + name + "'");
}

void apply_classifier_param(ClassifierConfig& config, const std::string& name,
                            double value) {
  if (config.kind == ClassifierKind::knn) {
    if (name == "n_neighbors") { config.knn.n_neighbors = as_int(name, value); return; }
  } else {
    if (name == "l2") { config.logreg.l2 = value; return; }
    if (name == "max_iter") { config.logreg.max_iter = as_int(name, value); return; }
    if (name == "tol") { config.logreg.tol = value; return; }
  }
  throw std::invalid_argument("unknown " + to_string(config.kind) +
                              " parameter '" + name + "'");
}

std::vector<double> dedup_keep_first(const std::vector<double>& values) {
  std::vector<double> out;
  for (double v : values) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

int complexity_rank(const ConcreteConfig& config) {
  int rank = 0;
  switch (config.clusterer.kind) {
    case ClustererKind::dbscan: rank = 0; break;
    case ClustererKind::kmeans: rank = 10; break;
    case ClustererKind::ward: rank = 20; break;
  }
  // logreg and knn share the cheapest classifier tier.
  return rank;
}

}  // namespace

std::string describe(const ConcreteConfig& config) {
  std::string out = to_string(config.classifier.kind);
  if (config.classifier.kind == ClassifierKind::knn) {
    out += "(n_neighbors=" + std::to_string(config.classifier.knn.n_neighbors) + ")";
  } else {
    out += "(l2=" + format_value(config.classifier.logreg.l2) +
           ",max_iter=" + std::to_string(config.classifier.logreg.max_iter) +
           ",tol=" + format_value(config.classifier.logreg.tol) + ")";
  }
  out += "/" + to_string(config.clusterer.kind);
  if (config.clusterer.kind == ClustererKind::kmeans) {
    out += "(n_init=" + std::to_string(config.clusterer.kmeans.n_init) +
           ",max_iter=" + std::to_string(config.clusterer.kmeans.max_iter) +
           ",tol=" + format_value(config.clusterer.kmeans.tol) + ")";
  } else if (config.clusterer.kind == ClustererKind::dbscan) {
    out += "(eps=" + format_value(config.clusterer.dbscan.eps) +
           ",min_samples=" + std::to_string(config.clusterer.dbscan.min_samples) +
           ")";
  }
  return out;
}

std::uint64_t config_hash(const ConcreteConfig& config) {
  return fnv1a64(describe(config));
}

std::vector<ConcreteConfig> expand_pair(const SearchPair& pair) {
  struct Axis {
    bool clusterer_side;
    std::string name;
    std::vector<double> values;
  };
  std::vector<Axis> axes;
  auto add_axes = [&axes](const std::vector<ParamValues>& grid,
                          bool clusterer_side) {
    std::vector<ParamValues> sorted = grid;
    std::sort(sorted.begin(), sorted.end(),
              [](const ParamValues& a, const ParamValues& b) {
                return a.name < b.name;
              });
    for (const auto& param : sorted) {
      if (param.values.empty()) {
        throw std::invalid_argument("grid parameter '" + param.name +
                                    "' has an empty value list");
      }
      axes.push_back({clusterer_side, param.name,
                      dedup_keep_first(param.values)});
    }
  };
  add_axes(pair.clusterer_grid, true);
  add_axes(pair.classifier_grid, false);

  std::vector<ConcreteConfig> out;
  std::vector<std::size_t> index(axes.size(), 0);
  while (true) {
    ConcreteConfig config{pair.clusterer, pair.classifier};
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const double value = axes[a].values[index[a]];
      if (axes[a].clusterer_side) {
        apply_clusterer_param(config.clusterer, axes[a].name, value);
      } else {
        apply_classifier_param(config.classifier, axes[a].name, value);
      }
    }
    out.push_back(config);
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++index[a] < axes[a].values.size()) break;
      index[a] = 0;
      if (a == 0) return out;
    }
    if (axes.empty()) return out;
  }
}

std::vector<ConcreteConfig> expand_grid(const SearchSpace& space) {
  if (space.pairs.empty()) {
    throw std::invalid_argument("search space has no pairs");
  }
  std::vector<ConcreteConfig> out;
  for (const auto& pair : space.pairs) {
    const auto expanded = expand_pair(pair);
    out.insert(out.end(), expanded.begin(), expanded.end());
  }
  return out;
}

SearchOutcome search(const Dataset& train, const SearchSpace& space,
                     const std::optional<std::vector<int>>& stratifier,
                     const Dataset* test, int workers) {
  const auto configs = expand_grid(space);
  SearchOutcome outcome;
  for (const auto& config : configs) {
    CvGrid grid = space.grid;
    grid.base_seed = derive_seed(space.grid.base_seed, config_hash(config));
    const bool auto_k = !config.clusterer.needs_k();
    if (auto_k) grid.k_values.clear();
    try {
      const StabilityResult result =
          auto_k ? best_nclust_cv_auto(train, config.clusterer,
                                       config.classifier, grid, stratifier,
                                       workers)
                 : best_nclust_cv(train, config.clusterer, config.classifier,
                                  grid, stratifier, workers);
      SearchEntry entry;
      entry.config = config;
      entry.k_star = result.k_star;
      entry.mean_norm = result.per_k.at(result.k_star).mean_norm;
      entry.sd = result.per_k.at(result.k_star).sd;
      if (test != nullptr) {
        entry.evaluation =
            auto_k ? evaluate_auto(train, *test, result, config.clusterer,
                                   config.classifier, stratifier)
                   : evaluate(train, *test, result.k_star, config.clusterer,
                              config.classifier, derive_seed(grid.base_seed,
                                                             1001));
      }
      outcome.ranked.push_back(std::move(entry));
    } catch (const std::exception& error) {
      outcome.failed.push_back({config, error.what()});
    }
  }

  std::sort(outcome.ranked.begin(), outcome.ranked.end(),
            [](const SearchEntry& a, const SearchEntry& b) {
              if (a.mean_norm != b.mean_norm) return a.mean_norm < b.mean_norm;
              const int ra = complexity_rank(a.config);
              const int rb = complexity_rank(b.config);
              if (ra != rb) return ra < rb;
              return describe(a.config) < describe(b.config);
            });
  outcome.best = 0;
  if (space.true_k) {
    for (std::size_t i = 0; i < outcome.ranked.size(); ++i) {
      if (outcome.ranked[i].k_star == *space.true_k) {
        outcome.best_matching_true_k = i;
        break;
      }
    }
  }
  return outcome;
}

}  // namespace clustab
