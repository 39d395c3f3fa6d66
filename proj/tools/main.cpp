#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "clustab/config.hpp"
#include "clustab/hash.hpp"
#include "clustab/metrics.hpp"
#include "clustab/report.hpp"
#include "clustab/rng.hpp"
#include "clustab/selection.hpp"
#include "clustab/serialize.hpp"

namespace {

using clustab::ConfigError;
using nlohmann::json;

constexpr const char* kWorkersEnvVar = "CLUSTAB_WORKERS";

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  int workers = 0;  // 0 = not set on the command line
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON run configuration")
      ->required();
  cmd->add_option("--out", args.out_dir, "output directory")->required();
  cmd->add_option("--workers", args.workers, "worker thread count");
  cmd->add_option("--seed", args.seed,
                  "override the cross-validation base seed");
}

struct Pipeline {
  clustab::RunConfig config;
  std::string config_tag;
  clustab::SplitPlan plan;
  clustab::Dataset train;
  clustab::Dataset test;
  std::optional<std::vector<int>> cv_stratifier;
};

Pipeline prepare(const CommonArgs& args) {
  Pipeline p;
  p.config = clustab::load_run_config(args.config_path);
  if (args.seed) p.config.cv.base_seed = *args.seed;
  if (args.workers > 0) p.config.workers = args.workers;
  if (const char* env = std::getenv(kWorkersEnvVar)) {
    const int value = std::atoi(env);
    if (value < 1) {
      throw ConfigError(std::string(kWorkersEnvVar) + " must be >= 1");
    }
    p.config.workers = value;
  }
  if (p.config.search) p.config.search->grid = p.config.cv;
  p.config_tag =
      clustab::hex64(clustab::fnv1a64(clustab::to_json(p.config).dump()));

  clustab::Dataset data = clustab::load_source(p.config);
  std::optional<std::vector<int>> split_stratifier;
  if (p.config.stratify_by_true_labels) {
    if (!data.true_labels) {
      throw ConfigError(
          "stratify_by_true_labels set but the dataset has no labels");
    }
    split_stratifier = *data.true_labels;
  }
  auto [plan, train, test] = clustab::train_test_split(
      data, p.config.test_fraction, p.config.split_seed, split_stratifier);
  if (p.config.preprocessing == clustab::Preprocessing::scale) {
    auto [scaled, params] = clustab::standard_scale(train);
    train = std::move(scaled);
    test = clustab::apply_scale(test, params);
  }
  if (p.config.stratify_by_true_labels) {
    p.cv_stratifier = *train.true_labels;
  }
  p.plan = std::move(plan);
  p.train = std::move(train);
  p.test = std::move(test);
  return p;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file << text;
}

// Artifacts are buffered and flushed together after computation succeeds.
struct Artifacts {
  std::filesystem::path dir;
  std::vector<std::pair<std::string, std::string>> files;

  void add(const std::string& name, const std::string& text) {
    files.emplace_back(name, text);
  }
  void flush() const {
    std::filesystem::create_directories(dir);
    for (const auto& [name, text] : files) write_file(dir / name, text);
  }
};

std::string provenance_json(const Pipeline& p, double wall_seconds) {
  json j{{"config", clustab::to_json(p.config)},
         {"config_hash", p.config_tag},
         {"seed", p.config.cv.base_seed},
         {"workers", p.config.workers},
         {"rng", std::string(clustab::kRngFamily)},
         {"wall_clock_sec", wall_seconds},
         {"tool_version", "0.1.0"}};
  return j.dump(2) + "\n";
}

const clustab::ClustererConfig& require_clusterer(const Pipeline& p) {
  if (!p.config.clusterer) throw ConfigError("config needs 'clusterer'");
  return *p.config.clusterer;
}

const clustab::ClassifierConfig& require_classifier(const Pipeline& p) {
  if (!p.config.classifier) throw ConfigError("config needs 'classifier'");
  return *p.config.classifier;
}

int cmd_select(const CommonArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  Pipeline p = prepare(args);
  const auto& clusterer = require_clusterer(p);
  const auto& classifier = require_classifier(p);
  const bool auto_k = !clusterer.needs_k();
  if (auto_k && !p.config.cv.k_values.empty()) {
    throw ConfigError("dbscan infers k; cv.k_values must be empty");
  }
  if (!auto_k && p.config.cv.k_values.empty()) {
    throw ConfigError("cv.k_values must list the cluster counts to try");
  }

  const clustab::StabilityResult result =
      auto_k ? clustab::best_nclust_cv_auto(p.train, clusterer, classifier,
                                            p.config.cv, p.cv_stratifier,
                                            p.config.workers)
             : clustab::best_nclust_cv(p.train, clusterer, classifier,
                                       p.config.cv, p.cv_stratifier,
                                       p.config.workers);

  Artifacts artifacts{args.out_dir, {}};
  artifacts.add("stability.json",
                clustab::stability_report_json(result, p.config_tag).dump(2) +
                    "\n");
  artifacts.add("curve.csv", clustab::curve_csv(result, p.config_tag));
  artifacts.add("curve.svg", clustab::curve_svg(result, p.config_tag));
  artifacts.add("split.json", clustab::to_json(p.plan).dump(2) + "\n");
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  artifacts.add("provenance.json", provenance_json(p, wall));
  artifacts.flush();

  std::cout << "k_star=" << result.k_star << " mean_norm="
            << result.per_k.at(result.k_star).mean_norm << "\n";
  return 0;
}

int cmd_evaluate(const CommonArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  Pipeline p = prepare(args);
  const auto& clusterer = require_clusterer(p);
  const auto& classifier = require_classifier(p);

  const std::filesystem::path report_path =
      std::filesystem::path(args.out_dir) / "stability.json";
  std::ifstream report_file(report_path);
  if (!report_file) {
    throw std::runtime_error("missing prior report " + report_path.string() +
                             " (run select first)");
  }
  json report_json;
  try {
    report_file >> report_json;
  } catch (const json::parse_error& error) {
    throw std::runtime_error(std::string("corrupt stability report: ") +
                             error.what());
  }
  const clustab::StabilityResult result =
      clustab::stability_report_from_json(report_json);

  const clustab::EvaluationReport report =
      result.mode == clustab::StabilityResult::Mode::auto_k
          ? clustab::evaluate_auto(p.train, p.test, result, clusterer,
                                   classifier, p.cv_stratifier)
          : clustab::evaluate(p.train, p.test, result.k_star, clusterer,
                              classifier,
                              clustab::derive_seed(p.config.cv.base_seed,
                                                   1001));

  Artifacts artifacts{args.out_dir, {}};
  json out = clustab::to_json(report);
  out["config"] = p.config_tag;
  out["k_star"] = result.k_star;
  artifacts.add("evaluation.json", out.dump(2) + "\n");
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  artifacts.add("provenance.json", provenance_json(p, wall));
  artifacts.flush();

  std::cout << "acc=" << report.acc << " mcc=" << report.mcc;
  if (report.ami) std::cout << " ami=" << *report.ami;
  std::cout << "\n";
  return 0;
}

int cmd_gridsearch(const CommonArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  Pipeline p = prepare(args);
  if (!p.config.search) throw ConfigError("config needs 'search'");

  const clustab::SearchOutcome outcome =
      clustab::search(p.train, *p.config.search, p.cv_stratifier, &p.test,
                      p.config.workers);

  std::optional<int> classes = p.config.search->true_k;
  if (!classes && p.train.true_labels) {
    classes = clustab::count_clusters(*p.train.true_labels);
  }
  const std::string preprocessing =
      p.config.preprocessing == clustab::Preprocessing::scale ? "scaled"
                                                              : "raw";
  Artifacts artifacts{args.out_dir, {}};
  json board = clustab::to_json(outcome);
  board["config"] = p.config_tag;
  artifacts.add("leaderboard.json", board.dump(2) + "\n");
  artifacts.add("leaderboard.csv",
                clustab::leaderboard_csv(outcome, p.train.id, classes,
                                         preprocessing, p.config_tag));
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  artifacts.add("provenance.json", provenance_json(p, wall));
  artifacts.flush();

  if (outcome.ranked.empty()) {
    std::cerr << "all " << outcome.failed.size() << " configs failed\n";
    return 1;
  }
  std::cout << "best=" << clustab::describe(outcome.ranked.front().config)
            << " k_star=" << outcome.ranked.front().k_star << " mean_norm="
            << outcome.ranked.front().mean_norm << "\n";
  return 0;
}

int cmd_internal(const CommonArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  Pipeline p = prepare(args);
  const auto& clusterer = require_clusterer(p);
  if (p.config.cv.k_values.empty()) {
    throw ConfigError("cv.k_values must list the cluster counts to sweep");
  }

  const clustab::InternalSweep train_sweep = clustab::internal_sweep(
      p.train, clusterer, p.config.cv.k_values,
      clustab::derive_seed(p.config.cv.base_seed, 2001));
  const clustab::InternalSweep test_sweep = clustab::internal_sweep(
      p.test, clusterer, p.config.cv.k_values,
      clustab::derive_seed(p.config.cv.base_seed, 2002));

  Artifacts artifacts{args.out_dir, {}};
  artifacts.add("internal.csv",
                clustab::internal_csv(train_sweep, test_sweep, p.config_tag));
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  artifacts.add("provenance.json", provenance_json(p, wall));
  artifacts.flush();

  std::cout << "train best_silhouette_k=" << train_sweep.best_silhouette_k
            << " best_db_k=" << train_sweep.best_db_k
            << " | test best_silhouette_k=" << test_sweep.best_silhouette_k
            << " best_db_k=" << test_sweep.best_db_k << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stability-based selection of the number of clusters"};
  app.require_subcommand(1);

  CommonArgs select_args, evaluate_args, grid_args, internal_args;
  CLI::App* select =
      app.add_subcommand("select", "pick k* by cross-validated stability");
  add_common(select, select_args);
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "score the selected solution on the "
                                     "held-out test split");
  add_common(evaluate, evaluate_args);
  CLI::App* gridsearch = app.add_subcommand(
      "gridsearch", "rank clusterer/classifier configurations by stability");
  add_common(gridsearch, grid_args);
  CLI::App* internal = app.add_subcommand(
      "internal", "silhouette / Davies-Bouldin sweep on train and test");
  add_common(internal, internal_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    return app.exit(error) == 0 ? 0 : 2;
  }

  try {
    if (select->parsed()) return cmd_select(select_args);
    if (evaluate->parsed()) return cmd_evaluate(evaluate_args);
    if (gridsearch->parsed()) return cmd_gridsearch(grid_args);
    if (internal->parsed()) return cmd_internal(internal_args);
  } catch (const ConfigError& error) {
    std::cerr << "config error: " << error.what() << "\n";
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 2;
}
