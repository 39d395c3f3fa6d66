#include "clustab/serialize.hpp"

#include <stdexcept>

#include "clustab/config.hpp"

namespace clustab {

std::string hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

namespace {

using nlohmann::json;

void expect_keys(const json& j, std::initializer_list<const char*> keys,
                 const std::string& where) {
  if (!j.is_object()) {
    throw ConfigError(where + " must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* candidate : keys) {
      if (key == candidate) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

}  // namespace

nlohmann::json to_json(const SplitPlan& plan) {
  return {{"seed", plan.seed},
          {"train", plan.train_indices},
          {"test", plan.test_indices}};
}

nlohmann::json to_json(const CvGrid& grid) {
  return {{"n_fold", grid.n_fold},
          {"n_rep", grid.n_rep},
          {"k_values", grid.k_values},
          {"n_rnd", grid.n_rnd},
          {"base_seed", grid.base_seed}};
}

CvGrid cv_grid_from_json(const nlohmann::json& j) {
  expect_keys(j, {"n_fold", "n_rep", "k_values", "n_rnd", "base_seed"}, "cv");
  CvGrid grid;
  grid.n_fold = j.value("n_fold", 2);
  grid.n_rep = j.value("n_rep", 1);
  grid.n_rnd = j.value("n_rnd", 10);
  grid.base_seed = j.value("base_seed", std::uint64_t{0});
  if (j.contains("k_values")) {
    grid.k_values = j.at("k_values").get<std::vector<int>>();
  }
  return grid;
}

nlohmann::json to_json(const ClustererConfig& config) {
  json j{{"kind", to_string(config.kind)}};
  switch (config.kind) {
    case ClustererKind::kmeans:
      j["n_init"] = config.kmeans.n_init;
      j["max_iter"] = config.kmeans.max_iter;
      j["tol"] = config.kmeans.tol;
      break;
    case ClustererKind::dbscan:
      j["eps"] = config.dbscan.eps;
      j["min_samples"] = config.dbscan.min_samples;
      break;
    case ClustererKind::ward:
      break;
  }
  return j;
}

ClustererConfig clusterer_config_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ConfigError("clusterer needs a 'kind'");
  }
  ClustererConfig config;
  try {
    config.kind = clusterer_kind_from_string(j.at("kind").get<std::string>());
  } catch (const std::invalid_argument& error) {
    throw ConfigError(error.what());
  }
  switch (config.kind) {
    case ClustererKind::kmeans:
      expect_keys(j, {"kind", "n_init", "max_iter", "tol"}, "clusterer");
      config.kmeans.n_init = j.value("n_init", 10);
      config.kmeans.max_iter = j.value("max_iter", 300);
      config.kmeans.tol = j.value("tol", 1e-6);
      if (config.kmeans.n_init < 1 || config.kmeans.max_iter < 1 ||
          config.kmeans.tol <= 0.0) {
        throw ConfigError("kmeans: n_init/max_iter >= 1, tol > 0");
      }
      break;
    case ClustererKind::dbscan:
      expect_keys(j, {"kind", "eps", "min_samples"}, "clusterer");
      config.dbscan.eps = j.value("eps", 0.5);
      config.dbscan.min_samples = j.value("min_samples", 5);
      if (config.dbscan.eps <= 0.0 || config.dbscan.min_samples < 1) {
        throw ConfigError("dbscan: eps > 0 and min_samples >= 1");
      }
      break;
    case ClustererKind::ward:
      expect_keys(j, {"kind"}, "clusterer");
      break;
  }
  return config;
}

nlohmann::json to_json(const ClassifierConfig& config) {
  json j{{"kind", to_string(config.kind)}};
  if (config.kind == ClassifierKind::knn) {
    j["n_neighbors"] = config.knn.n_neighbors;
  } else {
    j["l2"] = config.logreg.l2;
    j["max_iter"] = config.logreg.max_iter;
    j["tol"] = config.logreg.tol;
  }
  return j;
}

ClassifierConfig classifier_config_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ConfigError("classifier needs a 'kind'");
  }
  ClassifierConfig config;
  try {
    config.kind = classifier_kind_from_string(j.at("kind").get<std::string>());
  } catch (const std::invalid_argument& error) {
    throw ConfigError(error.what());
  }
  if (config.kind == ClassifierKind::knn) {
    expect_keys(j, {"kind", "n_neighbors"}, "classifier");
    config.knn.n_neighbors = j.value("n_neighbors", 15);
    if (config.knn.n_neighbors < 1) {
      throw ConfigError("knn: n_neighbors >= 1");
    }
  } else {
    expect_keys(j, {"kind", "l2", "max_iter", "tol"}, "classifier");
    config.logreg.l2 = j.value("l2", 1e-4);
    config.logreg.max_iter = j.value("max_iter", 500);
    config.logreg.tol = j.value("tol", 1e-6);
    if (config.logreg.l2 < 0.0 || config.logreg.max_iter < 1 ||
        config.logreg.tol <= 0.0) {
      throw ConfigError("logreg: l2 >= 0, max_iter >= 1, tol > 0");
    }
  }
  return config;
}

nlohmann::json to_json(const ClusterModel& model) {
  json j{{"kind", to_string(model.kind)}, {"n_features", model.n_features}};
  switch (model.kind) {
    case ClustererKind::kmeans: {
      json rows = json::array();
      const std::size_t k =
          model.n_features ? model.centroids.size() / model.n_features : 0;
      for (std::size_t c = 0; c < k; ++c) {
        json row = json::array();
        for (std::size_t f = 0; f < model.n_features; ++f) {
          row.push_back(model.centroids[c * model.n_features + f]);
        }
        rows.push_back(std::move(row));
      }
      j["centroids"] = std::move(rows);
      j["inertia"] = model.inertia;
      break;
    }
    case ClustererKind::ward: {
      json merges = json::array();
      for (const auto& merge : model.merges) {
        merges.push_back(
            {{"left", merge.left}, {"right", merge.right},
             {"cost", merge.cost}, {"size", merge.size}});
      }
      j["merges"] = std::move(merges);
      j["cut_k"] = model.cut_k;
      break;
    }
    case ClustererKind::dbscan:
      j["core_indices"] = model.core_indices;
      j["eps"] = model.dbscan_params.eps;
      j["min_samples"] = model.dbscan_params.min_samples;
      break;
  }
  return j;
}

nlohmann::json to_json(const TrainedClassifier& model) {
  json j{{"kind", to_string(model.kind)},
         {"class_ids", model.class_ids},
         {"n_features", model.n_features}};
  if (model.kind == ClassifierKind::knn) {
    j["n_neighbors"] = model.n_neighbors;
    j["train_labels"] = model.train_labels;
    json rows = json::array();
    for (std::size_t i = 0; i < model.n_train; ++i) {
      json row = json::array();
      for (std::size_t f = 0; f < model.n_features; ++f) {
        row.push_back(model.train_values[i * model.n_features + f]);
      }
      rows.push_back(std::move(row));
    }
    j["train_values"] = std::move(rows);
  } else {
    json rows = json::array();
    const std::size_t dim = model.n_features + 1;
    for (std::size_t c = 0; c < model.class_ids.size(); ++c) {
      json row = json::array();
      for (std::size_t f = 0; f < dim; ++f) {
        row.push_back(model.weights[c * dim + f]);
      }
      rows.push_back(std::move(row));
    }
    j["weights"] = std::move(rows);
  }
  return j;
}

nlohmann::json to_json(const EvaluationReport& report) {
  json j{{"acc", report.acc},
         {"mcc", report.mcc},
         {"f1_macro", report.f1_macro},
         {"precision_macro", report.precision_macro},
         {"recall_macro", report.recall_macro},
         {"permutation", report.permutation.mapping},
         {"k_train", report.k_train},
         {"k_test", report.k_test},
         {"mcc_flagged", report.mcc_flagged}};
  j["ami"] = report.ami ? json(*report.ami) : json(nullptr);
  j["acc_true"] = report.acc_true ? json(*report.acc_true) : json(nullptr);
  j["mcc_true"] = report.mcc_true ? json(*report.mcc_true) : json(nullptr);
  return j;
}

namespace {

json cell_json(const StabilityCell& cell) {
  return {{"k", cell.k},         {"fold", cell.fold},
          {"rep", cell.rep},     {"raw", cell.raw_distance},
          {"baseline", cell.random_baseline},
          {"norm", cell.normalized},
          {"train", cell.train_distance}};
}

StabilityCell cell_from_json(const json& j) {
  StabilityCell cell;
  cell.k = j.at("k").get<int>();
  cell.fold = j.at("fold").get<int>();
  cell.rep = j.at("rep").get<int>();
  cell.raw_distance = j.at("raw").get<double>();
  cell.random_baseline = j.at("baseline").get<double>();
  cell.normalized = j.at("norm").get<double>();
  cell.train_distance = j.at("train").get<double>();
  return cell;
}

const char* mode_name(StabilityResult::Mode mode) {
  return mode == StabilityResult::Mode::fixed_k ? "fixed_k" : "auto_k";
}

}  // namespace

nlohmann::json stability_report_json(const StabilityResult& result,
                                     const std::string& config_tag) {
  json per_k = json::object();
  for (const auto& [k, stats] : result.per_k) {
    json cells = json::array();
    for (const auto& cell : stats.cells) cells.push_back(cell_json(cell));
    per_k[std::to_string(k)] = {{"mean_norm", stats.mean_norm},
                                {"sd", stats.sd},
                                {"ci95", {stats.ci_lo, stats.ci_hi}},
                                {"mean_train", stats.mean_train},
                                {"cells", std::move(cells)}};
  }
  json j{{"format", "stability-report/1"},
         {"config", config_tag},
         {"mode", mode_name(result.mode)},
         {"grid", to_json(result.grid)},
         {"k_star", result.k_star},
         {"per_k", std::move(per_k)}};
  if (result.mode == StabilityResult::Mode::auto_k) {
    j["skipped_cells"] = result.skipped_cells;
    if (result.selected_cell) {
      j["selected_cell"] = {{"rep", result.selected_cell->first},
                            {"fold", result.selected_cell->second}};
    }
  }
  j["integrity"] = hex64(fnv1a64(j.dump()));
  return j;
}

StabilityResult stability_report_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", "") != "stability-report/1") {
    throw std::runtime_error("stability report: unrecognized format");
  }
  if (!j.contains("integrity")) {
    throw std::runtime_error("stability report: missing integrity tag");
  }
  json body = j;
  const std::string tag = body.at("integrity").get<std::string>();
  body.erase("integrity");
  if (hex64(fnv1a64(body.dump())) != tag) {
    throw std::runtime_error(
        "stability report: integrity check failed (file was modified)");
  }
  StabilityResult result;
  result.mode = j.at("mode").get<std::string>() == "auto_k"
                    ? StabilityResult::Mode::auto_k
                    : StabilityResult::Mode::fixed_k;
  result.grid = cv_grid_from_json(j.at("grid"));
  result.k_star = j.at("k_star").get<int>();
  for (const auto& [key, value] : j.at("per_k").items()) {
    KStats stats;
    stats.mean_norm = value.at("mean_norm").get<double>();
    stats.sd = value.at("sd").get<double>();
    stats.ci_lo = value.at("ci95")[0].get<double>();
    stats.ci_hi = value.at("ci95")[1].get<double>();
    stats.mean_train = value.at("mean_train").get<double>();
    for (const auto& cell : value.at("cells")) {
      stats.cells.push_back(cell_from_json(cell));
    }
    result.per_k[std::stoi(key)] = std::move(stats);
  }
  if (j.contains("skipped_cells")) {
    result.skipped_cells = j.at("skipped_cells").get<int>();
  }
  if (j.contains("selected_cell")) {
    result.selected_cell =
        std::pair(j.at("selected_cell").at("rep").get<int>(),
                  j.at("selected_cell").at("fold").get<int>());
  }
  return result;
}

nlohmann::json to_json(const SearchOutcome& outcome) {
  json ranked = json::array();
  for (const auto& entry : outcome.ranked) {
    json e{{"clusterer", to_json(entry.config.clusterer)},
           {"classifier", to_json(entry.config.classifier)},
           {"model", describe(entry.config)},
           {"k_star", entry.k_star},
           {"mean_norm", entry.mean_norm},
           {"sd", entry.sd}};
    e["evaluation"] =
        entry.evaluation ? to_json(*entry.evaluation) : json(nullptr);
    ranked.push_back(std::move(e));
  }
  json failed = json::array();
  for (const auto& entry : outcome.failed) {
    failed.push_back({{"clusterer", to_json(entry.config.clusterer)},
                      {"classifier", to_json(entry.config.classifier)},
                      {"model", describe(entry.config)},
                      {"error", entry.error}});
  }
  json j{{"ranked", std::move(ranked)},
         {"failed", std::move(failed)},
         {"best", outcome.best}};
  j["best_matching_true_k"] = outcome.best_matching_true_k
                                  ? json(*outcome.best_matching_true_k)
                                  : json(nullptr);
  return j;
}

}  // namespace clustab
