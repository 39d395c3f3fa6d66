#include "clustab/config.hpp"

#include <fstream>

#include "clustab/rng.hpp"
#include "clustab/serialize.hpp"

namespace clustab {

namespace {

using nlohmann::json;

void expect_keys(const json& j, std::initializer_list<const char*> keys,
                 const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
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

BlobCenters centers_from_json(const json& j) {
  if (j.is_number_integer()) {
    return j.get<int>();
  }
  if (j.is_array()) {
    return j.get<std::vector<std::vector<double>>>();
  }
  throw ConfigError("blobs.centers must be an integer or a list of points");
}

json centers_to_json(const BlobCenters& centers) {
  if (std::holds_alternative<int>(centers)) return std::get<int>(centers);
  return std::get<std::vector<std::vector<double>>>(centers);
}

SearchPair search_pair_from_json(const json& j) {
  expect_keys(j, {"clusterer", "classifier", "clusterer_grid",
                  "classifier_grid"},
              "search.pairs entry");
  if (!j.contains("clusterer") || !j.contains("classifier")) {
    throw ConfigError("search pair needs 'clusterer' and 'classifier'");
  }
  SearchPair pair;
  pair.clusterer = clusterer_config_from_json(j.at("clusterer"));
  pair.classifier = classifier_config_from_json(j.at("classifier"));
  const auto read_grid = [](const json& grid, const std::string& where) {
    if (!grid.is_object()) {
      throw ConfigError(where + " must map parameter names to value lists");
    }
    std::vector<ParamValues> out;
    for (const auto& [name, values] : grid.items()) {
      if (!values.is_array()) {
        throw ConfigError(where + "." + name + " must be a list");
      }
      out.push_back({name, values.get<std::vector<double>>()});
    }
    return out;
  };
  if (j.contains("clusterer_grid")) {
    pair.clusterer_grid = read_grid(j.at("clusterer_grid"), "clusterer_grid");
  }
  if (j.contains("classifier_grid")) {
    pair.classifier_grid =
        read_grid(j.at("classifier_grid"), "classifier_grid");
  }
  return pair;
}

json search_pair_to_json(const SearchPair& pair) {
  json j{{"clusterer", to_json(pair.clusterer)},
         {"classifier", to_json(pair.classifier)}};
  const auto grid_json = [](const std::vector<ParamValues>& grid) {
    json out = json::object();
    for (const auto& param : grid) out[param.name] = param.values;
    return out;
  };
  if (!pair.clusterer_grid.empty()) {
    j["clusterer_grid"] = grid_json(pair.clusterer_grid);
  }
  if (!pair.classifier_grid.empty()) {
    j["classifier_grid"] = grid_json(pair.classifier_grid);
  }
  return j;
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::json& j) {
  expect_keys(j,
              {"rng", "dataset", "id", "preprocessing", "clusterer",
               "classifier", "search", "cv", "split", "workers"},
              "config");
  RunConfig config;

  config.rng_family = j.value("rng", std::string(kRngFamily));
  if (config.rng_family != kRngFamily) {
    throw ConfigError("config pins rng family '" + config.rng_family +
                      "' but this build provides '" +
                      std::string(kRngFamily) + "'");
  }

  if (!j.contains("dataset")) throw ConfigError("config needs 'dataset'");
  const json& dataset = j.at("dataset");
  expect_keys(dataset, {"csv", "blobs"}, "dataset");
  if (dataset.contains("csv") == dataset.contains("blobs")) {
    throw ConfigError("dataset needs exactly one of 'csv' or 'blobs'");
  }
  if (dataset.contains("csv")) {
    const json& csv = dataset.at("csv");
    expect_keys(csv, {"path", "label_column", "has_header"}, "dataset.csv");
    CsvSource source;
    if (!csv.contains("path")) throw ConfigError("dataset.csv needs 'path'");
    source.path = csv.at("path").get<std::string>();
    if (csv.contains("label_column")) {
      source.label_column = csv.at("label_column").get<std::string>();
    }
    source.has_header = csv.value("has_header", true);
    config.source = source;
    config.dataset_id = source.path;
  } else {
    const json& blobs = dataset.at("blobs");
    expect_keys(blobs,
                {"n_samples", "n_features", "centers", "cluster_std", "seed"},
                "dataset.blobs");
    BlobsSource source;
    if (!blobs.contains("n_samples")) {
      throw ConfigError("dataset.blobs needs 'n_samples'");
    }
    source.n_samples = blobs.at("n_samples").get<std::size_t>();
    source.n_features = blobs.value("n_features", std::size_t{2});
    if (blobs.contains("centers")) {
      source.centers = centers_from_json(blobs.at("centers"));
    }
    source.cluster_std = blobs.value("cluster_std", 1.0);
    source.seed = blobs.value("seed", std::uint64_t{0});
    config.source = source;
    config.dataset_id = "blobs";
  }
  if (j.contains("id")) config.dataset_id = j.at("id").get<std::string>();

  const std::string preprocessing = j.value("preprocessing", "none");
  if (preprocessing == "none") {
    config.preprocessing = Preprocessing::none;
  } else if (preprocessing == "scale") {
    config.preprocessing = Preprocessing::scale;
  } else {
    throw ConfigError("preprocessing must be 'none' or 'scale'");
  }

  if (j.contains("clusterer")) {
    config.clusterer = clusterer_config_from_json(j.at("clusterer"));
  }
  if (j.contains("classifier")) {
    config.classifier = classifier_config_from_json(j.at("classifier"));
  }
  if (j.contains("search")) {
    const json& search = j.at("search");
    expect_keys(search, {"pairs", "true_k"}, "search");
    if (!search.contains("pairs") || !search.at("pairs").is_array() ||
        search.at("pairs").empty()) {
      throw ConfigError("search needs a non-empty 'pairs' list");
    }
    SearchSpace space;
    for (const auto& pair : search.at("pairs")) {
      space.pairs.push_back(search_pair_from_json(pair));
    }
    if (search.contains("true_k")) {
      space.true_k = search.at("true_k").get<int>();
    }
    config.search = std::move(space);
  }

  if (j.contains("cv")) config.cv = cv_grid_from_json(j.at("cv"));
  if (config.search) config.search->grid = config.cv;

  if (j.contains("split")) {
    const json& split = j.at("split");
    expect_keys(split, {"test_fraction", "seed", "stratify_by_true_labels"},
                "split");
    config.test_fraction = split.value("test_fraction", 0.3);
    config.split_seed = split.value("seed", std::uint64_t{0});
    config.stratify_by_true_labels =
        split.value("stratify_by_true_labels", false);
  }
  if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0)) {
    throw ConfigError("split.test_fraction must be in (0, 1)");
  }

  config.workers = j.value("workers", 1);
  if (config.workers < 1) throw ConfigError("workers must be >= 1");
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    file >> j;
  } catch (const json::parse_error& error) {
    throw ConfigError(std::string("config is not valid JSON: ") +
                      error.what());
  }
  return run_config_from_json(j);
}

nlohmann::json to_json(const RunConfig& config) {
  json j;
  j["rng"] = std::string(kRngFamily);
  if (std::holds_alternative<CsvSource>(config.source)) {
    const auto& source = std::get<CsvSource>(config.source);
    json csv{{"path", source.path}, {"has_header", source.has_header}};
    if (source.label_column) csv["label_column"] = *source.label_column;
    j["dataset"] = {{"csv", std::move(csv)}};
  } else {
    const auto& source = std::get<BlobsSource>(config.source);
    j["dataset"] = {{"blobs",
                     {{"n_samples", source.n_samples},
                      {"n_features", source.n_features},
                      {"centers", centers_to_json(source.centers)},
                      {"cluster_std", source.cluster_std},
                      {"seed", source.seed}}}};
  }
  j["id"] = config.dataset_id;
  j["preprocessing"] =
      config.preprocessing == Preprocessing::scale ? "scale" : "none";
  if (config.clusterer) j["clusterer"] = to_json(*config.clusterer);
  if (config.classifier) j["classifier"] = to_json(*config.classifier);
  if (config.search) {
    json pairs = json::array();
    for (const auto& pair : config.search->pairs) {
      pairs.push_back(search_pair_to_json(pair));
    }
    json search{{"pairs", std::move(pairs)}};
    if (config.search->true_k) search["true_k"] = *config.search->true_k;
    j["search"] = std::move(search);
  }
  j["cv"] = to_json(config.cv);
  j["split"] = {{"test_fraction", config.test_fraction},
                {"seed", config.split_seed},
                {"stratify_by_true_labels", config.stratify_by_true_labels}};
  // Worker count is an execution detail; it must not change artifacts, so it
  // stays out of the canonical form (and out of the config hash).
  return j;
}

Dataset load_source(const RunConfig& config) {
  Dataset data;
  if (std::holds_alternative<CsvSource>(config.source)) {
    const auto& source = std::get<CsvSource>(config.source);
    data = load_csv(source.path, source.label_column, source.has_header);
  } else {
    const auto& source = std::get<BlobsSource>(config.source);
    data = make_blobs(source.n_samples, source.n_features, source.centers,
                      source.cluster_std, source.seed);
  }
  data.id = config.dataset_id;
  return data;
}

}  // namespace clustab
