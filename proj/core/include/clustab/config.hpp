#pragma once

#include <optional>
#include <string>
#include <variant>

#include "json.hpp"

#include "clustab/classification.hpp"
#include "clustab/clustering.hpp"
#include "clustab/dataset.hpp"
#include "clustab/gridsearch.hpp"

namespace clustab {

/// A config file that fails validation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvSource {
  std::string path;
  std::optional<std::string> label_column;
  bool has_header = true;
};

struct BlobsSource {
  std::size_t n_samples = 0;
  std::size_t n_features = 2;
  BlobCenters centers = 3;
  double cluster_std = 1.0;
  std::uint64_t seed = 0;
};

enum class Preprocessing { none, scale };

/// Validated run description. Unknown keys anywhere in the file are
/// rejected; the rng family tag must match the build's pinned generator.
struct RunConfig {
  std::variant<CsvSource, BlobsSource> source;
  Preprocessing preprocessing = Preprocessing::none;
  std::optional<ClustererConfig> clusterer;    // select/evaluate/internal
  std::optional<ClassifierConfig> classifier;  // select/evaluate
  std::optional<SearchSpace> search;           // gridsearch (cv grid shared)
  CvGrid cv;
  double test_fraction = 0.3;
  std::uint64_t split_seed = 0;
  bool stratify_by_true_labels = false;
  int workers = 1;
  std::string rng_family;
  std::string dataset_id;  // tag used in reports; defaults from the source
};

RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

/// Canonical JSON (sorted keys) used for the config hash embedded in every
/// artifact.
nlohmann::json to_json(const RunConfig& config);

/// Materialize the configured dataset (generation or ingestion).
Dataset load_source(const RunConfig& config);

}  // namespace clustab
