#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "clustab/classification.hpp"
#include "clustab/clustering.hpp"
#include "clustab/dataset.hpp"
#include "clustab/gridsearch.hpp"
#include "clustab/hash.hpp"
#include "clustab/selection.hpp"

namespace clustab {

nlohmann::json to_json(const SplitPlan& plan);

nlohmann::json to_json(const CvGrid& grid);
CvGrid cv_grid_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ClustererConfig& config);
ClustererConfig clusterer_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ClassifierConfig& config);
ClassifierConfig classifier_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ClusterModel& model);
nlohmann::json to_json(const TrainedClassifier& model);

nlohmann::json to_json(const EvaluationReport& report);

/// Full stability report. `config_tag` is the run's config hash; an
/// "integrity" field (FNV-1a of the canonical body) is appended so the
/// evaluation stage can refuse tampered inputs.
nlohmann::json stability_report_json(const StabilityResult& result,
                                     const std::string& config_tag);

/// Parses a stability report, verifying the integrity tag.
/// Cells are restored with their serialized fields only.
StabilityResult stability_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SearchOutcome& outcome);

}  // namespace clustab
