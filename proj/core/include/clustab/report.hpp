#pragma once

#include <string>

#include "clustab/gridsearch.hpp"
#include "clustab/metrics.hpp"
#include "clustab/selection.hpp"

namespace clustab {

/// Columns: k, mean_norm, ci_lo, ci_hi, mean_train, random_threshold (always
/// 1.0). A leading comment line carries the config hash and seed.
std::string curve_csv(const StabilityResult& result,
                      const std::string& config_tag);

/// Dependency-free SVG: 800x600 viewbox, validation curve with 95% CI band,
/// dashed training curve, dotted random-labeling threshold at 1.0.
std::string curve_svg(const StabilityResult& result,
                      const std::string& config_tag);

/// Columns: split, k, silhouette, davies_bouldin, is_best_silh, is_best_db.
std::string internal_csv(const InternalSweep& train_sweep,
                         const InternalSweep& test_sweep,
                         const std::string& config_tag);

/// Leaderboard table: dataset, classes, clusters, model, preprocessing,
/// validation_stability, stability_sd, test_acc, ami, acc, mcc.
std::string leaderboard_csv(const SearchOutcome& outcome,
                            const std::string& dataset_id,
                            const std::optional<int>& true_classes,
                            const std::string& preprocessing,
                            const std::string& config_tag);

}  // namespace clustab
