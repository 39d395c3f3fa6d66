#include "clustab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace clustab {

namespace {

std::string num(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

// Fixed two-decimal formatting for SVG coordinates.
std::string coord(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

}  // namespace

std::string curve_csv(const StabilityResult& result,
                      const std::string& config_tag) {
  std::ostringstream out;
  out << "# config=" << config_tag << " seed=" << result.grid.base_seed
      << "\n";
  out << "k,mean_norm,ci_lo,ci_hi,mean_train,random_threshold\n";
  for (const auto& [k, stats] : result.per_k) {
    out << k << ',' << num(stats.mean_norm) << ',' << num(stats.ci_lo) << ','
        << num(stats.ci_hi) << ',' << num(stats.mean_train) << ",1\n";
  }
  return out.str();
}

std::string curve_svg(const StabilityResult& result,
                      const std::string& config_tag) {
  constexpr double kWidth = 800, kHeight = 600;
  constexpr double kLeft = 70, kRight = 770, kTop = 30, kBottom = 540;

  std::vector<int> ks;
  double max_y = 1.0;  // always show the random-labeling threshold
  for (const auto& [k, stats] : result.per_k) {
    ks.push_back(k);
    max_y = std::max({max_y, stats.ci_hi, stats.mean_train});
  }
  max_y *= 1.08;
  const int k_min = ks.front();
  const int k_max = ks.back();
  const auto x_of = [&](double k) {
    if (k_max == k_min) return (kLeft + kRight) / 2;
    return kLeft + (k - k_min) / (k_max - k_min) * (kRight - kLeft);
  };
  const auto y_of = [&](double v) {
    return kBottom - v / max_y * (kBottom - kTop);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "<!-- clustab stability curve v1 config=" << config_tag << " seed="
      << result.grid.base_seed << " -->\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";

  // Confidence band.
  svg << "<polygon fill=\"#9ecae1\" fill-opacity=\"0.45\" points=\"";
  for (const auto& [k, stats] : result.per_k) {
    svg << coord(x_of(k)) << ',' << coord(y_of(stats.ci_hi)) << ' ';
  }
  for (auto it = result.per_k.rbegin(); it != result.per_k.rend(); ++it) {
    svg << coord(x_of(it->first)) << ',' << coord(y_of(it->second.ci_lo))
        << ' ';
  }
  svg << "\"/>\n";

  // Random-labeling threshold.
  svg << "<line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(y_of(1.0))
      << "\" x2=\"" << coord(kRight) << "\" y2=\"" << coord(y_of(1.0))
      << "\" stroke=\"#888888\" stroke-dasharray=\"2,3\"/>\n";
  svg << "<text x=\"" << coord(kRight - 4) << "\" y=\""
      << coord(y_of(1.0) - 6)
      << "\" text-anchor=\"end\" font-size=\"13\" fill=\"#888888\">random "
         "labeling</text>\n";

  // Training curve (dashed).
  svg << "<polyline fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"2\" "
         "stroke-dasharray=\"7,5\" points=\"";
  for (const auto& [k, stats] : result.per_k) {
    svg << coord(x_of(k)) << ',' << coord(y_of(stats.mean_train)) << ' ';
  }
  svg << "\"/>\n";

  // Validation curve.
  svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" "
         "points=\"";
  for (const auto& [k, stats] : result.per_k) {
    svg << coord(x_of(k)) << ',' << coord(y_of(stats.mean_norm)) << ' ';
  }
  svg << "\"/>\n";
  for (const auto& [k, stats] : result.per_k) {
    svg << "<circle cx=\"" << coord(x_of(k)) << "\" cy=\""
        << coord(y_of(stats.mean_norm)) << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";
  }

  // Axes and ticks.
  svg << "<line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(kBottom)
      << "\" x2=\"" << coord(kRight) << "\" y2=\"" << coord(kBottom)
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(kTop)
      << "\" x2=\"" << coord(kLeft) << "\" y2=\"" << coord(kBottom)
      << "\" stroke=\"black\"/>\n";
  for (int k : ks) {
    svg << "<line x1=\"" << coord(x_of(k)) << "\" y1=\"" << coord(kBottom)
        << "\" x2=\"" << coord(x_of(k)) << "\" y2=\"" << coord(kBottom + 6)
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << coord(x_of(k)) << "\" y=\"" << coord(kBottom + 22)
        << "\" text-anchor=\"middle\" font-size=\"13\">" << k << "</text>\n";
  }
  for (int tick = 0; tick <= 5; ++tick) {
    const double v = max_y * tick / 5.0;
    svg << "<line x1=\"" << coord(kLeft - 6) << "\" y1=\"" << coord(y_of(v))
        << "\" x2=\"" << coord(kLeft) << "\" y2=\"" << coord(y_of(v))
        << "\" stroke=\"black\"/>\n";
    char label[32];
    std::snprintf(label, sizeof(label), "%.2f", v);
    svg << "<text x=\"" << coord(kLeft - 10) << "\" y=\""
        << coord(y_of(v) + 4)
        << "\" text-anchor=\"end\" font-size=\"12\">" << label << "</text>\n";
  }
  svg << "<text x=\"" << coord((kLeft + kRight) / 2) << "\" y=\""
      << coord(kHeight - 18)
      << "\" text-anchor=\"middle\" font-size=\"15\">number of clusters "
         "k</text>\n";
  svg << "<text x=\"20\" y=\"" << coord((kTop + kBottom) / 2)
      << "\" text-anchor=\"middle\" font-size=\"15\" transform=\"rotate(-90 "
         "20 "
      << coord((kTop + kBottom) / 2) << ")\">normalized stability</text>\n";

  // Legend.
  svg << "<line x1=\"600\" y1=\"46\" x2=\"640\" y2=\"46\" "
         "stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  svg << "<text x=\"646\" y=\"50\" font-size=\"13\">validation</text>\n";
  svg << "<line x1=\"600\" y1=\"66\" x2=\"640\" y2=\"66\" "
         "stroke=\"#ff7f0e\" stroke-width=\"2\" "
         "stroke-dasharray=\"7,5\"/>\n";
  svg << "<text x=\"646\" y=\"70\" font-size=\"13\">training</text>\n";

  // Selected k marker.
  if (result.per_k.count(result.k_star)) {
    const auto& stats = result.per_k.at(result.k_star);
    svg << "<circle cx=\"" << coord(x_of(result.k_star)) << "\" cy=\""
        << coord(y_of(stats.mean_norm))
        << "\" r=\"7\" fill=\"none\" stroke=\"#d62728\" "
           "stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << coord(x_of(result.k_star)) << "\" y=\""
        << coord(y_of(stats.mean_norm) - 14)
        << "\" text-anchor=\"middle\" font-size=\"13\" "
           "fill=\"#d62728\">k*=" << result.k_star << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string internal_csv(const InternalSweep& train_sweep,
                         const InternalSweep& test_sweep,
                         const std::string& config_tag) {
  std::ostringstream out;
  out << "# config=" << config_tag << "\n";
  out << "split,k,silhouette,davies_bouldin,is_best_silh,is_best_db\n";
  const auto emit = [&out](const char* split, const InternalSweep& sweep) {
    for (const auto& [k, point] : sweep.per_k) {
      out << split << ',' << k << ',' << num(point.silhouette) << ','
          << num(point.davies_bouldin) << ','
          << (k == sweep.best_silhouette_k ? 1 : 0) << ','
          << (k == sweep.best_db_k ? 1 : 0) << "\n";
    }
  };
  emit("train", train_sweep);
  emit("test", test_sweep);
  return out.str();
}

std::string leaderboard_csv(const SearchOutcome& outcome,
                            const std::string& dataset_id,
                            const std::optional<int>& true_classes,
                            const std::string& preprocessing,
                            const std::string& config_tag) {
  std::ostringstream out;
  out << "# config=" << config_tag << "\n";
  out << "dataset,classes,clusters,model,preprocessing,validation_stability,"
         "test_acc,ami,acc,mcc\n";
  const std::string classes =
      true_classes ? std::to_string(*true_classes) : std::string();
  for (const auto& entry : outcome.ranked) {
    out << dataset_id << ',' << classes << ',' << entry.k_star << ','
        << describe(entry.config) << ',' << preprocessing << ','
        << num(entry.mean_norm) << " (" << num(entry.sd) << ")";
    if (entry.evaluation) {
      const auto& eval = *entry.evaluation;
      out << ',' << num(eval.acc);
      out << ',' << (eval.ami ? num(*eval.ami) : std::string());
      out << ',' << (eval.acc_true ? num(*eval.acc_true) : std::string());
      out << ',' << (eval.mcc_true ? num(*eval.mcc_true) : std::string());
    } else {
      out << ",,,,";
    }
    out << "\n";
  }
  for (const auto& entry : outcome.failed) {
    out << dataset_id << ',' << classes << ",," << describe(entry.config)
        << ',' << preprocessing << ",FAILED,,,,\n";
  }
  return out.str();
}

}  // namespace clustab
