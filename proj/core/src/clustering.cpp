#include "clustab/clustering.hpp"

#include <stdexcept>

namespace clustab {

std::string to_string(ClustererKind kind) {
  switch (kind) {
    case ClustererKind::kmeans: return "kmeans";
    case ClustererKind::ward: return "ward";
    case ClustererKind::dbscan: return "dbscan";
  }
  throw std::logic_error("unknown clusterer kind");
}

ClustererKind clusterer_kind_from_string(const std::string& name) {
  if (name == "kmeans") return ClustererKind::kmeans;
  if (name == "ward") return ClustererKind::ward;
  if (name == "dbscan") return ClustererKind::dbscan;
  throw std::invalid_argument("unknown clusterer kind: " + name);
}

FitResult fit_clusterer(const Dataset& data, const ClustererConfig& config,
                        std::optional<int> k, std::uint64_t seed) {
  switch (config.kind) {
    case ClustererKind::kmeans:
      if (!k) throw std::invalid_argument("kmeans requires k");
      return fit_kmeans(data, *k, config.kmeans, seed);
    case ClustererKind::ward:
      if (!k) throw std::invalid_argument("ward requires k");
      return fit_ward(data, *k);
    case ClustererKind::dbscan:
      if (k) {
        throw std::invalid_argument("dbscan infers k; none may be supplied");
      }
      return fit_dbscan(data, config.dbscan);
  }
  throw std::logic_error("unknown clusterer kind");
}

}  // namespace clustab
