#pragma once

#include <json.hpp>

#include "drex/cluster.hpp"
#include "drex/extremes.hpp"

namespace drex {

// Point FeatureCollection with per-cell rank-1 value, fractional year and
// Palmer class.
nlohmann::json lnpv_geojson(const std::vector<LnpvSet>& sets);

// Point FeatureCollection with per-cell cluster index.
nlohmann::json cluster_geojson(const LnpvClustering& clustering);

}  // namespace drex
