#include "drex/geojson.hpp"

namespace drex {

namespace {

nlohmann::json point_feature(const GridCoordinate& cell, nlohmann::json properties) {
    return {{"type", "Feature"},
            {"geometry",
             {{"type", "Point"}, {"coordinates", {cell.lon_deg(), cell.lat_deg()}}}},
            {"properties", std::move(properties)}};
}

}  // namespace

nlohmann::json lnpv_geojson(const std::vector<LnpvSet>& sets) {
    nlohmann::json features = nlohmann::json::array();
    for (const auto& s : sets) {
        const ExtremeEvent& top = s.events.front();
        features.push_back(point_feature(
            s.cell, {{"pdsi", top.value},
                     {"fractional_year", fractional_year(top.when)},
                     {"palmer_class", std::string(palmer_label(classify_pdsi(top.value)))}}));
    }
    return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

nlohmann::json cluster_geojson(const LnpvClustering& clustering) {
    nlohmann::json features = nlohmann::json::array();
    for (std::size_t i = 0; i < clustering.cells.size(); ++i) {
        features.push_back(point_feature(clustering.cells[i],
                                         {{"cluster", clustering.cell_assignments[i]}}));
    }
    return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

}  // namespace drex
