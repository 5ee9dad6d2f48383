#include "trajloc/geojson.hpp"

#include <nlohmann/json.hpp>

namespace trajloc {

std::string export_overlay_geojson(const MapGraph& g,
                                   const std::vector<OverlayPath>& paths) {
    nlohmann::json features = nlohmann::json::array();
    for (const auto& p : paths) {
        nlohmann::json coords = nlohmann::json::array();
        for (EdgeId eid : p.edges) {
            const Edge& e = g.edge(eid);
            const GeoNode& a = g.node(e.a);
            const GeoNode& b = g.node(e.b);
            coords.push_back({a.lon, a.lat});
            coords.push_back({b.lon, b.lat});
        }
        features.push_back({
            {"type", "Feature"},
            {"properties", {{"name", p.name}, {"stroke", p.color}}},
            {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
        });
    }
    nlohmann::json doc = {{"type", "FeatureCollection"}, {"features", features}};
    return doc.dump();
}

}  // namespace trajloc
