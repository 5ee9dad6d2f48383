#pragma once

#include <string>
#include <vector>

#include "trajloc/localize.hpp"

namespace trajloc {

struct OverlayPath {
    std::string name;   // e.g. "ground_truth", "raw", "strategy1"
    std::string color;  // CSS color for styling
    std::vector<EdgeId> edges;
};

// FeatureCollection with one styled LineString feature per overlay path,
// edges rendered through their node coordinates.
std::string export_overlay_geojson(const MapGraph& g, const std::vector<OverlayPath>& paths);

}  // namespace trajloc
