#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "trajloc/errors.hpp"

namespace trajloc {

using NodeId = std::int64_t;
using EdgeId = int;

struct GeoNode {
    NodeId id = 0;
    double lat = 0.0;  // degrees, WGS84
    double lon = 0.0;
};

// Endpoints are stored sorted so (a, b) and (b, a) are the same edge.
struct Edge {
    EdgeId id = 0;
    NodeId a = 0;
    NodeId b = 0;
};

// Undirected road graph. Immutable after construction; edge ids are
// contiguous 0..E-1 and double as classifier class indices.
class MapGraph {
public:
    // Builds a validated graph: deduplicates edges, drops self-loops,
    // keeps only the largest connected component, numbers edges by
    // lexicographic order of their canonical endpoint pair.
    MapGraph(std::vector<GeoNode> nodes, std::vector<std::pair<NodeId, NodeId>> edge_pairs);

    const std::vector<GeoNode>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    bool has_node(NodeId id) const { return node_index_.count(id) != 0; }
    const GeoNode& node(NodeId id) const;
    const Edge& edge(EdgeId id) const;

    // (neighbor node, connecting edge) pairs, sorted by neighbor id.
    const std::vector<std::pair<NodeId, EdgeId>>& neighbors(NodeId id) const;

    // True iff the two edges share an endpoint; an edge is adjacent to itself.
    bool edges_adjacent(EdgeId a, EdgeId b) const;

    // Equirectangular projection about the graph centroid, meters.
    std::pair<double, double> project_local(NodeId id) const;

    double centroid_lat() const { return centroid_lat_; }
    double centroid_lon() const { return centroid_lon_; }

    // Straight-line length of an edge in the local projection, meters.
    double edge_length(EdgeId id) const;

    std::string summary() const;
    std::string to_geojson() const;

private:
    std::vector<GeoNode> nodes_;
    std::vector<Edge> edges_;
    std::unordered_map<NodeId, std::size_t> node_index_;
    std::unordered_map<NodeId, std::vector<std::pair<NodeId, EdgeId>>> adjacency_;
    double centroid_lat_ = 0.0;
    double centroid_lon_ = 0.0;
};

// Parses an OSM XML extract (node/way/nd subset, relations ignored).
MapGraph parse_osm(const std::string& text);

// Parses the plain fixture format: `node <id> <lat> <lon>` / `edge <a> <b>` lines.
MapGraph parse_simple_graph(const std::string& text);

MapGraph load_map_file(const std::string& path);

constexpr double kEarthRadiusMeters = 6371000.0;

double haversine_m(double lat1, double lon1, double lat2, double lon2);

}  // namespace trajloc
