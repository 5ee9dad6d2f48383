#pragma once

#include <unordered_map>
#include <vector>

#include "trajloc/map_graph.hpp"

namespace trajloc {

constexpr int kAngleBins = 20;
constexpr double kBinWidthDeg = 360.0 / kAngleBins;

struct Point {
    double x = 0.0;  // meters, local frame
    double y = 0.0;
};

// Turn observation quantized into one of 20 bins; 180 degrees (straight
// through) falls at the start of bin 10.
using AngleBin = int;

struct EncodedTrajectory {
    std::vector<AngleBin> inputs;
    std::vector<EdgeId> labels;  // base edge ids, one per input

    bool operator==(const EncodedTrajectory&) const = default;
};

// MapGraph with virtual nodes inserted at a uniform sample distance so
// traversed distance shows up as a run of straight-through turn
// observations. Each base edge of length L is split into ceil(L/spacing)
// equal sub-edges; sub-edges keep the base edge id as their label.
class AugmentedGraph {
public:
    AugmentedGraph(const MapGraph& base, double spacing_m);

    const MapGraph& base() const { return base_; }
    double spacing() const { return spacing_; }

    bool has_node(NodeId id) const { return coords_.count(id) != 0; }
    Point coord(NodeId id) const;
    bool is_virtual(NodeId id) const { return id > max_real_id_; }

    // (neighbor, parent base edge id), sorted by neighbor id.
    const std::vector<std::pair<NodeId, EdgeId>>& neighbors(NodeId id) const;

    // Base edge id of the sub-edge (a, b); error if not a sub-edge.
    EdgeId parent_edge(NodeId a, NodeId b) const;

    std::size_t virtual_node_count() const { return coords_.size() - base_.node_count(); }

    // Augmented node sequence for a base edge traversed a -> b:
    // excludes a, includes the virtual nodes in traversal order, ends at b.
    std::vector<NodeId> sub_path(NodeId a, NodeId b) const;

    // Expands a base-node path into the full augmented node path.
    std::vector<NodeId> expand_path(const std::vector<NodeId>& base_path) const;

private:
    const MapGraph& base_;
    double spacing_;
    NodeId max_real_id_ = 0;
    std::unordered_map<NodeId, Point> coords_;
    std::unordered_map<NodeId, std::vector<std::pair<NodeId, EdgeId>>> adjacency_;
    // Virtual chain per base edge, ordered from edge.a to edge.b.
    std::vector<std::vector<NodeId>> edge_chain_;
};

// Direction change at `cur`, measured counterclockwise from the
// back-vector (cur -> prev) to the forward-vector (cur -> next), in
// [0, 360). Collinear straight-through motion gives exactly 180.
double turning_angle(Point prev, Point cur, Point next);

// floor(angle / 18) after normalizing into [0, 360).
AngleBin quantize_angle(double angle_deg);

// Turn path-of-augmented-nodes into (angle bin, base edge label) pairs.
// One observation per interior node; the label is the edge traversed
// after the turn.
EncodedTrajectory encode_path(const AugmentedGraph& ag, const std::vector<NodeId>& path);

// One record per line: comma-separated bins, '|', comma-separated labels.
std::string format_trajectory(const EncodedTrajectory& t);
EncodedTrajectory parse_trajectory(const std::string& line);

}  // namespace trajloc
