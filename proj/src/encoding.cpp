#include "trajloc/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace trajloc {

AugmentedGraph::AugmentedGraph(const MapGraph& base, double spacing_m)
    : base_(base), spacing_(spacing_m) {
    if (spacing_m <= 0.0) throw DataError("virtual node spacing must be positive");

    for (const auto& n : base.nodes()) {
        auto [x, y] = base.project_local(n.id);
        coords_[n.id] = Point{x, y};
        max_real_id_ = std::max(max_real_id_, n.id);
    }

    NodeId next_id = max_real_id_ + 1;
    edge_chain_.resize(base.edge_count());
    for (const auto& e : base.edges()) {
        Point pa = coords_.at(e.a);
        Point pb = coords_.at(e.b);
        double len = std::hypot(pb.x - pa.x, pb.y - pa.y);
        int n_sub = std::max(1, static_cast<int>(std::ceil(len / spacing_)));
        std::vector<NodeId>& chain = edge_chain_[static_cast<std::size_t>(e.id)];
        for (int i = 1; i < n_sub; ++i) {
            double t = static_cast<double>(i) / n_sub;
            NodeId vid = next_id++;
            coords_[vid] = Point{pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)};
            chain.push_back(vid);
        }
        NodeId prev = e.a;
        for (NodeId v : chain) {
            adjacency_[prev].emplace_back(v, e.id);
            adjacency_[v].emplace_back(prev, e.id);
            prev = v;
        }
        adjacency_[prev].emplace_back(e.b, e.id);
        adjacency_[e.b].emplace_back(prev, e.id);
    }
    for (auto& [_, nbrs] : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

Point AugmentedGraph::coord(NodeId id) const {
    auto it = coords_.find(id);
    if (it == coords_.end())
        throw DataError("unknown augmented node id " + std::to_string(id));
    return it->second;
}

const std::vector<std::pair<NodeId, EdgeId>>& AugmentedGraph::neighbors(NodeId id) const {
    auto it = adjacency_.find(id);
    if (it == adjacency_.end())
        throw DataError("unknown augmented node id " + std::to_string(id));
    return it->second;
}

EdgeId AugmentedGraph::parent_edge(NodeId a, NodeId b) const {
    for (const auto& [nbr, eid] : neighbors(a))
        if (nbr == b) return eid;
    throw DataError("nodes " + std::to_string(a) + " and " + std::to_string(b) +
                    " are not connected by a sub-edge");
}

std::vector<NodeId> AugmentedGraph::sub_path(NodeId a, NodeId b) const {
    EdgeId eid = -1;
    for (const auto& [nbr, e] : base_.neighbors(a))
        if (nbr == b) eid = e;
    if (eid < 0)
        throw DataError("no base edge between " + std::to_string(a) + " and " +
                        std::to_string(b));
    const Edge& e = base_.edge(eid);
    std::vector<NodeId> out = edge_chain_[static_cast<std::size_t>(eid)];
    if (e.a != a) std::reverse(out.begin(), out.end());
    out.push_back(b);
    return out;
}

std::vector<NodeId> AugmentedGraph::expand_path(const std::vector<NodeId>& base_path) const {
    if (base_path.size() < 2) throw DataError("base path needs at least 2 nodes");
    std::vector<NodeId> out{base_path.front()};
    for (std::size_t i = 0; i + 1 < base_path.size(); ++i) {
        auto seg = sub_path(base_path[i], base_path[i + 1]);
        out.insert(out.end(), seg.begin(), seg.end());
    }
    return out;
}

double turning_angle(Point prev, Point cur, Point next) {
    double bx = prev.x - cur.x, by = prev.y - cur.y;
    double fx = next.x - cur.x, fy = next.y - cur.y;
    if ((bx == 0.0 && by == 0.0) || (fx == 0.0 && fy == 0.0))
        throw DataError("degenerate geometry: coincident points in turning angle");
    double deg = (std::atan2(fy, fx) - std::atan2(by, bx)) * 180.0 / std::numbers::pi;
    deg = std::fmod(deg, 360.0);
    if (deg < 0.0) deg += 360.0;
    if (deg >= 360.0) deg = 0.0;
    return deg;
}

AngleBin quantize_angle(double angle_deg) {
    double a = std::fmod(angle_deg, 360.0);
    if (a < 0.0) a += 360.0;
    // Straight-through motion quantizes an angle of exactly 180, which sits
    // on a bin boundary; atan2 round-off can land 1 ulp below it. Snap
    // values within 1e-9 deg of a boundary onto it.
    int bin = static_cast<int>((a + 1e-9) / kBinWidthDeg);
    return bin % kAngleBins;
}

EncodedTrajectory encode_path(const AugmentedGraph& ag, const std::vector<NodeId>& path) {
    if (path.size() < 3) throw DataError("path too short to encode (need >= 3 nodes)");
    EncodedTrajectory t;
    t.inputs.reserve(path.size() - 2);
    t.labels.reserve(path.size() - 2);
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        EdgeId label = ag.parent_edge(path[i], path[i + 1]);  // also checks adjacency
        ag.parent_edge(path[i - 1], path[i]);
        double ang = turning_angle(ag.coord(path[i - 1]), ag.coord(path[i]),
                                   ag.coord(path[i + 1]));
        t.inputs.push_back(quantize_angle(ang));
        t.labels.push_back(label);
    }
    return t;
}

std::string format_trajectory(const EncodedTrajectory& t) {
    std::ostringstream out;
    for (std::size_t i = 0; i < t.inputs.size(); ++i)
        out << (i ? "," : "") << t.inputs[i];
    out << "|";
    for (std::size_t i = 0; i < t.labels.size(); ++i)
        out << (i ? "," : "") << t.labels[i];
    return out.str();
}

namespace {

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ','))
        if (!tok.empty()) out.push_back(std::stoi(tok));
    return out;
}

}  // namespace

EncodedTrajectory parse_trajectory(const std::string& line) {
    std::size_t bar = line.find('|');
    if (bar == std::string::npos)
        throw DataError("trajectory record missing '|' separator: " + line);
    EncodedTrajectory t;
    try {
        t.inputs = parse_int_list(line.substr(0, bar));
        t.labels = parse_int_list(line.substr(bar + 1));
    } catch (const std::exception&) {
        throw DataError("trajectory record has non-numeric fields: " + line);
    }
    if (t.inputs.size() != t.labels.size())
        throw DataError("trajectory record input/label length mismatch: " + line);
    return t;
}

}  // namespace trajloc
