// Shared fixtures and independent oracles for the test suites.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "trajloc/encoding.hpp"
#include "trajloc/map_graph.hpp"

namespace testsupport {

using trajloc::EdgeId;
using trajloc::MapGraph;
using trajloc::NodeId;

// Roughly 1e-5 deg latitude per meter at mid latitudes; fixtures place
// nodes by meter offsets from a base coordinate.
inline std::string simple_graph_text(
    const std::vector<std::tuple<NodeId, double, double>>& nodes_m,
    const std::vector<std::pair<NodeId, NodeId>>& edges, double base_lat = 40.0,
    double base_lon = -83.0) {
    std::ostringstream out;
    out.precision(12);
    const double m_per_deg_lat = 6371000.0 * std::numbers::pi / 180.0;
    const double m_per_deg_lon = m_per_deg_lat * std::cos(base_lat * std::numbers::pi / 180.0);
    for (const auto& [id, x, y] : nodes_m)
        out << "node " << id << " " << base_lat + y / m_per_deg_lat << " "
            << base_lon + x / m_per_deg_lon << "\n";
    for (const auto& [a, b] : edges) out << "edge " << a << " " << b << "\n";
    return out.str();
}

inline MapGraph make_map(const std::vector<std::tuple<NodeId, double, double>>& nodes_m,
                         const std::vector<std::pair<NodeId, NodeId>>& edges) {
    return trajloc::parse_simple_graph(simple_graph_text(nodes_m, edges));
}

// 1 - 2 - 3 - ... - n along the x axis, 100 m apart.
inline MapGraph make_path_graph(int n, double spacing_m = 100.0) {
    std::vector<std::tuple<NodeId, double, double>> nodes;
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 1; i <= n; ++i) nodes.push_back({i, (i - 1) * spacing_m, 0.0});
    for (int i = 1; i < n; ++i) edges.push_back({i, i + 1});
    return make_map(nodes, edges);
}

// n-gon with roughly 100 m sides.
inline MapGraph make_cycle_graph(int n) {
    std::vector<std::tuple<NodeId, double, double>> nodes;
    std::vector<std::pair<NodeId, NodeId>> edges;
    double r = 100.0 / (2.0 * std::sin(std::numbers::pi / n));
    for (int i = 0; i < n; ++i) {
        double a = 2.0 * std::numbers::pi * i / n;
        nodes.push_back({i + 1, r * std::cos(a), r * std::sin(a)});
        edges.push_back({i + 1, (i % n) + 2 > n ? 1 : i + 2});
    }
    return make_map(nodes, edges);
}

// Random connected geometric graph: spanning tree plus extra edges,
// nodes scattered over a span_m square. Deterministic per seed.
inline MapGraph make_random_graph(std::uint64_t seed, int n_nodes, int extra_edges,
                                  double span_m = 1500.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(0.0, span_m);
    std::vector<std::tuple<NodeId, double, double>> nodes;
    for (int i = 1; i <= n_nodes; ++i) nodes.push_back({i, coord(rng), coord(rng)});

    std::vector<std::pair<NodeId, NodeId>> edges;
    std::set<std::pair<NodeId, NodeId>> used;
    for (int i = 2; i <= n_nodes; ++i) {
        NodeId prev = static_cast<NodeId>(rng() % (i - 1)) + 1;
        edges.push_back({prev, i});
        used.insert({std::min<NodeId>(prev, i), std::max<NodeId>(prev, i)});
    }
    int attempts = 0;
    while (extra_edges > 0 && attempts < 50 * extra_edges) {
        ++attempts;
        NodeId a = static_cast<NodeId>(rng() % n_nodes) + 1;
        NodeId b = static_cast<NodeId>(rng() % n_nodes) + 1;
        if (a == b) continue;
        auto key = std::make_pair(std::min(a, b), std::max(a, b));
        if (used.count(key)) continue;
        used.insert(key);
        edges.push_back({a, b});
        --extra_edges;
    }
    return make_map(nodes, edges);
}

// Brute-force oracle: all simple paths of `node_count` nodes from
// `source`, by filtering permutations of node subsets via adjacency.
inline std::set<std::vector<NodeId>> brute_force_simple_paths(const MapGraph& g,
                                                              NodeId source,
                                                              int node_count) {
    std::vector<NodeId> ids;
    for (const auto& n : g.nodes()) ids.push_back(n.id);
    std::sort(ids.begin(), ids.end());

    auto adjacent = [&](NodeId a, NodeId b) {
        for (const auto& [nbr, _] : g.neighbors(a))
            if (nbr == b) return true;
        return false;
    };

    std::set<std::vector<NodeId>> out;
    std::vector<NodeId> others;
    for (NodeId id : ids)
        if (id != source) others.push_back(id);

    // permutations of (node_count - 1) nodes appended to source
    std::vector<int> sel(others.size(), 0);
    std::fill(sel.end() - (node_count - 1), sel.end(), 1);
    if (static_cast<int>(others.size()) < node_count - 1) return out;
    do {
        std::vector<NodeId> subset;
        for (std::size_t i = 0; i < others.size(); ++i)
            if (sel[i]) subset.push_back(others[i]);
        std::sort(subset.begin(), subset.end());
        do {
            std::vector<NodeId> path{source};
            path.insert(path.end(), subset.begin(), subset.end());
            bool ok = true;
            for (std::size_t i = 0; i + 1 < path.size(); ++i)
                if (!adjacent(path[i], path[i + 1])) {
                    ok = false;
                    break;
                }
            if (ok) out.insert(path);
        } while (std::next_permutation(subset.begin(), subset.end()));
    } while (std::next_permutation(sel.begin(), sel.end()));
    return out;
}

// All connected edge walks of a given length (same-edge steps allowed).
inline void enumerate_edge_walks(const MapGraph& g, std::size_t length,
                                 std::vector<EdgeId>& walk,
                                 std::vector<std::vector<EdgeId>>& out) {
    if (walk.size() == length) {
        out.push_back(walk);
        return;
    }
    for (EdgeId e = 0; e < static_cast<EdgeId>(g.edge_count()); ++e) {
        if (!walk.empty() && !g.edges_adjacent(walk.back(), e)) continue;
        walk.push_back(e);
        enumerate_edge_walks(g, length, walk, out);
        walk.pop_back();
    }
}

}  // namespace testsupport
