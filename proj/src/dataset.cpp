#include "trajloc/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

namespace trajloc {

namespace {

void dfs_paths(const MapGraph& g, std::vector<NodeId>& path,
               std::unordered_set<NodeId>& visited, int node_count,
               std::vector<std::vector<NodeId>>& out, std::size_t cap) {
    if (static_cast<int>(path.size()) == node_count) {
        if (out.size() >= cap)
            throw DataError("path enumeration exceeded cap of " + std::to_string(cap));
        out.push_back(path);
        return;
    }
    for (const auto& [nbr, _] : g.neighbors(path.back())) {  // ascending node id
        if (visited.count(nbr)) continue;
        visited.insert(nbr);
        path.push_back(nbr);
        dfs_paths(g, path, visited, node_count, out, cap);
        path.pop_back();
        visited.erase(nbr);
    }
}

}  // namespace

std::vector<std::vector<NodeId>> enumerate_simple_paths(const MapGraph& g, NodeId source,
                                                        int node_count,
                                                        std::size_t path_cap) {
    if (node_count < 2) throw DataError("node_count must be >= 2");
    g.node(source);  // validates
    std::vector<std::vector<NodeId>> out;
    std::vector<NodeId> path{source};
    std::unordered_set<NodeId> visited{source};
    dfs_paths(g, path, visited, node_count, out, path_cap);
    return out;
}

Dataset generate_dataset(const AugmentedGraph& ag, int node_count, std::size_t path_cap) {
    const MapGraph& g = ag.base();
    if (static_cast<int>(g.node_count()) < node_count)
        throw DataError("graph has " + std::to_string(g.node_count()) +
                        " nodes, fewer than requested path length " +
                        std::to_string(node_count));
    Dataset d;
    d.num_classes = static_cast<int>(g.edge_count());

    std::vector<NodeId> sources;
    for (const auto& n : g.nodes()) sources.push_back(n.id);
    std::sort(sources.begin(), sources.end());

    std::unordered_set<std::string> seen;
    for (NodeId src : sources) {
        for (const auto& base_path : enumerate_simple_paths(g, src, node_count, path_cap)) {
            EncodedTrajectory t = encode_path(ag, ag.expand_path(base_path));
            std::string key = format_trajectory(t);
            if (seen.insert(std::move(key)).second) d.records.push_back(std::move(t));
        }
    }
    return d;
}

std::pair<Dataset, Dataset> split_holdout(const Dataset& d, std::size_t n,
                                          std::uint64_t seed) {
    if (n >= d.records.size() && n != 0)
        throw DataError("holdout size " + std::to_string(n) + " out of range for " +
                        std::to_string(d.records.size()) + " records");
    std::vector<std::size_t> idx(d.records.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    // Fisher-Yates, spelled out so the split is stable across standard libraries.
    for (std::size_t i = idx.size(); i > 1; --i)
        std::swap(idx[i - 1], idx[rng() % i]);

    Dataset train{.records = {}, .num_classes = d.num_classes, .alphabet_size = d.alphabet_size};
    Dataset test = train;
    for (std::size_t i = 0; i < idx.size(); ++i)
        (i < n ? test : train).records.push_back(d.records[idx[i]]);
    return {std::move(train), std::move(test)};
}

void save_dataset(const Dataset& d, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open dataset file for writing: " + path);
    out << "classes=" << d.num_classes << " alphabet=" << d.alphabet_size << "\n";
    for (const auto& t : d.records) out << format_trajectory(t) << "\n";
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open dataset file: " + path);
    std::string header;
    if (!std::getline(in, header)) throw DataError("empty dataset file: " + path);
    Dataset d;
    if (std::sscanf(header.c_str(), "classes=%d alphabet=%d", &d.num_classes,
                    &d.alphabet_size) != 2)
        throw DataError("bad dataset header: " + header);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        EncodedTrajectory t = parse_trajectory(line);
        for (EdgeId l : t.labels)
            if (l < 0 || l >= d.num_classes)
                throw DataError("label " + std::to_string(l) + " out of range");
        for (AngleBin b : t.inputs)
            if (b < 0 || b >= d.alphabet_size)
                throw DataError("input bin " + std::to_string(b) + " out of range");
        d.records.push_back(std::move(t));
    }
    return d;
}

}  // namespace trajloc
