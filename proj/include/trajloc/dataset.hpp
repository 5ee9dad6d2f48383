#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajloc/encoding.hpp"

namespace trajloc {

struct Dataset {
    std::vector<EncodedTrajectory> records;
    int num_classes = 0;        // = E of the base graph
    int alphabet_size = kAngleBins;
};

// Every simple path of exactly `node_count` distinct nodes starting at
// `source`, neighbors explored in ascending node id.
std::vector<std::vector<NodeId>> enumerate_simple_paths(const MapGraph& g, NodeId source,
                                                        int node_count,
                                                        std::size_t path_cap = 1'000'000);

// Union of enumerate_simple_paths over all source nodes, each path routed
// through the augmented graph and encoded; duplicate (inputs, labels)
// pairs removed. Deterministic.
Dataset generate_dataset(const AugmentedGraph& ag, int node_count = 10,
                         std::size_t path_cap = 1'000'000);

// Seeded disjoint split holding out n records for test.
std::pair<Dataset, Dataset> split_holdout(const Dataset& d, std::size_t n,
                                          std::uint64_t seed);

// Header `classes=<E> alphabet=20`, then one record per line.
void save_dataset(const Dataset& d, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace trajloc
