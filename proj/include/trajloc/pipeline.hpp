#pragma once

#include <string>

#include "trajloc/rnn.hpp"

namespace trajloc {

// Flat key=value configuration for the end-to-end pipeline; every key is
// mirrored by a CLI flag and flags win.
struct PipelineConfig {
    std::string map_path;
    std::string out_dir = ".";
    double spacing_m = 30.0;
    int path_nodes = 10;
    std::size_t holdout = 1;
    int beam_k = 5;
    TrainConfig train;

    void validate() const;
};

PipelineConfig parse_config_file(const std::string& path);

// ingest -> augment -> gen-data -> train -> evaluate. Writes dataset,
// model, loss curve, accuracy curve, localization overlay and a summary
// into out_dir. Idempotent for a fixed config and seed.
void run_pipeline(const PipelineConfig& cfg);

}  // namespace trajloc
