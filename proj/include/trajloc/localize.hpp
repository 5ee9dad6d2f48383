#pragma once

#include <optional>
#include <vector>

#include "trajloc/rnn.hpp"

namespace trajloc {

// Candidate connected edge walk with cumulative log-likelihood under the
// model's per-step softmax.
struct Hypothesis {
    std::vector<EdgeId> edge_path;
    double log_likelihood = 0.0;
};

enum class InitMode { AllEdges, TopK };

struct LocalizationResult {
    Hypothesis best;
    std::vector<Hypothesis> alternatives;  // sorted by descending log-likelihood
    std::vector<double> per_step_entropy;
    // Strategy 2 only: set when every hypothesis lost its admissible
    // extensions; edge_path then holds the surviving prefix.
    bool failed = false;
    std::size_t failed_at_step = 0;
};

// Per-step argmax of the forward probabilities. No connectivity
// guarantee; ties go to the smallest edge id.
std::vector<EdgeId> predict_raw(const RnnModel& m, const std::vector<AngleBin>& inputs);

// Expand every hypothesis to {same edge} + connected edges, keep the
// global top-k by cumulative log-likelihood. Output is always a
// connected walk.
LocalizationResult localize_strategy1(const RnnModel& m, const MapGraph& g,
                                      const std::vector<AngleBin>& inputs, int k = 5,
                                      InitMode init = InitMode::AllEdges);

// Take the k most probable edges at each step and keep only extensions
// admissible under connectivity; may fail if the true edge drops out of
// the top k.
LocalizationResult localize_strategy2(const RnnModel& m, const MapGraph& g,
                                      const std::vector<AngleBin>& inputs, int k = 5);

// Sum of ln p_t[edge_path[t]] over the trace.
double score_hypothesis(const ForwardTrace& trace, const std::vector<EdgeId>& edge_path);

// `t, raw_edge, s1_edge, s2_edge, s1_logp` per line; missing strategy-2
// steps (after a failure) are printed as -1.
std::string format_result_table(const std::vector<EdgeId>& raw,
                                const LocalizationResult& s1,
                                const LocalizationResult& s2);

}  // namespace trajloc
