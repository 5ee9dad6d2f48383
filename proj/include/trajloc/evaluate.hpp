#pragma once

#include <string>
#include <vector>

#include "trajloc/localize.hpp"

namespace trajloc {

enum class EvalMode { Raw, Strategy1, Strategy2 };

struct PositionAccuracy {
    std::size_t position = 0;  // 1-based step index (virtual steps included)
    double accuracy = 0.0;
    std::size_t samples = 0;
};

struct AccuracyCurve {
    std::vector<PositionAccuracy> per_position;
    double last_position_accuracy = 0.0;  // each trajectory's own final step
    std::size_t trajectories = 0;
};

// Per-position fraction of correct edge predictions over the dataset.
// Positions past a trajectory's length drop out of that position's
// sample count.
AccuracyCurve evaluate_accuracy(const RnnModel& m, const MapGraph& g, const Dataset& d,
                                EvalMode mode, int k = 5);

std::string format_accuracy_curve(const AccuracyCurve& c);

EvalMode parse_eval_mode(const std::string& name);

}  // namespace trajloc
