#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajloc/encoding.hpp"

namespace trajloc {

enum class TrajectorySource { Simulated, External };

struct MetricTrajectory {
    std::vector<Point> points;
    TrajectorySource source = TrajectorySource::Simulated;
};

// Dead-reckoning style perturbation: per-step heading and step-length
// noise, integrated so error drifts with distance.
struct NoiseModel {
    double heading_sigma_deg = 0.0;
    double step_sigma_frac = 0.0;
    std::uint64_t seed = 0;
};

// Samples the polyline of a base-node path at `step_m` intervals (equal
// subdivision per segment, so the polyline vertices are always sampled)
// and integrates noisy increments.
MetricTrajectory simulate_traverse(const AugmentedGraph& ag,
                                   const std::vector<NodeId>& base_path,
                                   const NoiseModel& noise, double step_m);

// Recursive farthest-point split. Output is a subsequence of the input
// keeping first and last points; every dropped point lies within
// epsilon of the simplified chain.
MetricTrajectory simplify_polyline(const MetricTrajectory& t, double epsilon_m);

// Resamples each segment at `spacing_m` (the map augmentation spacing)
// and quantizes the turning angle at every interior vertex.
std::vector<AngleBin> metric_to_angles(const MetricTrajectory& t, double spacing_m);

// One `x y` pair per line, meters.
void save_trajectory(const MetricTrajectory& t, const std::string& path);
MetricTrajectory load_trajectory(const std::string& path);

}  // namespace trajloc
