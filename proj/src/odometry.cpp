#include "trajloc/odometry.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace trajloc {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Equal ceil-division resampling of one segment, excluding the start
// point. Mirrors virtual-node insertion so encodings round-trip.
void resample_segment(Point a, Point b, double interval, std::vector<Point>& out) {
    double len = std::hypot(b.x - a.x, b.y - a.y);
    int n = std::max(1, static_cast<int>(std::ceil(len / interval)));
    for (int i = 1; i <= n; ++i) {
        double t = static_cast<double>(i) / n;
        out.push_back(Point{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
}

double point_segment_distance(Point p, Point a, Point b) {
    double vx = b.x - a.x, vy = b.y - a.y;
    double wx = p.x - a.x, wy = p.y - a.y;
    double vv = vx * vx + vy * vy;
    double t = vv > 0.0 ? std::clamp((wx * vx + wy * vy) / vv, 0.0, 1.0) : 0.0;
    return std::hypot(wx - t * vx, wy - t * vy);
}

}  // namespace

MetricTrajectory simulate_traverse(const AugmentedGraph& ag,
                                   const std::vector<NodeId>& base_path,
                                   const NoiseModel& noise, double step_m) {
    if (step_m <= 0.0) throw DataError("simulation step must be positive");
    if (base_path.size() < 2) throw DataError("degenerate path: need >= 2 nodes");
    if (noise.heading_sigma_deg < 0.0 || noise.step_sigma_frac < 0.0)
        throw DataError("noise sigmas must be >= 0");

    std::vector<Point> clean{ag.coord(base_path.front())};
    for (std::size_t i = 0; i + 1 < base_path.size(); ++i) {
        bool adjacent = false;
        for (const auto& [nbr, _] : ag.base().neighbors(base_path[i]))
            if (nbr == base_path[i + 1]) adjacent = true;
        if (!adjacent)
            throw DataError("path nodes " + std::to_string(base_path[i]) + " and " +
                            std::to_string(base_path[i + 1]) + " are not adjacent");
        Point a = ag.coord(base_path[i]);
        Point b = ag.coord(base_path[i + 1]);
        if (a.x == b.x && a.y == b.y)
            throw DataError("degenerate path: repeated point at node " +
                            std::to_string(base_path[i]));
        resample_segment(a, b, step_m, clean);
    }

    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> heading_noise(0.0, noise.heading_sigma_deg * kDegToRad);
    std::normal_distribution<double> step_noise(0.0, step_m * noise.step_sigma_frac);

    MetricTrajectory out;
    out.source = TrajectorySource::Simulated;
    out.points.push_back(clean.front());
    for (std::size_t i = 1; i < clean.size(); ++i) {
        double dx = clean[i].x - clean[i - 1].x;
        double dy = clean[i].y - clean[i - 1].y;
        double len = std::hypot(dx, dy);
        double heading = std::atan2(dy, dx);
        if (noise.heading_sigma_deg > 0.0) heading += heading_noise(rng);
        if (noise.step_sigma_frac > 0.0) len += step_noise(rng);
        const Point& prev = out.points.back();
        out.points.push_back(
            Point{prev.x + len * std::cos(heading), prev.y + len * std::sin(heading)});
    }
    return out;
}

MetricTrajectory simplify_polyline(const MetricTrajectory& t, double epsilon_m) {
    if (t.points.size() < 2) throw DataError("too few points to simplify (need >= 2)");
    if (epsilon_m < 0.0) throw DataError("simplification epsilon must be >= 0");

    const auto& pts = t.points;
    std::vector<bool> keep(pts.size(), false);
    keep.front() = keep.back() = true;

    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, pts.size() - 1}};
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        if (hi - lo < 2) continue;
        double max_d = 0.0;
        std::size_t split = lo;
        for (std::size_t i = lo + 1; i < hi; ++i) {
            double d = point_segment_distance(pts[i], pts[lo], pts[hi]);
            if (d > max_d) {
                max_d = d;
                split = i;
            }
        }
        if (max_d > epsilon_m) {
            keep[split] = true;
            stack.push_back({lo, split});
            stack.push_back({split, hi});
        }
    }

    MetricTrajectory out;
    out.source = t.source;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (keep[i]) out.points.push_back(pts[i]);
    return out;
}

std::vector<AngleBin> metric_to_angles(const MetricTrajectory& t, double spacing_m) {
    if (spacing_m <= 0.0) throw DataError("spacing must be positive");
    if (t.points.size() < 2) throw DataError("trajectory too short to encode");

    std::vector<Point> resampled{t.points.front()};
    for (std::size_t i = 0; i + 1 < t.points.size(); ++i)
        resample_segment(t.points[i], t.points[i + 1], spacing_m, resampled);
    if (resampled.size() < 3)
        throw DataError("trajectory shorter than twice the sample spacing");

    std::vector<AngleBin> bins;
    bins.reserve(resampled.size() - 2);
    for (std::size_t i = 1; i + 1 < resampled.size(); ++i)
        bins.push_back(
            quantize_angle(turning_angle(resampled[i - 1], resampled[i], resampled[i + 1])));
    return bins;
}

void save_trajectory(const MetricTrajectory& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open trajectory file for writing: " + path);
    out.precision(12);
    for (const Point& p : t.points) out << p.x << " " << p.y << "\n";
}

MetricTrajectory load_trajectory(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open trajectory file: " + path);
    MetricTrajectory t;
    t.source = TrajectorySource::External;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        Point p;
        if (!(ls >> p.x >> p.y))
            throw DataError("trajectory file line " + std::to_string(lineno) +
                            ": expected 'x y'");
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw DataError("trajectory file line " + std::to_string(lineno) +
                            ": non-finite coordinate");
        t.points.push_back(p);
    }
    if (t.points.empty()) throw DataError("trajectory file is empty: " + path);
    return t;
}

}  // namespace trajloc
