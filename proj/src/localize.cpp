#include "trajloc/localize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace trajloc {

namespace {

double safe_log(double p) { return std::log(std::max(p, 1e-300)); }

double entropy(const Eigen::VectorXd& p) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p(i) > 0.0) h -= p(i) * std::log(p(i));
    return h;
}

// Descending score; ties broken by lexicographically smaller edge path.
bool better(const Hypothesis& a, const Hypothesis& b) {
    if (a.log_likelihood != b.log_likelihood) return a.log_likelihood > b.log_likelihood;
    return a.edge_path < b.edge_path;
}

void keep_top_k(std::vector<Hypothesis>& hyps, std::size_t k) {
    std::sort(hyps.begin(), hyps.end(), better);
    if (hyps.size() > k) hyps.resize(k);
}

// Edge ids of the k highest-probability entries; ties to smaller id.
std::vector<EdgeId> top_k_edges(const Eigen::VectorXd& p, std::size_t k) {
    std::vector<EdgeId> ids(static_cast<std::size_t>(p.size()));
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<EdgeId>(i);
    std::stable_sort(ids.begin(), ids.end(),
                     [&](EdgeId a, EdgeId b) { return p(a) > p(b); });
    if (ids.size() > k) ids.resize(k);
    return ids;
}

// {e} + all edges sharing an endpoint with e, ascending.
std::vector<EdgeId> connected_edges(const MapGraph& g, EdgeId e) {
    std::vector<EdgeId> out{e};
    const Edge& edge = g.edge(e);
    for (NodeId n : {edge.a, edge.b})
        for (const auto& [_, eid] : g.neighbors(n))
            if (eid != e) out.push_back(eid);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::vector<EdgeId> predict_raw(const RnnModel& m, const std::vector<AngleBin>& inputs) {
    ForwardTrace tr = forward(m, inputs);
    std::vector<EdgeId> out;
    out.reserve(inputs.size());
    for (const auto& p : tr.probs) {
        Eigen::Index best = 0;
        p.maxCoeff(&best);  // first maximum -> smallest edge id
        out.push_back(static_cast<EdgeId>(best));
    }
    return out;
}

LocalizationResult localize_strategy1(const RnnModel& m, const MapGraph& g,
                                      const std::vector<AngleBin>& inputs, int k,
                                      InitMode init) {
    if (k < 1) throw DataError("beam width k must be >= 1");
    if (inputs.empty()) throw DataError("cannot localize an empty input sequence");
    ForwardTrace tr = forward(m, inputs);
    const std::size_t beam = static_cast<std::size_t>(k);

    std::vector<Hypothesis> hyps;
    if (init == InitMode::AllEdges) {
        for (EdgeId e = 0; e < static_cast<EdgeId>(g.edge_count()); ++e)
            hyps.push_back({{e}, safe_log(tr.probs[0](e))});
    } else {
        for (EdgeId e : top_k_edges(tr.probs[0], beam))
            hyps.push_back({{e}, safe_log(tr.probs[0](e))});
    }
    keep_top_k(hyps, beam);

    for (std::size_t t = 1; t < inputs.size(); ++t) {
        std::vector<Hypothesis> next;
        for (const Hypothesis& h : hyps) {
            for (EdgeId e : connected_edges(g, h.edge_path.back())) {
                Hypothesis child{h.edge_path, h.log_likelihood + safe_log(tr.probs[t](e))};
                child.edge_path.push_back(e);
                next.push_back(std::move(child));
            }
        }
        keep_top_k(next, beam);
        hyps = std::move(next);
    }

    LocalizationResult res;
    res.alternatives = std::move(hyps);
    res.best = res.alternatives.front();
    for (const auto& p : tr.probs) res.per_step_entropy.push_back(entropy(p));
    return res;
}

LocalizationResult localize_strategy2(const RnnModel& m, const MapGraph& g,
                                      const std::vector<AngleBin>& inputs, int k) {
    if (k < 1) throw DataError("beam width k must be >= 1");
    if (inputs.empty()) throw DataError("cannot localize an empty input sequence");
    ForwardTrace tr = forward(m, inputs);
    const std::size_t beam = static_cast<std::size_t>(k);

    LocalizationResult res;
    for (const auto& p : tr.probs) res.per_step_entropy.push_back(entropy(p));

    std::vector<Hypothesis> hyps;
    for (EdgeId e : top_k_edges(tr.probs[0], beam))
        hyps.push_back({{e}, safe_log(tr.probs[0](e))});
    keep_top_k(hyps, beam);

    for (std::size_t t = 1; t < inputs.size(); ++t) {
        std::vector<EdgeId> candidates = top_k_edges(tr.probs[t], beam);
        std::sort(candidates.begin(), candidates.end());
        std::vector<Hypothesis> next;
        for (const Hypothesis& h : hyps) {
            for (EdgeId e : candidates) {
                if (e != h.edge_path.back() && !g.edges_adjacent(h.edge_path.back(), e))
                    continue;
                Hypothesis child{h.edge_path, h.log_likelihood + safe_log(tr.probs[t](e))};
                child.edge_path.push_back(e);
                next.push_back(std::move(child));
            }
        }
        if (next.empty()) {
            // Every hypothesis lost its admissible extensions; report the
            // surviving prefix.
            keep_top_k(hyps, beam);
            res.failed = true;
            res.failed_at_step = t;
            res.alternatives = std::move(hyps);
            res.best = res.alternatives.front();
            return res;
        }
        keep_top_k(next, beam);
        hyps = std::move(next);
    }

    res.alternatives = std::move(hyps);
    res.best = res.alternatives.front();
    return res;
}

double score_hypothesis(const ForwardTrace& trace, const std::vector<EdgeId>& edge_path) {
    if (trace.probs.size() != edge_path.size())
        throw DataError("edge path length does not match trace length");
    double s = 0.0;
    for (std::size_t t = 0; t < edge_path.size(); ++t) {
        EdgeId e = edge_path[t];
        if (e < 0 || e >= trace.probs[t].size())
            throw DataError("edge id " + std::to_string(e) + " out of range in path");
        s += safe_log(trace.probs[t](e));
    }
    return s;
}

std::string format_result_table(const std::vector<EdgeId>& raw,
                                const LocalizationResult& s1,
                                const LocalizationResult& s2) {
    std::ostringstream out;
    out << "t,raw_edge,s1_edge,s2_edge,s1_logp\n";
    out.precision(12);
    for (std::size_t t = 0; t < raw.size(); ++t) {
        EdgeId e1 = t < s1.best.edge_path.size() ? s1.best.edge_path[t] : -1;
        EdgeId e2 = t < s2.best.edge_path.size() ? s2.best.edge_path[t] : -1;
        out << t << "," << raw[t] << "," << e1 << "," << e2 << ","
            << s1.best.log_likelihood << "\n";
    }
    return out.str();
}

}  // namespace trajloc
