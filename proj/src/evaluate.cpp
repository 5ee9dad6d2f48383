#include "trajloc/evaluate.hpp"

#include <sstream>

namespace trajloc {

AccuracyCurve evaluate_accuracy(const RnnModel& m, const MapGraph& g, const Dataset& d,
                                EvalMode mode, int k) {
    if (m.classes() != d.num_classes)
        throw DataError("model has " + std::to_string(m.classes()) +
                        " classes but dataset has " + std::to_string(d.num_classes));

    std::vector<std::size_t> correct, total;
    std::size_t last_correct = 0;

    for (const auto& rec : d.records) {
        std::vector<EdgeId> pred;
        switch (mode) {
            case EvalMode::Raw:
                pred = predict_raw(m, rec.inputs);
                break;
            case EvalMode::Strategy1:
                pred = localize_strategy1(m, g, rec.inputs, k).best.edge_path;
                break;
            case EvalMode::Strategy2:
                pred = localize_strategy2(m, g, rec.inputs, k).best.edge_path;
                break;
        }
        if (rec.labels.size() > total.size()) {
            total.resize(rec.labels.size(), 0);
            correct.resize(rec.labels.size(), 0);
        }
        for (std::size_t i = 0; i < rec.labels.size(); ++i) {
            ++total[i];
            if (i < pred.size() && pred[i] == rec.labels[i]) ++correct[i];
        }
        std::size_t last = rec.labels.size() - 1;
        if (last < pred.size() && pred[last] == rec.labels[last]) ++last_correct;
    }

    AccuracyCurve c;
    c.trajectories = d.records.size();
    for (std::size_t i = 0; i < total.size(); ++i) {
        if (total[i] == 0) continue;
        c.per_position.push_back({i + 1,
                                  static_cast<double>(correct[i]) / static_cast<double>(total[i]),
                                  total[i]});
    }
    if (!d.records.empty())
        c.last_position_accuracy =
            static_cast<double>(last_correct) / static_cast<double>(d.records.size());
    return c;
}

std::string format_accuracy_curve(const AccuracyCurve& c) {
    std::ostringstream out;
    out.precision(6);
    out << "position\taccuracy\tsamples\n";
    for (const auto& p : c.per_position)
        out << p.position << "\t" << p.accuracy << "\t" << p.samples << "\n";
    out << "last\t" << c.last_position_accuracy << "\t" << c.trajectories << "\n";
    return out.str();
}

EvalMode parse_eval_mode(const std::string& name) {
    if (name == "raw") return EvalMode::Raw;
    if (name == "strategy1" || name == "s1") return EvalMode::Strategy1;
    if (name == "strategy2" || name == "s2") return EvalMode::Strategy2;
    throw DataError("unknown evaluation mode: " + name);
}

}  // namespace trajloc
