#include "trajloc/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "trajloc/evaluate.hpp"
#include "trajloc/geojson.hpp"

namespace trajloc {

void PipelineConfig::validate() const {
    if (map_path.empty()) throw DataError("missing map path (--map / map=)");
    if (spacing_m <= 0.0) throw DataError("spacing must be positive");
    if (path_nodes < 2) throw DataError("path node count must be >= 2");
    if (beam_k < 1) throw DataError("beam width k must be >= 1");
    train.validate();
}

PipelineConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file: " + path);
    PipelineConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw DataError("config line " + std::to_string(lineno) +
                            ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        try {
            if (key == "map") cfg.map_path = val;
            else if (key == "out_dir") cfg.out_dir = val;
            else if (key == "spacing") cfg.spacing_m = std::stod(val);
            else if (key == "nodes") cfg.path_nodes = std::stoi(val);
            else if (key == "holdout") cfg.holdout = std::stoul(val);
            else if (key == "k") cfg.beam_k = std::stoi(val);
            else if (key == "hidden") cfg.train.hidden = std::stoi(val);
            else if (key == "embed_dim") cfg.train.embed_dim = std::stoi(val);
            else if (key == "lr") cfg.train.learning_rate = std::stod(val);
            else if (key == "epochs_multiplier") cfg.train.epochs_multiplier = std::stod(val);
            else if (key == "seed") cfg.train.seed = std::stoull(val);
            else if (key == "init_scale") cfg.train.init_scale = std::stod(val);
            else if (key == "clip_norm") cfg.train.clip_norm = std::stod(val);
            else throw DataError("config line " + std::to_string(lineno) +
                                 ": unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw DataError("config line " + std::to_string(lineno) + ": bad value for '" +
                            key + "'");
        }
    }
    return cfg;
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError("cannot write " + p.string());
    out << content;
}

}  // namespace

void run_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    std::filesystem::path out(cfg.out_dir);
    std::filesystem::create_directories(out);

    MapGraph g = load_map_file(cfg.map_path);
    write_file(out / "map_summary.txt", g.summary());

    AugmentedGraph ag(g, cfg.spacing_m);
    Dataset all = generate_dataset(ag, cfg.path_nodes);
    auto [train_set, test_set] = split_holdout(all, cfg.holdout, cfg.train.seed);
    save_dataset(all, (out / "dataset.txt").string());

    TrainResult tr = train(train_set, cfg.train);
    save_model(tr.model, (out / "model.bin").string());
    {
        std::ostringstream curve;
        curve.precision(12);
        for (std::size_t i = 0; i < tr.loss_curve.size(); ++i)
            curve << i << "\t" << tr.loss_curve[i] << "\n";
        write_file(out / "loss_curve.tsv", curve.str());
    }

    AccuracyCurve acc = evaluate_accuracy(tr.model, g, train_set, EvalMode::Raw);
    write_file(out / "accuracy_curve.tsv", format_accuracy_curve(acc));

    // Localization overlay for the first held-out record (or the first
    // training record when nothing is held out).
    const EncodedTrajectory& demo =
        test_set.records.empty() ? train_set.records.front() : test_set.records.front();
    auto raw = predict_raw(tr.model, demo.inputs);
    auto s1 = localize_strategy1(tr.model, g, demo.inputs, cfg.beam_k);
    auto s2 = localize_strategy2(tr.model, g, demo.inputs, cfg.beam_k);
    write_file(out / "localization.csv", format_result_table(raw, s1, s2));
    write_file(out / "overlay.geojson",
               export_overlay_geojson(g, {{"ground_truth", "#2ca02c", demo.labels},
                                          {"raw", "#d62728", raw},
                                          {"strategy1", "#1f77b4", s1.best.edge_path},
                                          {"strategy2", "#ff7f0e", s2.best.edge_path}}));
}

}  // namespace trajloc
