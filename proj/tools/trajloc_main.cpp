// trajloc: topological-map geolocalization from motion trajectories.
//
// Subcommands cover the full pipeline: ingest a map, augment it with
// virtual nodes, generate the training corpus, train the recurrent
// classifier, localize trajectories and evaluate accuracy.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "trajloc/evaluate.hpp"
#include "trajloc/geojson.hpp"
#include "trajloc/odometry.hpp"
#include "trajloc/pipeline.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw trajloc::DataError("cannot write " + path);
    out << content;
}

std::vector<trajloc::NodeId> parse_node_list(const std::string& s) {
    std::vector<trajloc::NodeId> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ','))
        if (!tok.empty()) out.push_back(std::stoll(tok));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topological-map geolocalization from motion trajectories"};
    app.require_subcommand(1);

    std::string map_path, out_path, out_dir = ".", model_path, dataset_path, traj_path;
    std::string mode_name = "raw", path_nodes_csv, config_path;
    double spacing = 30.0, epsilon = 5.0, heading_sigma = 0.0, step_sigma = 0.0,
           sim_step = 10.0;
    int nodes = 10, k = 5;
    std::uint64_t seed = 0;
    trajloc::TrainConfig tc;

    auto* ingest = app.add_subcommand("ingest", "Parse and validate a map file");
    ingest->add_option("--map", map_path, "OSM XML or edge-list map file")->required();
    ingest->add_option("--out", out_path, "Write graph summary here (default stdout)");
    ingest->add_option("--geojson", out_dir, "")->group("");  // reserved

    auto* augment = app.add_subcommand("augment", "Report virtual-node augmentation stats");
    augment->add_option("--map", map_path)->required();
    augment->add_option("--spacing", spacing, "Virtual node spacing in meters");

    auto* gen = app.add_subcommand("gen-data", "Generate the encoded training corpus");
    gen->add_option("--map", map_path)->required();
    gen->add_option("--spacing", spacing);
    gen->add_option("--nodes", nodes, "Base nodes per trajectory");
    gen->add_option("--out", out_path, "Dataset output file")->required();

    auto* train_cmd = app.add_subcommand("train", "Train the recurrent classifier");
    train_cmd->add_option("--data", dataset_path, "Dataset file")->required();
    train_cmd->add_option("--out", out_path, "Model output file")->required();
    train_cmd->add_option("--hidden", tc.hidden);
    train_cmd->add_option("--embed-dim", tc.embed_dim);
    train_cmd->add_option("--lr", tc.learning_rate);
    train_cmd->add_option("--epochs-multiplier", tc.epochs_multiplier);
    train_cmd->add_option("--init-scale", tc.init_scale);
    train_cmd->add_option("--clip-norm", tc.clip_norm);
    train_cmd->add_option("--loss-out", traj_path, "Per-iteration loss curve (TSV)");

    auto* loc = app.add_subcommand("localize", "Localize an encoded or metric trajectory");
    loc->add_option("--map", map_path)->required();
    loc->add_option("--model", model_path)->required();
    loc->add_option("--traj", traj_path, "Metric trajectory file (x y per line)")->required();
    loc->add_option("--spacing", spacing);
    loc->add_option("--epsilon", epsilon, "Simplification tolerance, meters");
    loc->add_option("-k,--k", k, "Beam width");
    loc->add_option("--out", out_path, "Result table output (default stdout)");
    loc->add_option("--geojson-out", out_dir, "Overlay GeoJSON output")->group("");

    auto* sim = app.add_subcommand("simulate", "Simulate a noisy traverse of a map path");
    sim->add_option("--map", map_path)->required();
    sim->add_option("--path", path_nodes_csv, "Comma-separated base node ids")->required();
    sim->add_option("--spacing", spacing);
    sim->add_option("--step", sim_step, "Sample step along the path, meters");
    sim->add_option("--heading-sigma", heading_sigma, "Heading noise, degrees per step");
    sim->add_option("--step-sigma", step_sigma, "Step-length noise fraction");
    sim->add_option("--out", out_path, "Trajectory output file")->required();

    auto* eval = app.add_subcommand("eval", "Accuracy curve of a model over a dataset");
    eval->add_option("--map", map_path)->required();
    eval->add_option("--model", model_path)->required();
    eval->add_option("--data", dataset_path)->required();
    eval->add_option("--mode", mode_name, "raw | strategy1 | strategy2");
    eval->add_option("-k,--k", k);
    eval->add_option("--out", out_path, "Curve output (default stdout)");

    auto* exp = app.add_subcommand("export", "GeoJSON export of a map");
    exp->add_option("--map", map_path)->required();
    exp->add_option("--out", out_path)->required();

    auto* run = app.add_subcommand("run", "Run the full pipeline from a config file");
    run->add_option("config", config_path, "key=value config file")->required();
    run->add_option("--out-dir", out_dir, "Overrides out_dir from the config");
    auto* run_seed = run->add_option("--seed", seed, "Overrides seed from the config");

    for (auto* sub : {ingest, augment, gen, train_cmd, loc, sim, eval})
        sub->add_option("--seed", seed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*ingest) {
            trajloc::MapGraph g = trajloc::load_map_file(map_path);
            if (out_path.empty())
                std::cout << g.summary();
            else
                write_file(out_path, g.summary());
        } else if (*augment) {
            trajloc::MapGraph g = trajloc::load_map_file(map_path);
            trajloc::AugmentedGraph ag(g, spacing);
            std::cout << "base_nodes\t" << g.node_count() << "\n"
                      << "base_edges\t" << g.edge_count() << "\n"
                      << "virtual_nodes\t" << ag.virtual_node_count() << "\n"
                      << "spacing\t" << spacing << "\n";
        } else if (*gen) {
            trajloc::MapGraph g = trajloc::load_map_file(map_path);
            trajloc::AugmentedGraph ag(g, spacing);
            trajloc::Dataset d = trajloc::generate_dataset(ag, nodes);
            trajloc::save_dataset(d, out_path);
            std::cout << "trajectories\t" << d.records.size() << "\n"
                      << "classes\t" << d.num_classes << "\n";
        } else if (*train_cmd) {
            trajloc::Dataset d = trajloc::load_dataset(dataset_path);
            tc.seed = seed;
            trajloc::TrainResult res = trajloc::train(d, tc);
            trajloc::save_model(res.model, out_path);
            if (!traj_path.empty()) {
                std::ostringstream curve;
                curve.precision(12);
                for (std::size_t i = 0; i < res.loss_curve.size(); ++i)
                    curve << i << "\t" << res.loss_curve[i] << "\n";
                write_file(traj_path, curve.str());
            }
            double tail = 0.0;
            std::size_t tail_n = std::max<std::size_t>(1, res.loss_curve.size() / 20);
            for (std::size_t i = res.loss_curve.size() - tail_n; i < res.loss_curve.size(); ++i)
                tail += res.loss_curve[i];
            std::cout << "iterations\t" << res.loss_curve.size() << "\n"
                      << "final_mean_loss\t" << tail / static_cast<double>(tail_n) << "\n";
        } else if (*loc) {
            trajloc::MapGraph g = trajloc::load_map_file(map_path);
            trajloc::RnnModel m = trajloc::load_model(model_path);
            trajloc::MetricTrajectory t = trajloc::load_trajectory(traj_path);
            auto bins = trajloc::metric_to_angles(trajloc::simplify_polyline(t, epsilon),
                                                  spacing);
            auto raw = trajloc::predict_raw(m, bins);
            auto s1 = trajloc::localize_strategy1(m, g, bins, k);
            auto s2 = trajloc::localize_strategy2(m, g, bins, k);
            std::string table = trajloc::format_result_table(raw, s1, s2);
            if (out_path.empty())
                std::cout << table;
            else
                write_file(out_path, table);
            if (s2.failed)
                std::cerr << "strategy2: all hypotheses eliminated at step "
                          << s2.failed_at_step << "\n";
        } else if (*sim) {
            trajloc::MapGraph g = trajloc::load_map_file(map_path);
            trajloc::AugmentedGraph ag(g, spacing);
            trajloc::NoiseModel nm{heading_sigma, step_sigma, seed};
            auto t = trajloc::simulate_traverse(ag, parse_node_list(path_nodes_csv), nm,
                                                sim_step);
            trajloc::save_trajectory(t, out_path);
        } else if (*eval) {
            trajloc::MapGraph g = trajloc::load_map_file(map_path);
            trajloc::RnnModel m = trajloc::load_model(model_path);
            trajloc::Dataset d = trajloc::load_dataset(dataset_path);
            auto curve = trajloc::evaluate_accuracy(m, g, d, trajloc::parse_eval_mode(mode_name), k);
            std::string text = trajloc::format_accuracy_curve(curve);
            if (out_path.empty())
                std::cout << text;
            else
                write_file(out_path, text);
        } else if (*exp) {
            trajloc::MapGraph g = trajloc::load_map_file(map_path);
            write_file(out_path, g.to_geojson());
        } else if (*run) {
            trajloc::PipelineConfig cfg = trajloc::parse_config_file(config_path);
            if (run->count("--out-dir")) cfg.out_dir = out_dir;
            if (run_seed->count()) cfg.train.seed = seed;
            trajloc::run_pipeline(cfg);
        }
    } catch (const trajloc::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const trajloc::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
