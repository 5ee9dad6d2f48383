#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "trajloc/dataset.hpp"

namespace trajloc {

struct TrainConfig {
    int hidden = 128;
    int embed_dim = 32;
    double learning_rate = 0.01;
    double epochs_multiplier = 6.0;  // iterations = multiplier * dataset size
    std::uint64_t seed = 0;
    double init_scale = 0.08;
    double clip_norm = 5.0;

    void validate() const;
};

// One-layer Elman classifier: embedding -> tanh recurrent cell -> linear
// head. All math is double precision; parameters live in Eigen matrices.
struct RnnModel {
    Eigen::MatrixXd embed;  // [alphabet x d_e], row per input bin
    Eigen::MatrixXd w_xh;   // [H x d_e]
    Eigen::MatrixXd w_hh;   // [H x H]
    Eigen::VectorXd b_h;    // [H]
    Eigen::MatrixXd w_hy;   // [C x H]
    Eigen::VectorXd b_y;    // [C]

    int hidden() const { return static_cast<int>(w_hh.rows()); }
    int classes() const { return static_cast<int>(w_hy.rows()); }
    int embed_dim() const { return static_cast<int>(embed.cols()); }

    bool finite() const;
};

// Parameter-shaped gradient accumulator.
struct RnnGradients {
    Eigen::MatrixXd embed, w_xh, w_hh, w_hy;
    Eigen::VectorXd b_h, b_y;

    static RnnGradients zeros_like(const RnnModel& m);
    double squared_norm() const;
    void scale(double s);
};

struct ForwardTrace {
    std::vector<Eigen::VectorXd> hidden;  // h_1..T
    std::vector<Eigen::VectorXd> logits;  // y_1..T
    std::vector<Eigen::VectorXd> probs;   // p_1..T
};

// Weights uniform in [-init_scale, init_scale], biases zero, seeded.
RnnModel init_model(const TrainConfig& cfg, int num_classes);

// h = tanh(W_xh x + W_hh h_prev + b_h); logits = W_hy h + b_y.
std::pair<Eigen::VectorXd, Eigen::VectorXd> rnn_step(const RnnModel& m, AngleBin bin,
                                                     const Eigen::VectorXd& h_prev);

// Max-shifted stable softmax.
Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

// -ln p[label], clamped at -ln(1e-12) for zero probability.
double nll_loss(const Eigen::VectorXd& p, EdgeId label);

// Full unroll from h_0 = 0.
ForwardTrace forward(const RnnModel& m, const std::vector<AngleBin>& inputs);

// Exact BPTT gradients of the mean per-step NLL over the sequence.
RnnGradients backward_bptt(const RnnModel& m, const std::vector<AngleBin>& inputs,
                           const std::vector<EdgeId>& labels);

// Mean NLL of a sequence under the model.
double sequence_loss(const RnnModel& m, const EncodedTrajectory& t);

struct TrainResult {
    RnnModel model;
    std::vector<double> loss_curve;  // per-iteration mean NLL
};

// Plain SGD, batch of one trajectory sampled uniformly per iteration,
// gradient-norm clipping. Aborts with NumericError if the loss goes
// non-finite.
TrainResult train(const Dataset& d, const TrainConfig& cfg);

// Binary format: magic "TRNN1", dims (alphabet, d_e, H, C) as LE int32,
// parameters as LE float64 in field order.
void save_model(const RnnModel& m, const std::string& path);
RnnModel load_model(const std::string& path);

}  // namespace trajloc
