#include "trajloc/rnn.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

namespace trajloc {

void TrainConfig::validate() const {
    if (hidden < 1) throw DataError("hidden size must be >= 1");
    if (embed_dim < 1) throw DataError("embedding dimension must be >= 1");
    if (learning_rate < 0.0) throw DataError("learning rate must be >= 0");
    if (epochs_multiplier < 0.0) throw DataError("epochs multiplier must be >= 0");
    if (init_scale < 0.0) throw DataError("init scale must be >= 0");
}

bool RnnModel::finite() const {
    return embed.allFinite() && w_xh.allFinite() && w_hh.allFinite() &&
           b_h.allFinite() && w_hy.allFinite() && b_y.allFinite();
}

RnnGradients RnnGradients::zeros_like(const RnnModel& m) {
    RnnGradients g;
    g.embed = Eigen::MatrixXd::Zero(m.embed.rows(), m.embed.cols());
    g.w_xh = Eigen::MatrixXd::Zero(m.w_xh.rows(), m.w_xh.cols());
    g.w_hh = Eigen::MatrixXd::Zero(m.w_hh.rows(), m.w_hh.cols());
    g.w_hy = Eigen::MatrixXd::Zero(m.w_hy.rows(), m.w_hy.cols());
    g.b_h = Eigen::VectorXd::Zero(m.b_h.size());
    g.b_y = Eigen::VectorXd::Zero(m.b_y.size());
    return g;
}

double RnnGradients::squared_norm() const {
    return embed.squaredNorm() + w_xh.squaredNorm() + w_hh.squaredNorm() +
           w_hy.squaredNorm() + b_h.squaredNorm() + b_y.squaredNorm();
}

void RnnGradients::scale(double s) {
    embed *= s;
    w_xh *= s;
    w_hh *= s;
    w_hy *= s;
    b_h *= s;
    b_y *= s;
}

RnnModel init_model(const TrainConfig& cfg, int num_classes) {
    cfg.validate();
    if (num_classes < 2) throw DataError("need at least 2 output classes");
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uni(-cfg.init_scale, cfg.init_scale);
    auto fill = [&](Eigen::MatrixXd& m, int rows, int cols) {
        m.resize(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) m(r, c) = uni(rng);
    };
    RnnModel m;
    fill(m.embed, kAngleBins, cfg.embed_dim);
    fill(m.w_xh, cfg.hidden, cfg.embed_dim);
    fill(m.w_hh, cfg.hidden, cfg.hidden);
    fill(m.w_hy, num_classes, cfg.hidden);
    m.b_h = Eigen::VectorXd::Zero(cfg.hidden);
    m.b_y = Eigen::VectorXd::Zero(num_classes);
    return m;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> rnn_step(const RnnModel& m, AngleBin bin,
                                                     const Eigen::VectorXd& h_prev) {
    if (bin < 0 || bin >= kAngleBins)
        throw DataError("input bin " + std::to_string(bin) + " out of [0, 20)");
    Eigen::VectorXd pre = m.w_xh * m.embed.row(bin).transpose() + m.w_hh * h_prev + m.b_h;
    Eigen::VectorXd h = pre.array().tanh();
    Eigen::VectorXd logits = m.w_hy * h + m.b_y;
    return {std::move(h), std::move(logits)};
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
    double mx = logits.maxCoeff();
    Eigen::VectorXd e = (logits.array() - mx).exp();
    return e / e.sum();
}

double nll_loss(const Eigen::VectorXd& p, EdgeId label) {
    if (label < 0 || label >= p.size())
        throw DataError("label " + std::to_string(label) + " out of range");
    double v = p(label);
    if (v < 1e-12) v = 1e-12;
    return -std::log(v);
}

ForwardTrace forward(const RnnModel& m, const std::vector<AngleBin>& inputs) {
    if (inputs.empty()) throw DataError("cannot run forward pass on empty sequence");
    ForwardTrace tr;
    tr.hidden.reserve(inputs.size());
    tr.logits.reserve(inputs.size());
    tr.probs.reserve(inputs.size());
    Eigen::VectorXd h = Eigen::VectorXd::Zero(m.hidden());
    for (AngleBin bin : inputs) {
        auto [h_next, logits] = rnn_step(m, bin, h);
        h = h_next;
        tr.hidden.push_back(std::move(h_next));
        tr.probs.push_back(softmax(logits));
        tr.logits.push_back(std::move(logits));
    }
    return tr;
}

RnnGradients backward_bptt(const RnnModel& m, const std::vector<AngleBin>& inputs,
                           const std::vector<EdgeId>& labels) {
    if (inputs.size() != labels.size())
        throw DataError("input/label length mismatch in backward pass");
    const auto T = inputs.size();
    ForwardTrace tr = forward(m, inputs);

    RnnGradients g = RnnGradients::zeros_like(m);
    const double inv_t = 1.0 / static_cast<double>(T);
    Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(m.hidden());

    for (std::size_t i = T; i-- > 0;) {
        // d mean-NLL / d logits_t = (p_t - onehot(label_t)) / T
        Eigen::VectorXd dlogits = tr.probs[i] * inv_t;
        dlogits(labels[i]) -= inv_t;

        g.w_hy.noalias() += dlogits * tr.hidden[i].transpose();
        g.b_y += dlogits;

        Eigen::VectorXd dh = m.w_hy.transpose() * dlogits + dh_next;
        // through tanh: dpre = dh * (1 - h^2)
        Eigen::VectorXd dpre =
            (dh.array() * (1.0 - tr.hidden[i].array().square())).matrix();

        const Eigen::VectorXd h_prev =
            i == 0 ? Eigen::VectorXd::Zero(m.hidden()) : tr.hidden[i - 1];
        g.w_xh.noalias() += dpre * m.embed.row(inputs[i]);
        g.w_hh.noalias() += dpre * h_prev.transpose();
        g.b_h += dpre;
        g.embed.row(inputs[i]).noalias() += (m.w_xh.transpose() * dpre).transpose();

        dh_next.noalias() = m.w_hh.transpose() * dpre;
    }
    return g;
}

double sequence_loss(const RnnModel& m, const EncodedTrajectory& t) {
    ForwardTrace tr = forward(m, t.inputs);
    double loss = 0.0;
    for (std::size_t i = 0; i < t.labels.size(); ++i)
        loss += nll_loss(tr.probs[i], t.labels[i]);
    return loss / static_cast<double>(t.labels.size());
}

TrainResult train(const Dataset& d, const TrainConfig& cfg) {
    cfg.validate();
    if (d.records.empty()) throw DataError("cannot train on empty dataset");

    TrainResult res;
    res.model = init_model(cfg, d.num_classes);
    const auto iterations = static_cast<std::size_t>(
        std::llround(cfg.epochs_multiplier * static_cast<double>(d.records.size())));
    res.loss_curve.reserve(iterations);

    std::mt19937_64 rng(cfg.seed + 1);  // decoupled from init stream
    std::uniform_int_distribution<std::size_t> pick(0, d.records.size() - 1);

    for (std::size_t it = 0; it < iterations; ++it) {
        const EncodedTrajectory& rec = d.records[pick(rng)];
        double loss = sequence_loss(res.model, rec);
        if (!std::isfinite(loss))
            throw NumericError("training diverged (non-finite loss) at iteration " +
                               std::to_string(it));
        RnnGradients g = backward_bptt(res.model, rec.inputs, rec.labels);

        double norm = std::sqrt(g.squared_norm());
        if (norm > cfg.clip_norm && norm > 0.0) g.scale(cfg.clip_norm / norm);

        const double lr = cfg.learning_rate;
        res.model.embed -= lr * g.embed;
        res.model.w_xh -= lr * g.w_xh;
        res.model.w_hh -= lr * g.w_hh;
        res.model.b_h -= lr * g.b_h;
        res.model.w_hy -= lr * g.w_hy;
        res.model.b_y -= lr * g.b_y;

        res.loss_curve.push_back(loss);
    }
    if (!res.model.finite())
        throw NumericError("training produced non-finite parameters");
    return res;
}

namespace {

constexpr char kMagic[5] = {'T', 'R', 'N', 'N', '1'};

void write_i32(std::ostream& out, std::int32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::int32_t read_i32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw DataError("truncated model file");
    std::int32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::int32_t>(b[i]) << (8 * i);
    return v;
}

void write_f64s(std::ostream& out, const double* data, std::size_t n) {
    static_assert(sizeof(double) == 8);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, &data[i], 8);
        unsigned char b[8];
        for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>((bits >> (8 * k)) & 0xff);
        out.write(reinterpret_cast<const char*>(b), 8);
    }
}

void read_f64s(std::istream& in, double* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        unsigned char b[8];
        in.read(reinterpret_cast<char*>(b), 8);
        if (!in) throw DataError("truncated model file");
        std::uint64_t bits = 0;
        for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(b[k]) << (8 * k);
        std::memcpy(&data[i], &bits, 8);
    }
}

}  // namespace

void save_model(const RnnModel& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open model file for writing: " + path);
    out.write(kMagic, sizeof(kMagic));
    write_i32(out, kAngleBins);
    write_i32(out, m.embed_dim());
    write_i32(out, m.hidden());
    write_i32(out, m.classes());
    for (const Eigen::MatrixXd* mat : {&m.embed, &m.w_xh, &m.w_hh, &m.w_hy})
        write_f64s(out, mat->data(), static_cast<std::size_t>(mat->size()));
    write_f64s(out, m.b_h.data(), static_cast<std::size_t>(m.b_h.size()));
    write_f64s(out, m.b_y.data(), static_cast<std::size_t>(m.b_y.size()));
    if (!out) throw DataError("failed writing model file: " + path);
}

RnnModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    char magic[5];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw DataError("bad model file magic (wrong file or version): " + path);
    std::int32_t alphabet = read_i32(in);
    std::int32_t d_e = read_i32(in);
    std::int32_t h = read_i32(in);
    std::int32_t c = read_i32(in);
    if (alphabet != kAngleBins)
        throw DataError("model alphabet " + std::to_string(alphabet) + " unsupported");
    if (d_e < 1 || h < 1 || c < 2) throw DataError("model file has invalid dimensions");
    RnnModel m;
    m.embed.resize(alphabet, d_e);
    m.w_xh.resize(h, d_e);
    m.w_hh.resize(h, h);
    m.w_hy.resize(c, h);
    m.b_h.resize(h);
    m.b_y.resize(c);
    for (Eigen::MatrixXd* mat : {&m.embed, &m.w_xh, &m.w_hh, &m.w_hy})
        read_f64s(in, mat->data(), static_cast<std::size_t>(mat->size()));
    read_f64s(in, m.b_h.data(), static_cast<std::size_t>(m.b_h.size()));
    read_f64s(in, m.b_y.data(), static_cast<std::size_t>(m.b_y.size()));
    return m;
}

}  // namespace trajloc
