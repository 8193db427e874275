#include "learners_impl.hpp"

#include "fdw/error.hpp"
#include "fdw/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fdw {

MlpNetwork MlpNetwork::init(std::size_t n_features, const MlpParams& params, std::uint64_t seed) {
    MlpNetwork net;
    net.n_features = n_features;
    net.hidden = static_cast<std::size_t>(params.hidden);
    net.w1.assign(n_features * net.hidden, 0.0);
    net.b1.assign(net.hidden, 0.0);
    net.w2.assign(net.hidden, 0.0);
    if (params.init == MlpInit::Glorot) {
        Rng rng(seed);
        const double lim1 = std::sqrt(6.0 / static_cast<double>(n_features + net.hidden));
        const double lim2 = std::sqrt(6.0 / static_cast<double>(net.hidden + 1));
        for (double& v : net.w1) v = (2.0 * rng.uniform01() - 1.0) * lim1;
        for (double& v : net.w2) v = (2.0 * rng.uniform01() - 1.0) * lim2;
    }
    return net;
}

double& MlpNetwork::parameter(std::size_t i) {
    if (i < w1.size()) return w1[i];
    i -= w1.size();
    if (i < b1.size()) return b1[i];
    i -= b1.size();
    if (i < w2.size()) return w2[i];
    if (i == w2.size()) return b2;
    throw ArgumentError("MLP parameter index out of range");
}

double MlpNetwork::logit(SparseRow x) const {
    std::vector<double> z(b1);
    for (const auto& e : x.entries) {
        const double* row = &w1[static_cast<std::size_t>(e.col) * hidden];
        for (std::size_t j = 0; j < hidden; ++j) z[j] += e.value * row[j];
    }
    double out = b2;
    for (std::size_t j = 0; j < hidden; ++j) out += w2[j] * std::max(0.0, z[j]);
    return out;
}

double MlpNetwork::loss(const SparseMatrix& X, std::span<const int> y, std::span<const std::size_t> rows, double l2,
                        std::vector<double>* grad, std::span<const double> keep_scale) const {
    const std::size_t H = hidden;
    const std::size_t off_b1 = w1.size();
    const std::size_t off_w2 = off_b1 + H;
    const std::size_t off_b2 = off_w2 + H;
    if (grad) grad->assign(parameter_count(), 0.0);
    const double scale = 1.0 / static_cast<double>(rows.size());

    std::vector<double> z(H), a(H);
    double total = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto x = X.row(rows[r]);
        std::copy(b1.begin(), b1.end(), z.begin());
        for (const auto& e : x.entries) {
            const double* row = &w1[static_cast<std::size_t>(e.col) * H];
            for (std::size_t j = 0; j < H; ++j) z[j] += e.value * row[j];
        }
        double out = b2;
        for (std::size_t j = 0; j < H; ++j) {
            a[j] = z[j] > 0.0 ? z[j] : 0.0;
            if (!keep_scale.empty()) a[j] *= keep_scale[r * H + j];
            out += w2[j] * a[j];
        }
        const int label = y[rows[r]];
        total += detail::log_loss(out, label);
        if (!grad) continue;

        auto& g = *grad;
        const double d = (detail::sigmoid(out) - (label == 1 ? 1.0 : 0.0)) * scale;
        g[off_b2] += d;
        for (std::size_t j = 0; j < H; ++j) {
            g[off_w2 + j] += d * a[j];
            double da = z[j] > 0.0 ? d * w2[j] : 0.0;
            if (!keep_scale.empty()) da *= keep_scale[r * H + j];
            z[j] = da;  // reuse as the hidden delta
            g[off_b1 + j] += da;
        }
        for (const auto& e : x.entries) {
            double* grow = &g[static_cast<std::size_t>(e.col) * H];
            for (std::size_t j = 0; j < H; ++j) grow[j] += e.value * z[j];
        }
    }
    double value = total * scale;
    if (l2 > 0.0) {
        double sq = 0.0;
        for (double v : w1) sq += v * v;
        for (double v : w2) sq += v * v;
        value += 0.5 * l2 * sq;
        if (grad) {
            for (std::size_t i = 0; i < w1.size(); ++i) (*grad)[i] += l2 * w1[i];
            for (std::size_t j = 0; j < H; ++j) (*grad)[off_w2 + j] += l2 * w2[j];
        }
    }
    return value;
}

namespace detail {

namespace {

class MlpModel final : public Model {
public:
    MlpModel(MlpNetwork net, TrainingInfo info) : net_(std::move(net)) { info_ = std::move(info); }

    ClassifierKind kind() const override { return ClassifierKind::Mlp; }
    std::size_t n_features() const override { return net_.n_features; }

protected:
    Prediction predict_checked(const SparseMatrix& X) const override {
        Prediction p;
        for (std::size_t i = 0; i < X.rows(); ++i) {
            const double prob = sigmoid(net_.logit(X.row(i)));
            p.scores.push_back(prob);
            p.labels.push_back(prob > 0.5 ? 1 : 0);
        }
        return p;
    }

private:
    MlpNetwork net_;
};

}  // namespace

std::unique_ptr<Model> fit_mlp(const MlpParams& p, std::uint64_t seed, const SparseMatrix& X, std::span<const int> y) {
    MlpNetwork net = MlpNetwork::init(X.cols(), p, seed);
    Rng rng(mix_seed(seed, "mlp.train"));
    const std::size_t n = X.rows();
    const std::size_t H = net.hidden;
    const std::size_t batch = p.batch == 0 ? n : std::min(n, static_cast<std::size_t>(p.batch));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> velocity(net.parameter_count(), 0.0);
    std::vector<double> grad;
    std::vector<double> keep;
    const double keep_p = 1.0 - p.dropout;

    TrainingInfo info;
    for (int epoch = 1; epoch <= p.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t end = std::min(n, start + batch);
            std::span<const std::size_t> rows(order.data() + start, end - start);
            keep.clear();
            if (p.dropout > 0.0) {
                keep.resize(rows.size() * H);
                for (double& k : keep) k = rng.uniform01() < keep_p ? 1.0 / keep_p : 0.0;
            }
            const double l = net.loss(X, y, rows, p.l2, &grad, keep);
            epoch_loss += l * static_cast<double>(rows.size());
            std::size_t i = 0;
            auto step = [&](double& theta) {
                velocity[i] = p.momentum * velocity[i] - p.lr * grad[i];
                theta += velocity[i];
                ++i;
            };
            for (double& v : net.w1) step(v);
            for (double& v : net.b1) step(v);
            for (double& v : net.w2) step(v);
            step(net.b2);
        }
        epoch_loss /= static_cast<double>(n);
        check_finite_loss(ClassifierKind::Mlp, epoch, epoch_loss);
        info.loss_history.push_back(epoch_loss);
    }
    info.epochs_run = p.epochs;
    info.final_loss = info.loss_history.back();
    return std::make_unique<MlpModel>(std::move(net), std::move(info));
}

}  // namespace detail

namespace {

// Which hidden units are active (z > 0) for each row.
std::vector<bool> active_pattern(const MlpNetwork& net, const SparseMatrix& X) {
    std::vector<bool> out;
    out.reserve(X.rows() * net.hidden);
    std::vector<double> z(net.hidden);
    for (std::size_t r = 0; r < X.rows(); ++r) {
        std::copy(net.b1.begin(), net.b1.end(), z.begin());
        for (const auto& e : X.row(r).entries) {
            const double* row = &net.w1[static_cast<std::size_t>(e.col) * net.hidden];
            for (std::size_t j = 0; j < net.hidden; ++j) z[j] += e.value * row[j];
        }
        for (double v : z) out.push_back(v > 0.0);
    }
    return out;
}

}  // namespace

double mlp_gradient_check(const ClassifierSpec& spec, const SparseMatrix& X, std::span<const int> y) {
    if (X.rows() != y.size() || X.rows() == 0) throw ArgumentError("gradient check needs matching, non-empty X and y");
    MlpNetwork net = MlpNetwork::init(X.cols(), spec.hp.mlp, spec.seed);
    std::vector<std::size_t> rows(X.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    const double l2 = spec.hp.mlp.l2;
    std::vector<double> analytic;
    net.loss(X, y, rows, l2, &analytic);
    const auto pattern = active_pattern(net, X);

    constexpr double h = 1e-5;
    double worst = 0.0;
    for (std::size_t i = 0; i < net.parameter_count(); ++i) {
        double& theta = net.parameter(i);
        const double saved = theta;
        theta = saved + h;
        const double up = net.loss(X, y, rows, l2, nullptr);
        bool kink = active_pattern(net, X) != pattern;
        theta = saved - h;
        const double down = net.loss(X, y, rows, l2, nullptr);
        kink = kink || active_pattern(net, X) != pattern;
        theta = saved;
        // A step across a ReLU kink has no meaningful central difference.
        if (kink) continue;
        const double numeric = (up - down) / (2 * h);
        const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-6});
        worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
    }
    return worst;
}

}  // namespace fdw
