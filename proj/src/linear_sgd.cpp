#include "learners_impl.hpp"

#include "fdw/random.hpp"

#include <algorithm>
#include <numeric>

namespace fdw {

namespace detail {

namespace {

class LinearModel final : public Model {
public:
    LinearModel(ClassifierKind kind, std::vector<double> w, double b, TrainingInfo info)
        : kind_(kind), w_(std::move(w)), b_(b) {
        info_ = std::move(info);
    }

    ClassifierKind kind() const override { return kind_; }
    std::size_t n_features() const override { return w_.size(); }

protected:
    Prediction predict_checked(const SparseMatrix& X) const override {
        Prediction p;
        for (std::size_t i = 0; i < X.rows(); ++i) {
            double s = b_;
            for (const auto& e : X.row(i).entries) s += e.value * w_[static_cast<std::size_t>(e.col)];
            p.scores.push_back(s);
            p.labels.push_back(s > 0 ? 1 : 0);
        }
        return p;
    }

private:
    ClassifierKind kind_;
    std::vector<double> w_;
    double b_;
};

double margin(const std::vector<double>& w, double b, SparseRow x) {
    double s = b;
    for (const auto& e : x.entries) s += e.value * w[static_cast<std::size_t>(e.col)];
    return s;
}

// Per-example loss and the derivative of the loss with respect to the margin.
std::pair<double, double> point_loss(ClassifierKind kind, double z, int y) {
    if (kind == ClassifierKind::SvmSgd) {
        const double t = y == 1 ? 1.0 : -1.0;
        if (t * z < 1.0) return {1.0 - t * z, -t};
        return {0.0, 0.0};
    }
    return {log_loss(z, y), sigmoid(z) - (y == 1 ? 1.0 : 0.0)};
}

double objective(ClassifierKind kind, const std::vector<double>& w, double b, double l2, const SparseMatrix& X,
                 std::span<const int> y) {
    double loss = 0.0;
    for (std::size_t i = 0; i < X.rows(); ++i) loss += point_loss(kind, margin(w, b, X.row(i)), y[i]).first;
    double sq = 0.0;
    for (double v : w) sq += v * v;
    return loss / static_cast<double>(X.rows()) + 0.5 * l2 * sq;
}

}  // namespace

// The learning rate is per example, as in classic per-sample SGD: a
// mini-batch applies the sum of its examples' gradients in one step.
std::unique_ptr<Model> fit_linear(ClassifierKind kind, const LinearParams& p, std::uint64_t seed, const SparseMatrix& X,
                                  std::span<const int> y) {
    const std::size_t n = X.rows();
    std::vector<double> w(X.cols(), 0.0);
    double b = 0.0;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t batch = p.batch == 0 ? n : static_cast<std::size_t>(p.batch);
    const bool full_batch = batch >= n;

    Rng rng(seed);
    TrainingInfo info;
    std::vector<double> grad(X.cols(), 0.0);
    std::vector<int> touched;
    std::size_t step = 0;
    for (int epoch = 1; epoch <= p.epochs; ++epoch) {
        if (!full_batch) rng.shuffle(std::span<std::size_t>(order));
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t end = std::min(n, start + batch);
            double gb = 0.0;
            touched.clear();
            for (std::size_t k = start; k < end; ++k) {
                const auto x = X.row(order[k]);
                const double d = point_loss(kind, margin(w, b, x), y[order[k]]).second;
                if (d == 0.0) continue;
                gb += d;
                for (const auto& e : x.entries) {
                    auto c = static_cast<std::size_t>(e.col);
                    if (grad[c] == 0.0) touched.push_back(e.col);
                    grad[c] += d * e.value;
                }
            }
            const double eta = p.lr / (1.0 + p.decay * static_cast<double>(step));
            ++step;
            if (p.l2 > 0) {
                const double shrink = std::max(0.0, 1.0 - eta * p.l2 * static_cast<double>(end - start));
                for (double& v : w) v *= shrink;
            }
            for (int c : touched) {
                w[static_cast<std::size_t>(c)] -= eta * grad[static_cast<std::size_t>(c)];
                grad[static_cast<std::size_t>(c)] = 0.0;
            }
            b -= eta * gb;
        }
        const double obj = objective(kind, w, b, p.l2, X, y);
        check_finite_loss(kind, epoch, obj);
        info.loss_history.push_back(obj);
    }
    info.epochs_run = p.epochs;
    info.final_loss = info.loss_history.back();
    return std::make_unique<LinearModel>(kind, std::move(w), b, std::move(info));
}

}  // namespace detail

LinearGradient log_loss_gradient(std::span<const double> w, double b, const SparseMatrix& X, std::span<const int> y) {
    LinearGradient g;
    g.w.assign(w.size(), 0.0);
    const double scale = 1.0 / static_cast<double>(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) {
        double z = b;
        for (const auto& e : X.row(i).entries) z += e.value * w[static_cast<std::size_t>(e.col)];
        g.loss += detail::log_loss(z, y[i]) * scale;
        const double d = (detail::sigmoid(z) - (y[i] == 1 ? 1.0 : 0.0)) * scale;
        g.b += d;
        for (const auto& e : X.row(i).entries) g.w[static_cast<std::size_t>(e.col)] += d * e.value;
    }
    return g;
}

}  // namespace fdw
