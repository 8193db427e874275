#include "learners_impl.hpp"

#include "fdw/error.hpp"

#include <cmath>
#include <string>

namespace fdw::detail {

namespace {

class MnbModel final : public Model {
public:
    MnbModel(std::vector<double> delta, double prior_delta) : delta_(std::move(delta)), prior_delta_(prior_delta) {}

    ClassifierKind kind() const override { return ClassifierKind::Mnb; }
    std::size_t n_features() const override { return delta_.size(); }

protected:
    Prediction predict_checked(const SparseMatrix& X) const override {
        Prediction p;
        for (std::size_t i = 0; i < X.rows(); ++i) {
            double s = prior_delta_;
            for (const auto& e : X.row(i).entries) s += e.value * delta_[static_cast<std::size_t>(e.col)];
            p.scores.push_back(s);
            p.labels.push_back(s > 0 ? 1 : 0);
        }
        return p;
    }

private:
    std::vector<double> delta_;  // per-feature log-likelihood ratio, positive minus negative
    double prior_delta_;
};

}  // namespace

std::unique_ptr<Model> fit_mnb(const MnbParams& p, const SparseMatrix& X, std::span<const int> y) {
    const std::size_t V = X.cols();
    std::vector<double> mass[2] = {std::vector<double>(V, 0.0), std::vector<double>(V, 0.0)};
    double total[2] = {0.0, 0.0};
    double n[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const int c = y[i];
        n[c] += 1.0;
        for (const auto& e : X.row(i).entries) {
            if (e.value < 0.0) throw ArgumentError("mnb: features must be non-negative, row " + std::to_string(i));
            mass[c][static_cast<std::size_t>(e.col)] += e.value;
            total[c] += e.value;
        }
    }
    const double denom0 = total[0] + p.alpha * static_cast<double>(V);
    const double denom1 = total[1] + p.alpha * static_cast<double>(V);
    std::vector<double> delta(V);
    for (std::size_t f = 0; f < V; ++f) {
        delta[f] = std::log((mass[1][f] + p.alpha) / denom1) - std::log((mass[0][f] + p.alpha) / denom0);
    }
    auto model = std::make_unique<MnbModel>(std::move(delta), std::log(n[1]) - std::log(n[0]));
    return model;
}

}  // namespace fdw::detail
