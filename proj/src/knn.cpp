#include "learners_impl.hpp"

#include <algorithm>
#include <cmath>

namespace fdw::detail {

namespace {

struct Posting {
    std::size_t row;
    double value;
};

// Cosine similarity through an inverted index over the stored rows.
class KnnModel final : public Model {
public:
    KnnModel(std::size_t k, const SparseMatrix& X, std::span<const int> y)
        : k_(std::min(k, X.rows())), n_features_(X.cols()), labels_(y.begin(), y.end()), postings_(X.cols()) {
        for (std::size_t i = 0; i < X.rows(); ++i) {
            const double norm = std::sqrt(X.row(i).squared_norm());
            if (norm == 0.0) continue;
            for (const auto& e : X.row(i).entries) postings_[static_cast<std::size_t>(e.col)].push_back({i, e.value / norm});
        }
    }

    ClassifierKind kind() const override { return ClassifierKind::Knn; }
    std::size_t n_features() const override { return n_features_; }

protected:
    Prediction predict_checked(const SparseMatrix& X) const override {
        Prediction p;
        std::vector<double> sim(labels_.size());
        std::vector<std::size_t> idx(labels_.size());
        for (std::size_t q = 0; q < X.rows(); ++q) {
            std::fill(sim.begin(), sim.end(), 0.0);
            const double norm = std::sqrt(X.row(q).squared_norm());
            if (norm > 0.0) {
                for (const auto& e : X.row(q).entries) {
                    for (const auto& post : postings_[static_cast<std::size_t>(e.col)]) sim[post.row] += e.value / norm * post.value;
                }
            }
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k_), idx.end(),
                              [&](std::size_t a, std::size_t b) { return sim[a] > sim[b] || (sim[a] == sim[b] && a < b); });
            double votes = 0.0;
            for (std::size_t i = 0; i < k_; ++i) votes += labels_[idx[i]];
            const double frac = votes / static_cast<double>(k_);
            p.scores.push_back(frac);
            p.labels.push_back(frac > 0.5 ? 1 : 0);
        }
        return p;
    }

private:
    std::size_t k_;
    std::size_t n_features_;
    std::vector<int> labels_;
    std::vector<std::vector<Posting>> postings_;
};

}  // namespace

std::unique_ptr<Model> fit_knn(const KnnParams& p, const SparseMatrix& X, std::span<const int> y) {
    return std::make_unique<KnnModel>(static_cast<std::size_t>(p.k), X, y);
}

}  // namespace fdw::detail
