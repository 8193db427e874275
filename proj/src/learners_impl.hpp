#pragma once

#include "fdw/learners.hpp"

#include <cmath>
#include <string>

namespace fdw::detail {

std::unique_ptr<Model> fit_mnb(const MnbParams& p, const SparseMatrix& X, std::span<const int> y);
std::unique_ptr<Model> fit_linear(ClassifierKind kind, const LinearParams& p, std::uint64_t seed, const SparseMatrix& X,
                                  std::span<const int> y);
std::unique_ptr<Model> fit_knn(const KnnParams& p, const SparseMatrix& X, std::span<const int> y);
std::unique_ptr<Model> fit_mlp(const MlpParams& p, std::uint64_t seed, const SparseMatrix& X, std::span<const int> y);

void check_finite_loss(ClassifierKind kind, int epoch, double loss);

// log(1 + exp(z)) without overflow.
inline double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

inline double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

// Binary cross-entropy of logit z against a 0/1 label.
inline double log_loss(double z, int y) { return softplus(z) - (y == 1 ? z : 0.0); }

}  // namespace fdw::detail
