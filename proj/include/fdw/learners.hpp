#pragma once

#include "fdw/sparse.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fdw {

enum class ClassifierKind { Mnb, SvmSgd, LrSgd, Knn, Mlp };

std::string_view classifier_name(ClassifierKind kind);
/// Throws ArgumentError for unknown names and for registered but unavailable
/// kinds (tree ensembles, batch LR solvers, CNNs).
ClassifierKind parse_classifier(std::string_view name);
/// "all" or a comma-separated list, in canonical order without duplicates.
std::vector<ClassifierKind> select_classifiers(std::string_view list);
const std::vector<ClassifierKind>& all_classifiers();
bool is_neural(ClassifierKind kind);

struct LinearParams {
    double lr = 0.01;
    double decay = 1e-4;  // lr / (1 + decay * step)
    double l2 = 1e-4;
    int epochs = 10;
    int batch = 32;  // 0 = full batch
};

struct KnnParams {
    int k = 5;
};

struct MnbParams {
    double alpha = 1.0;
};

enum class MlpInit { Glorot, Zero };

struct MlpParams {
    int hidden = 100;
    double dropout = 0.5;
    double momentum = 0.9;
    double lr = 0.01;
    double l2 = 0.0;
    int epochs = 20;
    int batch = 32;
    MlpInit init = MlpInit::Glorot;
};

struct Hyperparameters {
    LinearParams svm_sgd;
    LinearParams lr_sgd;
    KnnParams knn;
    MnbParams mnb;
    MlpParams mlp;

    /// key is "kind.param", e.g. "mlp.hidden"; throws ArgumentError on
    /// unknown keys or out-of-range values.
    void set(std::string_view key, std::string_view value);
    /// "kind.param=value" as given to --hp.
    void set_assignment(std::string_view assignment);
    /// Every parameter as (key, value) in a fixed order.
    std::vector<std::pair<std::string, std::string>> entries() const;
    void validate() const;
};

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::SvmSgd;
    Hyperparameters hp;
    std::uint64_t seed = 0;
};

struct Prediction {
    std::vector<int> labels;
    std::vector<double> scores;  // margin, log-odds or vote fraction
};

struct TrainingInfo {
    int epochs_run = 0;
    double final_loss = 0.0;
    std::vector<double> loss_history;  // one entry per epoch
};

class Model {
public:
    virtual ~Model() = default;
    virtual ClassifierKind kind() const = 0;
    virtual std::size_t n_features() const = 0;
    /// Throws ArgumentError when X has a different column count than at fit time.
    Prediction predict(const SparseMatrix& X) const;
    const TrainingInfo& info() const { return info_; }

protected:
    virtual Prediction predict_checked(const SparseMatrix& X) const = 0;
    TrainingInfo info_;
};

/// Throws ArgumentError on shape mismatch and TrainingError on a single class
/// or a non-finite loss.
std::unique_ptr<Model> fit(const ClassifierSpec& spec, const SparseMatrix& X, std::span<const int> y);

// Linear models

struct LinearGradient {
    std::vector<double> w;
    double b = 0.0;
    double loss = 0.0;
};

/// Mean log loss and its gradient for logit w.x + b (no penalty term).
LinearGradient log_loss_gradient(std::span<const double> w, double b, const SparseMatrix& X, std::span<const int> y);

// MLP

/// input -> hidden (ReLU) -> one sigmoid output. w1 is n_features x hidden, row-major.
struct MlpNetwork {
    std::size_t n_features = 0;
    std::size_t hidden = 0;
    std::vector<double> w1;
    std::vector<double> b1;
    std::vector<double> w2;
    double b2 = 0.0;

    static MlpNetwork init(std::size_t n_features, const MlpParams& params, std::uint64_t seed);

    std::size_t parameter_count() const { return w1.size() + b1.size() + w2.size() + 1; }
    /// Flat view order: w1, b1, w2, b2.
    double& parameter(std::size_t i);

    double logit(SparseRow x) const;

    /// Mean cross-entropy over the given rows plus l2/2 * |w|^2 on the weights;
    /// fills grad (same layout as the parameters) when non-null. A non-empty
    /// drop mask (rows x hidden, 1 = keep) applies inverted dropout.
    double loss(const SparseMatrix& X, std::span<const int> y, std::span<const std::size_t> rows, double l2,
                std::vector<double>* grad, std::span<const double> keep_scale = {}) const;
};

/// Largest relative difference between analytic and central-difference
/// (h = 1e-5) gradients over every parameter, with dropout disabled. The
/// denominator is max(|analytic|, |numeric|, 1e-6). Parameters whose
/// perturbation moves some hidden unit across the ReLU kink are skipped.
double mlp_gradient_check(const ClassifierSpec& spec, const SparseMatrix& X, std::span<const int> y);

}  // namespace fdw
