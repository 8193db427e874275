#include "fdw/learners.hpp"

#include "fdw/error.hpp"
#include "learners_impl.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace fdw {

namespace {

struct KindName {
    ClassifierKind kind;
    std::string_view name;
};

constexpr KindName kKinds[] = {
    {ClassifierKind::Mnb, "mnb"},       {ClassifierKind::SvmSgd, "svm_sgd"}, {ClassifierKind::LrSgd, "lr_sgd"},
    {ClassifierKind::Knn, "knn"},       {ClassifierKind::Mlp, "mlp"},
};

// Known from the reference experiments but not implemented here.
constexpr std::string_view kUnavailable[] = {"random_forest", "adaboost", "xgboost", "newton_lr",
                                             "lbfgs_lr",      "linear_svm", "cnn1",   "cnn2"};

std::string valid_names() {
    std::string out;
    for (const auto& k : kKinds) {
        if (!out.empty()) out += ",";
        out += k.name;
    }
    return out;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

double parse_double(std::string_view key, std::string_view value) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v)) {
        throw ArgumentError("hyperparameter " + std::string(key) + ": '" + std::string(value) + "' is not a number");
    }
    return v;
}

int parse_int(std::string_view key, std::string_view value) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ArgumentError("hyperparameter " + std::string(key) + ": '" + std::string(value) + "' is not an integer");
    }
    return v;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void validate_linear(std::string_view kind, const LinearParams& p) {
    auto bad = [&](const char* what) { throw ArgumentError(std::string(kind) + "." + what + " out of range"); };
    if (!(p.lr > 0)) bad("lr");
    if (p.decay < 0) bad("decay");
    if (p.l2 < 0) bad("l2");
    if (p.epochs < 1) bad("epochs");
    if (p.batch < 0) bad("batch");
}

}  // namespace

std::string_view classifier_name(ClassifierKind kind) {
    for (const auto& k : kKinds) {
        if (k.kind == kind) return k.name;
    }
    return "?";
}

ClassifierKind parse_classifier(std::string_view name) {
    const std::string n = lower(name);
    for (const auto& k : kKinds) {
        if (k.name == n) return k.kind;
    }
    for (auto u : kUnavailable) {
        if (u == n) {
            throw ArgumentError("classifier '" + n + "' is not available in this build; valid names: " + valid_names());
        }
    }
    throw ArgumentError("unknown classifier '" + std::string(name) + "'; valid names: " + valid_names());
}

std::vector<ClassifierKind> select_classifiers(std::string_view list) {
    if (lower(list) == "all") return all_classifiers();
    std::vector<bool> chosen(std::size(kKinds), false);
    std::size_t start = 0;
    while (start <= list.size()) {
        auto comma = list.find(',', start);
        auto item = list.substr(start, comma - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) chosen[static_cast<std::size_t>(parse_classifier(item))] = true;
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    std::vector<ClassifierKind> out;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        if (chosen[i]) out.push_back(static_cast<ClassifierKind>(i));
    }
    if (out.empty()) throw ArgumentError("empty classifier selection");
    return out;
}

const std::vector<ClassifierKind>& all_classifiers() {
    static const std::vector<ClassifierKind> all = [] {
        std::vector<ClassifierKind> v;
        for (const auto& k : kKinds) v.push_back(k.kind);
        return v;
    }();
    return all;
}

bool is_neural(ClassifierKind kind) { return kind == ClassifierKind::Mlp; }

void Hyperparameters::set(std::string_view key, std::string_view value) {
    auto dot = key.find('.');
    if (dot == std::string_view::npos) throw ArgumentError("hyperparameter key must be kind.param, got '" + std::string(key) + "'");
    const std::string kind = lower(key.substr(0, dot));
    const std::string param = lower(key.substr(dot + 1));
    auto unknown = [&]() -> void {
        throw ArgumentError("unknown hyperparameter '" + std::string(key) + "'");
    };

    if (kind == "svm_sgd" || kind == "lr_sgd") {
        LinearParams& p = kind == "svm_sgd" ? svm_sgd : lr_sgd;
        if (param == "lr") p.lr = parse_double(key, value);
        else if (param == "decay") p.decay = parse_double(key, value);
        else if (param == "l2") p.l2 = parse_double(key, value);
        else if (param == "epochs") p.epochs = parse_int(key, value);
        else if (param == "batch") p.batch = parse_int(key, value);
        else unknown();
    } else if (kind == "knn") {
        if (param == "k") knn.k = parse_int(key, value);
        else unknown();
    } else if (kind == "mnb") {
        if (param == "alpha") mnb.alpha = parse_double(key, value);
        else unknown();
    } else if (kind == "mlp") {
        if (param == "hidden") mlp.hidden = parse_int(key, value);
        else if (param == "dropout") mlp.dropout = parse_double(key, value);
        else if (param == "momentum") mlp.momentum = parse_double(key, value);
        else if (param == "lr") mlp.lr = parse_double(key, value);
        else if (param == "l2") mlp.l2 = parse_double(key, value);
        else if (param == "epochs") mlp.epochs = parse_int(key, value);
        else if (param == "batch") mlp.batch = parse_int(key, value);
        else if (param == "init") {
            if (lower(value) == "glorot") mlp.init = MlpInit::Glorot;
            else if (lower(value) == "zero") mlp.init = MlpInit::Zero;
            else throw ArgumentError("mlp.init must be glorot or zero");
        } else unknown();
    } else {
        parse_classifier(kind);  // reports unavailable kinds precisely
        unknown();
    }
    validate();
}

void Hyperparameters::set_assignment(std::string_view assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ArgumentError("expected kind.param=value, got '" + std::string(assignment) + "'");
    set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::vector<std::pair<std::string, std::string>> Hyperparameters::entries() const {
    std::vector<std::pair<std::string, std::string>> out;
    auto linear = [&](const std::string& kind, const LinearParams& p) {
        out.emplace_back(kind + ".lr", fmt(p.lr));
        out.emplace_back(kind + ".decay", fmt(p.decay));
        out.emplace_back(kind + ".l2", fmt(p.l2));
        out.emplace_back(kind + ".epochs", std::to_string(p.epochs));
        out.emplace_back(kind + ".batch", std::to_string(p.batch));
    };
    out.emplace_back("mnb.alpha", fmt(mnb.alpha));
    linear("svm_sgd", svm_sgd);
    linear("lr_sgd", lr_sgd);
    out.emplace_back("knn.k", std::to_string(knn.k));
    out.emplace_back("mlp.hidden", std::to_string(mlp.hidden));
    out.emplace_back("mlp.dropout", fmt(mlp.dropout));
    out.emplace_back("mlp.momentum", fmt(mlp.momentum));
    out.emplace_back("mlp.lr", fmt(mlp.lr));
    out.emplace_back("mlp.l2", fmt(mlp.l2));
    out.emplace_back("mlp.epochs", std::to_string(mlp.epochs));
    out.emplace_back("mlp.batch", std::to_string(mlp.batch));
    out.emplace_back("mlp.init", mlp.init == MlpInit::Zero ? "zero" : "glorot");
    return out;
}

void Hyperparameters::validate() const {
    validate_linear("svm_sgd", svm_sgd);
    validate_linear("lr_sgd", lr_sgd);
    if (knn.k < 1) throw ArgumentError("knn.k must be at least 1");
    if (!(mnb.alpha > 0)) throw ArgumentError("mnb.alpha must be positive");
    if (mlp.hidden < 1) throw ArgumentError("mlp.hidden must be at least 1");
    if (!(mlp.dropout >= 0 && mlp.dropout < 1)) throw ArgumentError("mlp.dropout must be in [0, 1)");
    if (!(mlp.momentum >= 0 && mlp.momentum < 1)) throw ArgumentError("mlp.momentum must be in [0, 1)");
    if (!(mlp.lr > 0)) throw ArgumentError("mlp.lr must be positive");
    if (mlp.l2 < 0) throw ArgumentError("mlp.l2 must be non-negative");
    if (mlp.epochs < 1) throw ArgumentError("mlp.epochs must be at least 1");
    if (mlp.batch < 0) throw ArgumentError("mlp.batch must be non-negative");
}

Prediction Model::predict(const SparseMatrix& X) const {
    if (X.cols() != n_features()) {
        throw ArgumentError("feature dimension mismatch: model has " + std::to_string(n_features()) + ", input has " +
                            std::to_string(X.cols()));
    }
    return predict_checked(X);
}

namespace detail {

void check_finite_loss(ClassifierKind kind, int epoch, double loss) {
    if (!std::isfinite(loss)) {
        throw TrainingError(std::string(classifier_name(kind)) + ": non-finite loss at epoch " + std::to_string(epoch) +
                            "; lower the learning rate");
    }
}

}  // namespace detail

std::unique_ptr<Model> fit(const ClassifierSpec& spec, const SparseMatrix& X, std::span<const int> y) {
    spec.hp.validate();
    if (X.rows() != y.size()) {
        throw ArgumentError("row count " + std::to_string(X.rows()) + " differs from label count " + std::to_string(y.size()));
    }
    if (y.size() < 2) throw TrainingError("need at least two training rows");
    const auto pos = std::count(y.begin(), y.end(), 1);
    if (pos == 0 || pos == static_cast<std::ptrdiff_t>(y.size())) {
        throw TrainingError(std::string(classifier_name(spec.kind)) + ": training data holds a single class (" +
                            std::to_string(pos) + " positive of " + std::to_string(y.size()) + ")");
    }
    for (int label : y) {
        if (label != 0 && label != 1) throw ArgumentError("labels must be 0 or 1");
    }
    switch (spec.kind) {
        case ClassifierKind::Mnb: return detail::fit_mnb(spec.hp.mnb, X, y);
        case ClassifierKind::SvmSgd: return detail::fit_linear(spec.kind, spec.hp.svm_sgd, spec.seed, X, y);
        case ClassifierKind::LrSgd: return detail::fit_linear(spec.kind, spec.hp.lr_sgd, spec.seed, X, y);
        case ClassifierKind::Knn: return detail::fit_knn(spec.hp.knn, X, y);
        case ClassifierKind::Mlp: return detail::fit_mlp(spec.hp.mlp, spec.seed, X, y);
    }
    throw ArgumentError("unknown classifier kind");
}

}  // namespace fdw
