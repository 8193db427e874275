#include "fdw/evaluation.hpp"

#include "fdw/csv.hpp"
#include "fdw/error.hpp"
#include "fdw/log.hpp"
#include "fdw/parallel.hpp"
#include "fdw/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace fdw {

std::vector<std::size_t> FoldPlan::training(std::size_t fold) const {
    std::vector<std::size_t> out;
    const auto& test = held_out.at(fold);
    std::unordered_set<std::size_t> skip(test.begin(), test.end());
    for (std::size_t i : items) {
        if (!skip.contains(i)) out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    return out;
}

FoldPlan stratified_folds(std::span<const int> labels, int k, std::uint64_t seed) {
    if (k < 2) throw ArgumentError("fold count must be at least 2");
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(i);
    for (auto [name, group] : {std::pair{"positive", &pos}, std::pair{"negative", &neg}}) {
        if (group->size() < static_cast<std::size_t>(k)) {
            throw ArgumentError("the " + std::string(name) + " class has " + std::to_string(group->size()) +
                                " documents, fewer than " + std::to_string(k) + " folds; lower --folds or add data");
        }
    }
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(pos));
    rng.shuffle(std::span<std::size_t>(neg));

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.held_out.resize(static_cast<std::size_t>(k));
    std::size_t slot = 0;
    for (const auto* group : {&pos, &neg}) {
        for (std::size_t i : *group) {
            plan.held_out[slot % static_cast<std::size_t>(k)].push_back(i);
            ++slot;
        }
    }
    for (auto& f : plan.held_out) std::sort(f.begin(), f.end());
    plan.items.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) plan.items[i] = i;
    return plan;
}

FoldPlan plan_folds(const Corpus& corpus, int k, std::uint64_t seed) {
    const auto usable = corpus.usable();
    std::vector<int> labels;
    labels.reserve(usable.size());
    for (std::size_t d : usable) labels.push_back(corpus.docs[d].label);
    FoldPlan plan = stratified_folds(labels, k, seed);
    for (auto& fold : plan.held_out) {
        for (auto& i : fold) i = usable[i];
    }
    plan.items = usable;
    return plan;
}

Metrics f1_score(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
    Metrics m;
    const auto t = static_cast<double>(tp);
    if (tp + fp > 0) m.precision = t / static_cast<double>(tp + fp);
    if (tp + fn > 0) m.recall = t / static_cast<double>(tp + fn);
    if (m.precision + m.recall > 0) m.f1 = 2 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

FoldAudit audit_fold(const FoldPlan& plan, std::size_t fold, std::span<const std::size_t> vocab_docs,
                     std::span<const std::size_t> smote_docs, std::size_t smote_queries) {
    const auto& test = plan.held_out.at(fold);
    std::unordered_set<std::size_t> held(test.begin(), test.end());
    FoldAudit a;
    a.fold = static_cast<int>(fold);
    a.test_docs = test.size();
    a.train_docs = plan.items.size() - test.size();
    a.vocab_fit_docs = vocab_docs.size();
    for (std::size_t d : vocab_docs) a.vocab_heldout_docs += held.contains(d) ? 1 : 0;
    a.smote_queries = smote_queries;
    a.smote_rows_touched = smote_docs.size();
    for (std::size_t d : smote_docs) a.smote_heldout_rows += held.contains(d) ? 1 : 0;
    return a;
}

std::uint64_t task_seed(std::uint64_t global_seed, std::string_view pipeline, ClassifierKind classifier, int fold) {
    std::uint64_t s = mix_seed(global_seed, pipeline);
    s = mix_seed(s, classifier_name(classifier));
    return mix_seed(s, static_cast<std::uint64_t>(fold));
}

std::string config_fingerprint(std::string_view pipeline, const ClassifierSpec& clf, const FoldPlan& plan,
                               const CvOptions& options) {
    std::string key(pipeline);
    key += "|";
    key += classifier_name(clf.kind);
    const std::string prefix = std::string(classifier_name(clf.kind)) + ".";
    for (const auto& [k, v] : clf.hp.entries()) {
        if (k.starts_with(prefix)) key += "|" + k + "=" + v;
    }
    key += "|seed=" + std::to_string(clf.seed);
    key += "|folds=" + std::to_string(plan.k) + "/" + std::to_string(plan.seed) + "/" + std::to_string(plan.items.size());
    key += "|smote=" + std::string(options.use_smote ? "on" : "off") + "/" + std::to_string(options.smote.k) + "/" +
           std::to_string(options.smote.target_ratio);
    key += "|vocab=" + std::to_string(options.vocabulary.min_df) + "/" + std::to_string(options.vocabulary.max_features);
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(key)));
    return buf;
}

ExperimentResult cross_validate(std::span<const UnitStream> streams, std::span<const int> labels,
                                std::string_view pipeline, const ClassifierSpec& clf, const FoldPlan& plan,
                                const CvOptions& options) {
    if (streams.size() != labels.size()) throw ArgumentError("stream count differs from label count");
    for (const auto& fold : plan.held_out)
        for (std::size_t d : fold)
            if (d >= streams.size())
                throw ArgumentError("fold plan refers to document " + std::to_string(d) + " but the corpus has " +
                                    std::to_string(streams.size()));
    if (std::any_of(plan.items.begin(), plan.items.end(), [&](std::size_t d) { return d >= streams.size(); }))
        throw ArgumentError("fold plan does not match the corpus");
    using clock = std::chrono::steady_clock;

    ExperimentResult r;
    r.pipeline = std::string(pipeline);
    r.classifier = clf.kind;
    r.seed = clf.seed;
    r.fingerprint = config_fingerprint(pipeline, clf, plan, options);

    std::uint64_t tp = 0, fp = 0, fn = 0;
    for (std::size_t f = 0; f < plan.held_out.size(); ++f) {
        const auto start = clock::now();
        const auto train = plan.training(f);
        const auto& test = plan.held_out[f];
        const int fold = static_cast<int>(f);
        const std::uint64_t seed = task_seed(clf.seed, pipeline, clf.kind, fold);

        std::vector<UnitStream> train_streams, test_streams;
        std::vector<int> y_train;
        train_streams.reserve(train.size());
        for (std::size_t d : train) {
            train_streams.push_back(streams[d]);
            y_train.push_back(labels[d]);
        }
        for (std::size_t d : test) test_streams.push_back(streams[d]);
        const auto pos = std::count(y_train.begin(), y_train.end(), 1);
        if (pos == 0 || pos == static_cast<std::ptrdiff_t>(y_train.size())) {
            throw TrainingError(r.pipeline + "/" + std::string(classifier_name(clf.kind)) + " fold " + std::to_string(fold) +
                                ": training partition holds a single class");
        }

        const auto vocab = Vocabulary::fit(train_streams, options.vocabulary);
        SparseMatrix X_train = transform_tfidf(vocab, train_streams);
        const SparseMatrix X_test = transform_tfidf(vocab, test_streams);

        std::vector<std::size_t> smote_docs;
        std::size_t smote_queries = 0;
        if (options.use_smote) {
            SmoteConfig cfg = options.smote;
            cfg.seed = mix_seed(seed, "smote");
            auto balanced = smote_oversample(X_train, y_train, cfg);
            for (std::size_t row : balanced.touched_rows) smote_docs.push_back(train[row]);
            smote_queries = balanced.neighbor_queries;
            X_train = std::move(balanced.rows);
            y_train = std::move(balanced.labels);
        }

        ClassifierSpec fold_spec = clf;
        fold_spec.seed = seed;
        const auto model = fit(fold_spec, X_train, y_train);
        const auto pred = model->predict(X_test);

        FoldResult fr;
        fr.fold = fold;
        for (std::size_t i = 0; i < test.size(); ++i) {
            const int truth = labels[test[i]];
            const int guess = pred.labels[i];
            if (truth == 1 && guess == 1) ++fr.tp;
            else if (truth == 0 && guess == 1) ++fr.fp;
            else if (truth == 1) ++fr.fn;
            else ++fr.tn;
        }
        fr.metrics = f1_score(fr.tp, fr.fp, fr.fn);
        tp += fr.tp;
        fp += fr.fp;
        fn += fr.fn;
        if (options.record_timing) fr.runtime_s = std::chrono::duration<double>(clock::now() - start).count();
        r.runtime_s += fr.runtime_s;
        r.folds.push_back(fr);
        r.audits.push_back(audit_fold(plan, f, train, smote_docs, smote_queries));
    }
    double sum = 0.0;
    for (const auto& f : r.folds) sum += f.metrics.f1;
    r.mean_f1 = r.folds.empty() ? 0.0 : sum / static_cast<double>(r.folds.size());
    r.pooled_f1 = f1_score(tp, fp, fn).f1;
    return r;
}

ExperimentResult cross_validate(const Corpus& corpus, const PipelineSpec& spec, const ClassifierSpec& clf,
                                const FoldPlan& plan, const CvOptions& options) {
    require_layers(spec, corpus.capabilities);
    std::vector<UnitStream> streams;
    std::vector<int> labels;
    streams.reserve(corpus.docs.size());
    for (const auto& doc : corpus.docs) {
        streams.push_back(unit_surfaces(spec, doc));
        labels.push_back(doc.label);
    }
    return cross_validate(streams, labels, pipeline_name(spec), clf, plan, options);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw ArgumentError("pearson: sequences differ in length");
    if (xs.size() < 2) throw ArgumentError("undefined correlation: fewer than two points");
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw ArgumentError("undefined correlation: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

bool is_poss_family(std::string_view pipeline) {
    auto spec = parse_pipeline_name(pipeline);
    return spec && spec->base == Base::Poss;
}

std::vector<CorrelationRow> correlate(std::span<const F1Entry> entries, std::span<const DensityRecord> densities,
                                      const PipelineFilter& exclude) {
    std::unordered_map<std::string, double> fd_of;
    for (const auto& d : densities) fd_of.emplace(d.name(), d.fd);

    std::vector<std::string> order;
    std::map<std::string, std::vector<const F1Entry*>> by_classifier;
    std::set<std::string> unmatched;
    for (const auto& e : entries) {
        if (!by_classifier.contains(e.classifier)) order.push_back(e.classifier);
        auto& list = by_classifier[e.classifier];
        if (!fd_of.contains(e.pipeline)) {
            unmatched.insert(e.pipeline);
            continue;
        }
        if (exclude && exclude(e.pipeline)) continue;
        list.push_back(&e);
    }
    if (!unmatched.empty()) {
        std::string names;
        for (const auto& n : unmatched) names += (names.empty() ? "" : ",") + n;
        warn("no density record for pipelines: " + names + " (left out of the correlation)");
    }

    std::vector<CorrelationRow> out;
    for (const auto& name : order) {
        const auto& list = by_classifier[name];
        CorrelationRow row;
        row.classifier = name;
        row.n = list.size();
        row.rho = std::numeric_limits<double>::quiet_NaN();
        if (list.empty()) {
            warn("classifier " + name + ": no pipelines left to correlate");
            out.push_back(row);
            continue;
        }
        std::vector<double> xs, ys;
        const F1Entry* best = nullptr;
        for (const auto* e : list) {
            const double fd = fd_of.at(e->pipeline);
            xs.push_back(fd);
            ys.push_back(e->f1);
            if (!best || e->f1 > best->f1 || (e->f1 == best->f1 && fd < fd_of.at(best->pipeline))) best = e;
        }
        row.best_f1 = best->f1;
        row.best_pipeline = best->pipeline;
        row.best_fd = fd_of.at(best->pipeline);
        try {
            row.rho = pearson(xs, ys);
        } catch (const ArgumentError& e) {
            warn("classifier " + name + ": " + e.what());
        }
        out.push_back(row);
    }
    return out;
}

std::vector<CorrelationRow> correlate_results(std::span<const ExperimentResult> results,
                                              std::span<const DensityRecord> densities, const PipelineFilter& exclude) {
    std::vector<F1Entry> entries;
    entries.reserve(results.size());
    for (const auto& r : results) entries.push_back({std::string(classifier_name(r.classifier)), r.pipeline, r.mean_f1});
    return correlate(entries, densities, exclude);
}

SweepOutput run_sweep(const Corpus& corpus, const SweepConfig& config) {
    if (config.pipelines.empty()) throw ArgumentError("sweep has no pipelines");
    if (config.classifiers.empty()) throw ArgumentError("sweep has no classifiers");
    config.hp.validate();
    if (config.cv.use_smote) config.cv.smote.validate();
    for (const auto& spec : config.pipelines) require_layers(spec, corpus.capabilities);

    SweepOutput out;
    out.plan = plan_folds(corpus, config.folds, mix_seed(config.seed, "folds"));
    out.densities = density_report(corpus, config.pipelines, config.jobs);

    std::vector<int> labels;
    for (const auto& doc : corpus.docs) labels.push_back(doc.label);

    const std::size_t n_clf = config.classifiers.size();
    out.results.resize(config.pipelines.size() * n_clf);
    parallel_for(config.pipelines.size(), config.jobs, [&](std::size_t p) {
        const auto& spec = config.pipelines[p];
        std::vector<UnitStream> streams;
        streams.reserve(corpus.docs.size());
        for (const auto& doc : corpus.docs) streams.push_back(unit_surfaces(spec, doc));
        const std::string name = pipeline_name(spec);
        for (std::size_t c = 0; c < n_clf; ++c) {
            ClassifierSpec clf{config.classifiers[c], config.hp, config.seed};
            out.results[p * n_clf + c] = cross_validate(streams, labels, name, clf, out.plan, config.cv);
        }
    });
    return out;
}

namespace {

std::string num(double v, const char* format) {
    char buf[48];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

}  // namespace

void write_results_csv(std::ostream& out, std::span<const ExperimentResult> results) {
    out << "pipeline,classifier,fold,precision,recall,f1,runtime_s\n";
    for (const auto& r : results) {
        for (const auto& f : r.folds) {
            out << csv::quote(r.pipeline) << ',' << classifier_name(r.classifier) << ',' << f.fold << ','
                << num(f.metrics.precision, "%.6f") << ',' << num(f.metrics.recall, "%.6f") << ','
                << num(f.metrics.f1, "%.6f") << ',' << num(f.runtime_s, "%.6f") << '\n';
        }
    }
}

std::vector<F1Entry> read_results_csv(std::istream& in, std::string_view source_name) {
    const auto table = csv::read(in, source_name);
    const auto ip = table.column("pipeline");
    const auto ic = table.column("classifier");
    const auto iff = table.column("f1");
    std::vector<F1Entry> out;
    std::vector<std::size_t> counts;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        double f1 = 0.0;
        try {
            std::size_t used = 0;
            f1 = std::stod(row[iff], &used);
            if (used != row[iff].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw DataError(std::string(source_name) + ": line " + std::to_string(table.line_numbers[r]) +
                            ": f1 is not a number");
        }
        auto key = std::make_pair(row[ip], row[ic]);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, out.size()).first;
            out.push_back({row[ic], row[ip], 0.0});
            counts.push_back(0);
        }
        out[it->second].f1 += f1;
        ++counts[it->second];
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i].f1 /= static_cast<double>(counts[i]);
    return out;
}

void write_f1_matrix_csv(std::ostream& out, std::span<const ExperimentResult> results,
                         std::span<const DensityRecord> densities) {
    std::vector<ClassifierKind> classifiers;
    std::map<std::pair<std::string, ClassifierKind>, double> cell;
    for (const auto& r : results) {
        if (std::find(classifiers.begin(), classifiers.end(), r.classifier) == classifiers.end()) {
            classifiers.push_back(r.classifier);
        }
        cell[{r.pipeline, r.classifier}] = r.mean_f1;
    }
    out << "pipeline,fd";
    for (auto c : classifiers) out << ',' << classifier_name(c);
    out << '\n';
    for (const auto& d : densities) {
        const std::string name = d.name();
        bool any = false;
        for (auto c : classifiers) any = any || cell.contains({name, c});
        if (!any) continue;
        out << name << ',' << num(d.fd, "%.4f");
        for (auto c : classifiers) {
            out << ',';
            auto it = cell.find({name, c});
            if (it != cell.end()) out << num(it->second, "%.4f");
        }
        out << '\n';
    }
}

void write_correlation_csv(std::ostream& out, std::span<const CorrelationRow> rows) {
    out << "classifier,best_f1,best_pipeline,fd,rho,n\n";
    for (const auto& r : rows) {
        out << csv::quote(r.classifier) << ',' << num(r.best_f1, "%.4f") << ',' << r.best_pipeline << ','
            << num(r.best_fd, "%.4f") << ',' << (std::isnan(r.rho) ? std::string("NA") : num(r.rho, "%.4f")) << ','
            << r.n << '\n';
    }
}

void write_leakage_csv(std::ostream& out, std::span<const ExperimentResult> results) {
    out << "pipeline,classifier,fold,train_docs,test_docs,vocab_fit_docs,vocab_heldout_docs,smote_queries,"
           "smote_rows_touched,smote_heldout_rows\n";
    for (const auto& r : results) {
        for (const auto& a : r.audits) {
            out << r.pipeline << ',' << classifier_name(r.classifier) << ',' << a.fold << ',' << a.train_docs << ','
                << a.test_docs << ',' << a.vocab_fit_docs << ',' << a.vocab_heldout_docs << ',' << a.smote_queries << ','
                << a.smote_rows_touched << ',' << a.smote_heldout_rows << '\n';
        }
    }
}

}  // namespace fdw
