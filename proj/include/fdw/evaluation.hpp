#pragma once

#include "fdw/balance.hpp"
#include "fdw/corpus.hpp"
#include "fdw/density.hpp"
#include "fdw/learners.hpp"
#include "fdw/pipelines.hpp"
#include "fdw/vectorizer.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fdw {

struct FoldPlan {
    int k = 10;
    std::uint64_t seed = 0;
    std::vector<std::size_t> items;                  // indices being partitioned (e.g. corpus doc indices)
    std::vector<std::vector<std::size_t>> held_out;  // per fold, ascending

    std::vector<std::size_t> training(std::size_t fold) const;
};

/// Class-wise shuffle, then round-robin assignment; negatives continue from
/// the fold after the last positive. Items are positions in `labels`.
FoldPlan stratified_folds(std::span<const int> labels, int k, std::uint64_t seed);

/// Folds over the corpus's usable (non-empty) documents; items are doc indices.
FoldPlan plan_folds(const Corpus& corpus, int k, std::uint64_t seed);

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Positive-class metrics; every 0/0 is 0.
Metrics f1_score(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn);

struct FoldResult {
    int fold = 0;
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    Metrics metrics;
    double runtime_s = 0.0;
};

/// What each fold's vectorizer and SMOTE step actually read.
struct FoldAudit {
    int fold = 0;
    std::size_t train_docs = 0;
    std::size_t test_docs = 0;
    std::size_t vocab_fit_docs = 0;
    std::size_t vocab_heldout_docs = 0;  // must be 0
    std::size_t smote_queries = 0;
    std::size_t smote_rows_touched = 0;
    std::size_t smote_heldout_rows = 0;  // must be 0
};

/// Counts fit documents and SMOTE rows (as doc indices) that belong to the
/// fold's held-out set.
FoldAudit audit_fold(const FoldPlan& plan, std::size_t fold, std::span<const std::size_t> vocab_docs,
                     std::span<const std::size_t> smote_docs, std::size_t smote_queries);

struct CvOptions {
    bool use_smote = true;
    SmoteConfig smote;  // seed is replaced per fold
    bool record_timing = true;
    VocabularyOptions vocabulary;
};

struct ExperimentResult {
    std::string pipeline;
    ClassifierKind classifier = ClassifierKind::SvmSgd;
    std::vector<FoldResult> folds;
    std::vector<FoldAudit> audits;
    double mean_f1 = 0.0;    // macro over folds
    double pooled_f1 = 0.0;  // from summed confusion counts
    double runtime_s = 0.0;  // wall time of all folds
    std::uint64_t seed = 0;
    std::string fingerprint;
};

/// Seed of one (pipeline, classifier, fold) task.
std::uint64_t task_seed(std::uint64_t global_seed, std::string_view pipeline, ClassifierKind classifier, int fold);

/// Fingerprint over everything that determines the result.
std::string config_fingerprint(std::string_view pipeline, const ClassifierSpec& clf, const FoldPlan& plan,
                               const CvOptions& options);

/// Cross-validation over precomputed unit streams (one per corpus doc).
/// clf.seed is the global seed; per-fold seeds derive from it.
ExperimentResult cross_validate(std::span<const UnitStream> streams, std::span<const int> labels,
                                std::string_view pipeline, const ClassifierSpec& clf, const FoldPlan& plan,
                                const CvOptions& options = {});

ExperimentResult cross_validate(const Corpus& corpus, const PipelineSpec& spec, const ClassifierSpec& clf,
                                const FoldPlan& plan, const CvOptions& options = {});

/// Two-pass sample correlation. Throws ArgumentError("undefined correlation")
/// for fewer than two points or zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct F1Entry {
    std::string classifier;
    std::string pipeline;
    double f1 = 0.0;
};

struct CorrelationRow {
    std::string classifier;
    double best_f1 = 0.0;
    std::string best_pipeline;
    double best_fd = 0.0;
    double rho = 0.0;  // NaN when undefined
    std::size_t n = 0;
};

using PipelineFilter = std::function<bool(std::string_view pipeline)>;

/// True for the POS-tag-only family (POSS base).
bool is_poss_family(std::string_view pipeline);

/// Joins entries with densities by pipeline name, drops excluded pipelines,
/// and reports per classifier (in first-appearance order) the best F1 (ties
/// toward lower FD) and rho(FD, F1). Unmatched names produce one warning.
std::vector<CorrelationRow> correlate(std::span<const F1Entry> entries, std::span<const DensityRecord> densities,
                                      const PipelineFilter& exclude = is_poss_family);

std::vector<CorrelationRow> correlate_results(std::span<const ExperimentResult> results,
                                              std::span<const DensityRecord> densities,
                                              const PipelineFilter& exclude = is_poss_family);

struct SweepConfig {
    std::vector<PipelineSpec> pipelines;
    std::vector<ClassifierKind> classifiers;
    Hyperparameters hp;
    int folds = 10;
    std::uint64_t seed = 0;
    CvOptions cv;
    unsigned jobs = 1;
};

struct SweepOutput {
    std::vector<DensityRecord> densities;    // sorted by fd
    std::vector<ExperimentResult> results;   // canonical pipeline order, then classifier order
    FoldPlan plan;
};

/// Runs every (pipeline, classifier) cross-validation; pipelines run in
/// parallel on up to `jobs` threads. Every pipeline must be runnable.
SweepOutput run_sweep(const Corpus& corpus, const SweepConfig& config);

// Reports

/// `pipeline,classifier,fold,precision,recall,f1,runtime_s`
void write_results_csv(std::ostream& out, std::span<const ExperimentResult> results);
/// Reads the results CSV back as per-(pipeline, classifier) fold means.
std::vector<F1Entry> read_results_csv(std::istream& in, std::string_view source_name = "results");
/// F1 matrix: `pipeline,fd,<classifier>...` rows ascending by fd.
void write_f1_matrix_csv(std::ostream& out, std::span<const ExperimentResult> results,
                         std::span<const DensityRecord> densities);
/// Per-classifier summary: `classifier,best_f1,best_pipeline,fd,rho,n`.
void write_correlation_csv(std::ostream& out, std::span<const CorrelationRow> rows);
void write_leakage_csv(std::ostream& out, std::span<const ExperimentResult> results);

}  // namespace fdw
