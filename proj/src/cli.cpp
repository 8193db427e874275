#include "fdw/cli.hpp"

#include "fdw/corpus.hpp"
#include "fdw/density.hpp"
#include "fdw/error.hpp"
#include "fdw/evaluation.hpp"
#include "fdw/fixtures.hpp"
#include "fdw/learners.hpp"
#include "fdw/log.hpp"
#include "fdw/parallel.hpp"
#include "fdw/pipelines.hpp"
#include "fdw/planner.hpp"
#include "fdw/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace fdw {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    body(out);
    if (!out) throw DataError("error while writing " + path.string());
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

CorpusFormat infer_format(const std::string& path, const std::string& format) {
    if (!format.empty()) return parse_corpus_format(format);
    const auto ext = fs::path(path).extension().string();
    if (ext == ".conllu" || ext == ".conll") return CorpusFormat::Conllu;
    if (ext == ".txt" || ext == ".tsv") return CorpusFormat::Plain;
    return CorpusFormat::Jsonl;
}

Stopwords load_stopwords(const std::string& path) {
    if (!path.empty()) return Stopwords::from_file(path);
    return Stopwords::from_environment();
}

// What the stopword list resolved to, for config.json.
std::string stopwords_source(const std::string& path) {
    if (!path.empty()) return path;
    if (const char* env = std::getenv("FDW_STOPWORDS"); env != nullptr && *env != '\0') return env;
    return "";
}

std::vector<DensityRecord> read_densities(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    return read_density_csv(in, path);
}

// Drops pipelines the corpus cannot support, with one warning each.
std::vector<PipelineSpec> runnable_or_warn(const std::vector<PipelineSpec>& wanted, const Corpus& corpus) {
    std::vector<PipelineSpec> skipped;
    auto ok = runnable_pipelines(wanted, corpus.capabilities, &skipped);
    for (const auto& s : skipped) {
        try {
            require_layers(s, corpus.capabilities);
        } catch (const CapabilityError& e) {
            warn(std::string("skipping: ") + e.what());
        }
    }
    if (ok.empty()) throw CapabilityError("no selected pipeline is supported by the corpus layers (" +
                                          corpus.capabilities.to_string() + ")");
    return ok;
}

json number_or_null(double v) {
    return std::isnan(v) ? json(nullptr) : json(v);
}

// Everything that determines a run's CSVs. Written as config.json.
struct RunConfig {
    std::string corpus;
    std::string format = "jsonl";
    std::string stopwords;  // empty = shipped list
    std::vector<std::string> pipelines;
    std::vector<std::string> classifiers;
    Hyperparameters hp;
    int folds = 10;
    std::uint64_t seed = 0;
    bool smote = true;
    int smote_k = 5;
    double smote_ratio = 1.0;
    bool timing = true;
    std::optional<double> power;  // per classifier kind when unset
    double grid_intensity = 275.0;

    json to_json() const {
        json hp_json = json::object();
        for (const auto& [k, v] : hp.entries()) hp_json[k] = v;
        json j;
        j["corpus"] = corpus;
        j["format"] = format;
        j["stopwords"] = stopwords.empty() ? json("builtin") : json(stopwords);
        j["pipelines"] = pipelines;
        j["classifiers"] = classifiers;
        j["hyperparameters"] = hp_json;
        j["folds"] = folds;
        j["seed"] = seed;
        j["smote"] = {{"enabled", smote}, {"k", smote_k}, {"ratio", smote_ratio}};
        j["timing"] = timing;
        j["power_watts"] = power ? json(*power) : json(nullptr);
        j["grid_intensity"] = grid_intensity;
        return j;
    }

    static RunConfig from_json(const json& j) {
        RunConfig c;
        try {
            c.corpus = j.at("corpus").get<std::string>();
            c.format = j.at("format").get<std::string>();
            const auto sw = j.at("stopwords").get<std::string>();
            c.stopwords = sw == "builtin" ? "" : sw;
            c.pipelines = j.at("pipelines").get<std::vector<std::string>>();
            c.classifiers = j.at("classifiers").get<std::vector<std::string>>();
            for (const auto& [k, v] : j.at("hyperparameters").items()) c.hp.set(k, v.get<std::string>());
            c.folds = j.at("folds").get<int>();
            c.seed = j.at("seed").get<std::uint64_t>();
            c.smote = j.at("smote").at("enabled").get<bool>();
            c.smote_k = j.at("smote").at("k").get<int>();
            c.smote_ratio = j.at("smote").at("ratio").get<double>();
            c.timing = j.at("timing").get<bool>();
            if (!j.at("power_watts").is_null()) c.power = j.at("power_watts").get<double>();
            c.grid_intensity = j.at("grid_intensity").get<double>();
        } catch (const json::exception& e) {
            throw DataError(std::string("malformed config: ") + e.what());
        }
        return c;
    }
};

std::string join(const std::vector<std::string>& items) {
    std::string s;
    for (const auto& i : items) s += (s.empty() ? "" : ",") + i;
    return s;
}

json summary_json(const RunConfig& cfg, const SweepOutput& sweep, const std::vector<CorrelationRow>& rows,
                  const std::vector<std::string>& skipped) {
    json j;
    j["pipelines"] = cfg.pipelines.size();
    j["skipped_pipelines"] = skipped;
    j["folds"] = cfg.folds;
    j["seed"] = cfg.seed;
    j["smote"] = {{"enabled", cfg.smote}, {"k", cfg.smote_k}, {"ratio", cfg.smote_ratio}};
    j["correlation_excludes"] = "POSS-base pipelines";

    std::map<std::string, double> runtime;
    for (const auto& r : sweep.results) runtime[std::string(classifier_name(r.classifier))] += r.runtime_s;

    json classifiers = json::array();
    for (const auto& row : rows) {
        const auto kind = parse_classifier(row.classifier);
        const double watts = cfg.power ? *cfg.power : (is_neural(kind) ? kNeuralWatts : kNonNeuralWatts);
        // runtime_s already covers every fold, so no folds factor here.
        const double wh = watts * runtime[row.classifier] / 3600.0;
        classifiers.push_back({{"classifier", row.classifier},
                               {"best_f1", row.best_f1},
                               {"best_pipeline", row.best_pipeline},
                               {"best_fd", row.best_fd},
                               {"rho", number_or_null(row.rho)},
                               {"n", row.n},
                               {"runtime_s", runtime[row.classifier]},
                               {"power_watts", watts},
                               {"energy_wh", wh}});
    }
    j["classifiers"] = classifiers;
    return j;
}

struct CorpusFlags {
    std::string corpus;
    std::string format;
    std::string stopwords;

    void add(CLI::App* app, bool required) {
        auto* opt = app->add_option("--corpus", corpus, "Corpus file");
        if (required) opt->required();
        app->add_option("--format", format, "jsonl|conllu|plain (default: from the file extension)")
            ->check(CLI::IsMember({"jsonl", "conllu", "plain"}));
        app->add_option("--stopwords", stopwords, "Stopword list, one word per line (overrides FDW_STOPWORDS)");
    }

    Corpus load() const {
        return load_corpus(corpus, infer_format(corpus, format), load_stopwords(stopwords));
    }
};

int cmd_densities(const CorpusFlags& cf, const std::string& pipelines, unsigned jobs, const std::string& out_path,
                  std::ostream& out) {
    const auto corpus = cf.load();
    const auto specs = runnable_or_warn(select_pipelines(pipelines), corpus);
    const auto records = density_report(corpus, specs, jobs);
    if (out_path.empty()) {
        write_density_csv(out, records);
    } else {
        write_file(out_path, [&](std::ostream& o) { write_density_csv(o, records); });
    }
    return kExitOk;
}

int cmd_run(RunConfig cfg, unsigned jobs, const fs::path& out_dir, std::ostream& out) {
    const auto corpus = load_corpus(cfg.corpus, parse_corpus_format(cfg.format), load_stopwords(cfg.stopwords));

    std::vector<PipelineSpec> wanted;
    for (const auto& name : cfg.pipelines) wanted.push_back(pipeline_from_name(name));
    const auto specs = runnable_or_warn(wanted, corpus);
    std::vector<std::string> skipped;
    for (const auto& s : wanted) {
        if (std::find(specs.begin(), specs.end(), s) == specs.end()) skipped.push_back(pipeline_name(s));
    }
    cfg.pipelines.clear();
    for (const auto& s : specs) cfg.pipelines.push_back(pipeline_name(s));

    SweepConfig sc;
    sc.pipelines = specs;
    sc.classifiers = select_classifiers(join(cfg.classifiers));
    sc.hp = cfg.hp;
    sc.hp.validate();
    sc.folds = cfg.folds;
    sc.seed = cfg.seed;
    sc.cv.use_smote = cfg.smote;
    sc.cv.smote.k = cfg.smote_k;
    sc.cv.smote.target_ratio = cfg.smote_ratio;
    sc.cv.smote.validate();
    sc.cv.record_timing = cfg.timing;
    sc.jobs = jobs;

    // Written first so a failed run still records what was attempted.
    fs::create_directories(out_dir);
    write_file(out_dir / "config.json", [&](std::ostream& o) { o << cfg.to_json().dump(2) << '\n'; });
    write_file(out_dir / "seed", [&](std::ostream& o) { o << cfg.seed << '\n'; });

    const auto sweep = run_sweep(corpus, sc);
    const auto rows = correlate_results(sweep.results, sweep.densities);

    write_file(out_dir / "densities.csv", [&](std::ostream& o) { write_density_csv(o, sweep.densities); });
    write_file(out_dir / "results.csv", [&](std::ostream& o) { write_results_csv(o, sweep.results); });
    write_file(out_dir / "f1_matrix.csv",
               [&](std::ostream& o) { write_f1_matrix_csv(o, sweep.results, sweep.densities); });
    write_file(out_dir / "correlation.csv", [&](std::ostream& o) { write_correlation_csv(o, rows); });
    write_file(out_dir / "leakage.csv", [&](std::ostream& o) { write_leakage_csv(o, sweep.results); });
    write_file(out_dir / "summary.json",
               [&](std::ostream& o) { o << summary_json(cfg, sweep, rows, skipped).dump(2) << '\n'; });

    out << "ran " << sweep.results.size() << " experiments (" << specs.size() << " pipelines x "
        << sc.classifiers.size() << " classifiers, " << cfg.folds << " folds); outputs in " << out_dir.string()
        << '\n';
    return kExitOk;
}

std::vector<DensityRecord> densities_from(const std::string& densities_path, const CorpusFlags& cf, unsigned jobs) {
    if (!densities_path.empty()) return read_densities(densities_path);
    if (!cf.corpus.empty()) {
        const auto corpus = cf.load();
        return density_report(corpus, runnable_or_warn(enumerate_pipelines(), corpus), jobs);
    }
    warn("no --densities or --corpus given; using the published density table");
    return load_tables().densities();
}

int cmd_correlate(const std::string& results_path, const std::string& densities_path, const CorpusFlags& cf,
                  bool include_poss, unsigned jobs, const std::string& out_path, std::ostream& out) {
    std::ifstream in(results_path, std::ios::binary);
    if (!in) throw DataError("cannot open " + results_path);
    const auto entries = read_results_csv(in, results_path);
    const auto densities = densities_from(densities_path, cf, jobs);
    const PipelineFilter keep_all = [](std::string_view) { return false; };
    const auto rows = correlate(entries, densities, include_poss ? keep_all : PipelineFilter(is_poss_family));
    if (out_path.empty()) {
        write_correlation_csv(out, rows);
    } else {
        write_file(out_path, [&](std::ostream& o) { write_correlation_csv(o, rows); });
    }
    return kExitOk;
}

void emit_json(const json& j, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << j.dump(2) << '\n';
    } else {
        write_file(out_path, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
    }
}

std::map<std::string, double> observed_from_results(const std::string& path, const std::string& classifier) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    const std::string clf(classifier_name(parse_classifier(classifier)));
    std::map<std::string, double> observed;
    for (const auto& e : read_results_csv(in, path)) {
        if (e.classifier == clf) observed[e.pipeline] = e.f1;
    }
    return observed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Feature Density workbench: estimate which preprocessing variants are worth training on", "fdw"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    unsigned jobs = default_jobs();
    std::string out_path;
    std::string pipelines = "all";
    std::string classifiers = "mnb,svm_sgd,lr_sgd,knn,mlp";
    std::string band_text = "0.05:0.15";
    std::string densities_path;
    std::string results_path;
    CorpusFlags cf;
    EnergyModel energy;

    // densities
    auto* densities = app.add_subcommand("densities", "Feature Density of each pipeline over a corpus (CSV)");
    cf.add(densities, true);
    densities->add_option("--pipelines", pipelines, "Comma-separated pipeline names or 'all'");
    densities->add_option("--jobs", jobs, "Worker threads");
    densities->add_option("--out", out_path, "Output CSV (default: stdout)");

    // run
    RunConfig flags;
    std::string config_path;
    std::string plan_path;
    std::vector<std::string> hp_assignments;
    bool no_smote = false;
    bool no_timing = false;
    double power = 0.0;
    auto* run = app.add_subcommand("run", "Cross-validated sweep over pipelines x classifiers");
    cf.add(run, false);
    run->add_option("--config", config_path, "Re-run from a config.json written by an earlier run");
    run->add_option("--pipelines", pipelines, "Comma-separated pipeline names or 'all'");
    run->add_option("--plan", plan_path, "Run the pipelines scheduled in a plan file");
    run->add_option("--classifiers", classifiers, "Comma-separated subset of mnb,svm_sgd,lr_sgd,knn,mlp");
    run->add_option("--hp", hp_assignments, "Hyperparameter kind.param=value (repeatable)");
    run->add_option("--folds", flags.folds, "Cross-validation folds")->check(CLI::Range(2, 1000));
    run->add_option("--seed", flags.seed, "Global seed");
    run->add_option("--smote-k", flags.smote_k, "SMOTE neighbours");
    run->add_option("--smote-ratio", flags.smote_ratio, "Minority:majority ratio after SMOTE");
    run->add_flag("--no-smote", no_smote, "Train on the folds as they are");
    run->add_flag("--no-timing", no_timing, "Write runtime_s as 0 so outputs are byte-reproducible");
    run->add_option("--power", power, "Device watts for the energy summary (default: 163, or 250 for mlp)");
    run->add_option("--grid-intensity", flags.grid_intensity, "g CO2 per kWh");
    run->add_option("--jobs", jobs, "Worker threads");
    run->add_option("--out", out_path, "Output directory")->required();

    // correlate
    bool include_poss = false;
    auto* corr = app.add_subcommand("correlate", "Best F1 and rho(FD, F1) per classifier (CSV)");
    corr->add_option("--results", results_path, "results.csv from a run")->required();
    corr->add_option("--densities", densities_path, "densities.csv (default: computed from --corpus)");
    cf.add(corr, false);
    corr->add_flag("--include-poss", include_poss, "Keep POSS-base pipelines in the correlation");
    corr->add_option("--jobs", jobs, "Worker threads");
    corr->add_option("--out", out_path, "Output CSV (default: stdout)");

    // recommend
    double runtime_estimate = 0.0;
    auto* rec = app.add_subcommand("recommend", "Pipelines inside an FD band and the energy saved by skipping the rest");
    rec->add_option("--densities", densities_path, "densities.csv (default: --corpus, else the published table)");
    cf.add(rec, false);
    rec->add_option("--band", band_text, "FD band lo:hi, inclusive");
    rec->add_option("--runtime-estimate", runtime_estimate, "Seconds for one CV repetition of the full sweep");
    rec->add_option("--power", energy.power_watts, "Device watts");
    rec->add_option("--folds", energy.folds, "Cross-validation folds");
    rec->add_option("--grid-intensity", energy.grid_intensity_g_per_kwh, "g CO2 per kWh");
    rec->add_option("--jobs", jobs, "Worker threads");
    rec->add_option("--out", out_path, "Output JSON (default: stdout)");

    // schedule
    int stride = 4;
    double radius = 0.02;
    std::size_t budget = 0;
    std::string classifier = "svm_sgd";
    auto* sched = app.add_subcommand("schedule", "Coarse-to-fine sweep plan; refine it with --plan and --results");
    sched->add_option("--densities", densities_path, "densities.csv (default: --corpus, else the published table)");
    cf.add(sched, false);
    sched->add_option("--stride", stride, "Probe every stride-th pipeline in FD order")->check(CLI::PositiveNumber);
    sched->add_option("--radius", radius, "FD radius around the best pipeline for refinement");
    sched->add_option("--budget", budget, "Most pipelines to schedule in total (default: all)");
    sched->add_option("--plan", plan_path, "Existing plan to refine");
    sched->add_option("--results", results_path, "results.csv holding the plan's completed rounds");
    sched->add_option("--classifier", classifier, "Classifier whose F1 guides refinement");
    sched->add_option("--jobs", jobs, "Worker threads");
    sched->add_option("--out", out_path, "Plan file to write (default: the --plan file, else stdout)");

    // energy
    double runtime = 0.0;
    bool neural = false;
    auto* en = app.add_subcommand("energy", "Energy and CO2 of a cross-validated training run");
    en->add_option("--runtime", runtime, "Seconds per CV repetition")->required();
    auto* power_opt = en->add_option("--power", energy.power_watts, "Device watts");
    en->add_flag("--neural", neural, "Use the GPU power figure (250 W)")->excludes(power_opt);
    en->add_option("--folds", energy.folds, "Cross-validation folds");
    en->add_option("--grid-intensity", energy.grid_intensity_g_per_kwh, "g CO2 per kWh");
    en->add_option("--car", energy.car_g_per_km, "g CO2 per car-km");

    // replicate-paper
    std::string fixtures_dir;
    auto* rep = app.add_subcommand("replicate-paper", "Reproduction checks against the bundled published tables");
    rep->add_option("--fixtures", fixtures_dir, "Directory with table2..5.csv (default: the embedded copy)");

    // make-toy
    ToyOptions toy;
    std::size_t trend_split = 0;
    auto* mk = app.add_subcommand("make-toy", "Write a synthetic corpus as JSONL");
    mk->add_option("--docs", toy.n_docs, "Documents")->check(CLI::PositiveNumber);
    mk->add_option("--seed", toy.seed, "Generator seed");
    mk->add_option("--positive-rate", toy.positive_rate, "Share of positive documents")->check(CLI::Range(0.0, 1.0));
    mk->add_option("--trend-split", trend_split,
                   "Write the FD-trend corpus with each noise token split into this many variants instead");
    mk->add_option("--out", out_path, "Output JSONL (default: stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (jobs == 0) jobs = default_jobs();
        if (*densities) return cmd_densities(cf, pipelines, jobs, out_path, out);

        if (*run) {
            RunConfig cfg;
            if (!config_path.empty()) cfg = RunConfig::from_json(read_json_file(config_path));
            auto given = [&](const char* name) { return run->count(name) > 0; };
            if (!cf.corpus.empty()) cfg.corpus = cf.corpus;
            if (cfg.corpus.empty()) throw ArgumentError("run needs --corpus or --config");
            if (given("--corpus") || given("--format") || config_path.empty()) {
                cfg.format = std::string(corpus_format_name(infer_format(cfg.corpus, cf.format)));
            }
            if (given("--stopwords") || config_path.empty()) cfg.stopwords = stopwords_source(cf.stopwords);
            if (!plan_path.empty()) {
                if (given("--pipelines")) throw ArgumentError("--plan and --pipelines are mutually exclusive");
                const auto plan = plan_from_json(read_json_file(plan_path));
                std::vector<PipelineSpec> specs;
                for (const auto& round : plan.rounds)
                    for (const auto& name : round) specs.push_back(pipeline_from_name(name));
                std::string list;
                for (const auto& s : specs) list += (list.empty() ? "" : ",") + pipeline_name(s);
                cfg.pipelines.clear();
                for (const auto& s : select_pipelines(list)) cfg.pipelines.push_back(pipeline_name(s));
            } else if (given("--pipelines") || config_path.empty()) {
                cfg.pipelines.clear();
                for (const auto& s : select_pipelines(pipelines)) cfg.pipelines.push_back(pipeline_name(s));
            }
            if (given("--classifiers") || config_path.empty()) {
                cfg.classifiers.clear();
                for (auto k : select_classifiers(classifiers)) cfg.classifiers.emplace_back(classifier_name(k));
            }
            for (const auto& a : hp_assignments) cfg.hp.set_assignment(a);
            if (given("--folds")) cfg.folds = flags.folds;
            if (given("--seed")) cfg.seed = flags.seed;
            if (given("--smote-k")) cfg.smote_k = flags.smote_k;
            if (given("--smote-ratio")) cfg.smote_ratio = flags.smote_ratio;
            if (no_smote) cfg.smote = false;
            if (no_timing) cfg.timing = false;
            if (given("--power")) cfg.power = power;
            if (given("--grid-intensity")) cfg.grid_intensity = flags.grid_intensity;
            return cmd_run(cfg, jobs, out_path, out);
        }

        if (*corr) return cmd_correlate(results_path, densities_path, cf, include_poss, jobs, out_path, out);

        if (*rec) {
            energy.validate();
            const auto records = densities_from(densities_path, cf, jobs);
            if (rec->count("--runtime-estimate") == 0) warn("no --runtime-estimate given; savings are reported as 0");
            const auto r = recommend(records, parse_band(band_text), runtime_estimate, energy);
            emit_json(to_json(r), out_path, out);
            return kExitOk;
        }

        if (*sched) {
            if (!plan_path.empty()) {
                if (results_path.empty()) throw ArgumentError("refining a plan needs --results");
                auto plan = plan_from_json(read_json_file(plan_path));
                const auto round = refine(plan, observed_from_results(results_path, classifier));
                const std::string target = out_path.empty() ? plan_path : out_path;
                write_file(target, [&](std::ostream& o) { o << to_json(plan).dump(2) << '\n'; });
                for (const auto& p : round) out << p << '\n';
                if (plan.done) err << "plan complete: " << plan.scheduled() << " pipelines scheduled\n";
                return kExitOk;
            }
            const auto records = densities_from(densities_path, cf, jobs);
            const auto plan = coarse_to_fine(records, stride, radius, budget == 0 ? records.size() : budget);
            if (out_path.empty()) {
                out << to_json(plan).dump(2) << '\n';
            } else {
                write_file(out_path, [&](std::ostream& o) { o << to_json(plan).dump(2) << '\n'; });
                for (const auto& p : plan.rounds.front()) out << p << '\n';
            }
            return kExitOk;
        }

        if (*en) {
            if (neural) energy.power_watts = kNeuralWatts;
            energy.validate();
            if (runtime < 0.0) throw ArgumentError("--runtime must be non-negative");
            const double wh = estimate_energy_wh(runtime, energy);
            const double grams = co2_grams(wh / 1000.0, energy);
            json j;
            j["energy_wh"] = wh;
            j["energy_kwh"] = wh / 1000.0;
            j["co2_g"] = grams;
            j["car_km"] = car_km(grams, energy);
            j["assumptions"] = {{"runtime_s", runtime},
                                {"power_watts", energy.power_watts},
                                {"folds", energy.folds},
                                {"grid_intensity_g_per_kwh", energy.grid_intensity_g_per_kwh},
                                {"car_g_per_km", energy.car_g_per_km},
                                {"note", "full power draw for the whole runtime"}};
            out << j.dump(2) << '\n';
            return kExitOk;
        }

        if (*rep) {
            const auto tables = fixtures_dir.empty() ? load_tables() : load_tables(fixtures_dir);
            bool all_pass = true;
            for (const auto& c : replication_checks(tables)) {
                out << (c.pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << ": " << c.detail << '\n';
                all_pass = all_pass && c.pass;
            }
            return all_pass ? kExitOk : kExitData;
        }

        if (*mk) {
            Corpus corpus;
            if (trend_split > 0) {
                TrendOptions trend;
                if (mk->count("--docs")) trend.n_docs = toy.n_docs;
                if (mk->count("--seed")) trend.seed = toy.seed;
                if (mk->count("--positive-rate")) trend.positive_rate = toy.positive_rate;
                corpus = make_trend_corpus(trend_split, trend);
            } else {
                corpus = make_toy_corpus(toy);
            }
            if (out_path.empty()) {
                write_jsonl(out, corpus);
            } else {
                write_file(out_path, [&](std::ostream& o) { write_jsonl(o, corpus); });
            }
            return kExitOk;
        }
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace fdw
