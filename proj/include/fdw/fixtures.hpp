#pragma once

#include "fdw/density.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fdw {

struct Table2Row {
    int row = 0;
    std::string source_label;
    std::string pipeline;  // normalized
    bool ambiguous = false;
    std::uint64_t unique = 0;
    std::uint64_t total = 0;
    double fd = 0.0;  // as published, four decimals
};

struct Table3Row {
    std::string classifier;
    std::string source_label;
    double best_f1 = 0.0;
    std::string best_source;
    std::string best_pipeline;  // normalized
    double rho = 0.0;
};

struct Table4Row {
    std::string classifier;
    std::string source_label;
    bool neural = false;
    double runtime_s = 0.0;
    double power_wh = 0.0;
    double best_f1 = 0.0;
};

struct Table5 {
    std::vector<std::string> classifiers;     // column keys, e.g. "sgd_svm"
    std::vector<std::string> source_labels;   // per row
    std::vector<std::string> pipelines;       // per row, normalized
    std::vector<std::vector<double>> f1;      // [row][classifier]

    std::size_t classifier_index(std::string_view classifier) const;
    std::optional<double> at(std::string_view pipeline, std::string_view classifier) const;
};

struct PaperTables {
    std::vector<Table2Row> table2;
    std::vector<Table3Row> table3;
    std::vector<Table4Row> table4;
    Table5 table5;

    /// table2 as density records built from the published fd (not unique/total).
    std::vector<DensityRecord> densities() const;
};

/// Loads the tables compiled into the library.
PaperTables load_tables();
/// Loads table2..5.csv, name_map.csv and CHECKSUMS from a directory.
PaperTables load_tables(const std::filesystem::path& dir);

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

/// The fixture-only reproduction checks: FD arithmetic, the 0.05-0.15 band
/// count, the energy model, and the FD/F1 correlations.
std::vector<CheckResult> replication_checks(const PaperTables& tables);

}  // namespace fdw
