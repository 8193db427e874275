#include "fdw/fixtures.hpp"

#include "fdw/csv.hpp"
#include "fdw/embedded.hpp"
#include "fdw/error.hpp"
#include "fdw/evaluation.hpp"
#include "fdw/planner.hpp"
#include "fdw/random.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fdw {

namespace {

constexpr std::size_t kPipelineRows = 68;
constexpr std::size_t kClassifierRows = 12;

struct Sources {
    std::map<std::string, std::string> files;  // file name -> content
};

const char* const kFiles[] = {"table2.csv", "table3.csv", "table4.csv", "table5.csv", "name_map.csv"};

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void verify_checksums(const Sources& src, std::string_view checksums) {
    std::map<std::string, std::string> expected;
    std::istringstream in{std::string(checksums)};
    std::string hash, name;
    while (in >> hash >> name) expected[name] = hash;
    for (const char* file : kFiles) {
        auto it = expected.find(file);
        if (it == expected.end()) throw DataError(std::string("fixture checksum list lacks ") + file);
        const std::string got = hex64(fnv1a64(src.files.at(file)));
        if (got != it->second) {
            throw DataError(std::string("fixture checksum mismatch for ") + file + ": expected " + it->second + ", got " + got);
        }
    }
}

double number(const std::string& field, const std::string& where) {
    try {
        std::size_t used = 0;
        double v = std::stod(field, &used);
        if (used == field.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw DataError(where + ": '" + field + "' is not a number");
}

std::uint64_t count(const std::string& field, const std::string& where) {
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(field, &used);
        if (used == field.size() && field.find('-') == std::string::npos) return v;
    } catch (const std::exception&) {
    }
    throw DataError(where + ": '" + field + "' is not a count");
}

void in_range(double v, double lo, double hi, const std::string& where) {
    if (v < lo || v > hi) throw DataError(where + ": value " + std::to_string(v) + " out of range");
}

csv::Table parse(const Sources& src, const std::string& file) {
    std::istringstream in(src.files.at(file));
    return csv::read(in, file);
}

struct MapEntry {
    std::string source_label;
    std::string pipeline;
    bool ambiguous = false;
};

using NameMap = std::map<std::pair<std::string, int>, MapEntry>;

NameMap parse_name_map(const Sources& src) {
    const auto t = parse(src, "name_map.csv");
    const auto it = t.column("table"), ir = t.column("row"), is = t.column("source_label"), ip = t.column("pipeline"),
               ia = t.column("ambiguous");
    NameMap map;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::string where = "name_map.csv:" + std::to_string(t.line_numbers[r]);
        if (!parse_pipeline_name(row[ip])) throw DataError(where + ": '" + row[ip] + "' is not a pipeline name");
        const auto key = std::make_pair(row[it], static_cast<int>(count(row[ir], where)));
        if (!map.emplace(key, MapEntry{row[is], row[ip], row[ia] == "yes"}).second) {
            throw DataError(where + ": duplicate entry");
        }
    }
    return map;
}

const MapEntry& lookup(const NameMap& map, const std::string& table, int row, const std::string& label) {
    auto it = map.find({table, row});
    if (it == map.end()) throw DataError("name_map.csv has no entry for " + table + " row " + std::to_string(row));
    if (it->second.source_label != label) {
        throw DataError("name_map.csv entry for " + table + " row " + std::to_string(row) + " expects '" +
                        it->second.source_label + "', table has '" + label + "'");
    }
    return it->second;
}

void expect_rows(const csv::Table& t, std::size_t n, const std::string& file) {
    if (t.rows.size() != n) {
        throw DataError(file + ": expected " + std::to_string(n) + " rows, found " + std::to_string(t.rows.size()));
    }
}

PaperTables build(const Sources& src, std::string_view checksums) {
    verify_checksums(src, checksums);
    const NameMap names = parse_name_map(src);
    PaperTables out;

    {
        const auto t = parse(src, "table2.csv");
        expect_rows(t, kPipelineRows, "table2.csv");
        const auto ir = t.column("row"), is = t.column("source_label"), iu = t.column("unique"), it = t.column("total"),
                   ifd = t.column("fd");
        std::set<std::string> seen;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const auto& row = t.rows[r];
            const std::string where = "table2.csv:" + std::to_string(t.line_numbers[r]);
            Table2Row x;
            x.row = static_cast<int>(count(row[ir], where));
            x.source_label = row[is];
            const auto& m = lookup(names, "table2", x.row, x.source_label);
            x.pipeline = m.pipeline;
            x.ambiguous = m.ambiguous;
            x.unique = count(row[iu], where);
            x.total = count(row[it], where);
            x.fd = number(row[ifd], where);
            in_range(x.fd, 0.0, 1.0, where);
            if (x.unique > x.total || x.total == 0) throw DataError(where + ": unique exceeds total");
            if (!seen.insert(x.pipeline).second) throw DataError(where + ": pipeline " + x.pipeline + " appears twice");
            out.table2.push_back(std::move(x));
        }
    }
    std::set<std::string> table2_names;
    for (const auto& r : out.table2) table2_names.insert(r.pipeline);

    {
        const auto t = parse(src, "table5.csv");
        expect_rows(t, kPipelineRows, "table5.csv");
        const auto ir = t.column("row"), is = t.column("source_label");
        for (std::size_t c = 2; c < t.header.size(); ++c) out.table5.classifiers.push_back(t.header[c]);
        if (out.table5.classifiers.size() != kClassifierRows) throw DataError("table5.csv: expected 12 classifier columns");
        std::set<std::string> seen;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const auto& row = t.rows[r];
            const std::string where = "table5.csv:" + std::to_string(t.line_numbers[r]);
            const int index = static_cast<int>(count(row[ir], where));
            const auto& m = lookup(names, "table5", index, row[is]);
            if (!table2_names.contains(m.pipeline)) throw DataError(where + ": " + m.pipeline + " is not a table2 pipeline");
            if (!seen.insert(m.pipeline).second) throw DataError(where + ": pipeline " + m.pipeline + " appears twice");
            out.table5.source_labels.push_back(row[is]);
            out.table5.pipelines.push_back(m.pipeline);
            std::vector<double> cells;
            for (std::size_t c = 2; c < row.size(); ++c) {
                const double v = number(row[c], where);
                in_range(v, 0.0, 1.0, where);
                cells.push_back(v);
            }
            out.table5.f1.push_back(std::move(cells));
        }
    }

    {
        const auto t = parse(src, "table3.csv");
        expect_rows(t, kClassifierRows, "table3.csv");
        const auto ic = t.column("classifier"), is = t.column("source_label"), ib = t.column("best_f1"),
                   ip = t.column("best_pipeline"), irho = t.column("rho");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const auto& row = t.rows[r];
            const std::string where = "table3.csv:" + std::to_string(t.line_numbers[r]);
            Table3Row x;
            x.classifier = row[ic];
            x.source_label = row[is];
            x.best_f1 = number(row[ib], where);
            in_range(x.best_f1, 0.0, 1.0, where);
            x.best_source = row[ip];
            x.best_pipeline = lookup(names, "table3", static_cast<int>(r), row[ip]).pipeline;
            x.rho = number(row[irho], where);
            in_range(x.rho, -1.0, 1.0, where);
            out.table5.classifier_index(x.classifier);
            out.table3.push_back(std::move(x));
        }
    }

    {
        const auto t = parse(src, "table4.csv");
        expect_rows(t, kClassifierRows, "table4.csv");
        const auto ic = t.column("classifier"), is = t.column("source_label"), in = t.column("neural"),
                   irt = t.column("runtime_s"), iw = t.column("power_wh"), ib = t.column("best_f1");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const auto& row = t.rows[r];
            const std::string where = "table4.csv:" + std::to_string(t.line_numbers[r]);
            Table4Row x;
            x.classifier = row[ic];
            x.source_label = row[is];
            if (row[in] != "0" && row[in] != "1") throw DataError(where + ": neural must be 0 or 1");
            x.neural = row[in] == "1";
            x.runtime_s = number(row[irt], where);
            x.power_wh = number(row[iw], where);
            x.best_f1 = number(row[ib], where);
            if (x.runtime_s < 0 || x.power_wh < 0) throw DataError(where + ": negative runtime or energy");
            in_range(x.best_f1, 0.0, 1.0, where);
            out.table5.classifier_index(x.classifier);
            out.table4.push_back(std::move(x));
        }
    }
    return out;
}

}  // namespace

std::size_t Table5::classifier_index(std::string_view classifier) const {
    for (std::size_t i = 0; i < classifiers.size(); ++i) {
        if (classifiers[i] == classifier) return i;
    }
    throw DataError("table5 has no classifier column '" + std::string(classifier) + "'");
}

std::optional<double> Table5::at(std::string_view pipeline, std::string_view classifier) const {
    const std::size_t c = classifier_index(classifier);
    for (std::size_t r = 0; r < pipelines.size(); ++r) {
        if (pipelines[r] == pipeline) return f1[r][c];
    }
    return std::nullopt;
}

std::vector<DensityRecord> PaperTables::densities() const {
    std::vector<DensityRecord> out;
    for (const auto& r : table2) {
        DensityRecord d;
        d.pipeline = pipeline_from_name(r.pipeline);
        d.unique_count = r.unique;
        d.total_count = r.total;
        d.fd = r.fd;
        out.push_back(d);
    }
    return out;
}

PaperTables load_tables() {
    Sources src;
    const std::pair<const char*, const char*> keys[] = {{"table2.csv", "table2"},
                                                        {"table3.csv", "table3"},
                                                        {"table4.csv", "table4"},
                                                        {"table5.csv", "table5"},
                                                        {"name_map.csv", "name_map"}};
    for (auto [file, key] : keys) {
        auto content = embedded::lookup(key);
        if (!content) throw DataError(std::string("embedded fixture missing: ") + file);
        src.files[file] = std::string(*content);
    }
    auto checksums = embedded::lookup("checksums");
    if (!checksums) throw DataError("embedded fixture checksums missing");
    return build(src, *checksums);
}

PaperTables load_tables(const std::filesystem::path& dir) {
    auto read = [&](const std::string& name) {
        std::ifstream in(dir / name, std::ios::binary);
        if (!in) throw DataError("cannot open " + (dir / name).string());
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    Sources src;
    for (const char* file : kFiles) src.files[file] = read(file);
    return build(src, read("CHECKSUMS"));
}

namespace {

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

}  // namespace

std::vector<CheckResult> replication_checks(const PaperTables& tables) {
    std::vector<CheckResult> out;

    {
        CheckResult c{1, "FD arithmetic (68 density-table rows within 5e-5)", true, ""};
        std::size_t ok = 0;
        std::string bad;
        for (const auto& r : tables.table2) {
            const double fd = feature_density(r.unique, r.total);
            const double delta = std::abs(fd - r.fd);
            if (delta < 5e-5) {
                ++ok;
            } else {
                c.pass = false;
                bad += " row " + std::to_string(r.row) + " " + r.pipeline + " (" + std::to_string(r.unique) + "/" +
                       std::to_string(r.total) + " = " + fmt("%.6f", fd) + ", published " + fmt("%.4f", r.fd) +
                       ", delta " + fmt("%.2e", delta) + ")";
            }
        }
        c.detail = std::to_string(ok) + "/" + std::to_string(tables.table2.size()) + " rows match";
        if (!bad.empty()) c.detail += "; mismatch:" + bad;
        out.push_back(c);
    }

    {
        const auto records = tables.densities();
        const auto split = band_filter(records, 0.05, 0.15);
        CheckResult c{2, "band [0.05, 0.15] keeps 38 of 68", split.keep.size() == 38 && records.size() == 68, ""};
        c.detail = "kept " + std::to_string(split.keep.size()) + " of " + std::to_string(records.size());
        out.push_back(c);
    }

    {
        CheckResult c{3, "energy model (12 power-table rows within 0.01 Wh; 21 kWh -> 5.775 kg, 47.3 km)", true, ""};
        double worst = 0.0;
        for (const auto& r : tables.table4) {
            EnergyModel m;
            m.power_watts = r.neural ? kNeuralWatts : kNonNeuralWatts;
            const double wh = estimate_energy_wh(r.runtime_s, m);
            const double delta = std::abs(wh - r.power_wh);
            worst = std::max(worst, delta);
            if (delta > 0.01 + 1e-9) {
                c.pass = false;
                c.detail += r.classifier + " " + fmt("%.2f", wh) + " vs " + fmt("%.2f", r.power_wh) + "; ";
            }
        }
        const EnergyModel m;
        const double grams = co2_grams(21.0, m);
        const double km = car_km(grams, m);
        if (std::abs(grams - 5775.0) > 1e-9 || std::abs(km - 47.3) >= 0.05) c.pass = false;
        c.detail += "max Wh delta " + fmt("%.4f", worst) + "; 21 kWh -> " + fmt("%.3f", grams / 1000.0) + " kg, " +
                    fmt("%.1f", km) + " km";
        out.push_back(c);
    }

    {
        CheckResult c{4, "best-F1 table rho within 0.05 for all 12 classifiers", true, ""};
        const auto records = tables.densities();
        std::size_t matched = 0;
        for (const auto& t3 : tables.table3) {
            std::vector<F1Entry> entries;
            const std::size_t col = tables.table5.classifier_index(t3.classifier);
            for (std::size_t r = 0; r < tables.table5.pipelines.size(); ++r) {
                entries.push_back({t3.classifier, tables.table5.pipelines[r], tables.table5.f1[r][col]});
            }
            const double excl = correlate(entries, records, is_poss_family).front().rho;
            const double incl = correlate(entries, records, nullptr).front().rho;
            const bool m_excl = std::abs(excl - t3.rho) <= 0.05;
            const bool m_incl = std::abs(incl - t3.rho) <= 0.05;
            std::string setting = m_excl ? "POSS excluded" : (m_incl ? "POSS included" : "no match");
            if (m_excl || m_incl) ++matched;
            else c.pass = false;
            c.detail += t3.classifier + " " + fmt("%+.4f", t3.rho) + " excl " + fmt("%+.4f", excl) + " incl " +
                        fmt("%+.4f", incl) + " [" + setting + "]; ";
        }
        c.detail = std::to_string(matched) + "/" + std::to_string(tables.table3.size()) + " match: " + c.detail;
        out.push_back(c);
    }
    return out;
}

}  // namespace fdw
