#include "fdw/density.hpp"

#include "fdw/csv.hpp"
#include "fdw/error.hpp"
#include "fdw/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <ostream>
#include <unordered_set>

namespace fdw {

double feature_density(std::uint64_t unique_count, std::uint64_t total_count) {
    if (total_count == 0) return 0.0;
    return static_cast<double>(unique_count) / static_cast<double>(total_count);
}

DensityRecord make_density_record(const PipelineSpec& spec, std::uint64_t unique_count, std::uint64_t total_count) {
    if (unique_count > total_count) throw DataError("density record with unique > total for " + pipeline_name(spec));
    return {spec, unique_count, total_count, feature_density(unique_count, total_count)};
}

DensityRecord compute_density(const PipelineSpec& spec, const Corpus& corpus) {
    require_layers(spec, corpus.capabilities);
    std::unordered_set<std::string> seen;
    std::uint64_t total = 0;
    for (const auto& doc : corpus.docs) {
        if (doc.empty()) continue;
        for (auto& u : apply_pipeline(spec, doc)) {
            ++total;
            seen.insert(std::move(u.surface));
        }
    }
    return make_density_record(spec, seen.size(), total);
}

std::vector<DensityRecord> density_report(const Corpus& corpus, const std::vector<PipelineSpec>& specs, unsigned jobs) {
    for (const auto& s : specs) require_layers(s, corpus.capabilities);
    std::vector<DensityRecord> records(specs.size());
    parallel_for(specs.size(), jobs, [&](std::size_t i) { records[i] = compute_density(specs[i], corpus); });
    std::stable_sort(records.begin(), records.end(), [](const DensityRecord& a, const DensityRecord& b) {
        if (a.fd != b.fd) return a.fd < b.fd;
        return canonical_index(a.pipeline) < canonical_index(b.pipeline);
    });
    return records;
}

namespace {

double parse_bound(std::string_view part, std::string_view text) {
    double v = 0.0;
    const auto* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, v);
    if (ec != std::errc() || ptr != end) throw ArgumentError("band must be 'lo:hi', got '" + std::string(text) + "'");
    return v;
}

}  // namespace

Band parse_band(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ArgumentError("band must be 'lo:hi', got '" + std::string(text) + "'");
    Band b{parse_bound(text.substr(0, colon), text), parse_bound(text.substr(colon + 1), text)};
    if (b.lo > b.hi) throw ArgumentError("band lower bound exceeds upper bound");
    if (b.lo < 0.0 || b.hi > 1.0) throw ArgumentError("band must lie within [0, 1]");
    return b;
}

BandSplit band_filter(std::span<const DensityRecord> records, double lo, double hi) {
    if (lo > hi) throw ArgumentError("band_filter: lo > hi");
    BandSplit split;
    for (const auto& r : records) {
        if (lo <= r.fd && r.fd <= hi) split.keep.push_back(r);
        else split.skip.push_back(r);
    }
    return split;
}

void write_density_csv(std::ostream& out, std::span<const DensityRecord> records) {
    out << "pipeline,unique,total,fd\n";
    char buf[32];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%.4f", r.fd);
        out << r.name() << ',' << r.unique_count << ',' << r.total_count << ',' << buf << '\n';
    }
}

std::vector<DensityRecord> read_density_csv(std::istream& in, std::string_view source_name) {
    auto table = csv::read(in, source_name);
    const auto c_name = table.column("pipeline");
    const auto c_unique = table.column("unique");
    const auto c_total = table.column("total");
    std::vector<DensityRecord> out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        auto spec = parse_pipeline_name(row[c_name]);
        if (!spec) {
            throw DataError(std::string(source_name) + ":" + std::to_string(table.line_numbers[i]) +
                            ": unknown pipeline '" + row[c_name] + "'");
        }
        try {
            out.push_back(make_density_record(*spec, std::stoull(row[c_unique]), std::stoull(row[c_total])));
        } catch (const std::logic_error&) {
            throw DataError(std::string(source_name) + ":" + std::to_string(table.line_numbers[i]) + ": bad counts");
        }
    }
    return out;
}

}  // namespace fdw
