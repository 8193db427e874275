#pragma once

#include "fdw/corpus.hpp"
#include "fdw/pipelines.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fdw {

/// Feature Density of one pipeline over one corpus: distinct unit surfaces
/// divided by the total number of units.
struct DensityRecord {
    PipelineSpec pipeline;
    std::uint64_t unique_count = 0;
    std::uint64_t total_count = 0;
    double fd = 0.0;

    std::string name() const { return pipeline_name(pipeline); }
    bool operator==(const DensityRecord&) const = default;
};

/// unique / total, or 0 for an empty unit stream.
double feature_density(std::uint64_t unique_count, std::uint64_t total_count);

DensityRecord make_density_record(const PipelineSpec& spec, std::uint64_t unique_count, std::uint64_t total_count);

DensityRecord compute_density(const PipelineSpec& spec, const Corpus& corpus);

/// One record per spec, sorted ascending by fd; ties broken by canonical
/// pipeline order. Specs are evaluated on up to `jobs` threads.
std::vector<DensityRecord> density_report(const Corpus& corpus, const std::vector<PipelineSpec>& specs,
                                          unsigned jobs = 1);

struct Band {
    double lo = 0.05;
    double hi = 0.15;
};

/// Parses "lo:hi".
Band parse_band(std::string_view text);

struct BandSplit {
    std::vector<DensityRecord> keep;
    std::vector<DensityRecord> skip;
};

/// Partitions records by lo <= fd <= hi, preserving input order.
BandSplit band_filter(std::span<const DensityRecord> records, double lo, double hi);

/// Header `pipeline,unique,total,fd`, fd to four decimals.
void write_density_csv(std::ostream& out, std::span<const DensityRecord> records);
std::vector<DensityRecord> read_density_csv(std::istream& in, std::string_view source_name = "densities");

}  // namespace fdw
