#pragma once

#include "fdw/sparse.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fdw {

struct SmoteConfig {
    int k = 5;
    double target_ratio = 1.0;  // minority target as a fraction of the majority count
    std::uint64_t seed = 0;

    void validate() const;
};

struct SyntheticOrigin {
    std::size_t base = 0;
    std::size_t neighbor = 0;
    double lambda = 0.0;
};

struct SmoteResult {
    SparseMatrix rows;  // originals first, then synthetics
    std::vector<int> labels;
    std::vector<SyntheticOrigin> origins;  // one per synthetic row, indices into the input
    int minority_label = 1;
    std::size_t neighbor_queries = 0;
    /// Input rows read by neighbor searches, sorted and unique.
    std::vector<std::size_t> touched_rows;
};

/// a + lambda * (b - a)
std::vector<SparseEntry> interpolate(SparseRow a, SparseRow b, double lambda);

/// Indices of the k rows among `candidates` nearest to `query` (Euclidean),
/// excluding the query itself; ties go to the lower index.
std::vector<std::size_t> nearest_neighbors(const SparseMatrix& rows, std::size_t query,
                                           std::span<const std::size_t> candidates, std::size_t k);

/// Appends synthetic minority rows until the minority count reaches
/// round(target_ratio * majority count). A single minority row is duplicated.
SmoteResult smote_oversample(const SparseMatrix& rows, std::span<const int> labels, const SmoteConfig& cfg);

}  // namespace fdw
