#pragma once

#include "fdw/sparse.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace fdw {

using UnitStream = std::vector<std::string>;

struct VocabularyOptions {
    std::size_t min_df = 1;
    std::size_t max_features = 0;  // 0 = unlimited
};

class Vocabulary {
public:
    /// Columns in first-appearance order. Throws ArgumentError on zero documents.
    static Vocabulary fit(std::span<const UnitStream> docs, const VocabularyOptions& options = {});

    std::size_t size() const { return surfaces_.size(); }
    std::size_t n_docs() const { return n_docs_; }
    std::optional<int> index(const std::string& surface) const;
    const std::string& surface(std::size_t col) const { return surfaces_[col]; }
    std::size_t df(std::size_t col) const { return df_[col]; }

    /// ln((1 + N) / (1 + df)) + 1
    double idf(std::size_t col) const;

private:
    std::vector<std::string> surfaces_;
    std::vector<std::size_t> df_;
    std::unordered_map<std::string, int> index_;
    std::size_t n_docs_ = 0;
};

/// Raw counts times idf, each row scaled to unit L2 norm. Unknown surfaces
/// are ignored; rows with no known surface stay all-zero.
SparseMatrix transform_tfidf(const Vocabulary& vocab, std::span<const UnitStream> docs);

}  // namespace fdw
