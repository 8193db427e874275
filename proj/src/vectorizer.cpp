#include "fdw/vectorizer.hpp"

#include "fdw/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fdw {

Vocabulary Vocabulary::fit(std::span<const UnitStream> docs, const VocabularyOptions& options) {
    if (docs.empty()) throw ArgumentError("cannot fit a vocabulary on zero documents");

    std::vector<std::string> order;
    std::vector<std::size_t> df;
    std::unordered_map<std::string, int> index;
    std::vector<std::size_t> last_doc;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& s : docs[d]) {
            auto [it, inserted] = index.try_emplace(s, static_cast<int>(order.size()));
            if (inserted) {
                order.push_back(s);
                df.push_back(1);
                last_doc.push_back(d);
            } else if (last_doc[static_cast<std::size_t>(it->second)] != d) {
                ++df[static_cast<std::size_t>(it->second)];
                last_doc[static_cast<std::size_t>(it->second)] = d;
            }
        }
    }

    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < order.size(); ++c) {
        if (df[c] >= options.min_df) keep.push_back(c);
    }
    if (options.max_features > 0 && keep.size() > options.max_features) {
        std::stable_sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) { return df[a] > df[b]; });
        keep.resize(options.max_features);
        std::sort(keep.begin(), keep.end());
    }

    Vocabulary v;
    v.n_docs_ = docs.size();
    for (std::size_t c : keep) {
        v.index_.emplace(order[c], static_cast<int>(v.surfaces_.size()));
        v.surfaces_.push_back(std::move(order[c]));
        v.df_.push_back(df[c]);
    }
    return v;
}

std::optional<int> Vocabulary::index(const std::string& surface) const {
    auto it = index_.find(surface);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

double Vocabulary::idf(std::size_t col) const {
    return std::log((1.0 + static_cast<double>(n_docs_)) / (1.0 + static_cast<double>(df_[col]))) + 1.0;
}

SparseMatrix transform_tfidf(const Vocabulary& vocab, std::span<const UnitStream> docs) {
    SparseMatrix m(vocab.size());
    std::unordered_map<int, double> counts;
    for (const auto& doc : docs) {
        counts.clear();
        for (const auto& s : doc) {
            if (auto c = vocab.index(s)) counts[*c] += 1.0;
        }
        std::vector<SparseEntry> row;
        row.reserve(counts.size());
        for (auto [col, tf] : counts) row.push_back({col, tf * vocab.idf(static_cast<std::size_t>(col))});
        std::sort(row.begin(), row.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.col < b.col; });
        double norm = 0.0;
        for (const auto& e : row) norm += e.value * e.value;
        if (norm > 0.0) {
            norm = std::sqrt(norm);
            for (auto& e : row) e.value /= norm;
        }
        m.append_row(std::move(row));
    }
    return m;
}

}  // namespace fdw
