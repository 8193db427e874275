#include "fdw/balance.hpp"

#include "fdw/error.hpp"
#include "fdw/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace fdw {

void SmoteConfig::validate() const {
    if (k < 1) throw ArgumentError("SMOTE k must be at least 1");
    if (!(target_ratio > 0.0 && target_ratio <= 1.0)) throw ArgumentError("SMOTE ratio must be in (0, 1]");
}

std::vector<SparseEntry> interpolate(SparseRow a, SparseRow b, double lambda) {
    std::vector<SparseEntry> out;
    auto i = a.entries.begin();
    auto j = b.entries.begin();
    while (i != a.entries.end() || j != b.entries.end()) {
        if (j == b.entries.end() || (i != a.entries.end() && i->col < j->col)) {
            out.push_back({i->col, i->value - lambda * i->value});
            ++i;
        } else if (i == a.entries.end() || j->col < i->col) {
            out.push_back({j->col, lambda * j->value});
            ++j;
        } else {
            out.push_back({i->col, i->value + lambda * (j->value - i->value)});
            ++i;
            ++j;
        }
    }
    std::erase_if(out, [](const SparseEntry& e) { return e.value == 0.0; });
    return out;
}

std::vector<std::size_t> nearest_neighbors(const SparseMatrix& rows, std::size_t query,
                                           std::span<const std::size_t> candidates, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(candidates.size());
    for (std::size_t c : candidates) {
        if (c == query) continue;
        dist.emplace_back(squared_distance(rows.row(query), rows.row(c)), c);
    }
    k = std::min(k, dist.size());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(dist[i].second);
    return out;
}

SmoteResult smote_oversample(const SparseMatrix& rows, std::span<const int> labels, const SmoteConfig& cfg) {
    cfg.validate();
    if (rows.rows() != labels.size()) throw ArgumentError("SMOTE: row count and label count differ");
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(i);
    if (pos.empty() || neg.empty()) throw ArgumentError("SMOTE needs both classes; got a single class");

    const bool pos_minority = pos.size() <= neg.size();
    const auto& minority = pos_minority ? pos : neg;
    const auto& majority = pos_minority ? neg : pos;

    SmoteResult out;
    out.rows = SparseMatrix(rows.cols());
    for (std::size_t i = 0; i < rows.rows(); ++i) out.rows.append_row(rows.row(i));
    out.labels.assign(labels.begin(), labels.end());
    out.minority_label = pos_minority ? 1 : 0;

    const auto target = static_cast<std::size_t>(std::llround(cfg.target_ratio * static_cast<double>(majority.size())));
    if (minority.size() >= target) return out;
    const std::size_t n_new = target - minority.size();
    const std::size_t k = std::min(static_cast<std::size_t>(cfg.k), minority.size() - 1);

    Rng rng(cfg.seed);
    std::map<std::size_t, std::vector<std::size_t>> neighbors;
    std::set<std::size_t> touched;
    for (std::size_t s = 0; s < n_new; ++s) {
        const std::size_t base = minority[rng.uniform_index(minority.size())];
        SyntheticOrigin origin{base, base, 0.0};
        if (k > 0) {
            auto it = neighbors.find(base);
            if (it == neighbors.end()) {
                ++out.neighbor_queries;
                touched.insert(minority.begin(), minority.end());
                it = neighbors.emplace(base, nearest_neighbors(rows, base, minority, k)).first;
            }
            origin.neighbor = it->second[rng.uniform_index(it->second.size())];
            origin.lambda = rng.uniform01();
        }
        out.rows.append_row(interpolate(rows.row(origin.base), rows.row(origin.neighbor), origin.lambda));
        out.labels.push_back(out.minority_label);
        out.origins.push_back(origin);
    }
    out.touched_rows.assign(touched.begin(), touched.end());
    return out;
}

}  // namespace fdw
