#include "fdw/sparse.hpp"

#include "fdw/error.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace fdw {

double SparseRow::squared_norm() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.value * e.value;
    return s;
}

double dot(SparseRow a, SparseRow b) {
    double s = 0.0;
    auto i = a.entries.begin();
    auto j = b.entries.begin();
    while (i != a.entries.end() && j != b.entries.end()) {
        if (i->col < j->col) ++i;
        else if (j->col < i->col) ++j;
        else {
            s += i->value * j->value;
            ++i;
            ++j;
        }
    }
    return s;
}

double squared_distance(SparseRow a, SparseRow b) {
    double s = 0.0;
    auto i = a.entries.begin();
    auto j = b.entries.begin();
    while (i != a.entries.end() || j != b.entries.end()) {
        double d;
        if (j == b.entries.end() || (i != a.entries.end() && i->col < j->col)) {
            d = i->value;
            ++i;
        } else if (i == a.entries.end() || j->col < i->col) {
            d = j->value;
            ++j;
        } else {
            d = i->value - j->value;
            ++i;
            ++j;
        }
        s += d * d;
    }
    return s;
}

void SparseMatrix::append_row(std::vector<SparseEntry> entries) {
    std::sort(entries.begin(), entries.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.col < b.col; });
    const std::size_t start = entries_.size();
    for (const auto& e : entries) {
        if (e.col < 0 || static_cast<std::size_t>(e.col) >= n_cols_) throw ArgumentError("sparse column out of range");
        if (entries_.size() > start && entries_.back().col == e.col) entries_.back().value += e.value;
        else entries_.push_back(e);
    }
    auto first_zero = std::remove_if(entries_.begin() + static_cast<std::ptrdiff_t>(start), entries_.end(),
                                     [](const SparseEntry& e) { return e.value == 0.0; });
    entries_.erase(first_zero, entries_.end());
    row_ptr_.push_back(entries_.size());
}

void SparseMatrix::append_row(SparseRow row) {
    append_row(std::vector<SparseEntry>(row.entries.begin(), row.entries.end()));
}

SparseMatrix SparseMatrix::select_rows(std::span<const std::size_t> indices) const {
    SparseMatrix out(n_cols_);
    for (std::size_t i : indices) {
        auto r = row(i);
        out.entries_.insert(out.entries_.end(), r.entries.begin(), r.entries.end());
        out.row_ptr_.push_back(out.entries_.size());
    }
    return out;
}

std::vector<double> SparseMatrix::dense_row(std::size_t i) const {
    std::vector<double> out(n_cols_, 0.0);
    for (const auto& e : row(i).entries) out[static_cast<std::size_t>(e.col)] = e.value;
    return out;
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<double>>& rows, std::size_t n_cols) {
    SparseMatrix m(n_cols);
    for (const auto& r : rows) {
        std::vector<SparseEntry> entries;
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (r[j] != 0.0) entries.push_back({static_cast<int>(j), r[j]});
        }
        m.append_row(std::move(entries));
    }
    return m;
}

void write_matrix(std::ostream& out, const SparseMatrix& m) {
    char buf[48];
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << i;
        for (const auto& e : m.row(i).entries) {
            std::snprintf(buf, sizeof buf, "%.6g", e.value);
            out << ' ' << e.col << ':' << buf;
        }
        out << '\n';
    }
}

}  // namespace fdw
