#include "supergeo/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace supergeo {

SparseVec sparse_axpy(const SparseVec& x, const Rat& c, const SparseVec& y) {
    SparseVec out;
    out.reserve(x.size() + y.size());
    size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
            out.push_back(x[i++]);
        } else if (i == x.size() || y[j].first < x[i].first) {
            Rat v = c * y[j].second;
            if (v != 0) out.emplace_back(y[j].first, v);
            ++j;
        } else {
            Rat v = x[i].second + c * y[j].second;
            if (v != 0) out.emplace_back(x[i].first, v);
            ++i;
            ++j;
        }
    }
    return out;
}

void RREF::add(SparseVec row) {
    finalized_ = false;
    while (!row.empty()) {
        int lead = row.front().first;
        auto it = pivots_.find(lead);
        if (it == pivots_.end()) {
            Rat inv = 1 / row.front().second;
            for (auto& [c, v] : row) v *= inv;
            pivots_.emplace(lead, std::move(row));
            return;
        }
        row = sparse_axpy(row, -row.front().second, it->second);
    }
}

SparseVec RREF::reduce(SparseVec v) const {
    // Eliminating pivot column c only introduces columns > c, so a single
    // left-to-right sweep terminates.
    size_t i = 0;
    while (i < v.size()) {
        auto it = pivots_.find(v[i].first);
        if (it == pivots_.end()) {
            ++i;
            continue;
        }
        v = sparse_axpy(v, -v[i].second, it->second);
    }
    return v;
}

void RREF::finalize() {
    if (finalized_) return;
    for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
        SparseVec& row = it->second;
        size_t i = 0;
        while (i < row.size()) {
            int c = row[i].first;
            if (c != it->first && pivots_.count(c)) {
                row = sparse_axpy(row, -row[i].second, pivots_.at(c));
                // restart scan past the pivot entry; indices before c unchanged
                i = 0;
                continue;
            }
            ++i;
        }
    }
    finalized_ = true;
}

namespace {

// Transpose sparse columns into sparse rows.
std::vector<SparseVec> transpose_cols(const std::vector<SparseVec>& cols) {
    int nrows = 0;
    for (const auto& c : cols)
        if (!c.empty()) nrows = std::max(nrows, c.back().first + 1);
    std::vector<SparseVec> rows(nrows);
    for (int j = 0; j < static_cast<int>(cols.size()); ++j)
        for (const auto& [r, v] : cols[j]) rows[r].emplace_back(j, v);
    return rows;
}

}  // namespace

long rank_of_columns(const std::vector<SparseVec>& cols) {
    RREF rr;
    for (const auto& c : cols) rr.add(c);
    return rr.rank();
}

AffineSolveResult solve_columns(const std::vector<SparseVec>& cols, const SparseVec& rhs,
                                bool want_kernel) {
    const int ncols = static_cast<int>(cols.size());
    // Augmented rows [A | b]; b occupies column index ncols.
    std::vector<SparseVec> rows = transpose_cols(cols);
    {
        int need = 0;
        for (const auto& [r, v] : rhs) need = std::max(need, r + 1);
        if (static_cast<int>(rows.size()) < need) rows.resize(need);
        for (const auto& [r, v] : rhs) rows[r].emplace_back(ncols, v);
    }
    RREF rr;
    for (auto& row : rows) rr.add(std::move(row));
    rr.finalize();

    AffineSolveResult res;
    if (rr.has_pivot(ncols)) {
        res.solvable = false;
        return res;
    }
    res.solvable = true;
    res.particular.assign(ncols, Rat(0));
    for (const auto& [pc, row] : rr.rows()) {
        for (const auto& [c, v] : row)
            if (c == ncols) res.particular[pc] = v;
    }
    if (want_kernel) {
        for (int f = 0; f < ncols; ++f) {
            if (rr.has_pivot(f)) continue;
            std::vector<Rat> k(ncols, Rat(0));
            k[f] = 1;
            for (const auto& [pc, row] : rr.rows()) {
                for (const auto& [c, v] : row)
                    if (c == f) k[pc] = -v;
            }
            res.kernel.push_back(std::move(k));
        }
    }
    return res;
}

long intersection_dim(const std::vector<SparseVec>& u, const std::vector<SparseVec>& v) {
    long ru = rank_of_columns(u);
    long rv = rank_of_columns(v);
    std::vector<SparseVec> joint = u;
    joint.insert(joint.end(), v.begin(), v.end());
    long rj = rank_of_columns(joint);
    return ru + rv - rj;
}

}  // namespace supergeo
