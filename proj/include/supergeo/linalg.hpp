#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "supergeo/rational.hpp"

namespace supergeo {

// Sparse vector: (index, value) pairs, strictly increasing indices, no zeros.
using SparseVec = std::vector<std::pair<int, Rat>>;

SparseVec sparse_axpy(const SparseVec& x, const Rat& c, const SparseVec& y);  // x + c*y

// Incremental reduced row echelon form over Q.
//
// Rows are inserted one at a time and reduced against the pivots seen so far;
// finalize() back-substitutes so every pivot column appears in exactly one row.
class RREF {
public:
    void add(SparseVec row);
    void finalize();

    long rank() const { return static_cast<long>(pivots_.size()); }
    bool has_pivot(int col) const { return pivots_.count(col) != 0; }
    const std::map<int, SparseVec>& rows() const { return pivots_; }

    // Remainder of v after eliminating every pivot column.
    SparseVec reduce(SparseVec v) const;

private:
    std::map<int, SparseVec> pivots_;  // pivot column -> normalized row
    bool finalized_ = false;
};

// Rank of a matrix given by sparse columns (length nrows each).
long rank_of_columns(const std::vector<SparseVec>& cols);

struct AffineSolveResult {
    bool solvable = false;
    std::vector<Rat> particular;               // one solution, free vars = 0
    std::vector<std::vector<Rat>> kernel;      // basis of homogeneous solutions
};

// Solves A x = b where A is given column-wise (column j = image of unknown j).
AffineSolveResult solve_columns(const std::vector<SparseVec>& cols, const SparseVec& rhs,
                                bool want_kernel = false);

// dim(span(U) âˆ© span(V)) for column families over a common row index space.
long intersection_dim(const std::vector<SparseVec>& u, const std::vector<SparseVec>& v);

}  // namespace supergeo
