#pragma once

#include <vector>

#include "supergeo/superpoly.hpp"

namespace supergeo {

// Matrix over a supercommutative ring with Z/2-graded rows and columns.
// Entry (r,c) must be homogeneous of parity row_parity[r] + col_parity[c].
struct SuperMatrix {
    RingPtr ring;
    std::vector<int> row_parity;
    std::vector<int> col_parity;
    std::vector<std::vector<SuperPoly>> entries;

    static SuperMatrix zero(RingPtr ring, std::vector<int> rp, std::vector<int> cp);
    static SuperMatrix identity(RingPtr ring, std::vector<int> parities);

    int rows() const { return static_cast<int>(row_parity.size()); }
    int cols() const { return static_cast<int>(col_parity.size()); }
    void validate() const;

    SuperMatrix operator*(const SuperMatrix& o) const;
    SuperMatrix operator+(const SuperMatrix& o) const;
    SuperMatrix operator-(const SuperMatrix& o) const;
    bool operator==(const SuperMatrix& o) const;
    bool is_identity() const;

    SuperMatrix submatrix(const std::vector<int>& rs, const std::vector<int>& cs) const;
    SuperMatrix with_ring(const RingPtr& target) const;
};

// Determinant of a square matrix with even (hence central) entries.
SuperPoly det_even(const SuperMatrix& m);

// Inverse of a square matrix with even entries, via the adjugate; requires
// det invertible in the ring.
SuperMatrix inverse_even(const SuperMatrix& m);

// Inverse of an invertible super matrix via block inversion; requires the
// reduced determinants of both diagonal blocks to be units.
SuperMatrix super_inverse(const SuperMatrix& m);

// det(A - B D^-1 C) * det(D)^-1 for the parity block form [[A,B],[C,D]].
SuperPoly berezinian(const SuperMatrix& m);

}  // namespace supergeo
