#include "supergeo/supermatrix.hpp"

#include <stdexcept>

namespace supergeo {

SuperMatrix SuperMatrix::zero(RingPtr ring, std::vector<int> rp, std::vector<int> cp) {
    SuperMatrix m;
    m.ring = ring;
    m.row_parity = std::move(rp);
    m.col_parity = std::move(cp);
    m.entries.assign(m.row_parity.size(),
                     std::vector<SuperPoly>(m.col_parity.size(), SuperPoly::zero(ring)));
    return m;
}

SuperMatrix SuperMatrix::identity(RingPtr ring, std::vector<int> parities) {
    SuperMatrix m = zero(ring, parities, parities);
    for (int i = 0; i < m.rows(); ++i) m.entries[i][i] = SuperPoly::one(ring);
    return m;
}

void SuperMatrix::validate() const {
    for (int r = 0; r < rows(); ++r)
        for (int c = 0; c < cols(); ++c) {
            const SuperPoly& e = entries[r][c];
            if (!same_ring(e.ring(), ring))
                throw std::invalid_argument("supermatrix: entry ring mismatch");
            int p = (row_parity[r] + col_parity[c]) & 1;
            bool ok = p == 0 ? e.is_even() : e.is_odd();
            if (!ok) throw std::domain_error("supermatrix: entry parity violates grading");
        }
}

SuperMatrix SuperMatrix::operator*(const SuperMatrix& o) const {
    if (!same_ring(ring, o.ring)) throw std::invalid_argument("supermatrix mul: ring mismatch");
    if (cols() != o.rows() || col_parity != o.row_parity)
        throw std::invalid_argument("supermatrix mul: shape/parity mismatch");
    SuperMatrix out = zero(ring, row_parity, o.col_parity);
    for (int r = 0; r < rows(); ++r)
        for (int c = 0; c < o.cols(); ++c) {
            SuperPoly acc = SuperPoly::zero(ring);
            for (int k = 0; k < cols(); ++k) acc = acc + entries[r][k] * o.entries[k][c];
            out.entries[r][c] = acc;
        }
    return out;
}

SuperMatrix SuperMatrix::operator+(const SuperMatrix& o) const {
    if (rows() != o.rows() || cols() != o.cols())
        throw std::invalid_argument("supermatrix add: shape mismatch");
    SuperMatrix out = *this;
    for (int r = 0; r < rows(); ++r)
        for (int c = 0; c < cols(); ++c) out.entries[r][c] = entries[r][c] + o.entries[r][c];
    return out;
}

SuperMatrix SuperMatrix::operator-(const SuperMatrix& o) const {
    if (rows() != o.rows() || cols() != o.cols())
        throw std::invalid_argument("supermatrix sub: shape mismatch");
    SuperMatrix out = *this;
    for (int r = 0; r < rows(); ++r)
        for (int c = 0; c < cols(); ++c) out.entries[r][c] = entries[r][c] - o.entries[r][c];
    return out;
}

bool SuperMatrix::operator==(const SuperMatrix& o) const {
    if (rows() != o.rows() || cols() != o.cols()) return false;
    for (int r = 0; r < rows(); ++r)
        for (int c = 0; c < cols(); ++c)
            if (!(entries[r][c] == o.entries[r][c])) return false;
    return true;
}

bool SuperMatrix::is_identity() const {
    if (rows() != cols()) return false;
    for (int r = 0; r < rows(); ++r)
        for (int c = 0; c < cols(); ++c) {
            const SuperPoly want =
                r == c ? SuperPoly::one(ring) : SuperPoly::zero(ring);
            if (!(entries[r][c] == want)) return false;
        }
    return true;
}

SuperMatrix SuperMatrix::submatrix(const std::vector<int>& rs, const std::vector<int>& cs) const {
    SuperMatrix out;
    out.ring = ring;
    for (int r : rs) out.row_parity.push_back(row_parity[r]);
    for (int c : cs) out.col_parity.push_back(col_parity[c]);
    for (int r : rs) {
        std::vector<SuperPoly> row;
        for (int c : cs) row.push_back(entries[r][c]);
        out.entries.push_back(std::move(row));
    }
    return out;
}

SuperMatrix SuperMatrix::with_ring(const RingPtr& target) const {
    SuperMatrix out;
    out.ring = target;
    out.row_parity = row_parity;
    out.col_parity = col_parity;
    for (const auto& row : entries) {
        std::vector<SuperPoly> nrow;
        for (const auto& e : row) nrow.push_back(e.with_ring(target));
        out.entries.push_back(std::move(nrow));
    }
    return out;
}

namespace {

SuperPoly det_rec(const SuperMatrix& m, std::vector<int> rs, std::vector<int> cs) {
    if (rs.empty()) return SuperPoly::one(m.ring);
    if (rs.size() == 1) return m.entries[rs[0]][cs[0]];
    SuperPoly acc = SuperPoly::zero(m.ring);
    std::vector<int> rrest(rs.begin() + 1, rs.end());
    for (size_t j = 0; j < cs.size(); ++j) {
        const SuperPoly& e = m.entries[rs[0]][cs[j]];
        if (e.is_zero()) continue;
        std::vector<int> crest;
        for (size_t k = 0; k < cs.size(); ++k)
            if (k != j) crest.push_back(cs[k]);
        SuperPoly minor = det_rec(m, rrest, crest);
        acc = (j & 1) ? acc - e * minor : acc + e * minor;
    }
    return acc;
}

std::vector<int> iota_vec(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return v;
}

}  // namespace

SuperPoly det_even(const SuperMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det_even: not square");
    for (const auto& row : m.entries)
        for (const auto& e : row)
            if (!e.is_even()) throw std::domain_error("det_even: odd entry");
    return det_rec(m, iota_vec(m.rows()), iota_vec(m.cols()));
}

SuperMatrix inverse_even(const SuperMatrix& m) {
    int n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("inverse_even: not square");
    SuperPoly d = det_even(m);
    SuperPoly dinv = d.invert_even();
    SuperMatrix out = SuperMatrix::zero(m.ring, m.col_parity, m.row_parity);
    auto all = iota_vec(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            std::vector<int> rs, cs;
            for (int k = 0; k < n; ++k) {
                if (k != c) rs.push_back(k);
                if (k != r) cs.push_back(k);
            }
            SuperPoly cof = det_rec(m, rs, cs);
            if ((r + c) & 1) cof = -cof;
            out.entries[r][c] = cof * dinv;
        }
    (void)all;
    return out;
}

SuperMatrix super_inverse(const SuperMatrix& m) {
    int n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("super_inverse: not square");
    std::vector<int> er, orr, ec, oc;
    for (int i = 0; i < n; ++i) (m.row_parity[i] == 0 ? er : orr).push_back(i);
    for (int i = 0; i < n; ++i) (m.col_parity[i] == 0 ? ec : oc).push_back(i);
    if (er.size() != ec.size() || orr.size() != oc.size())
        throw std::invalid_argument("super_inverse: not square in the super sense");

    SuperMatrix out = SuperMatrix::zero(m.ring, m.col_parity, m.row_parity);
    auto place = [&](const std::vector<int>& rs, const std::vector<int>& cs,
                     const SuperMatrix& blk) {
        for (size_t r = 0; r < rs.size(); ++r)
            for (size_t c = 0; c < cs.size(); ++c) out.entries[rs[r]][cs[c]] = blk.entries[r][c];
    };

    if (orr.empty()) {
        place(ec, er, inverse_even(m));
        return out;
    }
    if (er.empty()) {
        place(oc, orr, inverse_even(m));
        return out;
    }
    SuperMatrix A = m.submatrix(er, ec), B = m.submatrix(er, oc);
    SuperMatrix C = m.submatrix(orr, ec), D = m.submatrix(orr, oc);
    SuperMatrix Dinv = inverse_even(D);
    SuperMatrix S = A - B * (Dinv * C);
    SuperMatrix Sinv = inverse_even(S);
    // inverse indexed (columns of m) x (rows of m)
    place(ec, er, Sinv);
    place(ec, orr, SuperMatrix::zero(m.ring, Sinv.row_parity, Dinv.col_parity) -
                       Sinv * (B * Dinv));
    place(oc, er, SuperMatrix::zero(m.ring, Dinv.row_parity, Sinv.col_parity) -
                       Dinv * (C * Sinv));
    place(oc, orr, Dinv + Dinv * (C * (Sinv * (B * Dinv))));
    return out;
}

SuperPoly berezinian(const SuperMatrix& m) {
    int n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("berezinian: not square");
    std::vector<int> er, orr, ec, oc;
    for (int i = 0; i < n; ++i) (m.row_parity[i] == 0 ? er : orr).push_back(i);
    for (int i = 0; i < n; ++i) (m.col_parity[i] == 0 ? ec : oc).push_back(i);
    if (er.size() != ec.size() || orr.size() != oc.size())
        throw std::invalid_argument("berezinian: not square in the super sense");
    if (orr.empty()) {
        SuperPoly d = det_even(m);
        if (!d.is_invertible()) throw std::domain_error("berezinian: non-invertible diagonal block");
        return d;
    }
    SuperMatrix D = m.submatrix(orr, oc);
    SuperPoly detD_inv = det_even(D).invert_even();
    if (er.empty()) return detD_inv;
    SuperMatrix A = m.submatrix(er, ec), B = m.submatrix(er, oc), C = m.submatrix(orr, ec);
    SuperMatrix S = A - B * (inverse_even(D) * C);
    SuperPoly detS = det_even(S);
    if (!detS.is_invertible()) throw std::domain_error("berezinian: non-invertible diagonal block");
    return detS * detD_inv;
}

}  // namespace supergeo
