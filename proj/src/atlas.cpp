#include "supergeo/atlas.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace supergeo {

namespace {

std::string row_label(int r, int m) {
    return r < m ? "e" + std::to_string(r) : "o" + std::to_string(r - m);
}

std::vector<std::vector<int>> combinations(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i <= n - (k - static_cast<int>(cur.size())); ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

std::vector<long> unit_vec(int rank, int i) {
    std::vector<long> v(rank, 0);
    v[i] = 1;
    return v;
}

std::vector<long> sub_vec(const std::vector<long>& a, const std::vector<long>& b) {
    std::vector<long> v(a.size());
    for (size_t i = 0; i < a.size(); ++i) v[i] = a[i] - b[i];
    return v;
}

}  // namespace

const Overlap* Atlas::overlap(int i, int j) const {
    auto it = overlaps.find({i, j});
    return it == overlaps.end() ? nullptr : &it->second;
}

RingPtr Atlas::overlap_ring(int i, int j) const {
    const Overlap* o = overlap(i, j);
    if (!o) throw std::invalid_argument("overlap_ring: pair not representable");
    return charts[i].ring->localized(o->inverted);
}

RingPtr Atlas::tuple_ring(const std::vector<int>& tuple) const {
    if (tuple.empty()) throw std::invalid_argument("tuple_ring: empty tuple");
    int t0 = tuple[0];
    std::vector<int> inv;
    for (size_t p = 1; p < tuple.size(); ++p) {
        const Overlap* o = overlap(t0, tuple[p]);
        if (!o) throw std::invalid_argument("tuple_ring: pair not representable");
        inv.insert(inv.end(), o->inverted.begin(), o->inverted.end());
    }
    return charts[t0].ring->localized(inv);
}

GenAssignment Atlas::into_tuple(const std::vector<int>& tuple, int j) const {
    RingPtr tr = tuple_ring(tuple);
    if (j == tuple[0]) return GenAssignment::identity(charts[j].ring).with_target(tr);
    const Overlap* o = overlap(tuple[0], j);
    if (!o) throw std::invalid_argument("into_tuple: pair not representable");
    return o->transition.with_target(tr);
}

std::optional<RingPtr> localize_for(const RingPtr& ring, const SuperPoly& f) {
    SuperPoly r = f.reduced_part();
    if (r.terms().size() != 1) return std::nullopt;
    const Monomial& m = r.terms().begin()->first;
    std::vector<int> extra;
    for (int i = 0; i < ring->n_even(); ++i)
        if (m.even[i] != 0 && !ring->is_invertible(i)) extra.push_back(i);
    return ring->localized(extra);
}

Atlas::Report Atlas::verify() const {
    Report rep;
    auto fail = [&](const std::string& s) {
        rep.ok = false;
        rep.failures.push_back(s);
    };
    // symmetric pairs are mutually inverse
    for (const auto& [key, ov] : overlaps) {
        auto [i, j] = key;
        const Overlap* back = overlap(j, i);
        if (!back) {
            fail("pair (" + std::to_string(j) + "," + std::to_string(i) + ") missing");
            continue;
        }
        ++rep.pairs_checked;
        // extend t_ij to the localization t_ji maps into, then compose
        RingPtr ext = charts[i].ring->localized(ov.inverted);
        bool good = true;
        for (int g : back->inverted) {
            auto loc = localize_for(ext, ov.transition.even_images[g].with_ring(ext));
            if (!loc) {
                good = false;
                break;
            }
            ext = *loc;
        }
        if (!good) {
            fail("pair (" + std::to_string(i) + "," + std::to_string(j) +
                 "): cannot extend to round-trip localization");
            continue;
        }
        GenAssignment tij = ov.transition.with_target(ext);
        const RingPtr& ri = charts[i].ring;
        for (int g = 0; g < ri->n_even() + ri->n_odd(); ++g) {
            SuperPoly x = g < ri->n_even() ? SuperPoly::even_gen(ri, g)
                                           : SuperPoly::odd_gen(ri, g - ri->n_even());
            SuperPoly round = tij.apply(back->transition.apply(x));
            if (!(round == x.with_ring(ext))) {
                fail("pair (" + std::to_string(i) + "," + std::to_string(j) +
                     "): transitions are not mutually inverse");
                break;
            }
        }
    }
    // cocycle condition on triples
    for (int i = 0; i < n_charts(); ++i)
        for (int j = 0; j < n_charts(); ++j)
            for (int k = 0; k < n_charts(); ++k) {
                if (i == j || j == k || i == k) continue;
                const Overlap* oij = overlap(i, j);
                const Overlap* ojk = overlap(j, k);
                const Overlap* oik = overlap(i, k);
                if (!oij || !ojk || !oik) {
                    ++rep.triples_skipped;
                    continue;
                }
                // join localization of chart i where everything is defined
                RingPtr join = charts[i].ring->localized(oij->inverted);
                join = join->localized(oik->inverted);
                bool good = true;
                for (int g : ojk->inverted) {
                    auto loc =
                        localize_for(join, oij->transition.even_images[g].with_ring(join));
                    if (!loc) {
                        good = false;
                        break;
                    }
                    join = *loc;
                }
                if (!good) {
                    ++rep.triples_skipped;
                    continue;
                }
                ++rep.triples_checked;
                GenAssignment tij = oij->transition.with_target(join);
                const RingPtr& rk = charts[k].ring;
                for (int g = 0; g < rk->n_even() + rk->n_odd(); ++g) {
                    SuperPoly x = g < rk->n_even() ? SuperPoly::even_gen(rk, g)
                                                   : SuperPoly::odd_gen(rk, g - rk->n_even());
                    SuperPoly via_j = tij.apply(ojk->transition.apply(x));
                    SuperPoly direct = oik->transition.apply(x).with_ring(join);
                    if (!(via_j == direct)) {
                        fail("triple (" + std::to_string(i) + "," + std::to_string(j) + "," +
                             std::to_string(k) + "): cocycle condition fails");
                        break;
                    }
                }
            }
    return rep;
}

Atlas build_affine_space(const std::vector<std::string>& even,
                         const std::vector<std::string>& odd) {
    Atlas a;
    a.kind.type = AtlasKind::Affine;
    Chart c;
    c.label = "affine";
    c.ring = RingDescriptor::make(even, odd);
    a.charts.push_back(std::move(c));
    return a;
}

Atlas build_projective_superspace(int m, int n) {
    if (m < 0 || n < 0) throw std::invalid_argument("projective superspace: need m,n >= 0");
    Atlas a;
    a.kind.type = AtlasKind::Proj;
    a.kind.params = {m, n};
    bool paired = (n == m + 1);
    a.grading_rank = paired ? m + 1 : m + 1 + n;

    for (int i = 0; i <= m; ++i) {
        Chart c;
        c.label = "x" + std::to_string(i);
        std::vector<std::string> evens, odds;
        for (int j = 0; j <= m; ++j)
            if (j != i) evens.push_back("u" + std::to_string(j));
        for (int k = 0; k < n; ++k) odds.push_back("h" + std::to_string(k));
        c.ring = RingDescriptor::make(evens, odds);
        for (int j = 0; j <= m; ++j)
            if (j != i)
                c.even_deg.push_back(
                    sub_vec(unit_vec(a.grading_rank, j), unit_vec(a.grading_rank, i)));
        for (int k = 0; k < n; ++k)
            c.odd_deg.push_back(sub_vec(unit_vec(a.grading_rank, paired ? k : m + 1 + k),
                                        unit_vec(a.grading_rank, i)));
        a.charts.push_back(std::move(c));
    }

    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j) {
            if (i == j) continue;
            const RingPtr& ri = a.charts[i].ring;
            const RingPtr& rj = a.charts[j].ring;
            int inv_idx = ri->even_index("u" + std::to_string(j));
            RingPtr loc = ri->localized({inv_idx});
            SuperPoly uj_inv = SuperPoly::even_gen(loc, inv_idx, -1);
            GenAssignment t;
            t.source = rj;
            t.target = loc;
            for (int l = 0; l <= m; ++l) {
                if (l == j) continue;
                if (l == i)
                    t.even_images.push_back(uj_inv);
                else
                    t.even_images.push_back(SuperPoly::gen(loc, "u" + std::to_string(l)) * uj_inv);
            }
            for (int k = 0; k < n; ++k)
                t.odd_images.push_back(SuperPoly::gen(loc, "h" + std::to_string(k)) * uj_inv);
            t.validate();
            Overlap ov;
            ov.inverted = {inv_idx};
            ov.transition = std::move(t);
            a.overlaps.emplace(std::make_pair(i, j), std::move(ov));
        }
    return a;
}

namespace {

// [id; f] for a grassmannian cell over a ring containing the chart
// generators, odd indices shifted by odd_shift.
SuperMatrix cell_matrix(const Cell& cell, int m, int n, const RingPtr& chart_ring,
                        const RingPtr& R, int odd_shift) {
    int a = static_cast<int>(cell.even_sel.size());
    int b = static_cast<int>(cell.odd_sel.size());
    std::vector<int> sel_rows;
    for (int e : cell.even_sel) sel_rows.push_back(e);
    for (int o : cell.odd_sel) sel_rows.push_back(m + o);
    std::set<int> sel(sel_rows.begin(), sel_rows.end());

    std::vector<int> rp, cp;
    for (int r = 0; r < m + n; ++r) rp.push_back(r < m ? 0 : 1);
    for (int c = 0; c < a + b; ++c) cp.push_back(c < a ? 0 : 1);
    SuperMatrix M = SuperMatrix::zero(R, rp, cp);
    for (int ci = 0; ci < a + b; ++ci) {
        int col_row = sel_rows[ci];
        for (int r = 0; r < m + n; ++r) {
            if (sel.count(r)) {
                if (r == col_row) M.entries[r][ci] = SuperPoly::one(R);
                continue;
            }
            std::string name = "f_" + row_label(r, m) + "_" + row_label(col_row, m);
            int ei = chart_ring->even_index(name);
            if (ei >= 0) {
                M.entries[r][ci] = SuperPoly::even_gen(R, ei);
            } else {
                int oi = chart_ring->odd_index(name);
                M.entries[r][ci] = SuperPoly::odd_gen(R, oi + odd_shift);
            }
        }
    }
    return M;
}

std::optional<std::pair<SuperMatrix, RingPtr>> invert_with_localization(const SuperMatrix& T,
                                                                        const RingPtr& base) {
    RingPtr loc = base;
    std::vector<int> er, orr, ec, oc;
    for (int i = 0; i < T.rows(); ++i) (T.row_parity[i] == 0 ? er : orr).push_back(i);
    for (int i = 0; i < T.cols(); ++i) (T.col_parity[i] == 0 ? ec : oc).push_back(i);
    if (!orr.empty()) {
        SuperPoly detD = det_even(T.submatrix(orr, oc));
        auto l = localize_for(loc, detD);
        if (!l) return std::nullopt;
        loc = *l;
    }
    if (!er.empty()) {
        SuperMatrix Tl = T.with_ring(loc);
        SuperMatrix A = Tl.submatrix(er, ec);
        SuperPoly detS = SuperPoly::zero(loc);
        if (orr.empty()) {
            detS = det_even(A);
        } else {
            SuperMatrix B = Tl.submatrix(er, oc), C = Tl.submatrix(orr, ec),
                        D = Tl.submatrix(orr, oc);
            detS = det_even(A - B * (inverse_even(D) * C));
        }
        auto l = localize_for(loc, detS);
        if (!l) return std::nullopt;
        loc = *l;
    }
    return std::make_pair(super_inverse(T.with_ring(loc)), loc);
}

}  // namespace

Atlas build_supergrassmannian(int a, int b, int m, int n) {
    if (a < 0 || b < 0 || a > m || b > n)
        throw std::invalid_argument("supergrassmannian: need 0<=a<=m, 0<=b<=n");
    Atlas X;
    X.kind.type = AtlasKind::Grass;
    X.kind.params = {a, b, m, n};
    bool paired = (m == n);
    X.grading_rank = paired ? m : m + n;
    auto deg_of_row = [&](int r) {
        return unit_vec(X.grading_rank, paired ? (r < m ? r : r - m) : r);
    };

    for (const auto& es : combinations(m, a))
        for (const auto& os : combinations(n, b)) {
            Cell cell;
            cell.even_sel = es;
            cell.odd_sel = os;
            std::string label = "E";
            for (int e : es) label += std::to_string(e);
            label += "|O";
            for (int o : os) label += std::to_string(o);
            std::vector<int> sel_rows;
            for (int e : es) sel_rows.push_back(e);
            for (int o : os) sel_rows.push_back(m + o);
            std::set<int> sel(sel_rows.begin(), sel_rows.end());

            std::vector<std::string> evens, odds;
            std::vector<std::vector<long>> edeg, odeg;
            for (int r = 0; r < m + n; ++r) {
                if (sel.count(r)) continue;
                for (int c : sel_rows) {
                    std::string name = "f_" + row_label(r, m) + "_" + row_label(c, m);
                    int parity = ((r < m ? 0 : 1) + (c < m ? 0 : 1)) & 1;
                    auto deg = sub_vec(deg_of_row(r), deg_of_row(c));
                    if (parity == 0) {
                        evens.push_back(name);
                        edeg.push_back(deg);
                    } else {
                        odds.push_back(name);
                        odeg.push_back(deg);
                    }
                }
            }
            Chart c;
            c.label = label;
            c.ring = RingDescriptor::make(evens, odds);
            c.even_deg = std::move(edeg);
            c.odd_deg = std::move(odeg);
            X.charts.push_back(std::move(c));
            X.cells.push_back(std::move(cell));
        }

    for (int i = 0; i < X.n_charts(); ++i) {
        const RingPtr& ri = X.charts[i].ring;
        SuperMatrix M = cell_matrix(X.cells[i], m, n, ri, ri, 0);
        for (int j = 0; j < X.n_charts(); ++j) {
            if (i == j) continue;
            std::vector<int> rowsJ;
            for (int e : X.cells[j].even_sel) rowsJ.push_back(e);
            for (int o : X.cells[j].odd_sel) rowsJ.push_back(m + o);
            std::vector<int> allcols;
            for (int c = 0; c < M.cols(); ++c) allcols.push_back(c);
            SuperMatrix T = M.submatrix(rowsJ, allcols);
            auto inv = invert_with_localization(T, ri);
            if (!inv) continue;  // overlap function is not a monomial; chain only
            auto [Tinv, loc] = *inv;
            SuperMatrix Mnew = M.with_ring(loc) * Tinv;

            const RingPtr& rj = X.charts[j].ring;
            GenAssignment t;
            t.source = rj;
            t.target = loc;
            t.even_images.assign(rj->n_even(), SuperPoly::zero(loc));
            t.odd_images.assign(rj->n_odd(), SuperPoly::zero(loc));
            std::set<int> selJ(rowsJ.begin(), rowsJ.end());
            for (int r = 0; r < m + n; ++r) {
                if (selJ.count(r)) continue;
                for (size_t pc = 0; pc < rowsJ.size(); ++pc) {
                    std::string name = "f_" + row_label(r, m) + "_" + row_label(rowsJ[pc], m);
                    SuperPoly img = Mnew.entries[r][pc];
                    int ei = rj->even_index(name);
                    if (ei >= 0)
                        t.even_images[ei] = img;
                    else
                        t.odd_images[rj->odd_index(name)] = img;
                }
            }
            t.validate();
            Overlap ov;
            std::vector<int> newinv;
            for (int g = 0; g < ri->n_even(); ++g)
                if (loc->is_invertible(g) && !ri->is_invertible(g)) newinv.push_back(g);
            ov.inverted = std::move(newinv);
            ov.transition = std::move(t);
            X.overlaps.emplace(std::make_pair(i, j), std::move(ov));
        }
    }
    return X;
}

Atlas atlas_product(const Atlas& x, const Atlas& y) {
    for (const auto& c : x.charts)
        if (c.ring->odd_truncation()) throw std::invalid_argument("product: truncated factor");
    for (const auto& c : y.charts)
        if (c.ring->odd_truncation()) throw std::invalid_argument("product: truncated factor");
    Atlas p;
    p.kind.type = AtlasKind::Product;
    p.grading_rank = x.grading_rank + y.grading_rank;

    auto combined_ring = [&](const RingPtr& rx, const RingPtr& ry) {
        std::vector<std::string> evens, odds, inv;
        for (int i = 0; i < rx->n_even(); ++i) {
            evens.push_back("l_" + rx->even_gens()[i]);
            if (rx->is_invertible(i)) inv.push_back("l_" + rx->even_gens()[i]);
        }
        for (int i = 0; i < ry->n_even(); ++i) {
            evens.push_back("r_" + ry->even_gens()[i]);
            if (ry->is_invertible(i)) inv.push_back("r_" + ry->even_gens()[i]);
        }
        for (int i = 0; i < rx->n_odd(); ++i) odds.push_back("l_" + rx->odd_gens()[i]);
        for (int i = 0; i < ry->n_odd(); ++i) odds.push_back("r_" + ry->odd_gens()[i]);
        return RingDescriptor::make(evens, odds, inv);
    };
    auto pad = [&](const std::vector<long>& d, bool left) {
        std::vector<long> v(p.grading_rank, 0);
        int off = left ? 0 : x.grading_rank;
        for (size_t i = 0; i < d.size(); ++i) v[off + i] = d[i];
        return v;
    };

    for (int i1 = 0; i1 < x.n_charts(); ++i1)
        for (int i2 = 0; i2 < y.n_charts(); ++i2) {
            Chart c;
            c.label = x.charts[i1].label + "*" + y.charts[i2].label;
            c.ring = combined_ring(x.charts[i1].ring, y.charts[i2].ring);
            for (const auto& d : x.charts[i1].even_deg) c.even_deg.push_back(pad(d, true));
            for (const auto& d : y.charts[i2].even_deg) c.even_deg.push_back(pad(d, false));
            for (const auto& d : x.charts[i1].odd_deg) c.odd_deg.push_back(pad(d, true));
            for (const auto& d : y.charts[i2].odd_deg) c.odd_deg.push_back(pad(d, false));
            p.charts.push_back(std::move(c));
        }

    auto chart_id = [&](int i1, int i2) { return i1 * y.n_charts() + i2; };
    for (int i1 = 0; i1 < x.n_charts(); ++i1)
        for (int i2 = 0; i2 < y.n_charts(); ++i2)
            for (int j1 = 0; j1 < x.n_charts(); ++j1)
                for (int j2 = 0; j2 < y.n_charts(); ++j2) {
                    if (i1 == j1 && i2 == j2) continue;
                    const Overlap* o1 = i1 == j1 ? nullptr : x.overlap(i1, j1);
                    const Overlap* o2 = i2 == j2 ? nullptr : y.overlap(i2, j2);
                    if (i1 != j1 && !o1) continue;
                    if (i2 != j2 && !o2) continue;
                    int pi = chart_id(i1, i2), pj = chart_id(j1, j2);
                    const RingPtr& rpi = p.charts[pi].ring;
                    const RingPtr& rxi = x.charts[i1].ring;
                    const RingPtr& ryi = y.charts[i2].ring;
                    std::vector<int> inv;
                    if (o1)
                        for (int g : o1->inverted) inv.push_back(g);
                    if (o2)
                        for (int g : o2->inverted) inv.push_back(g + rxi->n_even());
                    RingPtr loc = rpi->localized(inv);

                    std::vector<int> lmape(rxi->n_even()), lmapo(rxi->n_odd());
                    for (int g = 0; g < rxi->n_even(); ++g) lmape[g] = g;
                    for (int g = 0; g < rxi->n_odd(); ++g) lmapo[g] = g;
                    std::vector<int> rmape(ryi->n_even()), rmapo(ryi->n_odd());
                    for (int g = 0; g < ryi->n_even(); ++g) rmape[g] = rxi->n_even() + g;
                    for (int g = 0; g < ryi->n_odd(); ++g) rmapo[g] = rxi->n_odd() + g;

                    GenAssignment t;
                    t.source = p.charts[pj].ring;
                    t.target = loc;
                    const RingPtr& rxj = x.charts[j1].ring;
                    const RingPtr& ryj = y.charts[j2].ring;
                    for (int g = 0; g < rxj->n_even(); ++g)
                        t.even_images.push_back(
                            (o1 ? o1->transition.even_images[g] : SuperPoly::even_gen(rxj, g))
                                .embed(loc, lmape, lmapo));
                    for (int g = 0; g < ryj->n_even(); ++g)
                        t.even_images.push_back(
                            (o2 ? o2->transition.even_images[g] : SuperPoly::even_gen(ryj, g))
                                .embed(loc, rmape, rmapo));
                    for (int g = 0; g < rxj->n_odd(); ++g)
                        t.odd_images.push_back(
                            (o1 ? o1->transition.odd_images[g] : SuperPoly::odd_gen(rxj, g))
                                .embed(loc, lmape, lmapo));
                    for (int g = 0; g < ryj->n_odd(); ++g)
                        t.odd_images.push_back(
                            (o2 ? o2->transition.odd_images[g] : SuperPoly::odd_gen(ryj, g))
                                .embed(loc, rmape, rmapo));
                    t.validate();
                    Overlap ov;
                    ov.inverted = std::move(inv);
                    ov.transition = std::move(t);
                    p.overlaps.emplace(std::make_pair(pi, pj), std::move(ov));
                }
    return p;
}

namespace {

SuperPoly strip_odds_into(const SuperPoly& f, const RingPtr& target) {
    SuperPoly out(target);
    for (const auto& [m, c] : f.terms()) {
        if (!m.odd.empty()) continue;
        Monomial t;
        t.even = m.even;
        out.add_term(std::move(t), c);
    }
    return out;
}

}  // namespace

Atlas truncate_atlas(const Atlas& x, int k) {
    if (k < 1) throw std::invalid_argument("truncate: k >= 1 required");
    Atlas out;
    out.kind.type = AtlasKind::Truncated;
    out.kind.params = {k};
    out.grading_rank = x.grading_rank;
    out.cells = x.cells;
    for (const auto& c : x.charts) {
        Chart nc;
        nc.label = c.label;
        if (k == 1) {
            std::vector<std::string> inv;
            for (int i = 0; i < c.ring->n_even(); ++i)
                if (c.ring->is_invertible(i)) inv.push_back(c.ring->even_gens()[i]);
            nc.ring = RingDescriptor::make(c.ring->even_gens(), {}, inv);
            nc.even_deg = c.even_deg;
        } else {
            nc.ring = c.ring->truncated(k);
            nc.even_deg = c.even_deg;
            nc.odd_deg = c.odd_deg;
        }
        out.charts.push_back(std::move(nc));
    }
    for (const auto& [key, ov] : x.overlaps) {
        auto [i, j] = key;
        (void)j;
        Overlap nov;
        nov.inverted = ov.inverted;
        RingPtr loc = out.charts[i].ring->localized(ov.inverted);
        GenAssignment t;
        t.source = out.charts[key.second].ring;
        t.target = loc;
        if (k == 1) {
            for (const auto& img : ov.transition.even_images)
                t.even_images.push_back(strip_odds_into(img, loc));
        } else {
            for (const auto& img : ov.transition.even_images)
                t.even_images.push_back(img.with_ring(loc));
            for (const auto& img : ov.transition.odd_images)
                t.odd_images.push_back(img.with_ring(loc));
        }
        t.validate();
        nov.transition = std::move(t);
        out.overlaps.emplace(key, std::move(nov));
    }
    return out;
}

Atlas build_cy_truncation(int n, const Rat& twist_scale) {
    if (n < 1) throw std::invalid_argument("cy truncation: n >= 1");
    Atlas X;
    X.kind.type = AtlasKind::CYTrunc;
    X.kind.params = {n};
    for (int i = 0; i <= n; ++i) {
        Chart c;
        c.label = "x" + std::to_string(i);
        std::vector<std::string> evens, odds;
        for (int j = 0; j <= n; ++j)
            if (j != i) {
                evens.push_back("u" + std::to_string(j));
                odds.push_back("h" + std::to_string(j));
            }
        c.ring = RingDescriptor::make(evens, odds, {}, 3);
        X.charts.push_back(std::move(c));
    }
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            if (i == j) continue;
            const RingPtr& ri = X.charts[i].ring;
            const RingPtr& rj = X.charts[j].ring;
            int inv_idx = ri->even_index("u" + std::to_string(j));
            RingPtr loc = ri->localized({inv_idx});
            SuperPoly uj_inv = SuperPoly::even_gen(loc, inv_idx, -1);
            // omega_ij = du_j / u_j realized through the odd frame
            SuperPoly omega =
                uj_inv * SuperPoly::gen(loc, "h" + std::to_string(j)) * twist_scale;

            auto base = [&](int l) {  // affine coordinate x_l/x_j in chart i
                if (l == i) return uj_inv;
                return SuperPoly::gen(loc, "u" + std::to_string(l)) * uj_inv;
            };
            auto dd = [&](const SuperPoly& f) {  // total differential via h's
                SuperPoly acc = SuperPoly::zero(loc);
                for (int mg = 0; mg < loc->n_even(); ++mg) {
                    SuperPoly pd = f.even_partial(mg);
                    if (pd.is_zero()) continue;
                    acc = acc + pd * SuperPoly::odd_gen(loc, mg);
                }
                return acc;
            };

            GenAssignment t;
            t.source = rj;
            t.target = loc;
            for (int l = 0; l <= n; ++l) {
                if (l == j) continue;
                SuperPoly B = base(l);
                t.even_images.push_back(B + omega * dd(B));
            }
            for (int l = 0; l <= n; ++l) {
                if (l == j) continue;
                t.odd_images.push_back(dd(base(l)));
            }
            t.validate();
            Overlap ov;
            ov.inverted = {inv_idx};
            ov.transition = std::move(t);
            X.overlaps.emplace(std::make_pair(i, j), std::move(ov));
        }
    return X;
}

PiSymmetry PiSymmetry::standard(int n) {
    PiSymmetry p;
    p.m = p.n = n;
    p.mat.assign(2 * n, std::vector<Rat>(2 * n, Rat(0)));
    for (int i = 0; i < n; ++i) {
        p.mat[n + i][i] = 1;   // p(e_i) = o_i
        p.mat[i][n + i] = -1;  // p(o_i) = -e_i
    }
    return p;
}

void PiSymmetry::validate() const {
    if (m != n) throw std::domain_error("pi symmetry: dimension must be n|n");
    int N = m + n;
    if (static_cast<int>(mat.size()) != N)
        throw std::invalid_argument("pi symmetry: bad matrix size");
    auto par = [&](int r) { return r < m ? 0 : 1; };
    for (int r = 0; r < N; ++r) {
        if (static_cast<int>(mat[r].size()) != N)
            throw std::invalid_argument("pi symmetry: bad matrix size");
        for (int c = 0; c < N; ++c)
            if (mat[r][c] != 0 && par(r) == par(c))
                throw std::domain_error("pi symmetry: p is not odd");
    }
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) {
            Rat acc = 0;
            for (int k = 0; k < N; ++k) acc += mat[r][k] * mat[k][c];
            if (acc != (r == c ? Rat(-1) : Rat(0)))
                throw std::domain_error("pi symmetry: p^2 != -id");
        }
}

GlobalField pi_action_field(const Atlas& X, const PiSymmetry& p) {
    if (X.kind.type != AtlasKind::Grass)
        throw std::invalid_argument("pi_action_field: grassmannian atlas required");
    p.validate();
    int m = X.kind.params[2], n = X.kind.params[3];
    if (m != p.m || n != p.n) throw std::invalid_argument("pi_action_field: size mismatch");

    GlobalField out;
    for (int ci = 0; ci < X.n_charts(); ++ci) {
        const RingPtr& R = X.charts[ci].ring;
        std::vector<std::string> odds = {"@psi"};
        for (const auto& s : R->odd_gens()) odds.push_back(s);
        RingPtr Rp = RingDescriptor::make(R->even_gens(), odds, {}, R->odd_truncation());
        SuperPoly psi = SuperPoly::odd_gen(Rp, 0);

        SuperMatrix M = cell_matrix(X.cells[ci], m, n, R, Rp, 1);
        SuperMatrix M2 = M;
        for (int r = 0; r < m + n; ++r)
            for (int c = 0; c < M.cols(); ++c) {
                // Homogeneous coordinate functions transform by the
                // transpose: sigma*(coord_r) = coord_r + psi sum_k p[k][r] coord_k.
                SuperPoly acc = SuperPoly::zero(Rp);
                for (int k = 0; k < m + n; ++k)
                    if (p.mat[k][r] != 0) acc = acc + M.entries[k][c] * p.mat[k][r];
                M2.entries[r][c] = M.entries[r][c] + psi * acc;
            }
        M2.validate();

        std::vector<int> sel_rows;
        for (int e : X.cells[ci].even_sel) sel_rows.push_back(e);
        for (int o : X.cells[ci].odd_sel) sel_rows.push_back(m + o);
        std::vector<int> allcols;
        for (int c = 0; c < M.cols(); ++c) allcols.push_back(c);
        SuperMatrix T = M2.submatrix(sel_rows, allcols);
        SuperMatrix Mnew = M2 * super_inverse(T);

        OddDerivation v;
        v.ring = R;
        v.even_images.assign(R->n_even(), SuperPoly::zero(R));
        v.odd_images.assign(R->n_odd(), SuperPoly::zero(R));
        std::set<int> sel(sel_rows.begin(), sel_rows.end());
        for (int r = 0; r < m + n; ++r) {
            if (sel.count(r)) continue;
            for (size_t pc = 0; pc < sel_rows.size(); ++pc) {
                std::string name = "f_" + row_label(r, m) + "_" + row_label(sel_rows[pc], m);
                int ei = R->even_index(name);
                int oi = ei >= 0 ? -1 : R->odd_index(name);
                SuperPoly gen_in_Rp =
                    ei >= 0 ? SuperPoly::even_gen(Rp, ei) : SuperPoly::odd_gen(Rp, oi + 1);
                SuperPoly delta = Mnew.entries[r][pc] - gen_in_Rp;
                // delta = psi * w; strip the leading psi factor
                SuperPoly w(R);
                for (const auto& [mm, cc] : delta.terms()) {
                    if (mm.odd.empty() || mm.odd[0] != 0)
                        throw std::logic_error("pi_action_field: unexpected psi-free term");
                    Monomial tmono;
                    tmono.even = mm.even;
                    for (size_t q = 1; q < mm.odd.size(); ++q) tmono.odd.push_back(mm.odd[q] - 1);
                    w.add_term(std::move(tmono), cc);
                }
                if (ei >= 0)
                    v.even_images[ei] = w;
                else
                    v.odd_images[oi] = w;
            }
        }
        out.fields.push_back(HomologicalField::certify(std::move(v)));
    }
    return out;
}

GlobalField pi_field_projective(const Atlas& X) {
    if (X.kind.type != AtlasKind::Proj || X.kind.params[1] != X.kind.params[0] + 1)
        throw std::invalid_argument("pi_field_projective: requires P^{m|m+1}");
    int m = X.kind.params[0];
    GlobalField out;
    for (int i = 0; i <= m; ++i) {
        const RingPtr& R = X.charts[i].ring;
        auto u = [&](int j) {
            return j == i ? SuperPoly::one(R) : SuperPoly::gen(R, "u" + std::to_string(j));
        };
        auto h = [&](int k) { return SuperPoly::gen(R, "h" + std::to_string(k)); };
        OddDerivation v;
        v.ring = R;
        for (int j = 0; j <= m; ++j)
            if (j != i) v.even_images.push_back(h(j) - u(j) * h(i));
        for (int k = 0; k <= m; ++k) v.odd_images.push_back(-u(k) + h(k) * h(i));
        out.fields.push_back(HomologicalField::certify(std::move(v)));
    }
    return out;
}

GlobalField field_sum(const Atlas& prod, const Atlas& x, const GlobalField& vx, const Atlas& y,
                      const GlobalField& vy) {
    if (prod.kind.type != AtlasKind::Product)
        throw std::invalid_argument("field_sum: product atlas required");
    GlobalField out;
    for (int i1 = 0; i1 < x.n_charts(); ++i1)
        for (int i2 = 0; i2 < y.n_charts(); ++i2) {
            const RingPtr& R = prod.charts[i1 * y.n_charts() + i2].ring;
            const RingPtr& rx = x.charts[i1].ring;
            const RingPtr& ry = y.charts[i2].ring;
            std::vector<int> lmape(rx->n_even()), lmapo(rx->n_odd());
            for (int g = 0; g < rx->n_even(); ++g) lmape[g] = g;
            for (int g = 0; g < rx->n_odd(); ++g) lmapo[g] = g;
            std::vector<int> rmape(ry->n_even()), rmapo(ry->n_odd());
            for (int g = 0; g < ry->n_even(); ++g) rmape[g] = rx->n_even() + g;
            for (int g = 0; g < ry->n_odd(); ++g) rmapo[g] = rx->n_odd() + g;
            OddDerivation v;
            v.ring = R;
            for (int g = 0; g < rx->n_even(); ++g)
                v.even_images.push_back(vx.fields[i1].der().even_images[g].embed(R, lmape, lmapo));
            for (int g = 0; g < ry->n_even(); ++g)
                v.even_images.push_back(vy.fields[i2].der().even_images[g].embed(R, rmape, rmapo));
            for (int g = 0; g < rx->n_odd(); ++g)
                v.odd_images.push_back(vx.fields[i1].der().odd_images[g].embed(R, lmape, lmapo));
            for (int g = 0; g < ry->n_odd(); ++g)
                v.odd_images.push_back(vy.fields[i2].der().odd_images[g].embed(R, rmape, rmapo));
            out.fields.push_back(HomologicalField::certify(std::move(v)));
        }
    return out;
}

bool field_compatible(const Atlas& atlas, const GlobalField& v, std::string* msg) {
    for (const auto& [key, ov] : atlas.overlaps) {
        auto [i, j] = key;
        RingPtr loc = atlas.charts[i].ring->localized(ov.inverted);
        OddDerivation vi = v.fields[i].der().with_ring(loc);
        const RingPtr& rj = atlas.charts[j].ring;
        for (int g = 0; g < rj->n_even() + rj->n_odd(); ++g) {
            SuperPoly x = g < rj->n_even() ? SuperPoly::even_gen(rj, g)
                                           : SuperPoly::odd_gen(rj, g - rj->n_even());
            SuperPoly lhs = ov.transition.apply(v.fields[j].apply(x));
            SuperPoly rhs = vi.apply(ov.transition.apply(x));
            if (!(lhs == rhs)) {
                if (msg)
                    *msg = "field incompatible on overlap (" + std::to_string(i) + "," +
                           std::to_string(j) + ") at generator " + x.str();
                return false;
            }
        }
    }
    return true;
}

GlobalFreeness global_freeness(const Atlas& atlas, const GlobalField& v, int bound) {
    GlobalFreeness out;
    bool all_free = true;
    for (int i = 0; i < atlas.n_charts(); ++i) {
        auto fr = freeness(v.fields[i], bound);
        if (fr.kind == FreenessResult::NotFree) {
            out.kind = FreenessResult::NotFree;
            out.chart = i;
            out.per_chart.push_back(std::move(fr));
            return out;
        }
        if (fr.kind != FreenessResult::Free) {
            all_free = false;
            if (out.chart < 0) out.chart = i;
        }
        out.per_chart.push_back(std::move(fr));
    }
    out.kind = all_free ? FreenessResult::Free : FreenessResult::Undecided;
    return out;
}

}  // namespace supergeo
