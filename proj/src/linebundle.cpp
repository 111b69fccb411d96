#include "supergeo/linebundle.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace supergeo {

namespace {

std::string row_label(int r, int m) {
    return r < m ? "e" + std::to_string(r) : "o" + std::to_string(r - m);
}

SparseVec pack(std::vector<std::pair<int, Rat>> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVec out;
    for (auto& [r, v] : entries) {
        if (!out.empty() && out.back().first == r)
            out.back().second += v;
        else
            out.emplace_back(r, v);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& e) { return e.second == 0; }),
              out.end());
    return out;
}

}  // namespace

void LineCocycle::verify() const {
    for (const auto& [key, gij] : g) {
        auto [i, j] = key;
        const Overlap* ov = atlas->overlap(i, j);
        if (!ov) throw std::invalid_argument("cocycle on a non-representable pair");
        RingPtr loc = atlas->charts[i].ring->localized(ov->inverted);
        if (!same_ring(gij.ring(), loc) || !gij.is_invertible())
            throw std::domain_error("cocycle value must be even invertible on the overlap");
        // pair identity g_ij t_ij(g_ji) = 1
        auto back = g.find({j, i});
        if (back == g.end()) throw std::invalid_argument("cocycle missing symmetric pair");
        RingPtr ext = loc;
        const Overlap* oji = atlas->overlap(j, i);
        for (int gg : oji->inverted) {
            auto l = localize_for(ext, ov->transition.even_images[gg].with_ring(ext));
            if (!l) throw std::domain_error("cocycle: round trip not representable");
            ext = *l;
        }
        GenAssignment tij = ov->transition.with_target(ext);
        if (!(gij.with_ring(ext) * tij.apply(back->second) == SuperPoly::one(ext)))
            throw std::domain_error("cocycle fails g_ij g_ji = 1");
    }
    // triple condition on checkable triples
    int N = atlas->n_charts();
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k) {
                if (i == j || j == k || i == k) continue;
                if (!g.count({i, j}) || !g.count({j, k}) || !g.count({i, k})) continue;
                const Overlap* oij = atlas->overlap(i, j);
                const Overlap* oik = atlas->overlap(i, k);
                RingPtr join = atlas->charts[i].ring->localized(oij->inverted);
                join = join->localized(oik->inverted);
                bool ok = true;
                const Overlap* ojk = atlas->overlap(j, k);
                for (int gg : ojk->inverted) {
                    auto l = localize_for(join, oij->transition.even_images[gg].with_ring(join));
                    if (!l) {
                        ok = false;
                        break;
                    }
                    join = *l;
                }
                if (!ok) continue;
                GenAssignment tij = oij->transition.with_target(join);
                SuperPoly lhs = g.at({i, k}).with_ring(join);
                SuperPoly rhs = g.at({i, j}).with_ring(join) * tij.apply(g.at({j, k}));
                if (!(lhs == rhs)) throw std::domain_error("cocycle fails the triple condition");
            }
}

LineCocycle trivial_cocycle(const AtlasPtr& atlas) {
    LineCocycle L;
    L.atlas = atlas;
    for (const auto& [key, ov] : atlas->overlaps) {
        RingPtr loc = atlas->charts[key.first].ring->localized(ov.inverted);
        L.g.emplace(key, SuperPoly::one(loc));
    }
    return L;
}

LineCocycle standard_cocycle_proj(const AtlasPtr& proj, int k) {
    if (proj->kind.type != AtlasKind::Proj)
        throw std::invalid_argument("standard_cocycle_proj: projective atlas required");
    LineCocycle L;
    L.atlas = proj;
    for (const auto& [key, ov] : proj->overlaps) {
        RingPtr loc = proj->charts[key.first].ring->localized(ov.inverted);
        L.g.emplace(key, SuperPoly::even_gen(loc, ov.inverted[0], -k));
    }
    L.verify();
    return L;
}

LineCocycle berezinian_cocycle(const AtlasPtr& grass, int k) {
    if (grass->kind.type != AtlasKind::Grass)
        throw std::invalid_argument("berezinian_cocycle: grassmannian atlas required");
    int m = grass->kind.params[2];
    LineCocycle L;
    L.atlas = grass;
    for (const auto& [key, ov] : grass->overlaps) {
        auto [i, j] = key;
        RingPtr loc = grass->charts[i].ring->localized(ov.inverted);
        // frame change of the tautological subbundle: T = rows(J) of M_I
        const Cell& ci = grass->cells[i];
        const Cell& cj = grass->cells[j];
        std::vector<int> rowsI, rowsJ;
        for (int e : ci.even_sel) rowsI.push_back(e);
        for (int o : ci.odd_sel) rowsI.push_back(m + o);
        for (int e : cj.even_sel) rowsJ.push_back(e);
        for (int o : cj.odd_sel) rowsJ.push_back(m + o);
        std::vector<int> rp, cp;
        for (int r : rowsJ) rp.push_back(r < m ? 0 : 1);
        for (int c : rowsI) cp.push_back(c < m ? 0 : 1);
        SuperMatrix T = SuperMatrix::zero(loc, rp, cp);
        std::set<int> sel(rowsI.begin(), rowsI.end());
        for (size_t rr = 0; rr < rowsJ.size(); ++rr) {
            int r = rowsJ[rr];
            for (size_t cc = 0; cc < rowsI.size(); ++cc) {
                int c = rowsI[cc];
                if (sel.count(r)) {
                    if (r == c) T.entries[rr][cc] = SuperPoly::one(loc);
                    continue;
                }
                std::string name = "f_" + row_label(r, m) + "_" + row_label(c, m);
                T.entries[rr][cc] = SuperPoly::gen(loc, name);
            }
        }
        L.g.emplace(key, berezinian(T).pow(k));
    }
    L.verify();
    return L;
}

LineCocycle external_cocycle(const AtlasPtr& prod, const LineCocycle& lx, const LineCocycle& ly) {
    if (prod->kind.type != AtlasKind::Product)
        throw std::invalid_argument("external_cocycle: product atlas required");
    const Atlas& X = *lx.atlas;
    const Atlas& Y = *ly.atlas;
    LineCocycle L;
    L.atlas = prod;
    for (const auto& [key, ov] : prod->overlaps) {
        auto [pi, pj] = key;
        int i1 = pi / Y.n_charts(), i2 = pi % Y.n_charts();
        int j1 = pj / Y.n_charts(), j2 = pj % Y.n_charts();
        RingPtr loc = prod->charts[pi].ring->localized(ov.inverted);
        const RingPtr& rxi = X.charts[i1].ring;
        const RingPtr& ryi = Y.charts[i2].ring;
        std::vector<int> lmape(rxi->n_even()), lmapo(rxi->n_odd());
        for (int g = 0; g < rxi->n_even(); ++g) lmape[g] = g;
        for (int g = 0; g < rxi->n_odd(); ++g) lmapo[g] = g;
        std::vector<int> rmape(ryi->n_even()), rmapo(ryi->n_odd());
        for (int g = 0; g < ryi->n_even(); ++g) rmape[g] = rxi->n_even() + g;
        for (int g = 0; g < ryi->n_odd(); ++g) rmapo[g] = rxi->n_odd() + g;
        SuperPoly left = i1 == j1 ? SuperPoly::one(loc)
                                  : lx.at(i1, j1).embed(loc, lmape, lmapo);
        SuperPoly right = i2 == j2 ? SuperPoly::one(loc)
                                   : ly.at(i2, j2).embed(loc, rmape, rmapo);
        L.g.emplace(key, left * right);
    }
    L.verify();
    return L;
}

LineCocycle tensor_cocycle(const LineCocycle& a, const LineCocycle& b) {
    if (a.atlas != b.atlas) throw std::invalid_argument("tensor_cocycle: mismatched atlases");
    LineCocycle L;
    L.atlas = a.atlas;
    for (const auto& [key, ga] : a.g) L.g.emplace(key, ga * b.g.at(key));
    return L;
}

LineCocycle reduce_cocycle(const LineCocycle& L, const AtlasPtr& reduced) {
    LineCocycle out;
    out.atlas = reduced;
    for (const auto& [key, gij] : L.g) {
        const Overlap* ov = reduced->overlap(key.first, key.second);
        if (!ov) continue;
        RingPtr loc = reduced->charts[key.first].ring->localized(ov->inverted);
        SuperPoly red(loc);
        for (const auto& [m, c] : gij.terms()) {
            if (!m.odd.empty()) continue;
            Monomial t;
            t.even = m.even;
            red.add_term(std::move(t), c);
        }
        out.g.emplace(key, red);
    }
    out.verify();
    return out;
}

void verify_connection(const LineCocycle& L, const GlobalField& v, const VConnection& conn) {
    const Atlas& X = *L.atlas;
    for (const auto& [key, gij] : L.g) {
        auto [i, j] = key;
        const Overlap* ov = X.overlap(i, j);
        RingPtr loc = X.charts[i].ring->localized(ov->inverted);
        SuperPoly lhs = ov->transition.apply(conn.phi[j]);
        SuperPoly rhs = conn.phi[i].with_ring(loc) +
                        v.fields[i].with_ring(loc).apply(gij) * gij.invert_even();
        if (!(lhs == rhs)) throw std::domain_error("connection fails the transformation rule");
    }
}

namespace {

struct ConnSystem {
    struct U {
        int chart;
        Monomial mono;
    };
    std::vector<U> unknowns;
    std::vector<int> begin;
    std::vector<SparseVec> cols;
    SparseVec rhs;
};

ConnSystem build_connection_system(const LineCocycle& L, const GlobalField& v, int deg,
                                   bool flat) {
    const Atlas& X = *L.atlas;
    ConnSystem S;
    S.begin.assign(X.n_charts() + 1, 0);
    for (int i = 0; i < X.n_charts(); ++i) {
        S.begin[i] = static_cast<int>(S.unknowns.size());
        for (auto& m : monomials_up_to(X.charts[i].ring, deg, 1))
            S.unknowns.push_back({i, std::move(m)});
    }
    S.begin[X.n_charts()] = static_cast<int>(S.unknowns.size());

    std::map<std::tuple<int, int, Monomial>, int> rows;
    auto row_of = [&](int i, int j, const Monomial& m) {
        auto [it, fresh] = rows.emplace(std::make_tuple(i, j, m), static_cast<int>(rows.size()));
        return it->second;
    };
    std::vector<std::vector<std::pair<int, Rat>>> cols(S.unknowns.size());
    std::vector<std::pair<int, Rat>> rhs;

    for (const auto& [key, gij] : L.g) {
        auto [i, j] = key;
        const Overlap* ov = X.overlap(i, j);
        RingPtr loc = X.charts[i].ring->localized(ov->inverted);
        SuperPoly target = v.fields[i].with_ring(loc).apply(gij) * gij.invert_even();
        for (const auto& [m, c] : target.terms()) rhs.emplace_back(row_of(i, j, m), c);
        for (int u = S.begin[j]; u < S.begin[j + 1]; ++u) {
            SuperPoly img =
                ov->transition.apply(SuperPoly::term(X.charts[j].ring, S.unknowns[u].mono, Rat(1)));
            for (const auto& [m, c] : img.terms()) cols[u].emplace_back(row_of(i, j, m), c);
        }
        for (int u = S.begin[i]; u < S.begin[i + 1]; ++u)
            cols[u].emplace_back(row_of(i, j, S.unknowns[u].mono), Rat(-1));
    }
    if (flat) {
        for (int i = 0; i < X.n_charts(); ++i)
            for (int u = S.begin[i]; u < S.begin[i + 1]; ++u) {
                SuperPoly img = v.fields[i].apply(
                    SuperPoly::term(X.charts[i].ring, S.unknowns[u].mono, Rat(1)));
                for (const auto& [m, c] : img.terms())
                    cols[u].emplace_back(row_of(i, -1 - i, m), c);
            }
    }
    for (auto& c : cols) S.cols.push_back(pack(std::move(c)));
    S.rhs = pack(std::move(rhs));
    return S;
}

}  // namespace

std::optional<VConnection> connection_solve(const LineCocycle& L, const GlobalField& v, int deg,
                                            bool flat) {
    auto S = build_connection_system(L, v, deg, flat);
    auto sol = solve_columns(S.cols, S.rhs, false);
    if (!sol.solvable) return std::nullopt;
    VConnection conn;
    for (int i = 0; i < L.atlas->n_charts(); ++i) {
        SuperPoly phi(L.atlas->charts[i].ring);
        for (int u = S.begin[i]; u < S.begin[i + 1]; ++u)
            phi.add_term(S.unknowns[u].mono, sol.particular[u]);
        conn.phi.push_back(std::move(phi));
    }
    verify_connection(L, v, conn);
    return conn;
}

long connection_kernel_dim(const LineCocycle& L, const GlobalField& v, int deg) {
    auto S = build_connection_system(L, v, deg, false);
    auto sol = solve_columns(S.cols, S.rhs, true);
    if (!sol.solvable) return -1;
    return static_cast<long>(sol.kernel.size());
}

Curvature curvature(const LineCocycle& L, const GlobalField& v, const VConnection& conn) {
    const Atlas& X = *L.atlas;
    Curvature c;
    for (int i = 0; i < X.n_charts(); ++i) c.per_chart.push_back(v.fields[i].apply(conn.phi[i]));
    // agreement across overlaps and v-closedness
    for (const auto& [key, gij] : L.g) {
        auto [i, j] = key;
        const Overlap* ov = X.overlap(i, j);
        RingPtr loc = X.charts[i].ring->localized(ov->inverted);
        if (!(ov->transition.apply(c.per_chart[j]) == c.per_chart[i].with_ring(loc)))
            throw std::domain_error("curvature disagrees across an overlap");
    }
    for (int i = 0; i < X.n_charts(); ++i)
        if (!v.fields[i].apply(c.per_chart[i]).is_zero())
            throw std::logic_error("curvature is not v-closed");
    c.constant = true;
    for (const auto& ci : c.per_chart)
        if (!ci.is_constant()) c.constant = false;
    if (c.constant && !c.per_chart.empty()) {
        c.value = c.per_chart[0].constant_term();
        for (const auto& ci : c.per_chart)
            if (ci.constant_term() != c.value) c.constant = false;
    }
    return c;
}

VConnection tensor_connection(const VConnection& a, const VConnection& b) {
    if (a.phi.size() != b.phi.size())
        throw std::invalid_argument("tensor_connection: chart count mismatch");
    VConnection out;
    for (size_t i = 0; i < a.phi.size(); ++i) out.phi.push_back(a.phi[i] + b.phi[i]);
    return out;
}

std::vector<std::vector<SuperPoly>> global_functions(const Atlas& atlas, int parity, int deg) {
    struct U {
        int chart;
        Monomial mono;
    };
    std::vector<U> unknowns;
    std::vector<int> begin(atlas.n_charts() + 1, 0);
    for (int i = 0; i < atlas.n_charts(); ++i) {
        begin[i] = static_cast<int>(unknowns.size());
        for (auto& m : monomials_up_to(atlas.charts[i].ring, deg, parity))
            unknowns.push_back({i, std::move(m)});
    }
    begin[atlas.n_charts()] = static_cast<int>(unknowns.size());
    std::map<std::tuple<int, int, Monomial>, int> rows;
    auto row_of = [&](int i, int j, const Monomial& m) {
        auto [it, fresh] = rows.emplace(std::make_tuple(i, j, m), static_cast<int>(rows.size()));
        return it->second;
    };
    std::vector<std::vector<std::pair<int, Rat>>> cols(unknowns.size());
    for (const auto& [key, ov] : atlas.overlaps) {
        auto [i, j] = key;
        for (int u = begin[j]; u < begin[j + 1]; ++u) {
            SuperPoly img =
                ov.transition.apply(SuperPoly::term(atlas.charts[j].ring, unknowns[u].mono, Rat(1)));
            for (const auto& [m, c] : img.terms()) cols[u].emplace_back(row_of(i, j, m), c);
        }
        for (int u = begin[i]; u < begin[i + 1]; ++u)
            cols[u].emplace_back(row_of(i, j, unknowns[u].mono), Rat(-1));
    }
    std::vector<SparseVec> packed;
    for (auto& c : cols) packed.push_back(pack(std::move(c)));
    auto sol = solve_columns(packed, {}, true);
    std::vector<std::vector<SuperPoly>> out;
    for (const auto& k : sol.kernel) {
        std::vector<SuperPoly> fn;
        for (int i = 0; i < atlas.n_charts(); ++i) {
            SuperPoly f(atlas.charts[i].ring);
            for (int u = begin[i]; u < begin[i + 1]; ++u) f.add_term(unknowns[u].mono, k[u]);
            fn.push_back(std::move(f));
        }
        out.push_back(std::move(fn));
    }
    return out;
}

DescentResult flat_descend(const LineCocycle& L, const GlobalField& v, const QuotientAtlas& Q,
                           const AtlasPtr& standalone, int deg) {
    auto flat = connection_solve(L, v, deg, true);
    if (flat) {
        const Atlas& X = *L.atlas;
        // per-chart v-flat frames h_i = 1 + nilpotent with v(h_i) = -h_i phi_i
        std::vector<SuperPoly> h;
        for (int i = 0; i < X.n_charts(); ++i) {
            const RingPtr& r = X.charts[i].ring;
            SuperPoly hi = SuperPoly::one(r);
            for (int step = 0; step <= r->n_odd(); ++step) {
                SuperPoly resid = v.fields[i].apply(hi) + hi * flat->phi[i];
                if (resid.is_zero()) break;
                // resid = v(w) is solvable on a free chart; subtract h*w
                auto cand = monomials_up_to(r, deg + 2, 0);
                std::map<Monomial, int> rows;
                std::vector<SparseVec> cols;
                for (const auto& m : cand) {
                    SuperPoly img = v.fields[i].apply(SuperPoly::term(r, m, Rat(1)));
                    std::vector<std::pair<int, Rat>> e;
                    for (const auto& [mm, cc] : img.terms()) {
                        auto [it, fresh] = rows.emplace(mm, static_cast<int>(rows.size()));
                        e.emplace_back(it->second, cc);
                    }
                    cols.push_back(pack(std::move(e)));
                }
                std::vector<std::pair<int, Rat>> re;
                bool ok = true;
                for (const auto& [mm, cc] : resid.terms()) {
                    auto it = rows.find(mm);
                    if (it == rows.end()) {
                        ok = false;
                        break;
                    }
                    re.emplace_back(it->second, cc);
                }
                if (!ok) return NoneUpTo{deg};
                auto sol = solve_columns(cols, pack(std::move(re)), false);
                if (!sol.solvable) return NoneUpTo{deg};
                SuperPoly w(r);
                for (size_t t = 0; t < cand.size(); ++t) w.add_term(cand[t], sol.particular[t]);
                hi = hi - hi * w;
            }
            if (!(v.fields[i].apply(hi) + hi * flat->phi[i]).is_zero())
                return NoneUpTo{deg};
            h.push_back(std::move(hi));
        }
        // re-trivialized cocycle g' = h_i^{-1} g_ij t_ij(h_j) is v-invariant
        LineCocycle down;
        down.atlas = standalone;
        for (const auto& [key, gij] : L.g) {
            auto [i, j] = key;
            const Overlap* ov = L.atlas->overlap(i, j);
            const Overlap* sov = standalone->overlap(i, j);
            if (!sov) continue;
            RingPtr loc = L.atlas->charts[i].ring->localized(ov->inverted);
            SuperPoly gp = h[i].with_ring(loc).invert_even() * gij * ov->transition.apply(h[j]);
            if (!v.fields[i].with_ring(loc).apply(gp).is_zero())
                throw std::logic_error("flat_descend: re-trivialized cocycle is not invariant");
            RingPtr dloc = standalone->charts[i].ring->localized(sov->inverted);
            std::vector<SuperPoly> embs;
            for (const auto& g : Q.charts[i].gens)
                if (g.parity == 0) embs.push_back(g.embedding.with_ring(loc));
            for (const auto& g : Q.charts[i].gens)
                if (g.parity == 1) embs.push_back(g.embedding.with_ring(loc));
            auto expr = express_in(dloc, embs, gp, deg + 2);
            if (!expr) return NoneUpTo{deg};
            down.g.emplace(key, *expr);
        }
        down.verify();
        return Descended{std::move(down)};
    }
    auto any = connection_solve(L, v, deg, false);
    if (!any) return NoneUpTo{deg};
    auto c = curvature(L, v, *any);
    if (c.constant && c.value != 0 && global_functions(*L.atlas, 1, deg).empty())
        return Obstructed{c.value};
    return NoneUpTo{deg};
}

void GQ1Element::validate() const {
    if (!same_ring(a0.ring(), a1.ring())) throw std::invalid_argument("gq1: ring mismatch");
    if (!a0.is_even() || !a0.is_invertible())
        throw std::domain_error("gq1: even part must be invertible");
    if (!a1.is_odd()) throw std::domain_error("gq1: odd part must be odd");
}

GQ1Element gq1_one(const RingPtr& ring) {
    return GQ1Element{SuperPoly::one(ring), SuperPoly::zero(ring)};
}

GQ1Element gq1_mul(const GQ1Element& x, const GQ1Element& y) {
    if (!same_ring(x.a0.ring(), y.a0.ring())) throw std::invalid_argument("gq1_mul: ring mismatch");
    x.validate();
    y.validate();
    // plain ring multiplication of a0 + a1
    SuperPoly even = x.a0 * y.a0 + x.a1 * y.a1;
    SuperPoly odd = x.a0 * y.a1 + x.a1 * y.a0;
    return GQ1Element{even, odd};
}

SuperPoly gq1_project(const GQ1Element& x) {
    x.validate();
    return x.a0.invert_even() * x.a1;
}

SuperPoly gq1_cocycle(const SuperPoly& a, const SuperPoly& b) {
    if (!a.is_odd() || !b.is_odd()) throw std::domain_error("gq1_cocycle: odd arguments required");
    return SuperPoly::one(a.ring()) + a * b;
}

}  // namespace supergeo
