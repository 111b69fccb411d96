#include "supergeo/quotient.hpp"

#include <algorithm>
#include <stdexcept>

namespace supergeo {

QuotientAtlas build_quotient_atlas(const Atlas& X, const GlobalField& v, int bound) {
    auto fr = global_freeness(X, v, bound);
    if (fr.kind != FreenessResult::Free)
        throw std::domain_error("quotient_atlas: action not certified free at bound " +
                                std::to_string(bound));
    QuotientAtlas Q;
    Q.base = X;
    Q.field = v;
    for (int i = 0; i < X.n_charts(); ++i) {
        QuotientChart qc{*fr.per_chart[i].witness,
                         invariant_generators(v.fields[i], *fr.per_chart[i].witness)};
        // torsor certification: decompose-recompose is the identity on the
        // chart generators
        const RingPtr& r = X.charts[i].ring;
        for (int g = 0; g < r->n_even() + r->n_odd(); ++g) {
            SuperPoly x = g < r->n_even() ? SuperPoly::even_gen(r, g)
                                          : SuperPoly::odd_gen(r, g - r->n_even());
            auto [a, b] = decompose(v.fields[i], qc.witness, x);
            if (!(a + b * qc.witness == x))
                throw std::logic_error("quotient_atlas: torsor decomposition failed");
        }
        Q.charts.push_back(std::move(qc));
    }
    // transitions carry invariants to invariants, exactly
    for (const auto& [key, ov] : X.overlaps) {
        auto [i, j] = key;
        RingPtr loc = X.charts[i].ring->localized(ov.inverted);
        OddDerivation vi = v.fields[i].der().with_ring(loc);
        for (const auto& g : Q.charts[j].gens) {
            SuperPoly img = ov.transition.apply(g.embedding);
            if (!vi.apply(img).is_zero())
                throw std::domain_error(
                    "quotient_atlas: transition image fails the invariance check");
        }
    }
    return Q;
}

namespace {

// invariantized overlap function for an inverted upstairs generator:
// v(f theta) = v(f) theta + f, which is the a-part of decompose(f)
SuperPoly invariantized(const HomologicalField& v, const SuperPoly& theta, const SuperPoly& f) {
    return decompose(v, theta, f).first;
}

}  // namespace

Atlas standalone_quotient(const QuotientAtlas& Q, int expr_deg) {
    const Atlas& X = Q.base;
    Atlas out;
    out.kind.type = AtlasKind::QuotientOf;
    out.grading_rank = X.grading_rank;

    std::vector<std::vector<SuperPoly>> embeddings(X.n_charts());
    for (int i = 0; i < X.n_charts(); ++i) {
        std::vector<std::string> evens, odds;
        std::vector<std::vector<long>> edeg, odeg;
        std::vector<SuperPoly> embs_e, embs_o;
        for (const auto& g : Q.charts[i].gens) {
            // multidegree of the embedding, when the upstairs atlas is graded
            std::vector<long> deg(X.grading_rank, 0);
            if (X.grading_rank > 0) {
                bool first = true;
                for (const auto& [m, c] : g.embedding.terms()) {
                    std::vector<long> d(X.grading_rank, 0);
                    for (int e = 0; e < X.charts[i].ring->n_even(); ++e)
                        for (int t = 0; t < X.grading_rank; ++t)
                            d[t] += m.even[e] * X.charts[i].even_deg[e][t];
                    for (int o : m.odd)
                        for (int t = 0; t < X.grading_rank; ++t)
                            d[t] += X.charts[i].odd_deg[o][t];
                    if (first) {
                        deg = d;
                        first = false;
                    } else if (d != deg) {
                        throw std::logic_error("standalone_quotient: embedding not homogeneous");
                    }
                }
            }
            if (g.parity == 0) {
                evens.push_back(g.name);
                edeg.push_back(deg);
                embs_e.push_back(g.embedding);
            } else {
                odds.push_back(g.name);
                odeg.push_back(deg);
                embs_o.push_back(g.embedding);
            }
        }
        Chart c;
        c.label = X.charts[i].label;
        c.ring = RingDescriptor::make(evens, odds, {}, X.charts[i].ring->odd_truncation());
        c.even_deg = std::move(edeg);
        c.odd_deg = std::move(odeg);
        out.charts.push_back(std::move(c));
        embeddings[i] = embs_e;
        embeddings[i].insert(embeddings[i].end(), embs_o.begin(), embs_o.end());
    }

    for (const auto& [key, ov] : X.overlaps) {
        auto [i, j] = key;
        // quotient overlap: localize at the invariantized overlap functions
        std::vector<int> down_inv;
        for (int g : ov.inverted) {
            SuperPoly ftil = invariantized(Q.field.fields[i], Q.charts[i].witness,
                                           SuperPoly::even_gen(X.charts[i].ring, g));
            bool found = false;
            for (size_t k = 0; k < Q.charts[i].gens.size(); ++k) {
                if (Q.charts[i].gens[k].parity == 0 && Q.charts[i].gens[k].embedding == ftil) {
                    down_inv.push_back(out.charts[i].ring->even_index(Q.charts[i].gens[k].name));
                    found = true;
                    break;
                }
            }
            if (!found)
                throw std::domain_error(
                    "standalone_quotient: invariantized overlap function is not a quotient "
                    "generator");
        }
        std::sort(down_inv.begin(), down_inv.end());
        down_inv.erase(std::unique(down_inv.begin(), down_inv.end()), down_inv.end());
        RingPtr down_loc = out.charts[i].ring->localized(down_inv);

        RingPtr up_loc = X.charts[i].ring->localized(ov.inverted);
        std::vector<SuperPoly> embs_loc;
        for (const auto& e : embeddings[i]) embs_loc.push_back(e.with_ring(up_loc));

        GenAssignment t;
        t.source = out.charts[j].ring;
        t.target = down_loc;
        for (const auto& g : Q.charts[j].gens) {
            SuperPoly img = ov.transition.apply(g.embedding);
            auto expr = express_in(down_loc, embs_loc, img, expr_deg);
            if (!expr)
                throw std::domain_error(
                    "standalone_quotient: transition not expressible in invariant generators at "
                    "bound " +
                    std::to_string(expr_deg));
            (g.parity == 0 ? t.even_images : t.odd_images).push_back(*expr);
        }
        t.validate();
        Overlap nov;
        nov.inverted = std::move(down_inv);
        nov.transition = std::move(t);
        out.overlaps.emplace(key, std::move(nov));
    }
    return out;
}

void validate_fibration_data(const Atlas& base, const FibrationData& data) {
    for (const auto& [key, a] : data.line) {
        auto [i, j] = key;
        const Overlap* ov = base.overlap(i, j);
        if (!ov) throw std::invalid_argument("fibration data on a non-representable pair");
        RingPtr loc = base.charts[i].ring->localized(ov->inverted);
        if (!a.is_even() || !a.is_invertible())
            throw std::domain_error("fibration line part must be even invertible");
        auto it = data.cochain.find(key);
        if (it == data.cochain.end() || !it->second.is_odd())
            throw std::domain_error("fibration cochain must be an odd function per pair");
    }
    // pair identities: t_ij(a_ji) a_ij = 1 and t_ij(a_ji) psi_ij + t_ij(psi_ji) = 0
    for (const auto& [key, a] : data.line) {
        auto [i, j] = key;
        auto back = data.line.find({j, i});
        if (back == data.line.end())
            throw std::invalid_argument("fibration data missing the symmetric pair");
        const Overlap* oij = base.overlap(i, j);
        RingPtr ext = base.charts[i].ring->localized(oij->inverted);
        const Overlap* oji = base.overlap(j, i);
        for (int g : oji->inverted) {
            auto loc = localize_for(ext, oij->transition.even_images[g].with_ring(ext));
            if (!loc) throw std::domain_error("fibration data: round-trip not representable");
            ext = *loc;
        }
        GenAssignment tij = oij->transition.with_target(ext);
        SuperPoly aji = tij.apply(back->second);
        if (!(aji * a.with_ring(ext) == SuperPoly::one(ext)))
            throw std::domain_error("fibration line part fails the pair identity");
        SuperPoly psji = tij.apply(data.cochain.at({j, i}));
        if (!(aji * data.cochain.at(key).with_ring(ext) + psji == SuperPoly::zero(ext)))
            throw std::domain_error("fibration cochain fails the pair identity");
    }
    // a_ik = t_ij(a_jk) a_ij and psi_ik = t_ij(a_jk) psi_ij + t_ij(psi_jk)
    for (int i = 0; i < base.n_charts(); ++i)
        for (int j = 0; j < base.n_charts(); ++j)
            for (int k = 0; k < base.n_charts(); ++k) {
                if (i == j || j == k || i == k) continue;
                const Overlap* oij = base.overlap(i, j);
                const Overlap* ojk = base.overlap(j, k);
                const Overlap* oik = base.overlap(i, k);
                if (!oij || !ojk || !oik) continue;
                if (!data.line.count({i, j}) || !data.line.count({j, k}) ||
                    !data.line.count({i, k}))
                    continue;
                RingPtr join = base.charts[i].ring->localized(oij->inverted);
                join = join->localized(oik->inverted);
                bool ok_join = true;
                for (int g : ojk->inverted) {
                    auto loc = localize_for(join, oij->transition.even_images[g].with_ring(join));
                    if (!loc) {
                        ok_join = false;
                        break;
                    }
                    join = *loc;
                }
                if (!ok_join) continue;
                GenAssignment tij = oij->transition.with_target(join);
                SuperPoly ajk = tij.apply(data.line.at({j, k}));
                SuperPoly psjk = tij.apply(data.cochain.at({j, k}));
                SuperPoly aij = data.line.at({i, j}).with_ring(join);
                SuperPoly psij = data.cochain.at({i, j}).with_ring(join);
                if (!(data.line.at({i, k}).with_ring(join) == ajk * aij))
                    throw std::domain_error("fibration line part fails the cocycle condition");
                if (!(data.cochain.at({i, k}).with_ring(join) == ajk * psij + psjk))
                    throw std::domain_error("fibration cochain fails the twisted cocycle");
            }
}

Atlas build_fibration(const Atlas& base, const FibrationData& data) {
    validate_fibration_data(base, data);
    Atlas out;
    out.kind = base.kind;
    out.grading_rank = 0;  // fiber coordinate carries no multidegree
    for (const auto& c : base.charts) {
        Chart nc;
        nc.label = c.label + "~";
        std::vector<std::string> odds = c.ring->odd_gens();
        odds.push_back(data.fiber_name);
        std::vector<std::string> inv;
        for (int i = 0; i < c.ring->n_even(); ++i)
            if (c.ring->is_invertible(i)) inv.push_back(c.ring->even_gens()[i]);
        nc.ring = RingDescriptor::make(c.ring->even_gens(), odds, inv,
                                       c.ring->odd_truncation());
        out.charts.push_back(std::move(nc));
    }
    for (const auto& [key, ov] : base.overlaps) {
        auto [i, j] = key;
        if (!data.line.count(key)) continue;
        RingPtr loc = out.charts[i].ring->localized(ov.inverted);
        const RingPtr& bri = base.charts[i].ring;
        std::vector<int> emap(bri->n_even()), omap(bri->n_odd());
        for (int g = 0; g < bri->n_even(); ++g) emap[g] = g;
        for (int g = 0; g < bri->n_odd(); ++g) omap[g] = g;
        GenAssignment t;
        t.source = out.charts[j].ring;
        t.target = loc;
        for (const auto& img : ov.transition.even_images)
            t.even_images.push_back(img.embed(loc, emap, omap));
        for (const auto& img : ov.transition.odd_images)
            t.odd_images.push_back(img.embed(loc, emap, omap));
        SuperPoly a = data.line.at(key).embed(loc, emap, omap);
        SuperPoly ps = data.cochain.at(key).embed(loc, emap, omap);
        t.odd_images.push_back(a * SuperPoly::odd_gen(loc, loc->n_odd() - 1) + ps);
        t.validate();
        Overlap nov;
        nov.inverted = ov.inverted;
        nov.transition = std::move(t);
        out.overlaps.emplace(key, std::move(nov));
    }
    return out;
}

FibrationData classify_fibration(const Atlas& total, const Atlas& base,
                                 const std::string& fiber_name) {
    FibrationData data;
    data.fiber_name = fiber_name;
    for (int i = 0; i < total.n_charts(); ++i) {
        const RingPtr& r = total.charts[i].ring;
        if (r->n_odd() == 0 || r->odd_gens().back() != fiber_name)
            throw std::invalid_argument("classify_fibration: fiber coordinate missing");
        if (!base.charts[i].ring->even_gens().empty() &&
            base.charts[i].ring->even_gens() != r->even_gens())
            throw std::invalid_argument("classify_fibration: base generators do not match");
    }
    for (const auto& [key, ov] : total.overlaps) {
        auto [i, j] = key;
        const Overlap* bov = base.overlap(i, j);
        if (!bov) throw std::invalid_argument("classify_fibration: base pair missing");
        const RingPtr& rj = total.charts[j].ring;
        RingPtr bloc = base.charts[i].ring->localized(bov->inverted);
        int fib = rj->n_odd() - 1;
        // base generators must restrict to the base transition
        auto to_base = [&](const SuperPoly& f) {
            SuperPoly out(bloc);
            for (const auto& [m, c] : f.terms()) {
                for (int o : m.odd)
                    if (o == bloc->n_odd())
                        throw std::domain_error(
                            "classify_fibration: base image involves the fiber coordinate");
                Monomial t;
                t.even = m.even;
                t.odd = m.odd;
                out.add_term(std::move(t), c);
            }
            return out;
        };
        for (int g = 0; g < rj->n_even(); ++g)
            if (!(to_base(ov.transition.even_images[g]) == bov->transition.even_images[g]))
                throw std::domain_error("classify_fibration: base transition mismatch");
        for (int g = 0; g < fib; ++g)
            if (!(to_base(ov.transition.odd_images[g]) == bov->transition.odd_images[g]))
                throw std::domain_error("classify_fibration: base transition mismatch");

        const SuperPoly& img = ov.transition.odd_images[fib];
        int fib_i = total.charts[i].ring->n_odd() - 1;
        SuperPoly a(bloc), ps(bloc);
        for (const auto& [m, c] : img.terms()) {
            bool has_fib = !m.odd.empty() && m.odd.back() == fib_i;
            Monomial t;
            t.even = m.even;
            if (has_fib) {
                t.odd.assign(m.odd.begin(), m.odd.end() - 1);
                a.add_term(std::move(t), c);
            } else {
                t.odd = m.odd;
                ps.add_term(std::move(t), c);
            }
        }
        if (!a.is_even() || !a.is_invertible() || !ps.is_odd())
            throw std::domain_error("classify_fibration: transition not affine in the fiber");
        data.line.emplace(key, a);
        data.cochain.emplace(key, ps);
    }
    validate_fibration_data(base, data);
    return data;
}

Atlas fibration_from_quotient(const QuotientAtlas& Q, const Atlas& standalone, int expr_deg) {
    const Atlas& X = Q.base;
    FibrationData data;
    data.fiber_name = "tf";
    for (const auto& [key, ov] : X.overlaps) {
        auto [i, j] = key;
        const Overlap* sov = standalone.overlap(i, j);
        if (!sov) continue;
        RingPtr up_loc = X.charts[i].ring->localized(ov.inverted);
        RingPtr down_loc = standalone.charts[i].ring->localized(sov->inverted);
        std::vector<SuperPoly> embs;
        for (const auto& g : Q.charts[i].gens)
            if (g.parity == 0) embs.push_back(g.embedding.with_ring(up_loc));
        for (const auto& g : Q.charts[i].gens)
            if (g.parity == 1) embs.push_back(g.embedding.with_ring(up_loc));
        // theta_j expressed in chart i splits as psi + a * theta_i with
        // invariant coefficients
        SuperPoly img = ov.transition.apply(Q.charts[j].witness);
        HomologicalField vi = Q.field.fields[i].with_ring(up_loc);
        auto [ps_up, a_up] = decompose(vi, Q.charts[i].witness.with_ring(up_loc), img);
        auto a = express_in(down_loc, embs, a_up, expr_deg);
        auto ps = express_in(down_loc, embs, ps_up, expr_deg);
        if (!a || !ps)
            throw std::domain_error("fibration_from_quotient: expression failed at bound " +
                                    std::to_string(expr_deg));
        data.line.emplace(key, *a);
        data.cochain.emplace(key, *ps);
    }
    return build_fibration(standalone, data);
}

std::optional<std::vector<SuperPoly>> fibration_splitting(const Atlas& base,
                                                          const FibrationData& data, int deg) {
    // unknown odd sigma_i per chart; psi_ij = t_ij(sigma_j) - a_ij sigma_i
    struct Unknown {
        int chart;
        Monomial mono;
    };
    std::vector<Unknown> unknowns;
    std::vector<std::pair<int, int>> chart_range;
    for (int i = 0; i < base.n_charts(); ++i) {
        int begin = static_cast<int>(unknowns.size());
        for (auto& m : monomials_up_to(base.charts[i].ring, deg, 1))
            unknowns.push_back({i, std::move(m)});
        chart_range.emplace_back(begin, static_cast<int>(unknowns.size()));
    }
    std::map<std::pair<std::pair<int, int>, Monomial>, int> rows;  // (pair, monomial) -> row
    auto row_of = [&](const std::pair<int, int>& key, const Monomial& m) {
        auto [it, fresh] = rows.emplace(std::make_pair(key, m), static_cast<int>(rows.size()));
        return it->second;
    };
    std::vector<SparseVec> cols(unknowns.size());
    SparseVec rhs;
    std::vector<std::pair<int, Rat>> rhs_entries;
    for (const auto& [key, a] : data.line) {
        auto [i, j] = key;
        const Overlap* ov = base.overlap(i, j);
        RingPtr loc = base.charts[i].ring->localized(ov->inverted);
        for (const auto& [m, c] : data.cochain.at(key).terms())
            rhs_entries.emplace_back(row_of(key, m), c);
        auto add_poly = [&](int col, const SuperPoly& p, const Rat& scale) {
            for (const auto& [m, c] : p.terms()) {
                int r = row_of(key, m);
                cols[col].emplace_back(r, c * scale);
            }
        };
        for (int u = chart_range[j].first; u < chart_range[j].second; ++u) {
            SuperPoly img = ov->transition.apply(
                SuperPoly::term(base.charts[j].ring, unknowns[u].mono, Rat(1)));
            add_poly(u, img, Rat(1));
        }
        SuperPoly al = a.with_ring(loc);
        for (int u = chart_range[i].first; u < chart_range[i].second; ++u) {
            SuperPoly img = al * SuperPoly::term(loc, unknowns[u].mono, Rat(1));
            add_poly(u, img, Rat(-1));
        }
    }
    for (auto& c : cols) {
        std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        SparseVec merged;
        for (auto& [r, v] : c) {
            if (!merged.empty() && merged.back().first == r)
                merged.back().second += v;
            else
                merged.emplace_back(r, v);
        }
        merged.erase(std::remove_if(merged.begin(), merged.end(),
                                    [](const auto& e) { return e.second == 0; }),
                     merged.end());
        c = std::move(merged);
    }
    {
        std::sort(rhs_entries.begin(), rhs_entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& [r, v] : rhs_entries) {
            if (!rhs.empty() && rhs.back().first == r)
                rhs.back().second += v;
            else
                rhs.emplace_back(r, v);
        }
        rhs.erase(std::remove_if(rhs.begin(), rhs.end(),
                                 [](const auto& e) { return e.second == 0; }),
                  rhs.end());
    }
    auto sol = solve_columns(cols, rhs, false);
    if (!sol.solvable) return std::nullopt;
    std::vector<SuperPoly> out;
    for (int i = 0; i < base.n_charts(); ++i) {
        SuperPoly s(base.charts[i].ring);
        for (int u = chart_range[i].first; u < chart_range[i].second; ++u)
            s.add_term(unknowns[u].mono, sol.particular[u]);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace supergeo
