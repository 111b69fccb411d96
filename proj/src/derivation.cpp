#include "supergeo/derivation.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace supergeo {

void OddDerivation::validate() const {
    if (static_cast<int>(even_images.size()) != ring->n_even() ||
        static_cast<int>(odd_images.size()) != ring->n_odd())
        throw std::invalid_argument("derivation: image count mismatch");
    for (int i = 0; i < ring->n_even(); ++i) {
        if (!same_ring(even_images[i].ring(), ring))
            throw std::invalid_argument("derivation: image ring mismatch");
        if (!even_images[i].is_odd())
            throw std::domain_error("derivation: image of even generator must be odd");
    }
    for (int i = 0; i < ring->n_odd(); ++i) {
        if (!same_ring(odd_images[i].ring(), ring))
            throw std::invalid_argument("derivation: image ring mismatch");
        if (!odd_images[i].is_even())
            throw std::domain_error("derivation: image of odd generator must be even");
    }
}

SuperPoly OddDerivation::apply(const SuperPoly& f) const {
    if (!same_ring(f.ring(), ring)) throw std::invalid_argument("derive: ring mismatch");
    SuperPoly out(ring);
    for (const auto& [m, c] : f.terms()) {
        // v(E*T) = sum_i (dE/dg_i) v(g_i) T + E * v(T); even cofactors are
        // central, so only the odd-factor positions contribute signs.
        Monomial odd_only;
        odd_only.even.assign(ring->n_even(), 0);
        odd_only.odd = m.odd;
        for (int i = 0; i < ring->n_even(); ++i) {
            int e = m.even[i];
            if (e == 0 || even_images[i].is_zero()) continue;
            Monomial dm = m;
            dm.even[i] = e - 1;
            dm.odd.clear();
            SuperPoly t = SuperPoly::term(ring, std::move(dm), c * e);
            out = out + t * even_images[i] * SuperPoly::term(ring, odd_only, Rat(1));
        }
        for (size_t p = 0; p < m.odd.size(); ++p) {
            const SuperPoly& img = odd_images[m.odd[p]];
            if (img.is_zero()) continue;
            Monomial rest;
            rest.even = m.even;
            for (size_t q = 0; q < m.odd.size(); ++q)
                if (q != p) rest.odd.push_back(m.odd[q]);
            Rat coeff = (p & 1) ? -c : c;
            out = out + SuperPoly::term(ring, std::move(rest), coeff) * img;
        }
    }
    return out;
}

OddDerivation OddDerivation::with_ring(const RingPtr& target) const {
    OddDerivation out;
    out.ring = target;
    for (const auto& p : even_images) out.even_images.push_back(p.with_ring(target));
    for (const auto& p : odd_images) out.odd_images.push_back(p.with_ring(target));
    return out;
}

HomologicalCheck is_homological(const OddDerivation& v) {
    v.validate();
    HomologicalCheck res{false, "", SuperPoly::zero(v.ring)};
    for (int i = 0; i < v.ring->n_even(); ++i) {
        SuperPoly vv = v.apply(v.even_images[i]);
        if (!vv.is_zero()) {
            res.witness_gen = v.ring->even_gens()[i];
            res.value = vv;
            return res;
        }
    }
    for (int i = 0; i < v.ring->n_odd(); ++i) {
        SuperPoly vv = v.apply(v.odd_images[i]);
        if (!vv.is_zero()) {
            res.witness_gen = v.ring->odd_gens()[i];
            res.value = vv;
            return res;
        }
    }
    res.ok = true;
    return res;
}

HomologicalField HomologicalField::certify(OddDerivation v) {
    auto chk = is_homological(v);
    if (!chk.ok)
        throw std::domain_error("not homological: v^2(" + chk.witness_gen +
                                ") = " + chk.value.str());
    return HomologicalField(std::move(v));
}

HomologicalField HomologicalField::with_ring(const RingPtr& target) const {
    return HomologicalField(v_.with_ring(target));
}

namespace {

void enum_even_part(const RingPtr& ring, int idx, int budget, Monomial& cur,
                    const std::function<void(const Monomial&)>& emit) {
    if (idx == ring->n_even()) {
        emit(cur);
        return;
    }
    for (int mag = 0; mag <= budget; ++mag) {
        cur.even[idx] = mag;
        enum_even_part(ring, idx + 1, budget - mag, cur, emit);
        if (mag > 0 && ring->is_invertible(idx)) {
            cur.even[idx] = -mag;
            enum_even_part(ring, idx + 1, budget - mag, cur, emit);
        }
    }
    cur.even[idx] = 0;
}

}  // namespace

std::vector<Monomial> monomials_up_to(const RingPtr& ring, int max_even_deg, int parity) {
    std::vector<Monomial> out;
    int n = ring->n_odd();
    std::vector<std::vector<int>> odd_lists;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> odd;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) odd.push_back(i);
        if (parity >= 0 && (static_cast<int>(odd.size()) & 1) != parity) continue;
        if (ring->odd_truncation() && static_cast<int>(odd.size()) >= *ring->odd_truncation())
            continue;
        odd_lists.push_back(std::move(odd));
    }
    Monomial cur;
    cur.even.assign(ring->n_even(), 0);
    enum_even_part(ring, 0, max_even_deg, cur, [&](const Monomial& m) {
        for (const auto& odd : odd_lists) {
            Monomial full = m;
            full.odd = odd;
            out.push_back(std::move(full));
        }
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Monomial> monomials_of_slice(const RingPtr& ring, int even_deg, int parity) {
    auto all = monomials_up_to(ring, even_deg, parity);
    std::vector<Monomial> out;
    for (auto& m : all)
        if (m.even_abs_degree() == even_deg) out.push_back(std::move(m));
    return out;
}

GradedSlice graded_slice(const RingPtr& ring, int degree, int parity) {
    GradedSlice s;
    s.degree = degree;
    s.parity = parity;
    s.basis = monomials_of_slice(ring, degree, parity);
    return s;
}

std::vector<SparseVec> map_columns(const OddDerivation& v, const std::vector<Monomial>& basis,
                                   std::map<Monomial, int>& row_index) {
    std::vector<SparseVec> cols;
    cols.reserve(basis.size());
    for (const auto& m : basis) {
        SuperPoly img = v.apply(SuperPoly::term(v.ring, m, Rat(1)));
        std::vector<std::pair<int, Rat>> entries;
        for (const auto& [mm, c] : img.terms()) {
            auto [it, fresh] = row_index.emplace(mm, static_cast<int>(row_index.size()));
            entries.emplace_back(it->second, c);
        }
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        cols.push_back(SparseVec(entries.begin(), entries.end()));
    }
    return cols;
}

FreenessResult freeness(const HomologicalField& hv, int bound) {
    const OddDerivation& v = hv.der();
    FreenessResult res;
    res.bound = bound;

    // Linear solve for v(theta) = 1 over odd monomials of even degree <= bound.
    auto cand = monomials_up_to(v.ring, bound, 1);
    std::map<Monomial, int> rows;
    auto cols = map_columns(v, cand, rows);
    Monomial unit;
    unit.even.assign(v.ring->n_even(), 0);
    auto it = rows.find(unit);
    if (it != rows.end()) {
        SparseVec rhs{{it->second, Rat(1)}};
        auto sol = solve_columns(cols, rhs, false);
        if (sol.solvable) {
            SuperPoly theta(v.ring);
            for (size_t j = 0; j < cand.size(); ++j) theta.add_term(cand[j], sol.particular[j]);
            if (!(v.apply(theta) == SuperPoly::one(v.ring)))
                throw std::logic_error("freeness: witness verification failed");
            res.kind = FreenessResult::Free;
            res.witness = theta;
            return res;
        }
    }

    // Negative certificate: a rational reduced point where every v(gen)
    // vanishes after killing odd variables. Images of even generators are
    // odd, so only odd generators contribute conditions.
    std::vector<SuperPoly> reduced;
    for (const auto& img : v.odd_images) reduced.push_back(img.reduced_part());

    int ne = v.ring->n_even();
    std::vector<Rat> vals(ne);
    auto try_point = [&](const std::vector<Rat>& pt) {
        for (int i = 0; i < ne; ++i)
            if (pt[i] == 0 && v.ring->is_invertible(i)) return false;
        for (const auto& r : reduced)
            if (r.eval_reduced(pt) != 0) return false;
        return true;
    };
    std::vector<Rat> candidates = {rat(0), rat(1), rat(-1), rat(2), rat(-2), rat(1, 2)};
    bool found = false;
    std::function<void(int)> search = [&](int idx) {
        if (found) return;
        if (idx == ne) {
            if (try_point(vals)) {
                res.kind = FreenessResult::NotFree;
                res.point = vals;
                found = true;
            }
            return;
        }
        for (const auto& c : candidates) {
            if (c == 0 && v.ring->is_invertible(idx)) continue;
            vals[idx] = c;
            search(idx + 1);
            if (found) return;
        }
    };
    if (ne <= 8) search(0);
    if (found) return res;

    res.kind = FreenessResult::Undecided;
    return res;
}

SliceDims ker_im_dims(const HomologicalField& hv, int degree, int parity, int slack) {
    const OddDerivation& v = hv.der();
    SliceDims out;
    auto slice = graded_slice(v.ring, degree, parity);
    std::map<Monomial, int> rows;
    // reserve rows for the slice so its coordinate subspace is addressable
    for (const auto& m : slice.basis) rows.emplace(m, static_cast<int>(rows.size()));

    auto cols = map_columns(v, slice.basis, rows);
    out.ker = static_cast<long>(slice.basis.size()) - rank_of_columns(cols);

    std::vector<Monomial> pre = monomials_up_to(v.ring, degree + slack, (parity + 1) & 1);
    auto img_cols = map_columns(v, pre, rows);
    std::vector<SparseVec> slice_cols;
    for (const auto& m : slice.basis) slice_cols.push_back({{rows.at(m), Rat(1)}});
    out.im = intersection_dim(img_cols, slice_cols);
    return out;
}

std::pair<SuperPoly, SuperPoly> decompose(const HomologicalField& v, const SuperPoly& theta,
                                          const SuperPoly& f) {
    if (!theta.is_odd() || !(v.apply(theta) == SuperPoly::one(v.ring())))
        throw std::domain_error("decompose: v(theta) != 1");
    SuperPoly a(v.ring()), b(v.ring());
    for (int p = 0; p <= 1; ++p) {
        SuperPoly fp = f.parity_part(p);
        if (fp.is_zero()) continue;
        // b_p = (-1)^{p+1} v(f_p), a_p = f_p - b_p theta
        SuperPoly bp = v.apply(fp);
        if (p == 0) bp = -bp;
        a = a + (fp - bp * theta);
        b = b + bp;
    }
    return {a, b};
}

std::vector<InvariantGen> invariant_generators(const HomologicalField& v,
                                               const SuperPoly& theta) {
    const RingPtr& ring = v.ring();
    std::vector<InvariantGen> out;
    std::map<Monomial, int> rows;
    RREF basis;
    // the constant 1 is always in the invariant span
    Monomial unit;
    unit.even.assign(ring->n_even(), 0);
    rows.emplace(unit, 0);
    basis.add({{0, Rat(1)}});

    auto coords = [&](const SuperPoly& p) {
        std::vector<std::pair<int, Rat>> e;
        for (const auto& [m, c] : p.terms()) {
            auto [it, fresh] = rows.emplace(m, static_cast<int>(rows.size()));
            e.emplace_back(it->second, c);
        }
        std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        return SparseVec(e.begin(), e.end());
    };

    auto consider = [&](const std::string& name, const SuperPoly& g) {
        if (g.is_zero()) return;
        SparseVec vec = coords(g);
        if (basis.reduce(vec).empty()) return;  // in the span of 1 and previous
        basis.add(vec);
        if (!v.apply(g).is_zero()) throw std::logic_error("invariant generator not invariant");
        int par = g.parity_class() == ParityClass::Odd ? 1 : 0;
        out.push_back(InvariantGen{name, par, g});
    };

    for (int i = 0; i < ring->n_even(); ++i) {
        auto [a, b] = decompose(v, theta, SuperPoly::even_gen(ring, i));
        consider(ring->even_gens()[i] + "t", a);
        consider(ring->even_gens()[i] + "b", b);
    }
    for (int i = 0; i < ring->n_odd(); ++i) {
        auto [a, b] = decompose(v, theta, SuperPoly::odd_gen(ring, i));
        consider(ring->odd_gens()[i] + "t", a);
        consider(ring->odd_gens()[i] + "b", b);
    }
    return out;
}

std::optional<SuperPoly> express_in(const RingPtr& new_ring,
                                    const std::vector<SuperPoly>& embeddings,
                                    const SuperPoly& target, int max_deg) {
    if (static_cast<int>(embeddings.size()) != new_ring->n_even() + new_ring->n_odd())
        throw std::invalid_argument("express_in: embedding count mismatch");
    GenAssignment emb;
    emb.source = new_ring;
    emb.target = target.ring();
    for (int i = 0; i < new_ring->n_even(); ++i) emb.even_images.push_back(embeddings[i]);
    for (int i = 0; i < new_ring->n_odd(); ++i)
        emb.odd_images.push_back(embeddings[new_ring->n_even() + i]);
    emb.validate();

    auto cand = monomials_up_to(new_ring, max_deg, -1);
    std::map<Monomial, int> rows;
    std::vector<SparseVec> cols;
    for (const auto& m : cand) {
        SuperPoly img = emb.apply(SuperPoly::term(new_ring, m, Rat(1)));
        std::vector<std::pair<int, Rat>> e;
        for (const auto& [mm, c] : img.terms()) {
            auto [it, fresh] = rows.emplace(mm, static_cast<int>(rows.size()));
            e.emplace_back(it->second, c);
        }
        std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        cols.push_back(SparseVec(e.begin(), e.end()));
    }
    SparseVec rhs;
    {
        std::vector<std::pair<int, Rat>> e;
        for (const auto& [mm, c] : target.terms()) {
            auto it = rows.find(mm);
            if (it == rows.end()) return std::nullopt;  // unreachable monomial
            e.emplace_back(it->second, c);
        }
        std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        rhs = SparseVec(e.begin(), e.end());
    }
    auto sol = solve_columns(cols, rhs, false);
    if (!sol.solvable) return std::nullopt;
    SuperPoly expr(new_ring);
    for (size_t j = 0; j < cand.size(); ++j) expr.add_term(cand[j], sol.particular[j]);
    if (!(emb.apply(expr) == target)) throw std::logic_error("express_in: verification failed");
    return expr;
}

std::vector<InvariantGen> quotient_multi(const std::vector<HomologicalField>& fields, int bound,
                                         int expr_deg) {
    if (fields.empty()) throw std::invalid_argument("quotient_multi: no fields");
    const RingPtr ring0 = fields[0].ring();
    for (const auto& f : fields)
        if (!same_ring(f.ring(), ring0))
            throw std::invalid_argument("quotient_multi: fields on different rings");
    for (size_t i = 0; i < fields.size(); ++i)
        for (size_t j = i + 1; j < fields.size(); ++j) {
            const auto& vi = fields[i];
            const auto& vj = fields[j];
            auto check = [&](const SuperPoly& g) {
                SuperPoly anti = vi.apply(vj.apply(g)) + vj.apply(vi.apply(g));
                if (!anti.is_zero())
                    throw std::domain_error("quotient_multi: fields do not anticommute");
            };
            for (int k = 0; k < ring0->n_even(); ++k) check(SuperPoly::even_gen(ring0, k));
            for (int k = 0; k < ring0->n_odd(); ++k) check(SuperPoly::odd_gen(ring0, k));
        }

    std::vector<HomologicalField> cur = fields;
    // embeds the current stage ring into the original ring
    GenAssignment into_orig = GenAssignment::identity(ring0);
    while (true) {
        auto fr = freeness(cur[0], bound);
        if (fr.kind != FreenessResult::Free)
            throw std::domain_error("quotient_multi: freeness undecided or failing at bound " +
                                    std::to_string(bound));
        auto gens = invariant_generators(cur[0], *fr.witness);
        if (cur.size() == 1) {
            std::vector<InvariantGen> out;
            for (auto& g : gens)
                out.push_back(InvariantGen{g.name, g.parity, into_orig.apply(g.embedding)});
            return out;
        }
        std::vector<std::string> evens, odds;
        for (const auto& g : gens) (g.parity == 0 ? evens : odds).push_back(g.name);
        RingPtr next = RingDescriptor::make(evens, odds, {}, ring0->odd_truncation());
        std::vector<SuperPoly> embeddings;
        for (const auto& g : gens)
            if (g.parity == 0) embeddings.push_back(g.embedding);
        for (const auto& g : gens)
            if (g.parity == 1) embeddings.push_back(g.embedding);

        std::vector<HomologicalField> rest;
        for (size_t k = 1; k < cur.size(); ++k) {
            OddDerivation w;
            w.ring = next;
            for (const auto& e : embeddings) {
                SuperPoly img = cur[k].apply(e);
                auto expr = express_in(next, embeddings, img, expr_deg);
                if (!expr)
                    throw std::domain_error("quotient_multi: field restriction failed at bound " +
                                            std::to_string(expr_deg));
                (e.is_even() ? w.even_images : w.odd_images).push_back(*expr);
            }
            rest.push_back(HomologicalField::certify(std::move(w)));
        }
        GenAssignment emb;
        emb.source = next;
        emb.target = cur[0].ring();
        for (const auto& e : embeddings)
            (e.is_even() ? emb.even_images : emb.odd_images).push_back(e);
        into_orig = emb.then(into_orig);
        cur = std::move(rest);
    }
}

}  // namespace supergeo
