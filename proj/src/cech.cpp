#include "supergeo/cohomology.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace supergeo {

namespace {

std::vector<long> mono_degree(const Chart& chart, const Monomial& m, int rank) {
    std::vector<long> d(rank, 0);
    for (size_t e = 0; e < m.even.size(); ++e)
        if (m.even[e])
            for (int t = 0; t < rank; ++t) d[t] += m.even[e] * chart.even_deg[e][t];
    for (int o : m.odd)
        for (int t = 0; t < rank; ++t) d[t] += chart.odd_deg[o][t];
    return d;
}

std::vector<long> poly_degree(const Chart& chart, const SuperPoly& p, int rank) {
    bool first = true;
    std::vector<long> deg(rank, 0);
    for (const auto& [m, c] : p.terms()) {
        auto d = mono_degree(chart, m, rank);
        if (first) {
            deg = d;
            first = false;
        } else if (d != deg) {
            throw std::domain_error("cech: value is not multihomogeneous");
        }
    }
    if (first) throw std::domain_error("cech: zero cocycle value");
    return deg;
}

// Monomials of a localized graded chart ring with a prescribed multidegree.
// Requires linearly independent even generator degrees, so each odd subset
// contributes at most one monomial.
struct SliceEnumerator {
    const Chart* chart = nullptr;
    int rank = 0;
    std::vector<SparseVec> deg_cols;

    void init(const Chart& c, int r) {
        chart = &c;
        rank = r;
        deg_cols.clear();
        for (int e = 0; e < c.ring->n_even(); ++e) {
            SparseVec col;
            for (int t = 0; t < r; ++t)
                if (c.even_deg[e][t]) col.emplace_back(t, rat(c.even_deg[e][t]));
            deg_cols.push_back(std::move(col));
        }
        auto probe = solve_columns(deg_cols, {}, true);
        if (!probe.kernel.empty())
            throw std::domain_error("cech: even generator degrees are not independent");
    }

    std::vector<Monomial> of_degree(const RingPtr& localized, const std::vector<long>& target,
                                    int parity) const {
        std::vector<Monomial> out;
        int n = chart->ring->n_odd();
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            std::vector<int> odd;
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i)) odd.push_back(i);
            if ((static_cast<int>(odd.size()) & 1) != parity) continue;
            if (chart->ring->odd_truncation() &&
                static_cast<int>(odd.size()) >= *chart->ring->odd_truncation())
                continue;
            std::vector<long> resid = target;
            for (int o : odd)
                for (int t = 0; t < rank; ++t) resid[t] -= chart->odd_deg[o][t];
            SparseVec rhs;
            for (int t = 0; t < rank; ++t)
                if (resid[t]) rhs.emplace_back(t, rat(resid[t]));
            auto sol = solve_columns(deg_cols, rhs, false);
            if (!sol.solvable) continue;
            Monomial m;
            m.even.assign(chart->ring->n_even(), 0);
            bool ok = true;
            for (int e = 0; e < chart->ring->n_even() && ok; ++e) {
                const Rat& x = sol.particular[e];
                if (x.get_den() != 1) ok = false;
                long v = x.get_num().get_si();
                if (v < 0 && !localized->is_invertible(e)) ok = false;
                m.even[e] = static_cast<int>(v);
            }
            if (!ok) continue;
            m.odd = odd;
            out.push_back(std::move(m));
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

struct TupleInfo {
    std::vector<int> tuple;
    RingPtr ring;
};

using Vec = std::vector<std::pair<Monomial, Rat>>;  // element of a tuple ring

struct SliceComplex {
    // bases per tuple, flattened per level q
    std::vector<std::vector<std::pair<int, Vec>>> level;  // q -> list of (tuple idx, vector)
};

}  // namespace

DimTable cech_cohomology(const Atlas& X, const CechOptions& opt) {
    if (X.grading_rank == 0) throw std::invalid_argument("cech: atlas carries no multigrading");
    const int rank = X.grading_rank;
    const int N = X.n_charts();
    const int max_level = std::min(opt.max_q + 1, N - 1);

    // tuples of sizes 1 .. max_level+1
    std::vector<TupleInfo> tuples;
    std::map<std::vector<int>, int> tuple_idx;
    {
        std::function<void(int, std::vector<int>&)> rec = [&](int start, std::vector<int>& cur) {
            if (!cur.empty() && static_cast<int>(cur.size()) <= max_level + 1) {
                TupleInfo ti;
                ti.tuple = cur;
                ti.ring = X.tuple_ring(cur);
                tuple_idx[cur] = static_cast<int>(tuples.size());
                tuples.push_back(std::move(ti));
            }
            if (static_cast<int>(cur.size()) == max_level + 1) return;
            for (int i = start; i < N; ++i) {
                cur.push_back(i);
                rec(i + 1, cur);
                cur.pop_back();
            }
        };
        std::vector<int> cur;
        rec(0, cur);
    }

    // twist offsets and inverted cocycle values
    std::vector<std::vector<long>> offset(N, std::vector<long>(rank, 0));
    std::map<std::pair<int, int>, SuperPoly> ginv;
    if (opt.sheaf == CechSheaf::Twist) {
        if (!opt.twist) throw std::invalid_argument("cech: twist cocycle missing");
        for (const auto& [key, gij] : opt.twist->g) ginv.emplace(key, gij.invert_even());
        std::vector<bool> seen(N, false);
        seen[0] = true;
        std::vector<int> queue = {0};
        while (!queue.empty()) {
            int i = queue.back();
            queue.pop_back();
            for (const auto& [key, gij] : opt.twist->g) {
                if (key.first != i || seen[key.second]) continue;
                auto d = poly_degree(X.charts[i], gij, rank);
                for (int t = 0; t < rank; ++t) offset[key.second][t] = offset[i][t] - d[t];
                seen[key.second] = true;
                queue.push_back(key.second);
            }
        }
        for (bool s : seen)
            if (!s) throw std::invalid_argument("cech: twist does not connect the cover");
    }
    if (opt.sheaf == CechSheaf::KerField && !opt.field)
        throw std::invalid_argument("cech: field missing");

    std::vector<SliceEnumerator> enums(N);
    for (int i = 0; i < N; ++i) enums[i].init(X.charts[i], rank);

    // restriction of a vector on tuple S to tuple T = S + one extra chart
    auto restrict_vec = [&](const TupleInfo& S, const TupleInfo& T, const Vec& vec) -> Vec {
        Vec out;
        if (S.tuple[0] == T.tuple[0]) {
            for (const auto& [m, c] : vec) out.emplace_back(m, c);
            return out;
        }
        int t0 = T.tuple[0], t1 = S.tuple[0];
        const Overlap* ov = X.overlap(t0, t1);
        GenAssignment into = ov->transition.with_target(T.ring);
        SuperPoly p(S.ring);
        for (const auto& [m, c] : vec) p.add_term(m, c);
        SuperPoly img = into.apply(p);
        if (opt.sheaf == CechSheaf::Twist) img = img * ginv.at({t0, t1}).with_ring(T.ring);
        for (const auto& [m, c] : img.terms()) out.emplace_back(m, c);
        return out;
    };

    auto run = [&](int radius, DimTable& table) {
        for (int parity = 0; parity <= 1; ++parity) {
            std::map<std::pair<int, int>, long> acc;  // q -> dim
            // scan the window
            std::vector<long> d(rank, -radius);
            while (true) {
                long sum = 0;
                for (long t : d) sum += t;
                if (sum == 0) {
                    // bases per tuple
                    std::vector<std::vector<Vec>> basis(tuples.size());
                    bool any = false;
                    for (size_t ti = 0; ti < tuples.size(); ++ti) {
                        const TupleInfo& T = tuples[ti];
                        int t0 = T.tuple[0];
                        std::vector<long> target = d;
                        for (int t = 0; t < rank; ++t) target[t] -= offset[t0][t];
                        auto monos = enums[t0].of_degree(T.ring, target, parity);
                        if (opt.sheaf != CechSheaf::KerField) {
                            for (auto& m : monos) basis[ti].push_back(Vec{{m, Rat(1)}});
                        } else if (!monos.empty()) {
                            // kernel of v on the slice
                            std::map<Monomial, int> rows;
                            std::vector<SparseVec> cols;
                            OddDerivation v = opt.field->fields[t0].der().with_ring(T.ring);
                            for (const auto& m : monos) {
                                SuperPoly img = v.apply(SuperPoly::term(T.ring, m, Rat(1)));
                                std::vector<std::pair<int, Rat>> e;
                                for (const auto& [mm, cc] : img.terms()) {
                                    auto [it, fresh] =
                                        rows.emplace(mm, static_cast<int>(rows.size()));
                                    e.emplace_back(it->second, cc);
                                }
                                std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) {
                                    return a.first < b.first;
                                });
                                cols.push_back(SparseVec(e.begin(), e.end()));
                            }
                            auto sol = solve_columns(cols, {}, true);
                            for (const auto& k : sol.kernel) {
                                Vec vct;
                                for (size_t t = 0; t < monos.size(); ++t)
                                    if (k[t] != 0) vct.emplace_back(monos[t], k[t]);
                                basis[ti].push_back(std::move(vct));
                            }
                        }
                        if (!basis[ti].empty()) any = true;
                    }
                    if (any) {
                        // differentials per level
                        std::vector<long> dimc(max_level + 1, 0);
                        std::vector<long> rk(max_level + 1, 0);
                        for (int q = 0; q <= max_level; ++q) {
                            // columns: C^q basis; rows: (tuple of size q+2, monomial)
                            std::map<std::pair<int, Monomial>, int> rowidx;
                            std::vector<SparseVec> cols;
                            for (size_t ti = 0; ti < tuples.size(); ++ti) {
                                if (static_cast<int>(tuples[ti].tuple.size()) != q + 1) continue;
                                dimc[q] += static_cast<long>(basis[ti].size());
                                for (const auto& vct : basis[ti]) {
                                    std::vector<std::pair<int, Rat>> entries;
                                    // contribute to every supertuple
                                    for (size_t tj = 0; tj < tuples.size(); ++tj) {
                                        if (static_cast<int>(tuples[tj].tuple.size()) != q + 2)
                                            continue;
                                        // is tuples[ti] a face of tuples[tj]?
                                        const auto& big = tuples[tj].tuple;
                                        const auto& small = tuples[ti].tuple;
                                        int extra = -1, pos = -1;
                                        {
                                            size_t a = 0;
                                            for (size_t b = 0; b < big.size(); ++b) {
                                                if (a < small.size() && small[a] == big[b]) {
                                                    ++a;
                                                } else if (extra < 0) {
                                                    extra = big[b];
                                                    pos = static_cast<int>(b);
                                                } else {
                                                    extra = -2;
                                                }
                                            }
                                            if (a != small.size()) extra = -2;
                                        }
                                        if (extra < 0) continue;
                                        Vec r = restrict_vec(tuples[ti], tuples[tj], vct);
                                        Rat sgn = (pos % 2 == 0) ? Rat(1) : Rat(-1);
                                        for (const auto& [m, c] : r) {
                                            auto [it, fresh] = rowidx.emplace(
                                                std::make_pair(static_cast<int>(tj), m),
                                                static_cast<int>(rowidx.size()));
                                            entries.emplace_back(it->second, c * sgn);
                                        }
                                    }
                                    std::sort(entries.begin(), entries.end(),
                                              [](const auto& a, const auto& b) {
                                                  return a.first < b.first;
                                              });
                                    SparseVec sv;
                                    for (auto& [r, v] : entries) {
                                        if (!sv.empty() && sv.back().first == r)
                                            sv.back().second += v;
                                        else
                                            sv.emplace_back(r, v);
                                    }
                                    sv.erase(std::remove_if(
                                                 sv.begin(), sv.end(),
                                                 [](const auto& e) { return e.second == 0; }),
                                             sv.end());
                                    cols.push_back(std::move(sv));
                                }
                            }
                            rk[q] = rank_of_columns(cols);
                        }
                        for (int q = 0; q <= opt.max_q && q <= max_level; ++q) {
                            long h = dimc[q] - rk[q] - (q > 0 ? rk[q - 1] : 0);
                            acc[{q, parity}] += h;
                        }
                    }
                }
                // next multidegree
                int t = 0;
                while (t < rank && d[t] == radius) {
                    d[t] = -radius;
                    ++t;
                }
                if (t == rank) break;
                ++d[t];
            }
            for (const auto& [k, v] : acc)
                if (v) table.dims[k] += v;
        }
    };

    DimTable at_r, at_r1;
    run(opt.window.radius, at_r);
    run(opt.window.radius + 1, at_r1);
    DimTable out;
    std::set<std::pair<int, int>> keys;
    for (const auto& [k, v] : at_r.dims) keys.insert(k);
    for (const auto& [k, v] : at_r1.dims) keys.insert(k);
    for (int q = 0; q <= opt.max_q; ++q)
        for (int p = 0; p <= 1; ++p) keys.insert({q, p});
    for (const auto& k : keys) {
        long v1 = 0, v2 = 0;
        if (auto it = at_r.dims.find(k); it != at_r.dims.end()) v1 = it->second;
        if (auto it = at_r1.dims.find(k); it != at_r1.dims.end()) v2 = it->second;
        out.set(k.first, k.second, v2, v1 == v2);
    }
    return out;
}

DimTable cech_quotient(const QuotientAtlas& Q, const CechWindow& window, int max_q) {
    CechOptions opt;
    opt.sheaf = CechSheaf::KerField;
    opt.field = &Q.field;
    opt.window = window;
    opt.max_q = max_q;
    return cech_cohomology(Q.base, opt);
}

}  // namespace supergeo
