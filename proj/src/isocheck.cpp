#include "supergeo/isocheck.hpp"

#include <algorithm>
#include <numeric>

namespace supergeo {

namespace {

std::optional<RingPtr> extend_target(const RingPtr& start, const GenAssignment& sigma,
                                     const std::vector<int>& inverted_src) {
    RingPtr ext = start;
    for (int g : inverted_src) {
        auto loc = localize_for(ext, sigma.even_images[g].with_ring(ext));
        if (!loc) return std::nullopt;
        ext = *loc;
    }
    return ext;
}

bool verify_commuting(const Atlas& X, const Atlas& Y, const std::vector<int>& perm,
                      const std::vector<GenAssignment>& maps) {
    for (const auto& [key, xov] : X.overlaps) {
        auto [i, j] = key;
        const Overlap* yov = Y.overlap(perm[i], perm[j]);
        if (!yov) return false;
        auto ext =
            extend_target(X.charts[i].ring->localized(xov.inverted), maps[i], yov->inverted);
        if (!ext) return false;
        GenAssignment sig_i = maps[i].with_target(*ext);
        const RingPtr& ryj = Y.charts[perm[j]].ring;
        for (int g = 0; g < ryj->n_even() + ryj->n_odd(); ++g) {
            SuperPoly yg = g < ryj->n_even() ? SuperPoly::even_gen(ryj, g)
                                             : SuperPoly::odd_gen(ryj, g - ryj->n_even());
            SuperPoly lhs = sig_i.apply(yov->transition.apply(yg));
            SuperPoly rhs = xov.transition.apply(maps[j].apply(yg)).with_ring(*ext);
            if (!(lhs == rhs)) return false;
        }
    }
    return true;
}

bool verify_bijective(const Atlas& X, const Atlas& Y, const std::vector<int>& perm,
                      const std::vector<GenAssignment>& maps, int bound) {
    for (int i = 0; i < X.n_charts(); ++i) {
        const RingPtr& rx = X.charts[i].ring;
        const RingPtr& ry = Y.charts[perm[i]].ring;
        std::vector<SuperPoly> embs = maps[i].even_images;
        embs.insert(embs.end(), maps[i].odd_images.begin(), maps[i].odd_images.end());
        for (int g = 0; g < rx->n_even() + rx->n_odd(); ++g) {
            SuperPoly xg = g < rx->n_even() ? SuperPoly::even_gen(rx, g)
                                            : SuperPoly::odd_gen(rx, g - rx->n_even());
            if (!express_in(ry, embs, xg, bound + 2)) return false;
        }
    }
    return true;
}

bool verify_maps(const Atlas& X, const Atlas& Y, const std::vector<int>& perm,
                 const std::vector<GenAssignment>& maps, int bound) {
    for (const auto& m : maps) {
        try {
            m.validate();
        } catch (const std::exception&) {
            return false;
        }
    }
    return verify_commuting(X, Y, perm, maps) && verify_bijective(X, Y, perm, maps, bound);
}

SuperPoly odd_component(const SuperPoly& p, size_t len) {
    SuperPoly out(p.ring());
    for (const auto& [m, c] : p.terms())
        if (m.odd.size() == len) out.add_term(m, c);
    return out;
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

struct RowIndex {
    std::map<std::tuple<int, int, int, Monomial>, int> rows;  // (i, j, gen, monomial)
    int of(int i, int j, int g, const Monomial& m) {
        auto [it, fresh] = rows.emplace(std::make_tuple(i, j, g, m), static_cast<int>(rows.size()));
        return it->second;
    }
};

}  // namespace

IsoResult iso_check(const Atlas& X, const Atlas& Y, int bound) {
    IsoResult res;
    res.bound = bound;
    if (X.n_charts() != Y.n_charts()) return res;
    const int N = X.n_charts();

    std::vector<std::vector<int>> perms;
    {
        std::vector<int> idp(N);
        std::iota(idp.begin(), idp.end(), 0);
        perms.push_back(idp);
        if (N <= 6) {
            std::vector<int> p = idp;
            while (std::next_permutation(p.begin(), p.end())) perms.push_back(p);
        }
    }

    const std::vector<Rat> scalars = {rat(1),     rat(-1),    rat(2),  rat(-2), rat(1, 2),
                                      rat(-1, 2), rat(3),     rat(-3), rat(1, 3), rat(-1, 3),
                                      rat(4),     rat(-4),    rat(1, 4), rat(-1, 4)};

    for (const auto& perm : perms) {
        bool shape_ok = true;
        for (int i = 0; i < N && shape_ok; ++i) {
            const RingPtr& rx = X.charts[i].ring;
            const RingPtr& ry = Y.charts[perm[i]].ring;
            if (rx->n_even() != ry->n_even() || rx->n_odd() != ry->n_odd() ||
                rx->odd_truncation() != ry->odd_truncation())
                shape_ok = false;
        }
        if (shape_ok)
            for (const auto& [key, ov] : X.overlaps)
                if (!Y.overlap(perm[key.first], perm[key.second])) shape_ok = false;
        if (!shape_ok) continue;

        // fast path: positional identity
        {
            std::vector<GenAssignment> maps;
            for (int i = 0; i < N; ++i) {
                GenAssignment s;
                s.source = Y.charts[perm[i]].ring;
                s.target = X.charts[i].ring;
                for (int g = 0; g < s.source->n_even(); ++g)
                    s.even_images.push_back(SuperPoly::even_gen(s.target, g));
                for (int g = 0; g < s.source->n_odd(); ++g)
                    s.odd_images.push_back(SuperPoly::odd_gen(s.target, g));
                maps.push_back(std::move(s));
            }
            if (verify_maps(X, Y, perm, maps, bound)) {
                res.found = true;
                res.chart_map = perm;
                res.maps = std::move(maps);
                return res;
            }
        }

        const int ne = X.charts[0].ring->n_even();
        const int sign_cases = ne <= 4 ? (1 << ne) : 1;
        for (int sc = 0; sc < sign_cases; ++sc) {
            std::vector<Rat> sgn(ne, Rat(1));
            for (int t = 0; t < ne; ++t)
                if (sc & (1 << t)) sgn[t] = Rat(-1);

            std::vector<GenAssignment> red;
            for (int i = 0; i < N; ++i) {
                GenAssignment s;
                s.source = Y.charts[perm[i]].ring;
                s.target = X.charts[i].ring;
                for (int g = 0; g < s.source->n_even(); ++g)
                    s.even_images.push_back(SuperPoly::even_gen(s.target, g) * sgn[g]);
                for (int g = 0; g < s.source->n_odd(); ++g)
                    s.odd_images.push_back(SuperPoly::zero(s.target));
                red.push_back(std::move(s));
            }

            // reduced-layer commuting
            bool red_ok = true;
            for (const auto& [key, xov] : X.overlaps) {
                auto [i, j] = key;
                const Overlap* yov = Y.overlap(perm[i], perm[j]);
                auto ext = extend_target(X.charts[i].ring->localized(xov.inverted), red[i],
                                         yov->inverted);
                if (!ext) {
                    red_ok = false;
                    break;
                }
                GenAssignment sig_i = red[i].with_target(*ext);
                const RingPtr& ryj = Y.charts[perm[j]].ring;
                for (int g = 0; g < ryj->n_even() && red_ok; ++g) {
                    SuperPoly yg = SuperPoly::even_gen(ryj, g);
                    SuperPoly lhs = sig_i.apply(yov->transition.apply(yg)).reduced_part();
                    SuperPoly rhs =
                        xov.transition.apply(red[j].apply(yg)).with_ring(*ext).reduced_part();
                    if (!(lhs == rhs)) red_ok = false;
                }
                if (!red_ok) break;
            }
            if (!red_ok) continue;

            // ---- order-1 solve: odd-layer images ----
            struct U1 {
                int chart;
                int ygen;
                Monomial mono;
            };
            std::vector<U1> u1;
            std::vector<int> u1_begin(N + 1, 0);
            for (int i = 0; i < N; ++i) {
                u1_begin[i] = static_cast<int>(u1.size());
                std::vector<Monomial> len1;
                for (auto& m : monomials_up_to(X.charts[i].ring, bound, 1))
                    if (m.odd.size() == 1) len1.push_back(std::move(m));
                for (int l = 0; l < Y.charts[perm[i]].ring->n_odd(); ++l)
                    for (const auto& m : len1) u1.push_back({i, l, m});
            }
            u1_begin[N] = static_cast<int>(u1.size());

            RowIndex rows1;
            std::vector<std::vector<std::pair<int, Rat>>> cols1(u1.size());
            bool sys_ok = true;
            for (const auto& [key, xov] : X.overlaps) {
                auto [i, j] = key;
                const Overlap* yov = Y.overlap(perm[i], perm[j]);
                auto ext = extend_target(X.charts[i].ring->localized(xov.inverted), red[i],
                                         yov->inverted);
                if (!ext) {
                    sys_ok = false;
                    break;
                }
                GenAssignment red_i = red[i].with_target(*ext);
                const RingPtr& ryj = Y.charts[perm[j]].ring;
                for (int g = 0; g < ryj->n_odd(); ++g) {
                    SuperPoly timg = yov->transition.apply(SuperPoly::odd_gen(ryj, g));
                    // LHS: terms E*y_a of t^Y(g) pair with unknown images of y_a
                    for (const auto& [m, c] : timg.terms()) {
                        if (m.odd.size() != 1) continue;
                        int a = m.odd[0];
                        Monomial epart;
                        epart.even = m.even;
                        SuperPoly efac =
                            red_i.apply(SuperPoly::term(yov->transition.target, epart, c));
                        for (int u = u1_begin[i]; u < u1_begin[i + 1]; ++u) {
                            if (u1[u].ygen != a) continue;
                            SuperPoly contrib =
                                efac * SuperPoly::term(*ext, u1[u].mono, Rat(1));
                            for (const auto& [mm, cc] : contrib.terms())
                                if (mm.odd.size() == 1)
                                    cols1[u].emplace_back(rows1.of(i, j, g, mm), cc);
                        }
                    }
                    // RHS: t^X applied to the unknown image of g in chart j
                    for (int u = u1_begin[j]; u < u1_begin[j + 1]; ++u) {
                        if (u1[u].ygen != g) continue;
                        SuperPoly timgx = xov.transition
                                              .apply(SuperPoly::term(X.charts[j].ring,
                                                                     u1[u].mono, Rat(1)))
                                              .with_ring(*ext);
                        for (const auto& [mm, cc] : timgx.terms())
                            if (mm.odd.size() == 1)
                                cols1[u].emplace_back(rows1.of(i, j, g, mm), -cc);
                    }
                }
            }
            if (!sys_ok) continue;
            std::vector<SparseVec> packed1;
            for (auto& c : cols1) packed1.push_back(pack(std::move(c)));
            auto sol1 = solve_columns(packed1, {}, true);
            if (!sol1.solvable) continue;  // cannot happen: homogeneous

            // candidate odd layers from the kernel
            std::vector<std::vector<Rat>> odd_candidates;
            const auto& K = sol1.kernel;
            if (K.empty()) {
                // no odd generators at all: the reduced map is the candidate
                odd_candidates.push_back(std::vector<Rat>(u1.size(), Rat(0)));
            } else {
                for (const auto& k : K)
                    for (const auto& s : scalars) {
                        std::vector<Rat> v(u1.size());
                        for (size_t t = 0; t < v.size(); ++t) v[t] = s * k[t];
                        odd_candidates.push_back(std::move(v));
                    }
                if (K.size() == 2)
                    for (const auto& s1 : scalars)
                        for (const auto& s2 : scalars) {
                            std::vector<Rat> v(u1.size());
                            for (size_t t = 0; t < v.size(); ++t)
                                v[t] = s1 * K[0][t] + s2 * K[1][t];
                            odd_candidates.push_back(std::move(v));
                        }
            }

            for (const auto& oc : odd_candidates) {
                std::vector<GenAssignment> cur = red;
                for (int i = 0; i < N; ++i)
                    for (int u = u1_begin[i]; u < u1_begin[i + 1]; ++u)
                        if (oc[u] != 0)
                            cur[i].odd_images[u1[u].ygen] =
                                cur[i].odd_images[u1[u].ygen] +
                                SuperPoly::term(X.charts[i].ring, u1[u].mono, oc[u]);

                // ---- order-2 solve: even nilpotent corrections ----
                struct U2 {
                    int chart;
                    int ygen;
                    Monomial mono;
                };
                std::vector<U2> u2;
                std::vector<int> u2_begin(N + 1, 0);
                for (int i = 0; i < N; ++i) {
                    u2_begin[i] = static_cast<int>(u2.size());
                    std::vector<Monomial> len2;
                    for (auto& m : monomials_up_to(X.charts[i].ring, bound, 0))
                        if (m.odd.size() == 2) len2.push_back(std::move(m));
                    for (int l = 0; l < Y.charts[perm[i]].ring->n_even(); ++l)
                        for (const auto& m : len2) u2.push_back({i, l, m});
                }
                u2_begin[N] = static_cast<int>(u2.size());

                RowIndex rows2;
                std::vector<std::vector<std::pair<int, Rat>>> cols2(u2.size());
                std::vector<std::pair<int, Rat>> rhs2;
                bool ok2 = true;
                for (const auto& [key, xov] : X.overlaps) {
                    auto [i, j] = key;
                    const Overlap* yov = Y.overlap(perm[i], perm[j]);
                    auto ext = extend_target(X.charts[i].ring->localized(xov.inverted), cur[i],
                                             yov->inverted);
                    if (!ext) {
                        ok2 = false;
                        break;
                    }
                    GenAssignment cur_i = cur[i].with_target(*ext);
                    const RingPtr& ryj = Y.charts[perm[j]].ring;
                    const RingPtr& yloc = yov->transition.target;
                    for (int g = 0; g < ryj->n_even(); ++g) {
                        SuperPoly timg = yov->transition.apply(SuperPoly::even_gen(ryj, g));
                        SuperPoly known = cur_i.apply(timg) -
                                          xov.transition.apply(cur[j].apply(
                                                                   SuperPoly::even_gen(ryj, g)))
                                              .with_ring(*ext);
                        SuperPoly known2 = odd_component(known, 2);
                        for (const auto& [mm, cc] : known2.terms())
                            rhs2.emplace_back(rows2.of(i, j, g, mm), -cc);
                        // q-columns on the left: sigma(d timg / d y_l) * mono
                        for (int l = 0; l < yloc->n_even(); ++l) {
                            SuperPoly part = timg.even_partial(l);
                            if (part.is_zero()) continue;
                            SuperPoly base = cur_i.apply(part);
                            for (int u = u2_begin[i]; u < u2_begin[i + 1]; ++u) {
                                if (u2[u].ygen != l) continue;
                                SuperPoly contrib =
                                    base * SuperPoly::term(*ext, u2[u].mono, Rat(1));
                                SuperPoly c2 = odd_component(contrib, 2);
                                for (const auto& [mm, cc] : c2.terms())
                                    cols2[u].emplace_back(rows2.of(i, j, g, mm), cc);
                            }
                        }
                        // q-columns on the right: -t^X(mono)
                        for (int u = u2_begin[j]; u < u2_begin[j + 1]; ++u) {
                            if (u2[u].ygen != g) continue;
                            SuperPoly timgx = xov.transition
                                                  .apply(SuperPoly::term(X.charts[j].ring,
                                                                         u2[u].mono, Rat(1)))
                                                  .with_ring(*ext);
                            SuperPoly t2 = odd_component(timgx, 2);
                            for (const auto& [mm, cc] : t2.terms())
                                cols2[u].emplace_back(rows2.of(i, j, g, mm), -cc);
                        }
                    }
                }
                if (!ok2) continue;
                std::vector<SparseVec> packed2;
                for (auto& c : cols2) packed2.push_back(pack(std::move(c)));
                auto sol2 = solve_columns(packed2, pack(std::move(rhs2)), false);
                if (!sol2.solvable) continue;

                std::vector<GenAssignment> fin = cur;
                for (int i = 0; i < N; ++i)
                    for (int u = u2_begin[i]; u < u2_begin[i + 1]; ++u)
                        if (sol2.particular[u] != 0)
                            fin[i].even_images[u2[u].ygen] =
                                fin[i].even_images[u2[u].ygen] +
                                SuperPoly::term(X.charts[i].ring, u2[u].mono,
                                                sol2.particular[u]);
                if (verify_maps(X, Y, perm, fin, bound)) {
                    res.found = true;
                    res.chart_map = perm;
                    res.maps = std::move(fin);
                    return res;
                }
            }
        }
    }
    return res;
}

}  // namespace supergeo
