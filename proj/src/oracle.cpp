#include "supergeo/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace supergeo {

long monomial_h0(int n, int m) {
    if (m < 0) return 0;
    long count = 0;
    std::function<void(int, int)> rec = [&](int idx, int left) {
        if (idx == n) {
            ++count;
            return;
        }
        for (int a = 0; a <= left; ++a) rec(idx + 1, left - a);
    };
    rec(0, m);
    return count;
}

OracleReport monomial_h0_report(int n, int m) {
    OracleReport r;
    r.query = "monomial_h0(" + std::to_string(n) + "," + std::to_string(m) + ")";
    r.method = "monomial count";
    r.value = std::to_string(monomial_h0(n, m));
    return r;
}

std::pair<long, long> cech_p1(int m) {
    if (std::abs(m) > 12) throw std::invalid_argument("cech_p1: |m| <= 12");
    // The two-chart complex is diagonal in the overlap Laurent degree e:
    // C^0_e spanned by u^e (e >= 0) and u^m w^{m-e} pulled back (m-e >= 0),
    // C^1_e spanned by u^e; ranks per degree are 0/1.
    auto run = [&](int B) {
        long h0 = 0, h1 = 0;
        for (int e = -B; e <= B; ++e) {
            int dim_c0 = (e >= 0 ? 1 : 0) + (m - e >= 0 ? 1 : 0);
            int rank = dim_c0 >= 1 ? 1 : 0;
            h0 += dim_c0 - rank;
            h1 += 1 - rank;
        }
        return std::make_pair(h0, h1);
    };
    int B = std::abs(m) + 3;
    auto a = run(B);
    auto b = run(B + 2);
    if (a != b) throw std::logic_error("cech_p1: window not stable");
    return a;
}

OracleReport cech_p1_report(int m) {
    auto [h0, h1] = cech_p1(m);
    OracleReport r;
    r.query = "cech_p1(" + std::to_string(m) + ")";
    r.method = "exhaustive Laurent enumeration";
    r.value = "(" + std::to_string(h0) + "," + std::to_string(h1) + ")";
    return r;
}

namespace {

std::vector<std::vector<int>> subsets_of(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i <= n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

}  // namespace

std::vector<long> cech_pn_form(int n, int j, int m) {
    std::vector<long> h(n + 1, 0);
    if (n < 1 || n > 2) throw std::invalid_argument("cech_pn_form: n <= 2 only");
    if (j < 0 || j > n) return h;

    auto asets = subsets_of(n, j);
    std::vector<std::vector<int>> tuples;
    for (int s = 1; s <= n + 1; ++s)
        for (auto& t : subsets_of(n, s)) tuples.push_back(t);

    auto run = [&](int B) {
        std::vector<long> hh(n + 1, 0);
        std::vector<int> d(n + 1, -B);
        while (true) {
            long sum = 0;
            for (int t : d) sum += t;
            if (sum == m) {
                // allowed form slots and the Euler-contraction kernel per tuple
                std::vector<std::vector<int>> slots(tuples.size());
                std::vector<std::vector<std::vector<Rat>>> kerb(tuples.size());
                for (size_t ti = 0; ti < tuples.size(); ++ti) {
                    std::vector<bool> inT(n + 1, false);
                    for (int t : tuples[ti]) inT[t] = true;
                    for (size_t ai = 0; ai < asets.size(); ++ai) {
                        bool ok = true;
                        for (int t = 0; t <= n && ok; ++t) {
                            int e = d[t];
                            for (int a : asets[ai])
                                if (a == t) e -= 1;
                            if (e < 0 && !inT[t]) ok = false;
                        }
                        if (ok) slots[ti].push_back(static_cast<int>(ai));
                    }
                    if (slots[ti].empty()) continue;
                    if (j == 0) {
                        // no contraction condition on functions
                        kerb[ti].assign(1, std::vector<Rat>{Rat(1)});
                        continue;
                    }
                    std::map<std::vector<int>, int> rows;
                    std::vector<SparseVec> cols;
                    for (int ai : slots[ti]) {
                        const auto& A = asets[ai];
                        std::vector<std::pair<int, Rat>> entries;
                        for (size_t pos = 0; pos < A.size(); ++pos) {
                            std::vector<int> Bset;
                            for (size_t q = 0; q < A.size(); ++q)
                                if (q != pos) Bset.push_back(A[q]);
                            auto [it, fresh] = rows.emplace(Bset, static_cast<int>(rows.size()));
                            entries.emplace_back(it->second,
                                                 (pos % 2 == 0) ? Rat(1) : Rat(-1));
                        }
                        std::sort(entries.begin(), entries.end(),
                                  [](const auto& a, const auto& b) { return a.first < b.first; });
                        cols.push_back(SparseVec(entries.begin(), entries.end()));
                    }
                    auto sol = solve_columns(cols, {}, true);
                    kerb[ti] = std::move(sol.kernel);
                }
                // j = 0 special case: kernel basis per slot is the slot itself
                if (j == 0)
                    for (size_t ti = 0; ti < tuples.size(); ++ti) {
                        kerb[ti].clear();
                        for (size_t s = 0; s < slots[ti].size(); ++s)
                            kerb[ti].push_back({Rat(1)});
                    }

                std::vector<long> dimc(n + 1, 0), rk(n + 1, 0);
                for (int q = 0; q <= n; ++q) {
                    std::map<std::pair<int, int>, int> rowidx;  // (tuple, slot)
                    std::vector<SparseVec> cols;
                    for (size_t ti = 0; ti < tuples.size(); ++ti) {
                        if (static_cast<int>(tuples[ti].size()) != q + 1) continue;
                        dimc[q] += static_cast<long>(kerb[ti].size());
                        for (const auto& kv : kerb[ti]) {
                            std::vector<std::pair<int, Rat>> entries;
                            for (size_t tj = 0; tj < tuples.size(); ++tj) {
                                if (static_cast<int>(tuples[tj].size()) != q + 2) continue;
                                // face test
                                const auto& big = tuples[tj];
                                const auto& small = tuples[ti];
                                int pos = -1;
                                {
                                    size_t a = 0;
                                    bool face = true;
                                    for (size_t b = 0; b < big.size(); ++b) {
                                        if (a < small.size() && small[a] == big[b])
                                            ++a;
                                        else if (pos < 0)
                                            pos = static_cast<int>(b);
                                        else
                                            face = false;
                                    }
                                    if (!face || a != small.size()) continue;
                                }
                                Rat sgn = (pos % 2 == 0) ? Rat(1) : Rat(-1);
                                for (size_t s = 0; s < kv.size(); ++s) {
                                    if (kv[s] == 0) continue;
                                    int slot = slots[ti][s];
                                    auto [it, fresh] = rowidx.emplace(
                                        std::make_pair(static_cast<int>(tj), slot),
                                        static_cast<int>(rowidx.size()));
                                    entries.emplace_back(it->second, kv[s] * sgn);
                                }
                            }
                            std::sort(entries.begin(), entries.end(),
                                      [](const auto& a, const auto& b) {
                                          return a.first < b.first;
                                      });
                            cols.push_back(SparseVec(entries.begin(), entries.end()));
                        }
                    }
                    rk[q] = rank_of_columns(cols);
                }
                for (int q = 0; q <= n; ++q)
                    hh[q] += dimc[q] - rk[q] - (q > 0 ? rk[q - 1] : 0);
            }
            int t = 0;
            while (t <= n && d[t] == B) {
                d[t] = -B;
                ++t;
            }
            if (t == n + 1) break;
            ++d[t];
        }
        return hh;
    };
    auto a = run(std::abs(m) + n + 2);
    auto b = run(std::abs(m) + n + 4);
    if (a != b) throw std::logic_error("cech_pn_form: window not stable");
    return a;
}

WitnessSet exhaustive_witness(const HomologicalField& hv, int deg) {
    const OddDerivation& v = hv.der();
    WitnessSet ws;
    auto cand = monomials_up_to(v.ring, deg, 1);
    std::map<Monomial, int> rows;
    auto cols = map_columns(v, cand, rows);
    Monomial unit;
    unit.even.assign(v.ring->n_even(), 0);
    SparseVec rhs;
    auto it = rows.find(unit);
    if (it == rows.end()) {
        ws.solvable = false;
        return ws;
    }
    rhs.emplace_back(it->second, Rat(1));
    auto sol = solve_columns(cols, rhs, true);
    if (!sol.solvable) {
        ws.solvable = false;
        return ws;
    }
    ws.solvable = true;
    SuperPoly part(v.ring);
    for (size_t i = 0; i < cand.size(); ++i) part.add_term(cand[i], sol.particular[i]);
    ws.solutions.push_back(part);
    for (const auto& k : sol.kernel) {
        SuperPoly kp(v.ring);
        for (size_t i = 0; i < cand.size(); ++i) kp.add_term(cand[i], k[i]);
        ws.kernel.push_back(kp);
        ws.solutions.push_back(part + ws.kernel.back());
    }
    return ws;
}

}  // namespace supergeo
