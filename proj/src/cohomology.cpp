#include "supergeo/cohomology.hpp"

#include <sstream>
#include <stdexcept>

namespace supergeo {

long DimTable::get(int q, int parity) const {
    auto it = dims.find({q, parity});
    return it == dims.end() ? 0 : it->second;
}

void DimTable::set(int q, int parity, long d, bool st) {
    if (d != 0) dims[{q, parity}] = d;
    stable[{q, parity}] = st;
}

bool DimTable::all_stable() const {
    for (const auto& [k, s] : stable)
        if (!s) return false;
    return true;
}

bool DimTable::entry_stable(int q, int parity) const {
    auto it = stable.find({q, parity});
    return it == stable.end() ? true : it->second;
}

DimTable DimTable::point() {
    DimTable t;
    t.set(0, 0, 1);
    return t;
}

long bott_dim(int n, int j, int m, int q) {
    if (j < 0 || j > n || q < 0) return 0;
    if (q == 0 && m > j) return binomial(m + n - j, m) * binomial(m - 1, j);
    if (q == j && m == 0) return 1;
    if (q == n && m < j - n) return binomial(-m + j, -m) * binomial(-m - 1, n - j);
    return 0;
}

DimTable bott_table(int n, int j, int m) {
    DimTable t;
    for (int q = 0; q <= n; ++q) {
        long d = bott_dim(n, j, m, q);
        if (d) t.set(q, 0, d);
    }
    return t;
}

DimTable kunneth(const DimTable& a, const DimTable& b) {
    if (!a.all_stable() || !b.all_stable())
        throw std::domain_error("kunneth: unstable input entries");
    DimTable out;
    for (const auto& [ka, da] : a.dims)
        for (const auto& [kb, db] : b.dims) {
            int q = ka.first + kb.first;
            int p = (ka.second + kb.second) & 1;
            auto key = std::make_pair(q, p);
            out.dims[key] += da * db;
            out.stable[key] = true;
        }
    return out;
}

SheafSymbol SheafSymbol::atom(int n, int j, int m) {
    if (j < 0 || j > n) throw std::invalid_argument("sheaf atom: need 0 <= j <= n");
    SheafSymbol s;
    s.kind = Atom;
    s.n = n;
    s.j = j;
    s.m = m;
    return s;
}

SheafSymbol SheafSymbol::sum(std::vector<SheafSymbol> parts) {
    SheafSymbol s;
    s.kind = Sum;
    s.args = std::move(parts);
    return s;
}

SheafSymbol SheafSymbol::box(SheafSymbol a, SheafSymbol b) {
    SheafSymbol s;
    s.kind = Box;
    s.args = {std::move(a), std::move(b)};
    return s;
}

SheafSymbol SheafSymbol::parity_shift(SheafSymbol a) {
    SheafSymbol s;
    s.kind = Pi;
    s.args = {std::move(a)};
    return s;
}

SheafSymbol SheafSymbol::lambda(int k, SheafSymbol a) {
    SheafSymbol s;
    s.kind = Lambda;
    s.k = k;
    s.args = {std::move(a)};
    return s;
}

namespace {

DimTable shift_parity(const DimTable& t) {
    DimTable out;
    for (const auto& [k, d] : t.dims) out.set(k.first, (k.second + 1) & 1, d);
    return out;
}

DimTable add_tables(const DimTable& a, const DimTable& b) {
    DimTable out = a;
    for (const auto& [k, d] : b.dims) {
        out.dims[k] += d;
        out.stable[k] = true;
    }
    return out;
}

// Lambda^k of a sum of two line-twisted cotangent boxes, the shape
// Lambda^k(O(a) box Omega^1(b) (+) Omega^1(c) box O(d)):
// Lambda^j of a line bundle times a bundle E is L^j (x) Lambda^j E, and
// Lambda^j Omega^1(t) = Omega^j(jt) on projective space.
DimTable eval_lambda(const SheafSymbol& s);

DimTable eval(const SheafSymbol& s) {
    switch (s.kind) {
        case SheafSymbol::Atom:
            return bott_table(s.n, s.j, s.m);
        case SheafSymbol::Sum: {
            DimTable out;
            for (const auto& a : s.args) out = add_tables(out, eval(a));
            return out;
        }
        case SheafSymbol::Box:
            return kunneth(eval(s.args[0]), eval(s.args[1]));
        case SheafSymbol::Pi:
            return shift_parity(eval(s.args[0]));
        case SheafSymbol::Lambda:
            return eval_lambda(s);
    }
    throw std::logic_error("sheaf symbol: unknown node");
}

DimTable eval_lambda(const SheafSymbol& s) {
    const SheafSymbol& base = s.args[0];
    if (base.kind != SheafSymbol::Sum || base.args.size() != 2)
        throw std::domain_error("lambda: only sums of two box factors are supported");
    const SheafSymbol& left = base.args[0];
    const SheafSymbol& right = base.args[1];
    if (left.kind != SheafSymbol::Box || right.kind != SheafSymbol::Box)
        throw std::domain_error("lambda: only box-shaped summands are supported");
    // left = O(a) box Omega^1(b), right = Omega^1(c) box O(d)
    const SheafSymbol& la = left.args[0];
    const SheafSymbol& lb = left.args[1];
    const SheafSymbol& ra = right.args[0];
    const SheafSymbol& rb = right.args[1];
    if (la.j != 0 || lb.j != 1 || ra.j != 1 || rb.j != 0)
        throw std::domain_error("lambda: unsupported factor shape");
    // Lambda^jj(O(a) box Omega^1(b)) (x) Lambda^i(Omega^1(c) box O(d))
    //   = Omega^i(i c + jj a) box Omega^jj(jj b + i d)
    DimTable out;
    for (int i = 0; i <= s.k; ++i) {
        int jj = s.k - i;
        if (jj > lb.n || i > ra.n) continue;
        DimTable first = bott_table(ra.n, i, i * ra.m + jj * la.m);
        DimTable second = bott_table(lb.n, jj, jj * lb.m + i * rb.m);
        out = add_tables(out, kunneth(first, second));
    }
    if (s.k & 1) out = shift_parity(out);
    return out;
}

}  // namespace

DimTable SheafSymbol::evaluate() const { return eval(*this); }

std::string SheafSymbol::str() const {
    std::ostringstream os;
    switch (kind) {
        case Atom:
            os << "Omega^" << j << "(" << m << ")@P" << n;
            break;
        case Sum: {
            for (size_t i = 0; i < args.size(); ++i) os << (i ? " + " : "") << args[i].str();
            break;
        }
        case Box:
            os << args[0].str() << " box " << args[1].str();
            break;
        case Pi:
            os << "Pi(" << args[0].str() << ")";
            break;
        case Lambda:
            os << "Lambda^" << k << "(" << args[0].str() << ")";
            break;
    }
    return os.str();
}

std::vector<GrAtom> gr_pieces(int n, int k) {
    if (n < 2 || k < 0) throw std::invalid_argument("gr_pieces: need n >= 2, k >= 0");
    std::vector<GrAtom> out;
    for (int j = k; j >= 0; --j) {
        int i = k - j;
        GrAtom a{j, j - i, i, i - j, false};
        if (j > n - 1 || i > n - 1) a.zero = true;
        out.push_back(a);
    }
    return out;
}

bool H1Report::vanishes_nilpotent() const {
    for (const auto& e : entries)
        if (e.k >= 1 && e.h1 != 0) return false;
    return true;
}

H1Report h1_vanishing_report(int n, int twist1, int twist2) {
    if (n < 2) throw std::invalid_argument("h1_vanishing_report: n >= 2");
    H1Report rep;
    rep.n = n;
    rep.twist1 = twist1;
    rep.twist2 = twist2;
    for (int k = 0; k <= 2 * (n - 1); ++k) {
        for (const auto& atom : gr_pieces(n, k)) {
            H1ReportEntry e{k, atom, 0};
            if (!atom.zero) {
                DimTable t = kunneth(bott_table(n - 1, atom.j, atom.dj + twist1),
                                     bott_table(n - 1, atom.i, atom.di + twist2));
                e.h1 = t.get(1, 0);
            }
            rep.total_h1 += e.h1;
            (k % 2 == 0 ? rep.h1_even : rep.h1_odd) += e.h1;
            rep.entries.push_back(std::move(e));
        }
    }
    return rep;
}

}  // namespace supergeo
