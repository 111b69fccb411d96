#pragma once

#include "supergeo/linebundle.hpp"

namespace supergeo {

// Cohomology dimensions by (q, parity), with a per-entry stability flag for
// windowed computations. Formula-based tables are stable by construction.
struct DimTable {
    std::map<std::pair<int, int>, long> dims;
    std::map<std::pair<int, int>, bool> stable;

    long get(int q, int parity) const;
    void set(int q, int parity, long d, bool st = true);
    bool all_stable() const;
    bool entry_stable(int q, int parity) const;
    static DimTable point();  // H^0 = k, even
};

// dim H^q(P^n, Omega^j(m)) by the Bott vanishing/dimension formula.
long bott_dim(int n, int j, int m, int q);
DimTable bott_table(int n, int j, int m);

// External product: H^q = sum_{a+b=q} H^a (x) H^b with parity addition.
DimTable kunneth(const DimTable& a, const DimTable& b);

// Formal expression over atoms Omega^j(m) on P^n with sum, external product,
// parity shift and exterior powers of line-twisted cotangent sums.
struct SheafSymbol {
    enum Kind { Atom, Sum, Box, Pi, Lambda };
    Kind kind = Atom;
    int n = 0, j = 0, m = 0;  // atom data
    int k = 0;                // exterior power
    std::vector<SheafSymbol> args;

    static SheafSymbol atom(int n, int j, int m);
    static SheafSymbol sum(std::vector<SheafSymbol> parts);
    static SheafSymbol box(SheafSymbol a, SheafSymbol b);
    static SheafSymbol parity_shift(SheafSymbol a);
    static SheafSymbol lambda(int k, SheafSymbol a);

    DimTable evaluate() const;
    std::string str() const;
};

// Omega^j(j-i) boxtimes Omega^i(i-j), i+j=k, on P^{n-1} x P^{n-1}: the k-th
// associated-graded piece of the structure sheaf of G(1|1,n|n). Atoms with
// j > n-1 or i > n-1 are zero and flagged.
struct GrAtom {
    int j, dj, i, di;
    bool zero = false;  // exceeds the exterior dimension of a factor
};
std::vector<GrAtom> gr_pieces(int n, int k);

struct H1ReportEntry {
    int k;
    GrAtom atom;
    long h1;
};

struct H1Report {
    int n;
    int twist1 = 0, twist2 = 0;
    std::vector<H1ReportEntry> entries;
    long total_h1 = 0;
    long h1_even = 0, h1_odd = 0;  // by gr level parity
    bool vanishes_structure() const { return total_h1 == 0; }
    bool vanishes_nilpotent() const;  // pieces with k >= 1
};

// Certifies H^1(G(1|1,n|n), O) = 0 and H^1(X, N) = 0 piece by piece; with a
// twist (t1, t2) the pieces are tensored by O(t1) boxtimes O(t2).
H1Report h1_vanishing_report(int n, int twist1 = 0, int twist2 = 0);

// ---- Cech engine ----

struct CechWindow {
    int radius = 6;
};

enum class CechSheaf { Structure, KerField, Twist };

struct CechOptions {
    CechSheaf sheaf = CechSheaf::Structure;
    const GlobalField* field = nullptr;   // KerField
    const LineCocycle* twist = nullptr;   // Twist
    CechWindow window;
    int max_q = 2;
};

// Alternating Cech complex on the chart cover, sliced by the atlas
// multigrading inside the window; exact ranks per slice, stability detected
// by growing the window by one.
DimTable cech_cohomology(const Atlas& X, const CechOptions& opt);

// Convenience: quotient structure sheaf computed upstairs as ker(v).
DimTable cech_quotient(const QuotientAtlas& Q, const CechWindow& window = {}, int max_q = 2);

}  // namespace supergeo
