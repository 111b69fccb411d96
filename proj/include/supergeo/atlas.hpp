#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "supergeo/derivation.hpp"
#include "supergeo/supermatrix.hpp"

namespace supergeo {

struct AtlasKind {
    enum Type { Affine, Proj, Grass, Product, CYTrunc, QuotientOf, Truncated } type = Affine;
    std::vector<int> params;  // Proj: m,n  Grass: a,b,m,n  CYTrunc: n
};

struct Chart {
    std::string label;
    RingPtr ring;
    // generator multidegrees when the atlas is graded (grading_rank >= 1)
    std::vector<std::vector<long>> even_deg;
    std::vector<std::vector<long>> odd_deg;
};

struct Overlap {
    std::vector<int> inverted;   // chart-i even generator indices inverted on U_ij
    GenAssignment transition;    // ring_j -> localized ring_i
    bool representable = true;
};

// Super grassmannian cell bookkeeping: which basis vectors span Lambda_1.
struct Cell {
    std::vector<int> even_sel;
    std::vector<int> odd_sel;
};

class Atlas {
public:
    AtlasKind kind;
    std::vector<Chart> charts;
    // keyed by ordered pairs (i,j), i != j; only representable pairs are stored
    std::map<std::pair<int, int>, Overlap> overlaps;
    int grading_rank = 0;
    std::vector<Cell> cells;  // grassmannian atlases only

    int n_charts() const { return static_cast<int>(charts.size()); }
    const Overlap* overlap(int i, int j) const;
    bool pair_representable(int i, int j) const { return overlap(i, j) != nullptr; }
    RingPtr overlap_ring(int i, int j) const;

    // Coordinate ring of U_{t0...tq} in chart t0 coordinates; requires every
    // pair (t0, tp) to be representable.
    RingPtr tuple_ring(const std::vector<int>& tuple) const;
    // Transition ring_j -> tuple ring (chart tuple[0] based), j in tuple.
    GenAssignment into_tuple(const std::vector<int>& tuple, int j) const;

    struct Report {
        bool ok = true;
        std::vector<std::string> failures;
        int pairs_checked = 0;
        int triples_checked = 0;
        int triples_skipped = 0;
    };
    // Mutual inverses on symmetric pairs, cocycle condition on all triples
    // whose three pairwise transitions are representable.
    Report verify() const;
};

Atlas build_affine_space(const std::vector<std::string>& even,
                         const std::vector<std::string>& odd);
Atlas build_projective_superspace(int m, int n);
Atlas build_supergrassmannian(int a, int b, int m, int n);
Atlas atlas_product(const Atlas& x, const Atlas& y);

// Structure sheaf reduced modulo N^k; k = 1 drops the odd generators.
Atlas truncate_atlas(const Atlas& x, int k);

// The superscheme with chart rings Q[u | eta]/N^3 over P^n, eta transforming
// as the 1-form du and even transitions twisted by the hyperplane-class
// cocycle into the Lambda^2 part. twist_scale rescales the class; 0 builds
// the split truncation.
Atlas build_cy_truncation(int n, const Rat& twist_scale = Rat(1));

// Odd endomorphism p of the m|n coordinate superspace (basis e_0..e_{m-1},
// o_0..o_{n-1}) with p^2 = -id, given by rational matrix columns.
struct PiSymmetry {
    int m = 0, n = 0;
    std::vector<std::vector<Rat>> mat;  // (m+n) x (m+n), column j = p(basis_j)
    static PiSymmetry standard(int n);  // p(e_i) = o_i, p(o_i) = -e_i
    void validate() const;
};

struct GlobalField {
    std::vector<HomologicalField> fields;  // one per chart
};

// Homological vector field of the A^{0|1}-action W -> (id + psi p)(W) on a
// supergrassmannian atlas, derived chart-wise from the graph coordinates.
GlobalField pi_action_field(const Atlas& grass, const PiSymmetry& p);

// Same action on P^{m|m+1} in affine chart coordinates.
GlobalField pi_field_projective(const Atlas& proj);

// v1 (+) v2 on a product atlas.
GlobalField field_sum(const Atlas& prod, const Atlas& x, const GlobalField& vx, const Atlas& y,
                      const GlobalField& vy);

// phi_ij o v_j = v_i o phi_ij on every representable overlap, exactly.
bool field_compatible(const Atlas& atlas, const GlobalField& v, std::string* msg = nullptr);

struct GlobalFreeness {
    FreenessResult::Kind kind = FreenessResult::Undecided;
    int chart = -1;           // NotFree/Undecided: offending chart
    std::vector<FreenessResult> per_chart;
};

GlobalFreeness global_freeness(const Atlas& atlas, const GlobalField& v, int bound);

// Shared helper: localizes `ring` so that `f` becomes invertible; fails when
// the reduced part of f is not a single monomial.
std::optional<RingPtr> localize_for(const RingPtr& ring, const SuperPoly& f);

using AtlasPtr = std::shared_ptr<const Atlas>;

}  // namespace supergeo
