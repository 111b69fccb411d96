#pragma once

#include "supergeo/atlas.hpp"

namespace supergeo {

struct QuotientChart {
    SuperPoly witness;               // theta_i with v_i(theta_i) = 1, upstairs
    std::vector<InvariantGen> gens;  // invariant generators with embeddings
};

// Quotient of an atlas by a free A^{0|1}-action, carried upstairs: quotient
// functions are v-invariant elements of the covering chart rings, and all
// checks happen there.
struct QuotientAtlas {
    Atlas base;
    GlobalField field;
    std::vector<QuotientChart> charts;
};

// Requires global freeness at `bound`; certifies the per-chart torsor
// decomposition and that transitions carry invariants to invariants.
QuotientAtlas build_quotient_atlas(const Atlas& X, const GlobalField& v, int bound);

// Free-standing atlas on the invariant generators. Transition images are
// re-expressed as polynomials in invariant generators (search bounded by
// expr_deg); quotient overlaps localize at the invariantized overlap
// functions v(f theta) = v(f) theta + f.
Atlas standalone_quotient(const QuotientAtlas& Q, int expr_deg);

// A^{0|1}-fibration data over a base atlas: fiberwise-affine transitions
// theta_j -> a_ij theta_i + psi_ij.
struct FibrationData {
    std::string fiber_name = "tf";
    std::map<std::pair<int, int>, SuperPoly> line;     // a_ij, in overlap ring (i,j)
    std::map<std::pair<int, int>, SuperPoly> cochain;  // psi_ij, same ring
};

// a multiplicative cocycle, psi an a-twisted additive cocycle.
void validate_fibration_data(const Atlas& base, const FibrationData& data);

Atlas build_fibration(const Atlas& base, const FibrationData& data);

// Syntactic affine-shape detection on the fiber coordinate (the last odd
// generator of every chart of `total`).
FibrationData classify_fibration(const Atlas& total, const Atlas& base,
                                 const std::string& fiber_name);

// Presents the covering space of a quotient as a fibration over the
// standalone quotient atlas, fiber coordinate = the torsor witness.
Atlas fibration_from_quotient(const QuotientAtlas& Q, const Atlas& standalone, int expr_deg);

// Global section of the twisted torsor: 0-cochain sigma with
// psi_ij = t_ij(sigma_j) - a_ij sigma_i; nullopt when the class is nonzero
// at the search bound.
std::optional<std::vector<SuperPoly>> fibration_splitting(const Atlas& base,
                                                          const FibrationData& data, int deg);

}  // namespace supergeo
