#pragma once

#include <variant>

#include "supergeo/quotient.hpp"

namespace supergeo {

// Even line bundle as a Cech 1-cocycle of invertible even functions on the
// chart cover; g_ij lives in the overlap ring of the ordered pair (i,j).
struct LineCocycle {
    AtlasPtr atlas;
    std::map<std::pair<int, int>, SuperPoly> g;

    const SuperPoly& at(int i, int j) const { return g.at({i, j}); }
    // g_ij t_ij(g_ji) = 1 and g_ik = g_ij t_ij(g_jk) on checkable triples.
    void verify() const;
};

LineCocycle trivial_cocycle(const AtlasPtr& atlas);
// O(k) on a projective superspace atlas: g_ij = u_j^{-k} in chart i.
LineCocycle standard_cocycle_proj(const AtlasPtr& proj, int k);
// Ber(S)^k on a supergrassmannian atlas, via the berezinian of the frame
// change of the tautological subbundle.
LineCocycle berezinian_cocycle(const AtlasPtr& grass, int k);
// External product on a product atlas.
LineCocycle external_cocycle(const AtlasPtr& prod, const LineCocycle& lx, const LineCocycle& ly);
// Tensor product on a shared atlas.
LineCocycle tensor_cocycle(const LineCocycle& a, const LineCocycle& b);
// Restriction to the reduced space (odd variables killed).
LineCocycle reduce_cocycle(const LineCocycle& L, const AtlasPtr& reduced);

// v-connection in per-chart trivializations: nabla(s_i) = phi_i s_i with the
// transformation rule t_ij(phi_j) = phi_i + v(g_ij) g_ij^{-1}.
struct VConnection {
    std::vector<SuperPoly> phi;
};

void verify_connection(const LineCocycle& L, const GlobalField& v, const VConnection& conn);

// Exact linear solve for the transformation rule over odd chart functions of
// even degree <= deg; with `flat`, v(phi_i) = 0 is imposed as well.
std::optional<VConnection> connection_solve(const LineCocycle& L, const GlobalField& v, int deg,
                                            bool flat = false);

// Dimension of the affine solution space offset: kernel of the homogeneous
// system (used for uniqueness statements).
long connection_kernel_dim(const LineCocycle& L, const GlobalField& v, int deg);

struct Curvature {
    std::vector<SuperPoly> per_chart;  // c_i = v(phi_i), equal across overlaps
    bool constant = false;
    Rat value = 0;
};

Curvature curvature(const LineCocycle& L, const GlobalField& v, const VConnection& conn);

VConnection tensor_connection(const VConnection& a, const VConnection& b);

// Global functions of one parity at a bounded degree (Cech 0-th by direct
// solve); returns a basis expressed per chart.
std::vector<std::vector<SuperPoly>> global_functions(const Atlas& atlas, int parity, int deg);

struct Descended {
    LineCocycle cocycle;  // over the standalone quotient atlas, v-flat frames
};
struct Obstructed {
    Rat curvature_value;
};
struct NoneUpTo {
    int bound;
};
using DescentResult = std::variant<Descended, Obstructed, NoneUpTo>;

// Searches for a flat v-connection at the bound; on success re-trivializes by
// v-flat frames and expresses the cocycle on the quotient. A failure upgrades
// to Obstructed only when a connection with nonzero constant curvature exists
// and the space of global odd functions vanishes at the bound.
DescentResult flat_descend(const LineCocycle& L, const GlobalField& v, const QuotientAtlas& Q,
                           const AtlasPtr& standalone, int deg);

// The odd Heisenberg group GQ(1): invertible elements a0 + a1 of a
// supercommutative ring, a0 even invertible, a1 odd.
struct GQ1Element {
    SuperPoly a0;
    SuperPoly a1;
    void validate() const;
};

GQ1Element gq1_one(const RingPtr& ring);
GQ1Element gq1_mul(const GQ1Element& x, const GQ1Element& y);
// Group homomorphism to the additive odd line: a0 + a1 -> a0^{-1} a1.
SuperPoly gq1_project(const GQ1Element& x);
// 2-cocycle of the central extension: c(a,b) = 1 + ab.
SuperPoly gq1_cocycle(const SuperPoly& a, const SuperPoly& b);

}  // namespace supergeo
