#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "supergeo/linalg.hpp"
#include "supergeo/superpoly.hpp"

namespace supergeo {

// Odd derivation of a free supercommutative ring, determined by generator
// images: even generators map to odd elements and vice versa. Extension to
// the whole ring is by the Leibniz rule v(ab) = v(a)b + (-1)^|a| a v(b).
struct OddDerivation {
    RingPtr ring;
    std::vector<SuperPoly> even_images;
    std::vector<SuperPoly> odd_images;

    void validate() const;
    SuperPoly apply(const SuperPoly& f) const;
    OddDerivation with_ring(const RingPtr& target) const;
};

struct HomologicalCheck {
    bool ok = false;
    std::string witness_gen;  // generator g with v(v(g)) != 0, when !ok
    SuperPoly value;          // v(v(g))
};

HomologicalCheck is_homological(const OddDerivation& v);

// An odd derivation certified to square to zero (checking v^2 on generators
// suffices: v^2 is an even derivation).
class HomologicalField {
public:
    static HomologicalField certify(OddDerivation v);

    const OddDerivation& der() const { return v_; }
    const RingPtr& ring() const { return v_.ring; }
    SuperPoly apply(const SuperPoly& f) const { return v_.apply(f); }
    HomologicalField with_ring(const RingPtr& target) const;

private:
    explicit HomologicalField(OddDerivation v) : v_(std::move(v)) {}
    OddDerivation v_;
};

// Monomial enumeration for bounded searches. Degree is the total degree in
// the even variables counting |exponent| on Laurent directions; the odd part
// is finite automatically. parity: 0, 1, or -1 for both.
std::vector<Monomial> monomials_up_to(const RingPtr& ring, int max_even_deg, int parity);
std::vector<Monomial> monomials_of_slice(const RingPtr& ring, int even_deg, int parity);

// Finite graded piece of the ring together with the matrix of a linear map.
struct GradedSlice {
    int degree = 0;
    int parity = 0;
    std::vector<Monomial> basis;
};

GradedSlice graded_slice(const RingPtr& ring, int degree, int parity);

// Columns of v restricted to the span of `basis`, in coordinates indexed by
// `row_index` (extended as new monomials appear).
std::vector<SparseVec> map_columns(const OddDerivation& v, const std::vector<Monomial>& basis,
                                   std::map<Monomial, int>& row_index);

struct FreenessResult {
    enum Kind { Free, NotFree, Undecided } kind = Undecided;
    std::optional<SuperPoly> witness;  // Free: odd element with v(witness) = 1
    std::vector<Rat> point;            // NotFree: rational reduced point killing all v(gen)
    int bound = 0;
};

// Decides freeness of the A^{0|1}-action generated by v, by a linear solve
// for v(theta) = 1 over all odd monomials of even degree <= bound, falling
// back to a reduced-point vanishing certificate for the negative case.
FreenessResult freeness(const HomologicalField& v, int bound);

struct SliceDims {
    long ker = 0;
    long im = 0;
    bool equal() const { return ker == im; }
};

// dim(ker v) and dim(v(ring)) intersected with the (degree, parity) slice.
// Preimages are searched up to degree + slack.
SliceDims ker_im_dims(const HomologicalField& v, int degree, int parity, int slack = 2);

// Writes f = a + b*theta with v(a) = v(b) = 0, given v(theta) = 1.
std::pair<SuperPoly, SuperPoly> decompose(const HomologicalField& v, const SuperPoly& theta,
                                          const SuperPoly& f);

struct InvariantGen {
    std::string name;
    int parity = 0;
    SuperPoly embedding;  // v-invariant element of the ambient ring
};

// Invariant generators a_g, b_g from decomposing each ring generator,
// dropping constants and linearly dependent candidates.
std::vector<InvariantGen> invariant_generators(const HomologicalField& v, const SuperPoly& theta);

// Expresses `target` as a polynomial of even degree <= max_deg in the listed
// subring elements; `new_ring` names them. Exact linear solve.
std::optional<SuperPoly> express_in(const RingPtr& new_ring,
                                    const std::vector<SuperPoly>& embeddings,
                                    const SuperPoly& target, int max_deg);

// Iterated invariants of pairwise anticommuting homological fields; the
// returned embeddings live in the original ring.
std::vector<InvariantGen> quotient_multi(const std::vector<HomologicalField>& fields, int bound,
                                         int expr_deg);

}  // namespace supergeo
