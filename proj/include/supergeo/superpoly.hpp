#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "supergeo/rational.hpp"
#include "supergeo/ring.hpp"

namespace supergeo {

enum class ParityClass { Zero, Even, Odd, Mixed };

// Element of a supercommutative (Laurent) polynomial ring over Q, stored as a
// canonical map from monomials to nonzero coefficients. Multiplication sorts
// odd factors into strictly increasing order, picking up the Koszul sign.
class SuperPoly {
public:
    explicit SuperPoly(RingPtr ring) : ring_(std::move(ring)) {}

    static SuperPoly zero(RingPtr ring) { return SuperPoly(std::move(ring)); }
    static SuperPoly constant(RingPtr ring, const Rat& c);
    static SuperPoly one(RingPtr ring) { return constant(std::move(ring), Rat(1)); }
    static SuperPoly even_gen(const RingPtr& ring, int idx, int exp = 1);
    static SuperPoly odd_gen(const RingPtr& ring, int idx);
    static SuperPoly gen(const RingPtr& ring, const std::string& name);
    static SuperPoly term(const RingPtr& ring, Monomial m, const Rat& c);

    const RingPtr& ring() const { return ring_; }
    const std::map<Monomial, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    ParityClass parity_class() const;
    bool is_even() const;  // Zero counts as both parities
    bool is_odd() const;

    SuperPoly parity_part(int parity) const;
    SuperPoly reduced_part() const;            // terms with no odd factors
    SuperPoly nilpotent_part() const;
    Rat constant_term() const;
    bool is_constant() const;
    int max_even_abs_degree() const;

    SuperPoly operator+(const SuperPoly& o) const;
    SuperPoly operator-(const SuperPoly& o) const;
    SuperPoly operator-() const;
    SuperPoly operator*(const SuperPoly& o) const;
    SuperPoly operator*(const Rat& c) const;
    bool operator==(const SuperPoly& o) const;
    bool operator!=(const SuperPoly& o) const { return !(*this == o); }

    void add_term(Monomial m, const Rat& c);  // accumulate, canonicalizing

    // Multiplicative inverse of an even element whose reduced part is a unit
    // (rational times a Laurent monomial in invertible generators); the
    // nilpotent remainder is handled by a finite geometric series.
    SuperPoly invert_even() const;
    bool is_invertible() const;
    SuperPoly pow(int k) const;

    // Evaluate the reduced part at a rational point (odd generators killed).
    Rat eval_reduced(const std::vector<Rat>& even_values) const;

    // d/d(even generator idx); odd factors ride along unchanged.
    SuperPoly even_partial(int idx) const;

    // Transport to a ring with the same generator names (e.g. a localization
    // or truncation of this one); monomials are re-normalized.
    SuperPoly with_ring(const RingPtr& target) const;

    // Push along injective generator maps into a larger ring.
    SuperPoly embed(const RingPtr& target, const std::vector<int>& even_map,
                    const std::vector<int>& odd_map) const;

    std::string str() const;

private:
    RingPtr ring_;
    std::map<Monomial, Rat> terms_;
};

inline SuperPoly operator*(const Rat& c, const SuperPoly& p) { return p * c; }

// A generators-to-images map defining a ring homomorphism between free
// supercommutative rings: Q-linear, multiplicative, unital.
struct GenAssignment {
    RingPtr source;
    RingPtr target;
    std::vector<SuperPoly> even_images;
    std::vector<SuperPoly> odd_images;

    static GenAssignment identity(const RingPtr& ring);

    // Parity of every image matches; invertible generators get invertible
    // images. Throws on violation.
    void validate() const;

    SuperPoly apply(const SuperPoly& f) const;
    GenAssignment then(const GenAssignment& g) const;  // x -> g(this(x))

    // Same map with target replaced by a localization of the current target.
    GenAssignment with_target(const RingPtr& t) const;
};

}  // namespace supergeo
