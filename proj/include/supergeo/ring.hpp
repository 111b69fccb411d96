#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace supergeo {

class RingDescriptor;
using RingPtr = std::shared_ptr<const RingDescriptor>;

// A free supercommutative (Laurent) polynomial ring over Q.
//
// Even generators may be declared invertible (Laurent directions); odd
// generators anticommute and square to zero. Quotients by ideals are not
// supported, with one exception: an optional truncation order k kills every
// monomial with >= k odd factors (the ideal N^k).
class RingDescriptor {
public:
    static RingPtr make(std::vector<std::string> even_gens, std::vector<std::string> odd_gens,
                        std::vector<std::string> invertible = {},
                        std::optional<int> odd_truncation = std::nullopt);

    const std::vector<std::string>& even_gens() const { return even_; }
    const std::vector<std::string>& odd_gens() const { return odd_; }
    const std::vector<bool>& invertible_mask() const { return invertible_; }
    std::optional<int> odd_truncation() const { return trunc_; }

    int n_even() const { return static_cast<int>(even_.size()); }
    int n_odd() const { return static_cast<int>(odd_.size()); }
    bool is_invertible(int even_idx) const { return invertible_[even_idx]; }

    int even_index(const std::string& name) const;   // -1 if absent
    int odd_index(const std::string& name) const;

    // Same ring up to content (generator lists, invertibility, truncation).
    bool same_as(const RingDescriptor& other) const;

    // Derived rings.
    RingPtr localized(const std::vector<int>& extra_invertible_even) const;
    RingPtr truncated(int k) const;

private:
    RingDescriptor() = default;
    std::vector<std::string> even_, odd_;
    std::vector<bool> invertible_;
    std::optional<int> trunc_;
};

bool same_ring(const RingPtr& a, const RingPtr& b);

// Exponent data of one monomial: dense even exponents (negative only on
// invertible generators) and a strictly increasing list of odd indices.
struct Monomial {
    std::vector<int> even;
    std::vector<int> odd;

    bool operator==(const Monomial& o) const { return even == o.even && odd == o.odd; }
    bool operator<(const Monomial& o) const {
        if (even != o.even) return even < o.even;
        return odd < o.odd;
    }

    int parity() const { return static_cast<int>(odd.size()) & 1; }
    // Total degree in the even variables, counting |exponent| on Laurent
    // directions so that graded slices stay finite.
    int even_abs_degree() const {
        int d = 0;
        for (int e : even) d += e < 0 ? -e : e;
        return d;
    }
};

// Koszul sign (+1/-1) for merging two strictly increasing odd index lists,
// 0 if they intersect. On success `out` receives the merged list.
int koszul_merge(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& out);

}  // namespace supergeo
