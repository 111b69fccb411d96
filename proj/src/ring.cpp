#include "supergeo/ring.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace supergeo {

RingPtr RingDescriptor::make(std::vector<std::string> even_gens, std::vector<std::string> odd_gens,
                             std::vector<std::string> invertible,
                             std::optional<int> odd_truncation) {
    auto r = std::shared_ptr<RingDescriptor>(new RingDescriptor());
    r->even_ = std::move(even_gens);
    r->odd_ = std::move(odd_gens);
    std::set<std::string> seen;
    for (const auto& n : r->even_)
        if (!seen.insert(n).second) throw std::invalid_argument("ring: duplicate generator " + n);
    for (const auto& n : r->odd_)
        if (!seen.insert(n).second) throw std::invalid_argument("ring: duplicate generator " + n);
    r->invertible_.assign(r->even_.size(), false);
    for (const auto& n : invertible) {
        auto it = std::find(r->even_.begin(), r->even_.end(), n);
        if (it == r->even_.end())
            throw std::invalid_argument("ring: invertible generator " + n + " is not even");
        r->invertible_[it - r->even_.begin()] = true;
    }
    if (odd_truncation && *odd_truncation < 1)
        throw std::invalid_argument("ring: truncation order must be >= 1");
    r->trunc_ = odd_truncation;
    return r;
}

int RingDescriptor::even_index(const std::string& name) const {
    auto it = std::find(even_.begin(), even_.end(), name);
    return it == even_.end() ? -1 : static_cast<int>(it - even_.begin());
}

int RingDescriptor::odd_index(const std::string& name) const {
    auto it = std::find(odd_.begin(), odd_.end(), name);
    return it == odd_.end() ? -1 : static_cast<int>(it - odd_.begin());
}

bool RingDescriptor::same_as(const RingDescriptor& o) const {
    return even_ == o.even_ && odd_ == o.odd_ && invertible_ == o.invertible_ &&
           trunc_ == o.trunc_;
}

RingPtr RingDescriptor::localized(const std::vector<int>& extra) const {
    std::vector<std::string> inv;
    for (int i = 0; i < n_even(); ++i)
        if (invertible_[i]) inv.push_back(even_[i]);
    for (int i : extra) {
        if (i < 0 || i >= n_even()) throw std::invalid_argument("localized: bad index");
        if (!invertible_[i]) inv.push_back(even_[i]);
    }
    return make(even_, odd_, inv, trunc_);
}

RingPtr RingDescriptor::truncated(int k) const {
    std::vector<std::string> inv;
    for (int i = 0; i < n_even(); ++i)
        if (invertible_[i]) inv.push_back(even_[i]);
    int t = trunc_ ? std::min(*trunc_, k) : k;
    return make(even_, odd_, inv, t);
}

bool same_ring(const RingPtr& a, const RingPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->same_as(*b);
}

int koszul_merge(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& out) {
    out.clear();
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    int sign = 1;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return 0;  // repeated odd generator squares to zero
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            // b[j] jumps over the remaining a-entries
            if ((a.size() - i) & 1) sign = -sign;
            out.push_back(b[j++]);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return sign;
}

}  // namespace supergeo
