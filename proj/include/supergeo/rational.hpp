#pragma once

#include <gmpxx.h>
#include <cstdint>
#include <string>

namespace supergeo {

// Exact rational coefficient type. All arithmetic in the workbench is over Q;
// no floating point appears anywhere downstream of this header.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Parses "p/q" or "p"; canonicalizes to lowest terms with q > 0.
Rat parse_rat(const std::string& s);

// Canonical form "p/q" in lowest terms, q > 0; integers print as "p".
std::string format_rat(const Rat& r);

long long binomial(long long n, long long k);

// Stable 64-bit content hash (FNV-1a); used for content addressing in the
// workspace, where std::hash would not be reproducible across runs.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace supergeo
