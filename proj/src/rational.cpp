#include "supergeo/rational.hpp"

#include <stdexcept>

namespace supergeo {

Rat parse_rat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("parse_rat: empty string");
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("parse_rat: malformed rational '" + s + "'");
    if (r.get_den() == 0)
        throw std::invalid_argument("parse_rat: zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

std::string format_rat(const Rat& r) {
    return r.get_str();
}

long long binomial(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    mpz_class acc = 1;
    for (long long i = 1; i <= k; ++i) {
        acc *= mpz_class(static_cast<long>(n - k + i));
        acc /= mpz_class(static_cast<long>(i));
    }
    if (!acc.fits_slong_p()) throw std::overflow_error("binomial: result too large");
    return acc.get_si();
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace supergeo
