#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace ssg2 {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int inum(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int iden(const Rat& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rat& r) { return iden(r) == 1; }

inline Int igcd(Int a, Int b) { return boost::multiprecision::gcd(a, b); }

// floor of sqrt for non-negative Int
inline Int isqrt_floor(const Int& n) {
    if (n < 0) throw std::domain_error("isqrt of negative");
    if (n == 0) return 0;
    Int x = Int(1) << (unsigned)((boost::multiprecision::msb(n) / 2) + 1);
    while (true) {
        Int y = (x + n / x) / 2;
        if (y >= x) break;
        x = y;
    }
    while (x * x > n) --x;
    while ((x + 1) * (x + 1) <= n) ++x;
    return x;
}

// largest integer z with z <= sqrt(r); r >= 0
inline Int rsqrt_floor(const Rat& r) {
    if (r < 0) throw std::domain_error("sqrt of negative rational");
    Int n = inum(r), d = iden(r);
    // floor(sqrt(n/d)) = floor(sqrt(n*d)/d)
    return isqrt_floor(n * d) / d;
}

inline int vp(Int n, const Int& p) {
    if (n == 0) throw std::domain_error("valuation of 0");
    int v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

inline std::string to_string(const Rat& r) { return r.str(); }

inline bool is_prime_u32(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; (uint64_t)d * d <= n; d++)
        if (n % d == 0) return false;
    return true;
}

// exemplar-style helpers shared with the finite-field element type
inline Rat kzero(const Rat&) { return Rat(0); }
inline Rat kone(const Rat&) { return Rat(1); }
inline bool kis0(const Rat& a) { return a == 0; }
inline Rat kinv(const Rat& a) {
    if (a == 0) throw std::domain_error("division by zero");
    return 1 / a;
}

}  // namespace ssg2
