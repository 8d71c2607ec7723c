#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <utility>

namespace ubiq {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt num(const BigRat& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const BigRat& r) { return boost::multiprecision::denominator(r); }

// floor(a/b) for b > 0.
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b, r = a % b;
    if (r != 0 && a < 0) --q;
    return q;
}

inline BigInt floor_rat(const BigRat& x) { return floor_div(num(x), den(x)); }
inline BigInt ceil_rat(const BigRat& x) { return -floor_rat(-x); }

// Nearest integer; half-way rounds toward +infinity (ties only matter for rationals).
inline BigInt round_rat(const BigRat& x) { return floor_rat(x + BigRat(1, 2)); }

inline BigRat frac_rat(const BigRat& x) { return x - BigRat(floor_rat(x)); }

// floor(sqrt(n)) for n >= 0.
inline BigInt isqrt_floor(const BigInt& n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative value");
    return boost::multiprecision::sqrt(n);
}

inline bool is_perfect_square(const BigInt& n) {
    if (n < 0) return false;
    BigInt s = isqrt_floor(n);
    return s * s == n;
}

// 2^e as an exact rational, e may be negative.
inline BigRat pow2_rat(long e) {
    BigInt one = 1;
    if (e >= 0) return BigRat(one << e);
    return BigRat(one, one << (-e));
}

inline BigInt pow_int(BigInt base, unsigned long e) {
    BigInt r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline double to_double(const BigRat& x) { return x.convert_to<double>(); }

}  // namespace ubiq
