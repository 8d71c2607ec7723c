#include "ubiq/farey.hpp"

#include "ubiq/errors.hpp"

namespace ubiq::farey {

std::pair<Frac, Frac> bracket(const BigRat& x, const BigInt& Q) {
    if (Q < 1) throw validation_error("farey: Q must be >= 1");
    const BigInt xn = num(x), xd = den(x);
    BigInt f = floor_rat(x);
    Frac lo{f, 1}, hi{f + 1, 1};
    // invariant: lo <= x < hi, lo and hi are Stern-Brocot neighbors
    for (;;) {
        // run toward x from the left: lo += k * hi
        BigInt A = hi.p * xd - hi.q * xn;  // > 0 (hi > x)
        BigInt B = xn * lo.q - xd * lo.p;  // >= 0 (lo <= x)
        BigInt k1 = A > 0 ? floor_div(B, A) : BigInt(0);
        BigInt k2 = hi.q > 0 ? floor_div(Q - lo.q, hi.q) : BigInt(0);
        BigInt k = k1 < k2 ? k1 : k2;
        if (k < 0) k = 0;
        lo.p += k * hi.p;
        lo.q += k * hi.q;
        if (k1 > k2) break;  // denominator cap reached on this side
        // run toward x from the right: hi += m * lo, keeping hi > x
        BigInt C = xd * hi.p - xn * hi.q;  // > 0
        BigInt Bx = xn * lo.q - xd * lo.p; // >= 0, 0 iff x == lo
        BigInt m1;
        bool m1_inf = false;
        if (Bx == 0) {
            m1_inf = true;
            m1 = 0;
        } else {
            m1 = floor_div(C - 1, Bx);  // largest m with C > m * Bx
        }
        BigInt m2 = lo.q > 0 ? floor_div(Q - hi.q, lo.q) : BigInt(0);
        BigInt m = m1_inf ? m2 : (m1 < m2 ? m1 : m2);
        if (m < 0) m = 0;
        hi.p += m * lo.p;
        hi.q += m * lo.q;
        if (!m1_inf && m1 > m2) break;
        if (m1_inf && m == m2) break;  // x == lo; right side fully descended
        if (k == 0 && m == 0) break;
    }
    return {lo, hi};
}

Frac next_term(const Frac& prev, const Frac& cur, const BigInt& Q) {
    BigInt k = floor_div(Q + prev.q, cur.q);
    return {k * cur.p - prev.p, k * cur.q - prev.q};
}

Walker::Walker(const BigRat& lo, const BigRat& hi, BigInt Q) : hi_(hi), Q_(std::move(Q)) {
    auto [a, b] = bracket(lo, Q_);
    prev_ = a;
    cur_ = b;  // first F_Q element strictly above lo
    primed_ = true;
}

bool Walker::next(Frac* out) {
    if (!primed_) return false;
    if (BigRat(cur_.p, cur_.q) >= hi_) {
        primed_ = false;
        return false;
    }
    *out = cur_;
    Frac nxt = next_term(prev_, cur_, Q_);
    prev_ = cur_;
    cur_ = nxt;
    return true;
}

namespace {

// Recursive Stern-Brocot selection of the minimal-denominator fraction in
// the open interval (lo, hi).
Frac smallest_denominator_rec(const BigRat& lo, const BigRat& hi) {
    BigInt f = floor_rat(lo);
    if (BigRat(f + 1) < hi) return {f + 1, 1};
    // shift to (0, ...) and recurse on the reciprocal
    BigRat lo2 = lo - BigRat(f), hi2 = hi - BigRat(f);
    if (lo2 == 0) {
        // (0, hi2): pick 1/ceil(1/hi2 + 1)-ish: smallest q with 1/q < hi2
        BigInt q = floor_div(den(hi2), num(hi2)) + 1;
        return {f * q + 1, q};
    }
    Frac r = smallest_denominator_rec(1 / hi2, 1 / lo2);
    // value f + q/p for the reciprocal fraction p/q
    return {f * r.p + r.q, r.p};
}

}  // namespace

Frac smallest_denominator(const BigRat& lo, const BigRat& hi) {
    if (!(lo < hi)) throw domain_error("farey: empty interval");
    return smallest_denominator_rec(lo, hi);
}

}  // namespace ubiq::farey
