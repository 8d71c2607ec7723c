#pragma once

#include "ubiq/bigint.hpp"

namespace ubiq::farey {

// Reduced fraction p/q, q >= 1.
struct Frac {
    BigInt p, q;
    BigRat value() const { return BigRat(p, q); }
    bool operator==(const Frac& o) const { return p == o.p && q == o.q; }
};

// Consecutive neighbors a/b <= x < c/d in the Farey set of denominator bound
// Q (Stern-Brocot descent with run skipping, O(len of cf(x)) steps).
std::pair<Frac, Frac> bracket(const BigRat& x, const BigInt& Q);

// Successor of c/d in F_Q given its left neighbor a/b.
Frac next_term(const Frac& prev, const Frac& cur, const BigInt& Q);

// Ascending stream of reduced fractions in the open interval (lo, hi) with
// denominator <= Q.
class Walker {
public:
    Walker(const BigRat& lo, const BigRat& hi, BigInt Q);
    bool next(Frac* out);  // false when past hi

private:
    Frac prev_, cur_;
    BigRat hi_;
    BigInt Q_;
    bool primed_ = false;
};

// Fraction of minimal denominator in the open interval (lo, hi); throws
// domain_error when the interval is empty.
Frac smallest_denominator(const BigRat& lo, const BigRat& hi);

}  // namespace ubiq::farey
