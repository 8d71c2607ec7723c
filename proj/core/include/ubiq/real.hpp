#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ubiq/bigint.hpp"
#include "ubiq/errors.hpp"

namespace ubiq {

// Exact rational enclosure [lo, hi].
struct RatInterval {
    BigRat lo, hi;

    BigRat width() const { return hi - lo; }
    BigRat mid() const { return (lo + hi) / 2; }
    bool contains(const BigRat& x) const { return lo <= x && x <= hi; }
    double to_double() const { return ubiq::to_double(mid()); }
};

// Quadratic value (a + b*sqrt(D)) / c with c > 0 and D square-free (not a
// perfect square unless b == 0, in which case D is normalized to 0).
// All predicates on these values are exact.
struct SurdVal {
    BigInt a = 0, b = 0, c = 1, D = 0;

    SurdVal() = default;
    SurdVal(BigInt a_, BigInt b_, BigInt c_, BigInt D_);
    static SurdVal from_rational(const BigRat& r);

    bool is_rational() const { return b == 0; }
    BigRat rational_value() const;  // requires is_rational()

    int sign() const;
    SurdVal negated() const { return {-a, -b, c, D}; }
    SurdVal abs() const { return sign() < 0 ? negated() : *this; }

    SurdVal add_rat(const BigRat& r) const;
    SurdVal sub_rat(const BigRat& r) const { return add_rat(-r); }
    SurdVal scale(const BigRat& r) const;
    SurdVal sub(const SurdVal& o) const;  // requires same D (or either rational)
    SurdVal square() const;               // exact, stays in the same field

    BigInt floor() const;
    RatInterval enclosure(unsigned bits) const;
    double to_double() const { return enclosure(64).to_double(); }

    bool same_field(const SurdVal& o) const { return D == o.D || is_rational() || o.is_rational(); }
    bool operator==(const SurdVal& o) const { return a == o.a && b == o.b && c == o.c && D == o.D; }
};

// One real number in one of the spec'd exact-or-certified representations.
class RealSpec {
public:
    enum class Kind { rational, surd, liouville, decimal };

    static RealSpec rational(BigRat v);
    static RealSpec surd(BigInt a, BigInt b, BigInt c, BigInt D);
    // sum_{k>=1} base^{-k!}
    static RealSpec liouville(int base);
    // decimal digits with `digits_after_point` certain places; value known to
    // +/- half an ulp of the last place
    static RealSpec decimal(const std::string& digits, int digits_after_point);
    static RealSpec from_double(double v);  // exact dyadic

    Kind kind() const { return kind_; }
    bool is_rational() const;
    BigRat rational_value() const;        // requires is_rational()
    const SurdVal& surd_value() const { return surd_; }
    int liouville_base() const { return base_; }

    bool refinable() const { return kind_ != Kind::decimal; }
    // Enclosure of width <= 2^-bits for refinable kinds; the intrinsic
    // enclosure for decimals (callers decide whether that is good enough).
    RatInterval enclosure(unsigned bits) const;
    double to_double() const;

    // floor / fractional part; throws precision_exhausted when a decimal's
    // uncertainty straddles an integer.
    BigInt floor_exact() const;

    std::string describe() const;

private:
    Kind kind_ = Kind::rational;
    BigRat rat_ = 0;   // rational value / decimal midpoint
    SurdVal surd_;     // surd payload
    int base_ = 0;     // liouville base
    BigRat half_ulp_ = 0;
};

using Point = std::vector<RealSpec>;  // a point in R^d, coordinate-wise exact

// Liouville partial sum with K terms: sum_{k=1..K} base^{-k!}.
BigRat liouville_partial(int base, int terms);
// Smallest K with tail bound 2*base^{-(K+1)!} <= 2^-bits.
int liouville_terms_for(int base, unsigned bits);

// Exact-where-possible real value used for certified comparisons of derived
// quantities (lattice distances, kappa candidates).  Same-field surds and
// rationals compare exactly; everything else falls back to interval
// refinement under the bit budget.
class ExactVal {
public:
    ExactVal() : ExactVal(BigRat(0)) {}
    explicit ExactVal(BigRat v);
    explicit ExactVal(SurdVal v);
    // refiner(bits) must return an enclosure of width <= 2^-bits when
    // `refinable`, or its best fixed enclosure otherwise
    ExactVal(std::function<RatInterval(unsigned)> refiner, bool refinable);

    bool is_rational() const;
    BigRat rational_value() const;
    bool is_surd() const { return tag_ == Tag::surd; }
    const SurdVal& surd_value() const { return surd_; }

    int sign(unsigned budget = 0) const;  // budget 0 = global bit budget
    // -1 / 0 / +1; throws precision_exhausted if undecidable within budget
    static int compare(const ExactVal& x, const ExactVal& y, unsigned budget = 0);

    ExactVal scale(const BigRat& r) const;
    ExactVal squared() const;

    RatInterval enclosure(unsigned bits) const;
    double to_double() const;

private:
    enum class Tag { rational, surd, interval };
    Tag tag_ = Tag::rational;
    BigRat rat_;
    SurdVal surd_;
    std::function<RatInterval(unsigned)> refine_;
    bool refinable_ = true;
};

}  // namespace ubiq
