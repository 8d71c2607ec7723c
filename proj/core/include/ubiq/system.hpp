#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ubiq/gauge.hpp"
#include "ubiq/real.hpp"
#include "ubiq/sequence.hpp"

namespace ubiq::sys {

// Approximation rate psi(h) = c * h^-tau (optionally with a log factor).
struct RateSpec {
    double c = 1.0;
    double tau = 2.0;
    double log_exp = 0.0;  // psi(h) = c h^-tau log(e+h)^log_exp

    double eval(double h) const;
    bool is_pure_power() const { return log_exp == 0.0; }
    void validate() const;
};

// Axis-aligned open box, the enumeration region.
struct Box {
    std::vector<double> lo, hi;

    static Box unit(int d);
    static Box interval(double a, double b);
    int dim() const { return static_cast<int>(lo.size()); }
    double volume() const;
    void validate() const;
};

// One member of an approximation system: point, radius, enumeration height.
struct ApproxPair {
    Point x;
    double r = 0.0;
    double height = 0.0;
    // exact payloads where available
    std::vector<BigRat> x_rat;  // rational coordinates (hom/inhom rational, deg-1 algebraic)
};

struct ApproxSystemSpec {
    enum class Kind { hom_rational, inhom_rational, algebraic, fractional_part, random_uniform, poisson };

    struct FracGen {
        enum class Type { linear, polynomial, base_power, fast_growth };
        Type type = Type::linear;
        RealSpec x = RealSpec::rational(BigRat(0));
        std::vector<BigInt> poly;       // integer coefficients, low to high degree
        int base = 2;                   // base_power
        std::string growth = "b_nsq";   // fast_growth rule: b^(n^2) ("b_nsq") or n! ("factorial")
    };

    Kind kind = Kind::hom_rational;
    int d = 1;
    RateSpec psi;
    Point alpha;                    // inhom shift
    int degree = 1;                 // algebraic degree bound (<= 4)
    FracGen generator;              // fractional_part
    seq::RadiusSeqSpec radii;       // fractional_part / random_uniform
    Box region = Box::interval(0.0, 1.0);
    std::uint64_t seed = 0;         // random_uniform / poisson
    gauge::MeasureSpec nu;          // poisson intensity
    double rho_min = 0.01;          // poisson truncation

    static ApproxSystemSpec hom_rational(int d, RateSpec psi, Box region);
    static ApproxSystemSpec inhom_rational(int d, Point alpha, RateSpec psi, Box region);
    static ApproxSystemSpec algebraic(int degree, RateSpec psi, Box region);
    static ApproxSystemSpec fractional_part(FracGen gen, seq::RadiusSeqSpec radii);
    static ApproxSystemSpec random_uniform(Box region, seq::RadiusSeqSpec radii, std::uint64_t seed);
    static ApproxSystemSpec poisson(gauge::MeasureSpec nu, Box region, double rho_min, std::uint64_t seed);

    void validate() const;
    std::string describe() const;
};

struct Enumeration {
    std::vector<ApproxPair> pairs;  // nondecreasing height, then lexicographic
    bool truncated = false;         // budget hit before height_max
};

// All members with height <= height_max meeting the region, deterministic
// order; a budget overflow yields a partial result with the marker set.
Enumeration enumerate_system(const ApproxSystemSpec& sys, double height_max,
                             std::uint64_t max_pairs = 5'000'000);

// Height functions.
// Inhomogeneous height: inf{q : q a - alpha integral}^{1+1/d}; searches q <= q_budget.
double inhom_height(const Point& a, const Point& alpha, int d, std::uint64_t q_budget = 1'000'000);
// Naive height of an algebraic number given its minimal polynomial.
BigInt naive_height(const std::vector<BigInt>& minpoly);
// H_n(a) = H(a)^{n+1} / (1 + |a|)^{n(n+1)}.
double beresnevich_height(const std::vector<BigInt>& minpoly, double value, int n);

// Real algebraic numbers of degree <= n and naive height <= H_max with a
// root in the region (certified isolating intervals; exact rational/surd
// values for degrees 1-2).
struct AlgebraicNumber {
    std::vector<BigInt> minpoly;  // primitive, positive leading coefficient, irreducible
    int degree = 1;
    BigInt height;                // naive height
    RealSpec value;               // exact for deg <= 2, certified interval root otherwise
    double approx = 0.0;
};

struct AlgebraicEnumeration {
    std::vector<AlgebraicNumber> roots;
    bool truncated = false;
};

AlgebraicEnumeration algebraic_roots(int degree_bound, const BigInt& h_max, const Box& region,
                                     std::uint64_t budget = 2'000'000);

// Greedy packing / counting report for the regular- and optimal-system
// bounds at scale h.
struct RegularOptimalReport {
    std::uint64_t packing_count = 0;  // greedy 1/h-separated members of height <= h in B
    std::uint64_t count = 0;          // all members of height <= h in B
    double kappa_measured = 0.0;      // packing_count / (diam(B)^d h^d)
    double kappa_prime_measured = 0.0;
    bool regular_ok = false;
    bool optimal_ok = false;
    bool truncated = false;
};

RegularOptimalReport regular_optimal_check(const ApproxSystemSpec& sys, const Box& ball, double h,
                                           double kappa_target, double kappa_prime_target);

// Divergence-test verdict for the limsup set of the system (the gauge
// module's system-level classifier entry point).
gauge::DescribabilityVerdict system_describability(const ApproxSystemSpec& sys);

}  // namespace ubiq::sys
