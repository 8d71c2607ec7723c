#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ubiq/errors.hpp"

namespace ubiq::seq {

// Radius sequences r_1 >= r_2 >= ... > 0.
//   PowerDecay   r_n = c n^-sigma
//   Geometric    r_n = c q^n, q in (0,1)
//   Explicit     finite nonincreasing positive prefix + tail rule
//   PowerOf      (r_n^t) of a base sequence, t >= 1
struct RadiusSeqSpec {
    enum class Family { power_decay, geometric, explicit_list, power_of };
    enum class TailRule { zero, power_fit };

    Family family = Family::power_decay;
    double c = 1.0;
    double sigma = 1.0;             // power_decay
    double q = 0.5;                 // geometric
    std::vector<double> values;     // explicit prefix
    TailRule tail = TailRule::zero; // explicit tail rule
    double t = 1.0;                 // power_of exponent
    std::shared_ptr<RadiusSeqSpec> base;

    static RadiusSeqSpec power_decay(double c, double sigma);
    static RadiusSeqSpec geometric(double c, double q);
    static RadiusSeqSpec explicit_list(std::vector<double> values, TailRule tail = TailRule::zero,
                                       double fit_c = 1.0, double fit_sigma = 2.0);
    static RadiusSeqSpec power_of(RadiusSeqSpec base, double t);

    // power-fit tail parameters for explicit lists
    double fit_c = 1.0;
    double fit_sigma = 2.0;

    void validate() const;
    double term(std::uint64_t n) const;  // n >= 1
    std::string describe() const;
};

enum class PdTag { in_pd, not_in_pd, indeterminate_band };

struct PdVerdict {
    PdTag tag;
    std::string reason;
};

// (r_n) in P_d  <=>  nonincreasing, r_n -> 0, sum r_n^d = infinity.
PdVerdict is_pd(const RadiusSeqSpec& r, int d);

// Critical exponent of sum r_n^s (clamped to [0, d]).
double critical_exponent(const RadiusSeqSpec& r, int d);

// Number of terms with r_n >= rho (terms > 1 are dropped, as the measure
// lives on (0,1]).  Analytic per family.
double count_at_least(const RadiusSeqSpec& r, double rho);

// Convergence of sum r_n^s: +1 diverges, -1 converges, 0 indeterminate.
int series_verdict(const RadiusSeqSpec& r, double s);

// Numeric sum of f(r_n) over the full sequence with truncation control;
// returns partial value and a crude tail estimate (used by pairing).
struct SeriesSum {
    double value = 0.0;
    double tail_estimate = 0.0;
    bool truncated = false;
};
SeriesSum sum_terms(const RadiusSeqSpec& r, const std::function<double(double)>& f,
                    std::uint64_t max_terms = 2'000'000);

}  // namespace ubiq::seq
