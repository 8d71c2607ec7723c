#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ubiq/errors.hpp"
#include "ubiq/sequence.hpp"

namespace ubiq::gauge {

// Parametric gauge function g with g(0+) = 0.  Families:
//   Power     g(r) = r^s                      (s > 0)
//   PowerLog  g(r) = r^s * log(1/r)^t         (s > 0, t real)
//   Zero      g == 0 near the origin
//   Table     values on a strictly increasing grid over (0, r0]
// r0 is the validity radius: below it the family formula is monotone in both
// senses required of a d-normalized gauge; a normalized gauge extends above
// r0 as r^d * g(r0)/r0^d.
struct GaugeSpec {
    enum class Family { power, powerlog, zero, table };

    Family family = Family::power;
    double s = 1.0;
    double t = 0.0;
    double r0 = 1.0;
    std::vector<std::pair<double, double>> table;  // (r, g(r)), increasing r
    bool normalized_ext = false;                   // evaluate as extension above r0
    int ext_d = 1;                                 // dimension used by the extension

    static GaugeSpec power(double s);
    static GaugeSpec powerlog(double s, double t);
    static GaugeSpec zero();
    static GaugeSpec from_table(std::vector<std::pair<double, double>> pts);

    void validate() const;
    bool is_zero() const { return family == Family::zero; }
    // evaluate on (0, 1]; r = 0 gives 0 for every family
    double eval(double r) const;
    std::string describe() const;
};

// Largest radius below which g is nondecreasing and g(r)/r^d nonincreasing
// (clamped to 1).
double monotonicity_radius(const GaugeSpec& g, int d);

// d-normalization g_d(r) = r^d inf_{0<rho<=r} g(rho)/rho^d, closed form for
// the parametric families, grid infimum for tables.
GaugeSpec normalize(const GaugeSpec& g, int d);

enum class EllTag { g_infinity, g_star_only, neither };

struct EllResult {
    double value = 0.0;  // liminf g(r)/r^d, may be +infinity
    EllTag tag = EllTag::neither;
    bool from_grid = false;  // table fallback; value is a trailing-grid proxy
};

// ell_g = liminf_{r->0} g(r)/r^d and its class tag.
EllResult ell(const GaugeSpec& g, int d);

// s_g = sup{ s in (0,d] : r^s precedes g_d }, 0 if empty; Zero gauge gives d.
double lower_dimension(const GaugeSpec& g, int d);

struct PrecedesDiag {
    bool monotone = true;        // ratio monotonically diverging on the grid
    std::string note;
};

// h precedes g iff h_d / g_d tends monotonically to infinity at 0; if g_d
// vanishes near 0 the answer is true by convention.  Oscillating table
// ratios report false and fill the diagnostic.
bool precedes(const GaugeSpec& h, const GaugeSpec& g, int d, PrecedesDiag* diag = nullptr);

// Borel measures on (0,1]: n_s (power law), discrete n_r from a radius
// sequence, pushforward under rho -> rho^{1/alpha} of a magnitude measure,
// and scalar multiples.
struct MeasureSpec {
    enum class Family { power_law, discrete, pushforward, scaled };

    Family family = Family::power_law;
    int d = 1;
    double s = 0.0;                        // power_law exponent, in [0, d)
    seq::RadiusSeqSpec radii;              // discrete
    double alpha = 1.0;                    // pushforward exponent
    double c = 1.0;                        // scale factor
    std::shared_ptr<MeasureSpec> base;     // pushforward / scaled

    static MeasureSpec power_law(double s, int d);
    static MeasureSpec discrete(seq::RadiusSeqSpec r, int d);
    static MeasureSpec pushforward(MeasureSpec base, double alpha);
    static MeasureSpec scaled(double c, MeasureSpec base);

    void validate() const;
    std::string describe() const;
};

// Tail function Phi_nu(rho) = nu([rho, 1]); finite for every rho in (0,1].
double tail_mass(const MeasureSpec& nu, double rho);
// Membership in R_d: <nu, r^d> finite.
bool in_rad_class(const MeasureSpec& nu);

struct PairingVerdict {
    enum class Kind { finite, infinite, indeterminate } kind;
    double value = 0.0;  // finite case
    double error = 0.0;  // quadrature / truncation error estimate
    std::string method;  // "analytic", "quadrature", "tail-regression"
};

// Finiteness (and value) of <nu, g_d>.
PairingVerdict pairing(const MeasureSpec& nu, const GaugeSpec& g);

// s_nu = sup{ s in (0,d] : r^s in G(nu) }, with the empty-set convention 0.
// Requires nu in R_d.
double exponent_of_measure(const MeasureSpec& nu, int d);

// Describability verdict for a limsup set in some open set.
struct DescribabilityVerdict {
    enum class Kind { lebesgue_full, nu_describable, s_describable };
    Kind kind = Kind::lebesgue_full;
    std::optional<MeasureSpec> nu;  // nu_describable
    double s = 0.0;                 // s_describable, in [0, d)
    int d = 1;

    static DescribabilityVerdict lebesgue_full(int d);
    static DescribabilityVerdict nu_describable(MeasureSpec nu);
    static DescribabilityVerdict s_describable(double s, int d);
    std::string describe() const;
};

enum class GaugeOutcome { majorizing, minorizing, indeterminate_band };

const char* to_string(GaugeOutcome o);

// Per-gauge outcome under a describability verdict:
//   nu-describable: minorizing iff g in G(nu) (g in G^infty and <nu,g_d> = infinite)
//   s-describable:  minorizing iff g in G^infty and g_d != o(r^s) for all s > s0
//   lebesgue-full:  every gauge minorizing
GaugeOutcome classify_gauge(const DescribabilityVerdict& v, const GaugeSpec& g);

// Intersection rule for countably many nu_{s_i}-describable factors
// (Lebesgue-full factors absorbed).  A finite list always attains its
// infimum; pass `unattained_inf` for a monotone family whose infimum is a
// strict limit, which yields the s-describable branch.
DescribabilityVerdict combine_describability(std::span<const DescribabilityVerdict> verdicts,
                                             std::optional<double> unattained_inf = std::nullopt);

}  // namespace ubiq::gauge
