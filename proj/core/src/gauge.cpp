#include "ubiq/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ubiq::gauge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log1r(double r) { return -std::log(r); }  // log(1/r), r in (0,1)

// Adaptive Simpson on [a,b] with absolute tolerance.
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double tol, int depth, double* err) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        if (err) *err += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson(f, a, m, fa, flm, fm, tol / 2, depth - 1, err) +
           simpson(f, m, b, fm, frm, fb, tol / 2, depth - 1, err);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol, double* err) {
    double m = 0.5 * (a + b);
    return simpson(f, a, b, f(a), f(m), f(b), tol, 48, err);
}

// Integral over u in [u0, infinity) of e^{-a u} u^t, a > 0 (substituted form of
// the near-zero part of <n_s, g_d> for power-log gauges); integrand decays
// exponentially, so a finite cutoff with an explicit tail bound suffices.
double exp_poly_tail_integral(double a, double t, double u0, double* err) {
    double cut = u0;
    // choose cutoff where e^{-a u} u^t is negligible
    double peak = t > 0 ? std::max(u0, t / a) : u0;
    cut = peak + 60.0 / a;
    auto f = [&](double u) { return std::exp(-a * u) * std::pow(u, t); };
    double tail = f(cut) * (1.0 / a) * 2.0;  // bound since decay rate >= a/2 past the peak
    double e = 0.0;
    double v = integrate(f, u0, cut, 1e-12, &e);
    if (err) *err = e + tail;
    return v + tail / 2.0;
}

}  // namespace

GaugeSpec GaugeSpec::power(double s) {
    GaugeSpec g;
    g.family = Family::power;
    g.s = s;
    g.validate();
    return g;
}

GaugeSpec GaugeSpec::powerlog(double s, double t) {
    GaugeSpec g;
    g.family = Family::powerlog;
    g.s = s;
    g.t = t;
    g.validate();
    return g;
}

GaugeSpec GaugeSpec::zero() {
    GaugeSpec g;
    g.family = Family::zero;
    g.s = 0;
    return g;
}

GaugeSpec GaugeSpec::from_table(std::vector<std::pair<double, double>> pts) {
    GaugeSpec g;
    g.family = Family::table;
    g.table = std::move(pts);
    if (!g.table.empty()) g.r0 = g.table.back().first;
    g.validate();
    return g;
}

void GaugeSpec::validate() const {
    switch (family) {
        case Family::power:
        case Family::powerlog:
            if (!(s > 0)) throw validation_error("gauge: exponent s must be positive");
            if (!(r0 > 0 && r0 <= 1)) throw validation_error("gauge: r0 must lie in (0,1]");
            break;
        case Family::zero:
            break;
        case Family::table: {
            if (table.size() < 2) throw validation_error("gauge: table needs at least two points");
            double pr = 0.0, pv = -1.0;
            for (auto& [r, v] : table) {
                if (r <= pr) throw validation_error("gauge: table grid must be strictly increasing");
                if (v < 0) throw validation_error("gauge: table values must be nonnegative");
                if (pv >= 0 && v < pv) throw validation_error("gauge: table values must be nondecreasing");
                pr = r;
                pv = v;
            }
            if (table.back().first > 1.0) throw validation_error("gauge: table grid must stay within (0,1]");
            // vanishing at 0 is checked at the grid head
            if (table[0].second > table[1].second)
                throw validation_error("gauge: table head must not decrease toward zero");
            break;
        }
    }
}

double GaugeSpec::eval(double r) const {
    if (r <= 0) return 0.0;
    switch (family) {
        case Family::zero:
            return 0.0;
        case Family::power:
        case Family::powerlog: {
            auto raw = [&](double x) {
                double v = std::pow(x, s);
                if (family == Family::powerlog) v *= std::pow(log1r(x), t);
                return v;
            };
            if (!normalized_ext || r <= r0) return raw(std::min(r, 1.0));
            // d-normalized extension above the validity radius: linear in r^d;
            // the d used at normalization time is recorded in `t`-independent
            // member ext_d below via r0 bookkeeping -- extension uses ext_d_.
            return std::pow(r / r0, ext_d) * raw(r0);
        }
        case Family::table: {
            if (r <= table.front().first) {
                // continue the head with the slope of the first segment in
                // log-log coordinates (head tends to zero)
                auto [r1, v1] = table[0];
                auto [r2, v2] = table[1];
                if (v1 <= 0) return 0.0;
                double slope = (std::log(v2) - std::log(v1)) / (std::log(r2) - std::log(r1));
                return v1 * std::pow(r / r1, std::max(slope, 1e-9));
            }
            if (r >= table.back().first) {
                if (!normalized_ext) return table.back().second;
                double rl = table.back().first;
                return std::pow(r / rl, ext_d) * table.back().second;
            }
            auto it = std::lower_bound(table.begin(), table.end(), r,
                                       [](const auto& p, double x) { return p.first < x; });
            auto [r2, v2] = *it;
            auto [r1, v1] = *(it - 1);
            if (v1 <= 0 || v2 <= 0) {  // linear fallback near zero values
                return v1 + (v2 - v1) * (r - r1) / (r2 - r1);
            }
            double lr = (std::log(r) - std::log(r1)) / (std::log(r2) - std::log(r1));
            return std::exp(std::log(v1) + lr * (std::log(v2) - std::log(v1)));
        }
    }
    return 0.0;
}

std::string GaugeSpec::describe() const {
    std::ostringstream os;
    switch (family) {
        case Family::power:
            os << "r^" << s;
            break;
        case Family::powerlog:
            os << "r^" << s << "*log(1/r)^" << t;
            break;
        case Family::zero:
            os << "0";
            break;
        case Family::table:
            os << "table[" << table.size() << "]";
            break;
    }
    return os.str();
}

double monotonicity_radius(const GaugeSpec& g, int d) {
    switch (g.family) {
        case GaugeSpec::Family::zero:
            return 1.0;
        case GaugeSpec::Family::power:
            return 1.0;  // both monotonicities hold everywhere
        case GaugeSpec::Family::powerlog: {
            // g nondecreasing:        L >= t/s          (L = log 1/r)
            // g(r)/r^d nonincreasing: (s-d) L >= t
            double bound = 0.0;  // lower bound on L
            if (g.t > 0) bound = std::max(bound, g.t / g.s);
            double sd = g.s - d;
            if (sd < 0 && g.t < 0) bound = std::max(bound, g.t / sd);
            if (sd > 0) return 1.0;       // normalization is Zero anyway
            if (sd == 0 && g.t < 0) return 1.0;  // normalization is Zero
            return bound <= 0 ? 1.0 : std::exp(-bound);
        }
        case GaugeSpec::Family::table: {
            // largest grid prefix on which both monotonicities hold
            double best = g.table.front().first;
            for (std::size_t i = 1; i < g.table.size(); ++i) {
                auto [r1, v1] = g.table[i - 1];
                auto [r2, v2] = g.table[i];
                bool nondecr = v2 >= v1;
                bool ratio = v2 / std::pow(r2, d) <= v1 / std::pow(r1, d) * (1 + 1e-12);
                if (!nondecr || !ratio) break;
                best = r2;
            }
            return best;
        }
    }
    return 1.0;
}

GaugeSpec normalize(const GaugeSpec& g, int d) {
    if (d < 1) throw validation_error("normalize: d must be >= 1");
    g.validate();
    switch (g.family) {
        case GaugeSpec::Family::zero:
            return GaugeSpec::zero();
        case GaugeSpec::Family::power: {
            if (g.s > d) return GaugeSpec::zero();
            GaugeSpec out = GaugeSpec::power(g.s);
            out.r0 = 1.0;
            out.normalized_ext = true;
            out.ext_d = d;
            return out;
        }
        case GaugeSpec::Family::powerlog: {
            if (g.s > d) return GaugeSpec::zero();
            if (g.s == d) {
                if (g.t < 0) return GaugeSpec::zero();
                if (g.t == 0) return normalize(GaugeSpec::power(d), d);
            }
            GaugeSpec out = GaugeSpec::powerlog(g.s, g.t);
            out.r0 = std::min(monotonicity_radius(g, d), 1.0);
            out.normalized_ext = true;
            out.ext_d = d;
            return out;
        }
        case GaugeSpec::Family::table: {
            GaugeSpec out = g;
            double best = kInf;  // running inf of g(rho)/rho^d
            bool all_zero = true;
            for (auto& [r, v] : out.table) {
                best = std::min(best, v / std::pow(r, d));
                v = std::pow(r, d) * best;
                if (v > 0) all_zero = false;
            }
            if (all_zero) return GaugeSpec::zero();
            out.normalized_ext = true;
            out.ext_d = d;
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

EllResult ell(const GaugeSpec& g, int d) {
    g.validate();
    EllResult out;
    auto tag_of = [](double v) {
        if (std::isinf(v)) return EllTag::g_infinity;
        return v > 0 ? EllTag::g_star_only : EllTag::neither;
    };
    switch (g.family) {
        case GaugeSpec::Family::zero:
            out.value = 0.0;
            break;
        case GaugeSpec::Family::power:
            out.value = g.s < d ? kInf : (g.s == d ? 1.0 : 0.0);
            break;
        case GaugeSpec::Family::powerlog:
            if (g.s < d)
                out.value = kInf;
            else if (g.s > d)
                out.value = 0.0;
            else
                out.value = g.t > 0 ? kInf : (g.t == 0 ? 1.0 : 0.0);
            break;
        case GaugeSpec::Family::table: {
            // liminf proxy: minimum of g(r)/r^d over the leading quarter of the grid
            std::size_t head = std::max<std::size_t>(2, g.table.size() / 4);
            double mn = kInf;
            for (std::size_t i = 0; i < head; ++i)
                mn = std::min(mn, g.table[i].second / std::pow(g.table[i].first, d));
            out.value = mn;
            out.from_grid = true;
            // a grid can never certify an infinite liminf; report the trend
            if (mn > 1e6) out.value = kInf;
            break;
        }
    }
    out.tag = tag_of(out.value);
    return out;
}

namespace {

// fitted exponent alpha with g(r) ~ r^alpha near 0 for tables (last two
// decades of the grid head)
double table_head_exponent(const GaugeSpec& g) {
    std::vector<std::pair<double, double>> pts;
    double r_min = g.table.front().first;
    for (auto& [r, v] : g.table)
        if (r <= 100.0 * r_min && v > 0) pts.emplace_back(std::log(r), std::log(v));
    if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = static_cast<double>(pts.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

double lower_dimension(const GaugeSpec& g, int d) {
    g.validate();
    switch (g.family) {
        case GaugeSpec::Family::zero:
            return static_cast<double>(d);  // every power precedes the zero gauge
        case GaugeSpec::Family::power:
        case GaugeSpec::Family::powerlog: {
            GaugeSpec nd = normalize(g, d);
            if (nd.is_zero()) return static_cast<double>(d);
            return std::min(g.s, static_cast<double>(d));
        }
        case GaugeSpec::Family::table: {
            GaugeSpec nd = normalize(g, d);
            if (nd.is_zero()) return static_cast<double>(d);
            double a = table_head_exponent(nd);
            if (std::isnan(a)) return 0.0;
            return std::clamp(a, 0.0, static_cast<double>(d));
        }
    }
    throw std::logic_error("unreachable");
}

bool precedes(const GaugeSpec& h, const GaugeSpec& g, int d, PrecedesDiag* diag) {
    GaugeSpec hd = normalize(h, d), gd = normalize(g, d);
    if (gd.is_zero()) return true;  // convention: anything precedes a vanishing gauge
    if (hd.is_zero()) return false;
    auto fam = [](const GaugeSpec& x) { return x.family == GaugeSpec::Family::table; };
    if (!fam(hd) && !fam(gd)) {
        // ratio r^{sh-sg} log(1/r)^{th-tg}
        double sh = hd.s, th = hd.family == GaugeSpec::Family::powerlog ? hd.t : 0.0;
        double sg = gd.s, tg = gd.family == GaugeSpec::Family::powerlog ? gd.t : 0.0;
        if (sh != sg) return sh < sg;
        return th > tg;
    }
    // table comparison on the common grid with a monotone-ratio check
    const auto& grid = fam(hd) ? hd.table : gd.table;
    std::vector<double> ratios;
    for (auto& [r, v] : grid) {
        double hv = hd.eval(r), gv = gd.eval(r);
        if (gv <= 0) continue;
        ratios.push_back(hv / gv);
    }
    if (ratios.size() < 3) {
        if (diag) diag->note = "grid too short to certify divergence";
        return false;
    }
    bool monotone = true;
    for (std::size_t i = 1; i < ratios.size(); ++i)
        if (ratios[i] > ratios[i - 1] * (1 + 1e-12)) monotone = false;  // must grow toward r -> 0
    bool diverging = ratios.front() > 100.0 * ratios.back() || ratios.front() > 1e6;
    if (diag) {
        diag->monotone = monotone;
        if (!monotone) diag->note = "ratio oscillates on the grid; divergence not monotone";
        else if (!diverging) diag->note = "ratio grows but divergence is not certified by the grid";
    }
    return monotone && diverging;
}

MeasureSpec MeasureSpec::power_law(double s, int d) {
    MeasureSpec m;
    m.family = Family::power_law;
    m.s = s;
    m.d = d;
    m.validate();
    return m;
}

MeasureSpec MeasureSpec::discrete(seq::RadiusSeqSpec r, int d) {
    MeasureSpec m;
    m.family = Family::discrete;
    m.radii = std::move(r);
    m.d = d;
    m.validate();
    return m;
}

MeasureSpec MeasureSpec::pushforward(MeasureSpec base_, double alpha) {
    MeasureSpec m;
    m.family = Family::pushforward;
    m.d = base_.d;
    m.alpha = alpha;
    m.base = std::make_shared<MeasureSpec>(std::move(base_));
    m.validate();
    return m;
}

MeasureSpec MeasureSpec::scaled(double c, MeasureSpec base_) {
    MeasureSpec m;
    m.family = Family::scaled;
    m.d = base_.d;
    m.c = c;
    m.base = std::make_shared<MeasureSpec>(std::move(base_));
    m.validate();
    return m;
}

void MeasureSpec::validate() const {
    if (d < 1) throw validation_error("measure: d must be >= 1");
    switch (family) {
        case Family::power_law:
            if (s < 0 || s >= d) throw validation_error("measure: power-law exponent must lie in [0, d)");
            break;
        case Family::discrete:
            radii.validate();
            break;
        case Family::pushforward:
            if (!base) throw validation_error("measure: pushforward without base");
            if (!(alpha > 0)) throw validation_error("measure: pushforward exponent must be positive");
            base->validate();
            break;
        case Family::scaled:
            if (!base) throw validation_error("measure: scaled without base");
            if (!(c > 0)) throw validation_error("measure: scale factor must be positive");
            base->validate();
            break;
    }
}

std::string MeasureSpec::describe() const {
    std::ostringstream os;
    switch (family) {
        case Family::power_law:
            os << "n_" << s;
            break;
        case Family::discrete:
            os << "n_r[" << radii.describe() << "]";
            break;
        case Family::pushforward:
            os << "push(" << base->describe() << ", alpha=" << alpha << ")";
            break;
        case Family::scaled:
            os << c << "*" << base->describe();
            break;
    }
    return os.str();
}

double tail_mass(const MeasureSpec& nu, double rho) {
    nu.validate();
    if (!(rho > 0 && rho <= 1)) throw domain_error("tail_mass: rho must lie in (0,1]");
    switch (nu.family) {
        case MeasureSpec::Family::power_law:
            // integral over [rho,1] of r^{-s-1} dr
            return nu.s == 0 ? std::log(1.0 / rho) : (std::pow(rho, -nu.s) - 1.0) / nu.s;
        case MeasureSpec::Family::discrete:
            return seq::count_at_least(nu.radii, rho);
        case MeasureSpec::Family::pushforward:
            return tail_mass(*nu.base, std::pow(rho, nu.alpha));
        case MeasureSpec::Family::scaled:
            return nu.c * tail_mass(*nu.base, rho);
    }
    return 0.0;
}

namespace {

// Reduce pushforward/scaled chains over a power-law core to (scale, n_s);
// returns false if the core is discrete.
bool reduce_powerish(const MeasureSpec& nu, double* scale, double* s) {
    switch (nu.family) {
        case MeasureSpec::Family::power_law:
            *scale = 1.0;
            *s = nu.s;
            return true;
        case MeasureSpec::Family::scaled: {
            if (!reduce_powerish(*nu.base, scale, s)) return false;
            *scale *= nu.c;
            return true;
        }
        case MeasureSpec::Family::pushforward: {
            // Phi(rho) = Phi_base(rho^alpha); power-law base s0 gives
            // (rho^{-alpha s0} - 1)/s0 = alpha * (power-law alpha*s0 tail)
            if (!reduce_powerish(*nu.base, scale, s)) return false;
            if (*s == 0) return true;  // log tail stays log-like under push; treat as s = 0
            *scale *= nu.alpha;
            *s *= nu.alpha;
            return true;
        }
        case MeasureSpec::Family::discrete:
            return false;
    }
    return false;
}

// Underlying discrete sequence (with the pushforward exponent folded in) or
// nullopt when the measure has a power-law core.
std::optional<std::pair<double, seq::RadiusSeqSpec>> reduce_discrete(const MeasureSpec& nu) {
    switch (nu.family) {
        case MeasureSpec::Family::discrete:
            return std::make_pair(1.0, nu.radii);
        case MeasureSpec::Family::scaled: {
            auto b = reduce_discrete(*nu.base);
            if (!b) return std::nullopt;
            return std::make_pair(nu.c * b->first, b->second);
        }
        case MeasureSpec::Family::pushforward: {
            auto b = reduce_discrete(*nu.base);
            if (!b) return std::nullopt;
            // atoms at r_n become atoms at r_n^{1/alpha}
            return std::make_pair(b->first, seq::RadiusSeqSpec::power_of(b->second, 1.0 / nu.alpha));
        }
        default:
            return std::nullopt;
    }
}

}  // namespace

bool in_rad_class(const MeasureSpec& nu) {
    nu.validate();
    double scale, s;
    if (reduce_powerish(nu, &scale, &s)) return s < nu.d;
    auto dm = reduce_discrete(nu);
    // <n_r, r^d> = sum r_n^d
    return seq::series_verdict(dm->second, static_cast<double>(nu.d)) < 0;
}

namespace {

// <n_s, g_d> for a normalized parametric gauge: integral over (0, r0] of the
// family formula times r^{-s-1}, plus the closed-form linear extension piece.
PairingVerdict pair_powerlaw_family(double scale, double s, int d, const GaugeSpec& gd) {
    PairingVerdict out;
    out.method = "analytic";
    double u = gd.s, t = gd.family == GaugeSpec::Family::powerlog ? gd.t : 0.0;
    double a = u - s;
    bool conv = a > 0 || (a == 0 && t < -1);
    if (!conv) {
        out.kind = PairingVerdict::Kind::infinite;
        return out;
    }
    out.kind = PairingVerdict::Kind::finite;
    double r0 = gd.r0;
    double L0 = std::log(1.0 / r0);
    double head, herr = 0.0;
    if (t == 0.0) {
        head = std::pow(r0, a) / a;
    } else if (a == 0.0) {
        head = std::pow(std::max(L0, 1e-300), t + 1) / (-t - 1);
        out.method = "analytic";
    } else {
        // integral over (0, r0] of r^{a-1} log(1/r)^t dr = integral over
        // [L0, inf) of e^{-a u} u^t du
        head = exp_poly_tail_integral(a, t, std::max(L0, 1e-12), &herr);
        out.method = "quadrature";
    }
    // extension piece: g_d(r) = r^d g(r0)/r0^d on (r0, 1]
    double ext = 0.0;
    if (r0 < 1.0) {
        double C = gd.eval(r0) / std::pow(r0, d);
        ext = C * (1.0 - std::pow(r0, d - s)) / (d - s);
    }
    out.value = scale * (head + ext);
    out.error = scale * herr;
    return out;
}

}  // namespace

PairingVerdict pairing(const MeasureSpec& nu, const GaugeSpec& g) {
    nu.validate();
    g.validate();
    GaugeSpec gd = g.normalized_ext ? g : normalize(g, nu.d);
    PairingVerdict out;
    if (gd.is_zero()) {
        out.kind = PairingVerdict::Kind::finite;
        out.value = 0.0;
        out.method = "analytic";
        return out;
    }
    double scale, s;
    bool powerish = reduce_powerish(nu, &scale, &s);
    bool family_gauge = gd.family == GaugeSpec::Family::power || gd.family == GaugeSpec::Family::powerlog;

    if (powerish && family_gauge) return pair_powerlaw_family(scale, s, nu.d, gd);

    if (powerish && gd.family == GaugeSpec::Family::table) {
        // numeric integral on the grid + tail-exponent regression below it
        double alpha = table_head_exponent(gd);
        if (std::isnan(alpha)) {
            out.kind = PairingVerdict::Kind::indeterminate;
            out.method = "tail-regression";
            return out;
        }
        double crit = s;  // integral converges iff alpha > s
        if (std::abs(alpha - crit) <= 0.02) {
            out.kind = PairingVerdict::Kind::indeterminate;
            out.method = "tail-regression";
            return out;
        }
        if (alpha < crit) {
            out.kind = PairingVerdict::Kind::infinite;
            out.method = "tail-regression";
            return out;
        }
        // convergent: numeric over grid support + fitted power head
        double err = 0.0;
        double r_min = gd.table.front().first;
        auto f = [&](double r) { return gd.eval(r) * std::pow(r, -s - 1.0); };
        double v = integrate(f, r_min, 1.0, 1e-10, &err);
        double head_c = gd.table.front().second / std::pow(r_min, alpha);
        double head = head_c * std::pow(r_min, alpha - s) / (alpha - s);
        out.kind = PairingVerdict::Kind::finite;
        out.value = scale * (v + head);
        out.error = scale * (err + 0.5 * head);  // head model uncertainty dominates
        out.method = "quadrature+tail-fit";
        return out;
    }

    // discrete measures: series sum g_d(r_n)
    auto dm = reduce_discrete(nu);
    if (!dm) throw std::logic_error("pairing: unreachable measure reduction");
    const auto& [dscale, radii] = *dm;
    if (family_gauge) {
        // exponent comparison: sum over n of r_n^{u} log(1/r_n)^{t} with
        // r_n from the family; decided through the sequence's critical exponent
        double u = gd.s, t = gd.family == GaugeSpec::Family::powerlog ? gd.t : 0.0;
        switch (radii.family) {
            case seq::RadiusSeqSpec::Family::power_decay: {
                double e = radii.sigma * u;  // term ~ n^-e (sigma ln n)^t
                bool div = e < 1 || (e == 1 && t >= -1);
                if (div) {
                    out.kind = PairingVerdict::Kind::infinite;
                    out.method = "analytic";
                    return out;
                }
                break;
            }
            case seq::RadiusSeqSpec::Family::geometric:
                break;  // always convergent for u > 0
            case seq::RadiusSeqSpec::Family::explicit_list:
                if (radii.tail == seq::RadiusSeqSpec::TailRule::power_fit && radii.fit_sigma * u <= 1) {
                    out.kind = PairingVerdict::Kind::infinite;
                    out.method = "analytic";
                    return out;
                }
                break;
            case seq::RadiusSeqSpec::Family::power_of: {
                int v = seq::series_verdict(radii, u);
                if (v > 0) {
                    out.kind = PairingVerdict::Kind::infinite;
                    out.method = "analytic";
                    return out;
                }
                break;
            }
        }
        auto sum = seq::sum_terms(radii, [&](double r) { return r <= 1.0 ? gd.eval(r) : 0.0; });
        out.kind = PairingVerdict::Kind::finite;
        out.value = dscale * sum.value;
        out.error = dscale * sum.tail_estimate;
        out.method = "partial-sum";
        return out;
    }
    // discrete measure x table gauge: partial sums + tail-exponent regression
    double alpha = table_head_exponent(gd);
    double crit = seq::critical_exponent(radii, nu.d);
    if (std::isnan(alpha) || std::abs(alpha - crit) <= 0.02) {
        out.kind = PairingVerdict::Kind::indeterminate;
        out.method = "tail-regression";
        return out;
    }
    if (alpha < crit) {
        out.kind = PairingVerdict::Kind::infinite;
        out.method = "tail-regression";
        return out;
    }
    auto sum = seq::sum_terms(radii, [&](double r) { return r <= 1.0 ? gd.eval(r) : 0.0; });
    out.kind = PairingVerdict::Kind::finite;
    out.value = dscale * sum.value;
    out.error = dscale * sum.tail_estimate;
    out.method = "partial-sum+tail-fit";
    return out;
}

double exponent_of_measure(const MeasureSpec& nu, int d) {
    nu.validate();
    if (nu.d != d) throw domain_error("exponent_of_measure: dimension mismatch");
    if (!in_rad_class(nu)) throw domain_error("exponent_of_measure: measure not in R_d");
    double scale, s;
    if (reduce_powerish(nu, &scale, &s)) return std::clamp(s, 0.0, static_cast<double>(d));
    auto dm = reduce_discrete(nu);
    if (dm) return seq::critical_exponent(dm->second, d);
    // bisection on pairing verdicts as a generic fallback
    double lo = 0.0, hi = static_cast<double>(d);
    // sup of s with divergent pairing; the empty-set convention gives 0
    auto diverges = [&](double sv) {
        auto v = pairing(nu, GaugeSpec::power(sv));
        return v.kind == PairingVerdict::Kind::infinite;
    };
    if (!diverges(1e-9)) return 0.0;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (diverges(mid))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

DescribabilityVerdict DescribabilityVerdict::lebesgue_full(int d) {
    DescribabilityVerdict v;
    v.kind = Kind::lebesgue_full;
    v.d = d;
    return v;
}

DescribabilityVerdict DescribabilityVerdict::nu_describable(MeasureSpec nu_) {
    nu_.validate();
    if (!in_rad_class(nu_)) throw domain_error("describability: nu must lie in R_d");
    DescribabilityVerdict v;
    v.kind = Kind::nu_describable;
    v.d = nu_.d;
    v.nu = std::move(nu_);
    return v;
}

DescribabilityVerdict DescribabilityVerdict::s_describable(double s, int d) {
    if (s < 0 || s >= d) throw domain_error("describability: s must lie in [0, d)");
    DescribabilityVerdict v;
    v.kind = Kind::s_describable;
    v.s = s;
    v.d = d;
    return v;
}

std::string DescribabilityVerdict::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::lebesgue_full:
            os << "lebesgue-full";
            break;
        case Kind::nu_describable:
            os << "nu-describable(" << nu->describe() << ")";
            break;
        case Kind::s_describable:
            os << "s-describable(" << s << ")";
            break;
    }
    return os.str();
}

const char* to_string(GaugeOutcome o) {
    switch (o) {
        case GaugeOutcome::majorizing:
            return "majorizing";
        case GaugeOutcome::minorizing:
            return "minorizing";
        case GaugeOutcome::indeterminate_band:
            return "indeterminate-band";
    }
    return "?";
}

GaugeOutcome classify_gauge(const DescribabilityVerdict& v, const GaugeSpec& g) {
    g.validate();
    if (v.kind == DescribabilityVerdict::Kind::lebesgue_full) return GaugeOutcome::minorizing;
    EllResult lg = ell(g, v.d);
    if (v.kind == DescribabilityVerdict::Kind::nu_describable) {
        if (lg.tag != EllTag::g_infinity) return GaugeOutcome::majorizing;
        auto p = pairing(*v.nu, g);
        switch (p.kind) {
            case PairingVerdict::Kind::infinite:
                return GaugeOutcome::minorizing;
            case PairingVerdict::Kind::finite:
                return GaugeOutcome::majorizing;
            case PairingVerdict::Kind::indeterminate:
                return GaugeOutcome::indeterminate_band;
        }
    }
    // s-describable: minorizing iff g in G^infty and g_d != o(r^s) for all s > s0
    if (lg.tag != EllTag::g_infinity) return GaugeOutcome::majorizing;
    GaugeSpec gd = normalize(g, v.d);
    if (gd.is_zero()) return GaugeOutcome::majorizing;
    if (gd.family == GaugeSpec::Family::power || gd.family == GaugeSpec::Family::powerlog) {
        // r^u log^t != o(r^s) for all s > s0  <=>  u <= s0
        return gd.s <= v.s ? GaugeOutcome::minorizing : GaugeOutcome::majorizing;
    }
    double alpha = table_head_exponent(gd);
    if (std::isnan(alpha) || std::abs(alpha - v.s) <= 0.02) return GaugeOutcome::indeterminate_band;
    return alpha <= v.s ? GaugeOutcome::minorizing : GaugeOutcome::majorizing;
}

DescribabilityVerdict combine_describability(std::span<const DescribabilityVerdict> verdicts,
                                             std::optional<double> unattained_inf) {
    int d = -1;
    std::optional<double> best;
    for (const auto& v : verdicts) {
        if (d == -1) d = v.d;
        if (v.d != d) throw domain_error("combine: mixed dimensions");
        if (v.kind == DescribabilityVerdict::Kind::lebesgue_full) continue;  // absorbed
        if (v.kind != DescribabilityVerdict::Kind::nu_describable)
            throw domain_error("combine: factors must be nu-describable or lebesgue-full");
        double scale, s;
        if (!v.nu || !reduce_powerish(*v.nu, &scale, &s))
            throw domain_error("combine: factors must carry power-law measures");
        if (!best || s < *best) best = s;
    }
    if (d == -1) d = 1;
    if (unattained_inf) {
        if (best && *unattained_inf >= *best)
            throw domain_error("combine: declared infimum is not below the listed factors");
        return DescribabilityVerdict::s_describable(*unattained_inf, d);
    }
    if (!best) return DescribabilityVerdict::lebesgue_full(d);
    return DescribabilityVerdict::nu_describable(MeasureSpec::power_law(*best, d));
}

}  // namespace ubiq::gauge
