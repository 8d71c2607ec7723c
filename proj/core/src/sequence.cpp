#include "ubiq/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ubiq::seq {

RadiusSeqSpec RadiusSeqSpec::power_decay(double c, double sigma) {
    RadiusSeqSpec r;
    r.family = Family::power_decay;
    r.c = c;
    r.sigma = sigma;
    r.validate();
    return r;
}

RadiusSeqSpec RadiusSeqSpec::geometric(double c, double q) {
    RadiusSeqSpec r;
    r.family = Family::geometric;
    r.c = c;
    r.q = q;
    r.validate();
    return r;
}

RadiusSeqSpec RadiusSeqSpec::explicit_list(std::vector<double> values, TailRule tail, double fit_c,
                                           double fit_sigma) {
    RadiusSeqSpec r;
    r.family = Family::explicit_list;
    r.values = std::move(values);
    r.tail = tail;
    r.fit_c = fit_c;
    r.fit_sigma = fit_sigma;
    r.validate();
    return r;
}

RadiusSeqSpec RadiusSeqSpec::power_of(RadiusSeqSpec base, double t) {
    RadiusSeqSpec r;
    r.family = Family::power_of;
    r.base = std::make_shared<RadiusSeqSpec>(std::move(base));
    r.t = t;
    r.validate();
    return r;
}

void RadiusSeqSpec::validate() const {
    switch (family) {
        case Family::power_decay:
            if (c <= 0 || sigma <= 0) throw validation_error("radii: power decay needs c > 0, sigma > 0");
            break;
        case Family::geometric:
            if (c <= 0 || q <= 0 || q >= 1) throw validation_error("radii: geometric needs c > 0, q in (0,1)");
            break;
        case Family::explicit_list: {
            if (values.empty()) throw validation_error("radii: explicit list is empty");
            double prev = values.front();
            for (double v : values) {
                if (v <= 0) throw validation_error("radii: explicit terms must be positive");
                if (v > prev) throw validation_error("radii: explicit list not nonincreasing");
                prev = v;
            }
            if (tail == TailRule::power_fit && (fit_c <= 0 || fit_sigma <= 0))
                throw validation_error("radii: power-fit tail needs c > 0, sigma > 0");
            break;
        }
        case Family::power_of:
            if (!base) throw validation_error("radii: power_of without base");
            if (t < 1) throw validation_error("radii: power_of needs t >= 1");
            base->validate();
            break;
    }
}

double RadiusSeqSpec::term(std::uint64_t n) const {
    switch (family) {
        case Family::power_decay:
            return c * std::pow(static_cast<double>(n), -sigma);
        case Family::geometric:
            return c * std::pow(q, static_cast<double>(n));
        case Family::explicit_list:
            if (n <= values.size()) return values[n - 1];
            if (tail == TailRule::zero) return 0.0;
            return std::min(values.back(), fit_c * std::pow(static_cast<double>(n), -fit_sigma));
        case Family::power_of:
            return std::pow(base->term(n), t);
    }
    return 0.0;
}

std::string RadiusSeqSpec::describe() const {
    std::ostringstream os;
    switch (family) {
        case Family::power_decay:
            os << c << "*n^-" << sigma;
            break;
        case Family::geometric:
            os << c << "*" << q << "^n";
            break;
        case Family::explicit_list:
            os << "explicit[" << values.size() << (tail == TailRule::zero ? "],zero-tail" : "],power-tail");
            break;
        case Family::power_of:
            os << "(" << base->describe() << ")^" << t;
            break;
    }
    return os.str();
}

int series_verdict(const RadiusSeqSpec& r, double s) {
    r.validate();
    switch (r.family) {
        case RadiusSeqSpec::Family::power_decay:
            // sum n^{-sigma s}
            return r.sigma * s <= 1.0 ? 1 : -1;
        case RadiusSeqSpec::Family::geometric:
            return s > 0 ? -1 : 1;
        case RadiusSeqSpec::Family::explicit_list:
            if (r.tail == RadiusSeqSpec::TailRule::zero) return -1;
            return r.fit_sigma * s <= 1.0 ? 1 : -1;
        case RadiusSeqSpec::Family::power_of:
            return series_verdict(*r.base, s * r.t);
    }
    return 0;
}

double critical_exponent(const RadiusSeqSpec& r, int d) {
    if (d < 1) throw validation_error("critical_exponent: d must be >= 1");
    r.validate();
    double s;
    switch (r.family) {
        case RadiusSeqSpec::Family::power_decay:
            s = 1.0 / r.sigma;
            break;
        case RadiusSeqSpec::Family::geometric:
            s = 0.0;
            break;
        case RadiusSeqSpec::Family::explicit_list:
            s = r.tail == RadiusSeqSpec::TailRule::zero ? 0.0 : 1.0 / r.fit_sigma;
            break;
        case RadiusSeqSpec::Family::power_of:
            s = critical_exponent(*r.base, d) / r.t;
            break;
    }
    return std::clamp(s, 0.0, static_cast<double>(d));
}

PdVerdict is_pd(const RadiusSeqSpec& r, int d) {
    if (d < 1) throw validation_error("is_pd: d must be >= 1");
    try {
        r.validate();
    } catch (const validation_error& e) {
        return {PdTag::not_in_pd, e.what()};
    }
    // null limit
    switch (r.family) {
        case RadiusSeqSpec::Family::explicit_list:
            if (r.tail == RadiusSeqSpec::TailRule::zero)
                return {PdTag::not_in_pd, "series converges (finite prefix, zero tail)"};
            break;
        default:
            break;  // families tend to zero by construction
    }
    int v = series_verdict(r, static_cast<double>(d));
    if (v > 0) return {PdTag::in_pd, "nonincreasing, null, divergent d-th power series"};
    if (v < 0) return {PdTag::not_in_pd, "series converges"};
    return {PdTag::indeterminate_band, "tail exponent within the critical band"};
}

double count_at_least(const RadiusSeqSpec& r, double rho) {
    r.validate();
    if (rho <= 0) throw domain_error("count_at_least: rho must be positive");
    if (rho > 1) return 0.0;
    switch (r.family) {
        case RadiusSeqSpec::Family::power_decay: {
            // c n^-sigma >= rho  <=>  n <= (c/rho)^(1/sigma); also require r_n <= 1
            auto n_hi = static_cast<std::int64_t>(std::floor(std::pow(r.c / rho, 1.0 / r.sigma)));
            while (n_hi > 0 && r.term(n_hi) < rho) --n_hi;             // boundary repair
            while (r.term(n_hi + 1) >= rho) ++n_hi;
            std::int64_t n_lo = 1;                                      // first index with r_n <= 1
            while (r.term(n_lo) > 1.0) ++n_lo;
            return static_cast<double>(std::max<std::int64_t>(0, n_hi - n_lo + 1));
        }
        case RadiusSeqSpec::Family::geometric: {
            double count = 0;
            for (std::uint64_t n = 1;; ++n) {
                double v = r.term(n);
                if (v < rho) break;
                if (v <= 1.0) ++count;
                if (n > 100000) break;
            }
            return count;
        }
        case RadiusSeqSpec::Family::explicit_list: {
            double count = 0;
            for (double v : r.values)
                if (v >= rho && v <= 1.0) ++count;
            if (r.tail == RadiusSeqSpec::TailRule::power_fit) {
                for (std::uint64_t n = r.values.size() + 1; n <= 1000000; ++n) {
                    double v = r.term(n);
                    if (v < rho) break;
                    if (v <= 1.0) ++count;
                }
            }
            return count;
        }
        case RadiusSeqSpec::Family::power_of: {
            // r_n^t >= rho <=> r_n >= rho^(1/t)
            return count_at_least(*r.base, std::pow(rho, 1.0 / r.t));
        }
    }
    return 0.0;
}

SeriesSum sum_terms(const RadiusSeqSpec& r, const std::function<double(double)>& f, std::uint64_t max_terms) {
    SeriesSum out;
    double comp = 0.0;  // Kahan compensation
    std::uint64_t n = 1;
    for (; n <= max_terms; ++n) {
        double v = r.term(n);
        if (v <= 0) break;
        double y = f(v) - comp;
        double t = out.value + y;
        comp = (t - out.value) - y;
        out.value = t;
    }
    if (n > max_terms) {
        out.truncated = true;
        double last = f(r.term(max_terms));
        out.tail_estimate = std::abs(last) * static_cast<double>(max_terms);  // crude n*a_n bound
    }
    return out;
}

}  // namespace ubiq::seq
