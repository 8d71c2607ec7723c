#include "ubiq/number.hpp"

#include <cmath>

namespace ubiq::num {

namespace {

void push_convergent(CfResult& out, const BigInt& a) {
    BigInt p, q;
    std::size_t n = out.convergents.size();
    if (n == 0) {
        p = a;
        q = 1;
    } else if (n == 1) {
        p = a * out.convergents[0].first + 1;
        q = a;
    } else {
        p = a * out.convergents[n - 1].first + out.convergents[n - 2].first;
        q = a * out.convergents[n - 1].second + out.convergents[n - 2].second;
    }
    out.quotients.push_back(a);
    out.convergents.emplace_back(p, q);
}

CfResult cf_rational(BigRat x, int depth) {
    CfResult out;
    BigInt p = num(x), q = den(x);
    for (int k = 0; k < depth; ++k) {
        BigInt a = floor_div(p, q);
        push_convergent(out, a);
        BigInt r = p - a * q;
        if (r == 0) {
            out.terminated = true;
            break;
        }
        p = q;
        q = r;
    }
    return out;
}

CfResult cf_surd(const SurdVal& x, int depth) {
    // write x = (P + sqrt(N)) / Q with Q | (N - P^2); quotient recurrence is
    // exact and eventually periodic
    // from (a + b sqrt(D))/c: multiply by |b c| / |b c| when b < 0 to keep +sqrt
    BigInt a = x.a, b = x.b, c = x.c, D = x.D;
    // (a + b sqrt(D))/c = (a*s + sqrt(b^2 D s^2)) / (c*s) with s = sign(b)
    int sb = b > 0 ? 1 : -1;
    BigInt P = a * sb * c;        // numerator shift, after scaling by s*c
    BigInt N = b * b * D * c * c; // radicand
    BigInt Q = sb * c * c;        // denominator (sign carries b's sign)
    // ensure Q | (N - P^2): N - P^2 = c^2 (b^2 D - a^2), divisible by c^2
    CfResult out;
    for (int k = 0; k < depth; ++k) {
        // floor((P + sqrt(N)) / Q); sqrt(N) is irrational here
        BigInt s = isqrt_floor(N);
        BigInt a_k = Q > 0 ? floor_div(P + s, Q) : floor_div(-(P + s + 1), -Q);
        push_convergent(out, a_k);
        P = a_k * Q - P;
        Q = (N - P * P) / Q;
        if (Q == 0) throw std::logic_error("cf_surd: value was rational");
    }
    return out;
}

// exact rational-interval agreement: prefix quotients shared by every value
// in [lo, hi]
int cf_interval(BigRat lo, BigRat hi, int depth, CfResult& out) {
    int emitted = 0;
    while (emitted < depth) {
        BigInt flo = floor_rat(lo), fhi = floor_rat(hi);
        if (flo != fhi) break;
        push_convergent(out, flo);
        ++emitted;
        BigRat rlo = lo - BigRat(flo), rhi = hi - BigRat(flo);
        if (rlo == 0 || rhi == 0) break;  // an endpoint is on a cylinder boundary
        lo = 1 / rhi;
        hi = 1 / rlo;
    }
    return emitted;
}

CfResult cf_refined(const RealSpec& x, int depth) {
    CfResult out;
    unsigned bits = 128;
    for (;;) {
        CfResult trial;
        RatInterval iv = x.enclosure(bits);
        int got = cf_interval(iv.lo, iv.hi, depth, trial);
        if (got >= depth) return trial;
        if (got > static_cast<int>(out.quotients.size())) out = trial;
        if (!x.refinable() || bits > bit_budget()) {
            out.complete = false;
            return out;
        }
        bits *= 2;
    }
}

}  // namespace

CfResult cf_expand(const RealSpec& x, int depth) {
    if (depth < 1) throw validation_error("cf_expand: depth must be positive");
    switch (x.kind()) {
        case RealSpec::Kind::rational:
            return cf_rational(x.rational_value(), depth);
        case RealSpec::Kind::surd:
            return cf_surd(x.surd_value(), depth);
        default:
            return cf_refined(x, depth);
    }
}

namespace {

// per-coordinate |q x_i - nearest integer| as an exact value
ExactVal coord_dist(const RealSpec& x, const BigInt& q) {
    switch (x.kind()) {
        case RealSpec::Kind::rational: {
            BigRat v = x.rational_value() * BigRat(q);
            BigRat d = v - BigRat(round_rat(v));
            return ExactVal(boost::multiprecision::abs(d));
        }
        case RealSpec::Kind::surd: {
            SurdVal v = x.surd_value().scale(BigRat(q));
            // nearest integer via floor of v + 1/2
            BigInt p = v.add_rat(BigRat(1, 2)).floor();
            return ExactVal(v.sub_rat(BigRat(p)).abs());
        }
        default: {
            RealSpec x2 = x;
            BigInt q2 = q;
            auto refine = [x2, q2](unsigned bits) {
                RatInterval iv = x2.enclosure(bits + 64);
                BigRat lo = iv.lo * BigRat(q2), hi = iv.hi * BigRat(q2);
                BigInt p = round_rat((lo + hi) / 2);
                BigRat a = lo - BigRat(p), b = hi - BigRat(p);
                // |value - p| over [a, b]
                BigRat alo = boost::multiprecision::abs(a), ahi = boost::multiprecision::abs(b);
                if (a <= 0 && b >= 0) return RatInterval{BigRat(0), alo > ahi ? alo : ahi};
                BigRat mn = alo < ahi ? alo : ahi, mx = alo > ahi ? alo : ahi;
                return RatInterval{mn, mx};
            };
            return ExactVal(refine, x.refinable());
        }
    }
}

ExactVal max_of(const ExactVal& a, const ExactVal& b) {
    int c = ExactVal::compare(a, b);
    return c >= 0 ? a : b;
}

}  // namespace

ExactVal dist_to_lattice(const Point& x, const BigInt& q) {
    if (x.empty()) throw validation_error("dist_to_lattice: empty point");
    if (q < 1) throw validation_error("dist_to_lattice: q must be >= 1");
    ExactVal best = coord_dist(x[0], q);
    for (std::size_t i = 1; i < x.size(); ++i) best = max_of(best, coord_dist(x[i], q));
    return best;
}

KappaEstimates kappa_exponents(const Point& x, std::uint64_t q_max, std::uint64_t window) {
    if (x.empty()) throw validation_error("kappa: empty point");
    if (q_max < 1 || window < 1 || window > q_max) throw validation_error("kappa: need q_max >= window >= 1");
    const int d = static_cast<int>(x.size());

    // minimize m_q = q * ||q x||^d exactly; take the d-th root once at the end
    std::optional<ExactVal> best, best_window;
    BigInt argmin = 1;
    std::uint64_t window_start = q_max - window + 1;
    for (std::uint64_t qi = 1; qi <= q_max; ++qi) {
        BigInt q(qi);
        ExactVal dist = dist_to_lattice(x, q);
        ExactVal m = dist;
        for (int k = 1; k < d; ++k) m = m.squared();  // d in {1,2}: dist or dist^2
        if (d > 2) throw unsupported_error("kappa: d > 2 not supported");
        m = m.scale(BigRat(q));
        if (!best || ExactVal::compare(m, *best) < 0) {
            best = m;
            argmin = q;
        }
        if (qi >= window_start && (!best_window || ExactVal::compare(m, *best_window) < 0)) best_window = m;
    }
    auto root = [&](const ExactVal& v) {
        RatInterval iv = v.enclosure(128);
        double lo = std::pow(std::max(0.0, to_double(iv.lo)), 1.0 / d);
        double hi = std::pow(to_double(iv.hi), 1.0 / d);
        return std::pair{0.5 * (lo + hi), 0.5 * (hi - lo) + 1e-15 * hi};
    };
    auto [ks, ks_err] = root(*best);
    auto [kw, kw_err] = root(*best_window);
    return {ks, kw, std::max(ks_err, kw_err), argmin};
}

DirichletSolution dirichlet_solve(const Point& x, const BigInt& Q) {
    if (x.empty()) throw validation_error("dirichlet: empty point");
    if (Q < 2) throw validation_error("dirichlet: Q must be >= 2");
    const int d = static_cast<int>(x.size());
    BigInt q_bound = pow_int(Q, static_cast<unsigned long>(d));  // q < Q^d
    BigRat thresh(1, Q);
    for (BigInt q = 1; q < q_bound; ++q) {
        bool ok = true;
        for (const auto& xi : x) {
            ExactVal dist = coord_dist(xi, q);
            if (ExactVal::compare(dist, ExactVal(thresh)) > 0) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        DirichletSolution out;
        out.q = q;
        for (const auto& xi : x) {
            switch (xi.kind()) {
                case RealSpec::Kind::rational:
                    out.p.push_back(round_rat(xi.rational_value() * BigRat(q)));
                    break;
                case RealSpec::Kind::surd:
                    out.p.push_back(xi.surd_value().scale(BigRat(q)).add_rat(BigRat(1, 2)).floor());
                    break;
                default: {
                    RatInterval iv = xi.enclosure(128);
                    out.p.push_back(round_rat(iv.mid() * BigRat(q)));
                    break;
                }
            }
        }
        return out;
    }
    throw std::logic_error("dirichlet: no solution below Q^d (contradicts the pigeon-hole bound)");
}

IrrationalityEstimate irrationality_exponent(const RealSpec& x, int depth) {
    if (x.is_rational()) throw domain_error("irrationality exponent undefined for rationals");
    if (depth < 2) throw validation_error("irrationality: depth must be >= 2");
    if (x.kind() == RealSpec::Kind::surd) {
        // periodic expansion, bounded quotients: tau = 1 + 1/d with d = 1
        CfResult cf = cf_expand(x, depth);
        return {2.0, true, static_cast<int>(cf.quotients.size())};
    }
    if (x.kind() == RealSpec::Kind::liouville) {
        // the partial sums p_k / b^{k!} are convergents: |x - p/q| < 1/q^2
        // holds because the tail is < 2 b^{-(k+1)!} <= b^{-2 k!}; their
        // denominator ratios are exactly (k+1)
        int b = x.liouville_base();
        (void)b;
        double best = 1.0;
        for (int k = 1; k + 1 <= depth; ++k) best = std::max(best, static_cast<double>(k + 1));
        return {1.0 + best, false, depth};
    }
    CfResult cf = cf_expand(x, depth);
    double best = 1.0;  // ratio floor: consecutive q grow, ratio > 1
    for (std::size_t k = 0; k + 1 < cf.convergents.size(); ++k) {
        const BigInt& qk = cf.convergents[k].second;
        const BigInt& qk1 = cf.convergents[k + 1].second;
        if (qk < 2) continue;  // log q_k = 0 gives no information
        double ratio = std::log(qk1.convert_to<double>()) / std::log(qk.convert_to<double>());
        best = std::max(best, ratio);
    }
    return {1.0 + best, false, static_cast<int>(cf.quotients.size())};
}

}  // namespace ubiq::num
