#include "ubiq/system.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ubiq/covering.hpp"
#include "ubiq/farey.hpp"
#include "ubiq/rng.hpp"

namespace ubiq::sys {

double RateSpec::eval(double h) const {
    double v = c * std::pow(h, -tau);
    if (log_exp != 0.0) v *= std::pow(std::log(std::exp(1.0) + h), log_exp);
    return v;
}

void RateSpec::validate() const {
    if (!(c > 0)) throw validation_error("rate: c must be positive");
    if (!(tau > 0)) throw validation_error("rate: tau must be positive");
}

Box Box::unit(int d) {
    Box b;
    b.lo.assign(d, 0.0);
    b.hi.assign(d, 1.0);
    return b;
}

Box Box::interval(double a, double b_) {
    Box b;
    b.lo = {a};
    b.hi = {b_};
    return b;
}

double Box::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
    return v;
}

void Box::validate() const {
    if (lo.empty() || lo.size() != hi.size()) throw validation_error("box: dimension mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i])) throw validation_error("box: empty side");
}

ApproxSystemSpec ApproxSystemSpec::hom_rational(int d, RateSpec psi, Box region) {
    ApproxSystemSpec s;
    s.kind = Kind::hom_rational;
    s.d = d;
    s.psi = psi;
    s.region = std::move(region);
    s.validate();
    return s;
}

ApproxSystemSpec ApproxSystemSpec::inhom_rational(int d, Point alpha, RateSpec psi, Box region) {
    ApproxSystemSpec s;
    s.kind = Kind::inhom_rational;
    s.d = d;
    s.alpha = std::move(alpha);
    s.psi = psi;
    s.region = std::move(region);
    s.validate();
    return s;
}

ApproxSystemSpec ApproxSystemSpec::algebraic(int degree, RateSpec psi, Box region) {
    ApproxSystemSpec s;
    s.kind = Kind::algebraic;
    s.d = 1;
    s.degree = degree;
    s.psi = psi;
    s.region = std::move(region);
    s.validate();
    return s;
}

ApproxSystemSpec ApproxSystemSpec::fractional_part(FracGen gen, seq::RadiusSeqSpec radii) {
    ApproxSystemSpec s;
    s.kind = Kind::fractional_part;
    s.d = 1;
    s.generator = std::move(gen);
    s.radii = std::move(radii);
    s.region = Box::interval(0.0, 1.0);
    s.validate();
    return s;
}

ApproxSystemSpec ApproxSystemSpec::random_uniform(Box region, seq::RadiusSeqSpec radii, std::uint64_t seed) {
    ApproxSystemSpec s;
    s.kind = Kind::random_uniform;
    s.d = region.dim();
    s.region = std::move(region);
    s.radii = std::move(radii);
    s.seed = seed;
    s.validate();
    return s;
}

ApproxSystemSpec ApproxSystemSpec::poisson(gauge::MeasureSpec nu, Box region, double rho_min, std::uint64_t seed) {
    ApproxSystemSpec s;
    s.kind = Kind::poisson;
    s.d = region.dim();
    s.nu = std::move(nu);
    s.region = std::move(region);
    s.rho_min = rho_min;
    s.seed = seed;
    s.validate();
    return s;
}

void ApproxSystemSpec::validate() const {
    if (d < 1) throw validation_error("system: d must be >= 1");
    region.validate();
    switch (kind) {
        case Kind::hom_rational:
            psi.validate();
            break;
        case Kind::inhom_rational:
            psi.validate();
            if (static_cast<int>(alpha.size()) != d) throw validation_error("system: alpha dimension mismatch");
            break;
        case Kind::algebraic:
            psi.validate();
            if (degree < 1 || degree > 4) throw validation_error("system: algebraic degree must lie in [1,4]");
            break;
        case Kind::fractional_part:
            radii.validate();
            if (generator.type == FracGen::Type::polynomial && generator.poly.empty())
                throw validation_error("system: polynomial generator without coefficients");
            if (generator.type == FracGen::Type::base_power && generator.base < 2)
                throw validation_error("system: base-power generator needs base >= 2");
            break;
        case Kind::random_uniform:
            radii.validate();
            break;
        case Kind::poisson:
            nu.validate();
            if (!gauge::in_rad_class(nu) && tail_mass(nu, rho_min) == 0)
                throw validation_error("system: poisson intensity degenerate");
            if (!(rho_min > 0 && rho_min <= 1)) throw validation_error("system: rho_min must lie in (0,1]");
            break;
    }
}

std::string ApproxSystemSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::hom_rational:
            os << "rationals d=" << d;
            break;
        case Kind::inhom_rational:
            os << "shifted rationals d=" << d;
            break;
        case Kind::algebraic:
            os << "algebraic deg<=" << degree;
            break;
        case Kind::fractional_part:
            os << "fractional parts";
            break;
        case Kind::random_uniform:
            os << "uniform random";
            break;
        case Kind::poisson:
            os << "poisson(" << nu.describe() << ")";
            break;
    }
    return os.str();
}

namespace {

bool in_open_box_exact(const std::vector<BigRat>& x, const Box& box) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(BigRat(box.lo[i]) < x[i] && x[i] < BigRat(box.hi[i]))) return false;
    }
    return true;
}

double height_exponent(int d) { return 1.0 + 1.0 / d; }

void enumerate_hom(const ApproxSystemSpec& sys, double height_max, std::uint64_t max_pairs, Enumeration& out) {
    const int d = sys.d;
    auto q_max = static_cast<std::int64_t>(std::floor(std::pow(height_max, d / (d + 1.0))));
    for (std::int64_t q = 1; q <= q_max; ++q) {
        double height = std::pow(static_cast<double>(q), height_exponent(d));
        if (height > height_max) break;
        double r = sys.psi.eval(static_cast<double>(q));
        if (d == 1) {
            BigInt lo = floor_rat(BigRat(sys.region.lo[0]) * q);
            BigInt hi = ceil_rat(BigRat(sys.region.hi[0]) * q);
            for (BigInt p = lo; p <= hi; ++p) {
                if (boost::multiprecision::gcd(boost::multiprecision::abs(p), BigInt(q)) != 1) continue;
                BigRat v(p, q);
                if (!in_open_box_exact({v}, sys.region)) continue;
                ApproxPair pair;
                pair.x = {RealSpec::rational(v)};
                pair.x_rat = {v};
                pair.r = r;
                pair.height = height;
                out.pairs.push_back(std::move(pair));
                if (out.pairs.size() >= max_pairs) {
                    out.truncated = true;
                    return;
                }
            }
        } else if (d == 2) {
            BigInt lo0 = floor_rat(BigRat(sys.region.lo[0]) * q), hi0 = ceil_rat(BigRat(sys.region.hi[0]) * q);
            BigInt lo1 = floor_rat(BigRat(sys.region.lo[1]) * q), hi1 = ceil_rat(BigRat(sys.region.hi[1]) * q);
            for (BigInt p0 = lo0; p0 <= hi0; ++p0) {
                for (BigInt p1 = lo1; p1 <= hi1; ++p1) {
                    BigInt g = boost::multiprecision::gcd(
                        boost::multiprecision::gcd(boost::multiprecision::abs(p0), boost::multiprecision::abs(p1)),
                        BigInt(q));
                    if (g != 1) continue;
                    BigRat v0(p0, q), v1(p1, q);
                    if (!in_open_box_exact({v0, v1}, sys.region)) continue;
                    ApproxPair pair;
                    pair.x = {RealSpec::rational(v0), RealSpec::rational(v1)};
                    pair.x_rat = {v0, v1};
                    pair.r = r;
                    pair.height = height;
                    out.pairs.push_back(std::move(pair));
                    if (out.pairs.size() >= max_pairs) {
                        out.truncated = true;
                        return;
                    }
                }
            }
        } else {
            throw unsupported_error("enumerate: d > 2 not supported for rational systems");
        }
    }
}

// exact canonical key for dedup of shifted rational points
std::string point_key(const Point& x) {
    std::string k;
    for (const auto& c : x) k += c.describe() + "|";
    return k;
}

void enumerate_inhom(const ApproxSystemSpec& sys, double height_max, std::uint64_t max_pairs, Enumeration& out) {
    const int d = sys.d;
    auto q_max = static_cast<std::int64_t>(std::floor(std::pow(height_max, d / (d + 1.0))));
    std::map<std::string, bool> seen;
    for (std::int64_t q = 1; q <= q_max; ++q) {
        double height = std::pow(static_cast<double>(q), height_exponent(d));
        if (height > height_max) break;
        double r = sys.psi.eval(static_cast<double>(q));
        // coordinate-wise integer ranges with (p + alpha)/q inside the open box
        std::vector<std::vector<BigInt>> ranges(d);
        for (int i = 0; i < d; ++i) {
            RatInterval a = sys.alpha[i].enclosure(96);
            BigInt plo = floor_rat(BigRat(sys.region.lo[i]) * q - a.hi) - 1;
            BigInt phi = ceil_rat(BigRat(sys.region.hi[i]) * q - a.lo) + 1;
            for (BigInt p = plo; p <= phi; ++p) ranges[i].push_back(p);
        }
        std::vector<std::size_t> idx(d, 0);
        for (;;) {
            Point x;
            bool inside = true;
            for (int i = 0; i < d && inside; ++i) {
                const BigInt& p = ranges[i][idx[i]];
                const RealSpec& ai = sys.alpha[i];
                RealSpec coord;
                if (ai.is_rational()) {
                    coord = RealSpec::rational((BigRat(p) + ai.rational_value()) / q);
                } else if (ai.kind() == RealSpec::Kind::surd) {
                    SurdVal v = ai.surd_value().add_rat(BigRat(p)).scale(BigRat(1, q));
                    coord = RealSpec::surd(v.a, v.b, v.c, v.D);
                } else {
                    throw unsupported_error("enumerate: inhomogeneous shift must be rational or quadratic");
                }
                // open-box membership, exact
                RatInterval iv = coord.enclosure(96);
                if (!(BigRat(sys.region.lo[i]) < iv.lo && iv.hi < BigRat(sys.region.hi[i]))) {
                    // exact boundary test for rationals; conservative reject otherwise
                    if (coord.is_rational()) {
                        BigRat v = coord.rational_value();
                        if (!(BigRat(sys.region.lo[i]) < v && v < BigRat(sys.region.hi[i]))) inside = false;
                    } else {
                        inside = false;
                    }
                }
                if (inside) x.push_back(std::move(coord));
            }
            if (inside) {
                std::string key = point_key(x);
                if (!seen.count(key)) {
                    seen[key] = true;
                    ApproxPair pair;
                    if (x[0].is_rational()) {
                        pair.x_rat.reserve(x.size());
                        for (auto& c : x) pair.x_rat.push_back(c.rational_value());
                    }
                    pair.x = std::move(x);
                    pair.r = r;
                    pair.height = height;
                    out.pairs.push_back(std::move(pair));
                    if (out.pairs.size() >= max_pairs) {
                        out.truncated = true;
                        return;
                    }
                }
            }
            int carry = d - 1;
            while (carry >= 0 && ++idx[carry] >= ranges[carry].size()) {
                idx[carry] = 0;
                --carry;
            }
            if (carry < 0) break;
        }
    }
}

// multiplier a_n for the fractional-part generators
BigInt frac_multiplier(const ApproxSystemSpec::FracGen& gen, std::uint64_t n) {
    using Type = ApproxSystemSpec::FracGen::Type;
    switch (gen.type) {
        case Type::linear:
            return BigInt(n);
        case Type::polynomial: {
            BigInt acc = 0, nn = n;
            for (std::size_t i = gen.poly.size(); i-- > 0;) acc = acc * nn + gen.poly[i];
            return acc;
        }
        case Type::base_power:
            return pow_int(gen.base, n);
        case Type::fast_growth:
            if (gen.growth == "factorial") {
                BigInt f = 1;
                for (std::uint64_t k = 2; k <= n; ++k) f *= k;
                return f;
            }
            // b^(n^2)
            return pow_int(gen.base, n * n);
    }
    return BigInt(n);
}

// exact fractional part of m * x as a RealSpec (rational/surd exact, a
// certified 60-digit decimal otherwise)
RealSpec frac_multiple(const RealSpec& x, const BigInt& m) {
    switch (x.kind()) {
        case RealSpec::Kind::rational:
            return RealSpec::rational(frac_rat(x.rational_value() * BigRat(m)));
        case RealSpec::Kind::surd: {
            SurdVal v = x.surd_value().scale(BigRat(m));
            SurdVal f = v.sub_rat(BigRat(v.floor()));
            return RealSpec::surd(f.a, f.b, f.c, f.D);
        }
        default: {
            RatInterval iv = x.enclosure(256);
            BigRat lo = iv.lo * BigRat(m), hi = iv.hi * BigRat(m);
            BigInt fl = floor_rat((lo + hi) / 2);
            double mid = to_double((lo + hi) / 2 - BigRat(fl));
            std::ostringstream os;
            os.precision(40);
            os << std::fixed << mid;
            return RealSpec::decimal(os.str(), 38);
        }
    }
}

void enumerate_fracpart(const ApproxSystemSpec& sys, double height_max, std::uint64_t max_pairs,
                        Enumeration& out) {
    auto n_max = static_cast<std::uint64_t>(std::floor(height_max));
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        ApproxPair pair;
        RealSpec v = frac_multiple(sys.generator.x, frac_multiplier(sys.generator, n));
        if (v.is_rational()) pair.x_rat = {v.rational_value()};
        pair.x = {std::move(v)};
        pair.r = sys.radii.term(n);
        pair.height = static_cast<double>(n);
        out.pairs.push_back(std::move(pair));
        if (out.pairs.size() >= max_pairs) {
            out.truncated = true;
            return;
        }
    }
}

void enumerate_random(const ApproxSystemSpec& sys, double height_max, std::uint64_t max_pairs,
                      Enumeration& out) {
    auto n_max = static_cast<std::uint64_t>(std::floor(height_max));
    CounterRng rng = CounterRng::keyed(sys.seed, "system.random");
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        ApproxPair pair;
        for (int i = 0; i < sys.d; ++i) {
            double u = rng.uniform(n * static_cast<std::uint64_t>(sys.d) + static_cast<std::uint64_t>(i));
            double v = sys.region.lo[i] + (sys.region.hi[i] - sys.region.lo[i]) * u;
            pair.x.push_back(RealSpec::from_double(v));
            pair.x_rat.push_back(BigRat(v));
        }
        pair.r = sys.radii.term(n);
        pair.height = static_cast<double>(n);
        out.pairs.push_back(std::move(pair));
        if (out.pairs.size() >= max_pairs) {
            out.truncated = true;
            return;
        }
    }
}

void enumerate_poisson(const ApproxSystemSpec& sys, double height_max, std::uint64_t max_pairs,
                       Enumeration& out) {
    cover::PoissonSample sample = cover::sample_poisson(sys.nu, sys.region, sys.rho_min, sys.seed);
    auto n_max = static_cast<std::uint64_t>(std::floor(height_max));
    for (std::size_t n = 0; n < sample.radii.size() && n < n_max; ++n) {
        ApproxPair pair;
        for (double c : sample.positions[n]) {
            pair.x.push_back(RealSpec::from_double(c));
            pair.x_rat.push_back(BigRat(c));
        }
        pair.r = sample.radii[n];
        pair.height = static_cast<double>(n + 1);
        out.pairs.push_back(std::move(pair));
        if (out.pairs.size() >= max_pairs) {
            out.truncated = true;
            return;
        }
    }
}

}  // namespace

Enumeration enumerate_system(const ApproxSystemSpec& sys, double height_max, std::uint64_t max_pairs) {
    sys.validate();
    if (!(height_max > 0)) throw validation_error("enumerate: height_max must be positive");
    Enumeration out;
    switch (sys.kind) {
        case ApproxSystemSpec::Kind::hom_rational:
            enumerate_hom(sys, height_max, max_pairs, out);
            break;
        case ApproxSystemSpec::Kind::inhom_rational:
            enumerate_inhom(sys, height_max, max_pairs, out);
            break;
        case ApproxSystemSpec::Kind::algebraic: {
            BigInt h_max = floor_rat(BigRat(height_max));
            auto roots = algebraic_roots(sys.degree, h_max, sys.region, max_pairs);
            out.truncated = roots.truncated;
            for (auto& a : roots.roots) {
                ApproxPair pair;
                pair.height = a.height.convert_to<double>();
                pair.r = sys.psi.eval(pair.height);
                if (a.value.is_rational()) pair.x_rat = {a.value.rational_value()};
                pair.x = {a.value};
                out.pairs.push_back(std::move(pair));
                if (out.pairs.size() >= max_pairs) {
                    out.truncated = true;
                    break;
                }
            }
            // enumeration order: height, then value
            std::stable_sort(out.pairs.begin(), out.pairs.end(), [](const ApproxPair& a, const ApproxPair& b) {
                if (a.height != b.height) return a.height < b.height;
                return a.x[0].to_double() < b.x[0].to_double();
            });
            break;
        }
        case ApproxSystemSpec::Kind::fractional_part:
            enumerate_fracpart(sys, height_max, max_pairs, out);
            break;
        case ApproxSystemSpec::Kind::random_uniform:
            enumerate_random(sys, height_max, max_pairs, out);
            break;
        case ApproxSystemSpec::Kind::poisson:
            enumerate_poisson(sys, height_max, max_pairs, out);
            break;
    }
    return out;
}

double inhom_height(const Point& a, const Point& alpha, int d, std::uint64_t q_budget) {
    if (a.size() != alpha.size() || static_cast<int>(a.size()) != d)
        throw validation_error("inhom_height: dimension mismatch");
    for (std::uint64_t q = 1; q <= q_budget; ++q) {
        bool integral = true;
        for (std::size_t i = 0; i < a.size() && integral; ++i) {
            // q a_i - alpha_i integral?
            if (a[i].is_rational() && alpha[i].is_rational()) {
                BigRat v = a[i].rational_value() * BigRat(q) - alpha[i].rational_value();
                integral = den(v) == 1;
            } else if (a[i].kind() == RealSpec::Kind::surd || alpha[i].kind() == RealSpec::Kind::surd) {
                // (q a - alpha) integral requires the irrational parts to cancel
                SurdVal av = a[i].kind() == RealSpec::Kind::surd ? a[i].surd_value()
                                                                 : SurdVal::from_rational(a[i].rational_value());
                SurdVal sv = alpha[i].kind() == RealSpec::Kind::surd
                                 ? alpha[i].surd_value()
                                 : SurdVal::from_rational(alpha[i].rational_value());
                SurdVal diff = av.scale(BigRat(q)).sub(sv);
                integral = diff.is_rational() && den(diff.rational_value()) == 1;
            } else {
                throw unsupported_error("inhom_height: unsupported coordinate kind");
            }
        }
        if (integral) return std::pow(static_cast<double>(q), 1.0 + 1.0 / d);
    }
    throw domain_error("inhom_height: point not in the shifted rational system within budget");
}

BigInt naive_height(const std::vector<BigInt>& minpoly) {
    BigInt h = 0;
    for (const auto& c : minpoly) h = std::max(h, boost::multiprecision::abs(c));
    return h;
}

double beresnevich_height(const std::vector<BigInt>& minpoly, double value, int n) {
    double H = naive_height(minpoly).convert_to<double>();
    return std::pow(H, n + 1) / std::pow(1.0 + std::abs(value), n * (n + 1));
}

namespace {

BigInt content(const std::vector<BigInt>& p) {
    BigInt g = 0;
    for (const auto& c : p) g = boost::multiprecision::gcd(g, boost::multiprecision::abs(c));
    return g;
}

BigRat eval_poly(const std::vector<BigInt>& p, const BigRat& x) {
    BigRat acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + BigRat(p[i]);
    return acc;
}

// exact rational-root test (candidates p/q with p | a0, q | lead)
bool has_rational_root(const std::vector<BigInt>& poly) {
    BigInt a0 = poly.front(), lead = poly.back();
    if (a0 == 0) return true;  // x = 0
    std::vector<BigInt> ps, qs;
    for (BigInt i = 1; i * i <= boost::multiprecision::abs(a0); ++i)
        if (a0 % i == 0) {
            ps.push_back(i);
            ps.push_back(boost::multiprecision::abs(a0) / i);
        }
    for (BigInt i = 1; i * i <= lead; ++i)
        if (lead % i == 0) {
            qs.push_back(i);
            qs.push_back(lead / i);
        }
    for (const auto& p : ps)
        for (const auto& q : qs) {
            BigRat r(p, q);
            if (eval_poly(poly, r) == 0 || eval_poly(poly, -r) == 0) return true;
        }
    return false;
}

// quartic factorization into two integer quadratics (finite divisor search)
bool quartic_splits(const std::vector<BigInt>& f) {
    const BigInt &f0 = f[0], &f1 = f[1], &f2 = f[2], &f3 = f[3], &f4 = f[4];
    std::vector<BigInt> lead_divs, const_divs;
    for (BigInt i = 1; i * i <= f4; ++i)
        if (f4 % i == 0) {
            lead_divs.push_back(i);
            lead_divs.push_back(f4 / i);
        }
    BigInt f0a = boost::multiprecision::abs(f0);
    if (f0a == 0) return true;  // rational root 0
    for (BigInt i = 1; i * i <= f0a; ++i)
        if (f0a % i == 0) {
            const_divs.push_back(i);
            const_divs.push_back(f0a / i);
        }
    for (const auto& a : lead_divs) {
        BigInt dd = f4 / a;
        for (const auto& cc : const_divs)
            for (int sc = -1; sc <= 1; sc += 2) {
                BigInt c = cc * sc;
                if (f0 % c != 0) continue;
                BigInt g = f0 / c;
                // solve a e + d b = f3 ; c e + g b = f1
                BigInt det = a * g - dd * c;
                if (det != 0) {
                    BigInt e_num = f3 * g - dd * f1, b_num = a * f1 - f3 * c;
                    if (e_num % det != 0 || b_num % det != 0) continue;
                    BigInt e = e_num / det, b = b_num / det;
                    if (a * g + b * e + c * dd == f2) return true;
                } else {
                    // degenerate: scan b over a safe bound
                    BigInt B = 4 * (boost::multiprecision::abs(f0) + boost::multiprecision::abs(f1) +
                                    boost::multiprecision::abs(f2) + boost::multiprecision::abs(f3) + f4 + 1);
                    for (BigInt b = -B; b <= B; ++b) {
                        BigInt e_num = f3 - b * dd;
                        if (e_num % a != 0) continue;
                        BigInt e = e_num / a;
                        if (c * e + g * b == f1 && a * g + b * e + c * dd == f2) return true;
                    }
                }
            }
    }
    return false;
}

// Sturm sequence root counting (exact rational arithmetic)
struct Sturm {
    std::vector<std::vector<BigRat>> seq;

    explicit Sturm(const std::vector<BigInt>& poly) {
        std::vector<BigRat> p0, p1;
        for (const auto& c : poly) p0.emplace_back(c);
        trim(p0);
        p1 = derivative(p0);
        seq.push_back(p0);
        if (!p1.empty()) seq.push_back(p1);
        while (seq.back().size() > 1) {
            auto r = neg_rem(seq[seq.size() - 2], seq.back());
            trim(r);
            if (r.empty()) break;
            seq.push_back(std::move(r));
        }
    }

    static void trim(std::vector<BigRat>& p) {
        while (!p.empty() && p.back() == 0) p.pop_back();
    }

    static std::vector<BigRat> derivative(const std::vector<BigRat>& p) {
        std::vector<BigRat> d;
        for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * BigRat(static_cast<long>(i)));
        trim(d);
        return d;
    }

    static std::vector<BigRat> neg_rem(std::vector<BigRat> a, const std::vector<BigRat>& b) {
        while (a.size() >= b.size() && !a.empty()) {
            BigRat f = a.back() / b.back();
            std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
            trim(a);
            if (a.size() >= b.size() && !a.empty() && a.back() == 0) trim(a);
        }
        for (auto& c : a) c = -c;
        return a;
    }

    static BigRat eval(const std::vector<BigRat>& p, const BigRat& x) {
        BigRat acc = 0;
        for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
        return acc;
    }

    int sign_changes(const BigRat& x) const {
        int changes = 0, last = 0;
        for (const auto& p : seq) {
            BigRat v = eval(p, x);
            int s = v == 0 ? 0 : (v > 0 ? 1 : -1);
            if (s == 0) continue;
            if (last != 0 && s != last) ++changes;
            last = s;
        }
        return changes;
    }

    // number of distinct real roots in (a, b]
    int count(const BigRat& a, const BigRat& b) const { return sign_changes(a) - sign_changes(b); }
};

// isolate all real roots of an irreducible poly inside (lo, hi), to interval
// width <= 2^-bits
std::vector<RatInterval> isolate_roots(const std::vector<BigInt>& poly, const BigRat& lo, const BigRat& hi,
                                       unsigned bits) {
    Sturm st(poly);
    std::vector<RatInterval> done;
    std::vector<std::pair<BigRat, BigRat>> stack{{lo, hi}};
    BigRat width_target = pow2_rat(-static_cast<long>(bits));
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        int n = st.count(a, b);
        if (n == 0) continue;
        if (n == 1 && b - a <= width_target) {
            done.push_back({a, b});
            continue;
        }
        BigRat m = (a + b) / 2;
        // keep endpoints off the roots (irreducible polys have irrational roots
        // unless degree 1, which is handled before isolation)
        stack.push_back({a, m});
        stack.push_back({m, b});
    }
    std::sort(done.begin(), done.end(), [](const RatInterval& x, const RatInterval& y) { return x.lo < y.lo; });
    return done;
}

}  // namespace

AlgebraicEnumeration algebraic_roots(int degree_bound, const BigInt& h_max, const Box& region,
                                     std::uint64_t budget) {
    if (degree_bound < 1 || degree_bound > 4) throw validation_error("algebraic_roots: degree must lie in [1,4]");
    region.validate();
    if (region.dim() != 1) throw validation_error("algebraic_roots: region must be one-dimensional");
    AlgebraicEnumeration out;
    if (h_max < 1) return out;
    BigRat lo(region.lo[0]), hi(region.hi[0]);
    std::uint64_t visited = 0;

    // degree 1: roots -a0/a1
    for (BigInt a1 = 1; a1 <= h_max; ++a1) {
        BigInt p_lo = floor_rat(lo * a1), p_hi = ceil_rat(hi * a1);
        for (BigInt a0 = -p_hi; a0 <= -p_lo; ++a0) {
            if (boost::multiprecision::abs(a0) > h_max) continue;
            if (boost::multiprecision::gcd(boost::multiprecision::abs(a0), a1) != 1) continue;
            BigRat root(-a0, a1);
            if (!(lo < root && root < hi)) continue;
            AlgebraicNumber num;
            num.minpoly = {a0, a1};
            num.degree = 1;
            num.height = naive_height(num.minpoly);
            num.value = RealSpec::rational(root);
            num.approx = to_double(root);
            out.roots.push_back(std::move(num));
            if (++visited > budget) {
                out.truncated = true;
                return out;
            }
        }
    }

    auto emit_poly = [&](const std::vector<BigInt>& poly, int deg) {
        if (deg == 2) {
            const BigInt &a0 = poly[0], &a1 = poly[1], &a2 = poly[2];
            BigInt disc = a1 * a1 - 4 * a2 * a0;
            if (disc <= 0 || is_perfect_square(disc)) return;  // no real irrational roots
            for (int sgn = -1; sgn <= 1; sgn += 2) {
                SurdVal root(-a1, sgn, 2 * a2, disc);
                // open-region membership, exact
                if (!(SurdVal::from_rational(lo).sub(root).sign() < 0 &&
                      root.sub(SurdVal::from_rational(hi)).sign() < 0))
                    continue;
                AlgebraicNumber num;
                num.minpoly = poly;
                num.degree = 2;
                num.height = naive_height(poly);
                num.value = RealSpec::surd(root.a, root.b, root.c, root.D);
                num.approx = root.to_double();
                out.roots.push_back(std::move(num));
            }
            return;
        }
        // degrees 3-4: certified isolating intervals
        for (const auto& iv : isolate_roots(poly, lo, hi, 80)) {
            // reject endpoints outside the open region (isolation already
            // bounded by [lo, hi]; only exact-boundary roots could slip, and
            // those would be rational, contradicting irreducibility)
            AlgebraicNumber num;
            num.minpoly = poly;
            num.degree = deg;
            num.height = naive_height(poly);
            double mid = to_double(iv.mid());
            std::ostringstream os;
            os.precision(30);
            os << std::fixed << mid;
            num.value = RealSpec::decimal(os.str(), 24);
            num.approx = mid;
            out.roots.push_back(std::move(num));
        }
    };

    for (int deg = 2; deg <= degree_bound; ++deg) {
        std::vector<BigInt> poly(deg + 1);
        std::vector<long> h = {h_max.convert_to<long>()};
        long H = h[0];
        // odometer over coefficients a_0..a_{deg-1} in [-H, H], lead in [1, H]
        std::vector<long> coef(deg + 1, -static_cast<long>(H));
        coef[deg] = 1;
        for (;;) {
            if (++visited > budget) {
                out.truncated = true;
                return out;
            }
            for (int i = 0; i <= deg; ++i) poly[i] = coef[i];
            bool keep = content(poly) == 1 && !has_rational_root(poly);
            if (keep && deg == 4) keep = !quartic_splits(poly);
            if (keep) emit_poly(poly, deg);
            int pos = 0;
            while (pos <= deg) {
                long cap = H;
                if (++coef[pos] <= cap) break;
                coef[pos] = pos == deg ? 1 : -H;
                if (pos == deg) { pos = deg + 1; break; }
                ++pos;
            }
            if (pos > deg) break;
        }
    }
    std::stable_sort(out.roots.begin(), out.roots.end(), [](const AlgebraicNumber& x, const AlgebraicNumber& y) {
        if (x.height != y.height) return x.height < y.height;
        return x.approx < y.approx;
    });
    return out;
}

namespace {

double sup_dist(const ApproxPair& a, const ApproxPair& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.x.size(); ++i) m = std::max(m, std::abs(a.x[i].to_double() - b.x[i].to_double()));
    return m;
}

}  // namespace

RegularOptimalReport regular_optimal_check(const ApproxSystemSpec& sys, const Box& ball, double h,
                                           double kappa_target, double kappa_prime_target) {
    ball.validate();
    if (ball.dim() != sys.d) throw validation_error("regular_optimal_check: ball dimension mismatch");
    Enumeration en = enumerate_system(sys, h);
    RegularOptimalReport rep;
    rep.truncated = en.truncated;
    std::vector<const ApproxPair*> members;
    for (const auto& p : en.pairs) {
        bool inside = true;
        for (int i = 0; i < sys.d; ++i) {
            double v = p.x[i].to_double();
            if (!(ball.lo[i] < v && v < ball.hi[i])) inside = false;
        }
        if (inside) members.push_back(&p);
    }
    rep.count = members.size();
    std::vector<const ApproxPair*> kept;
    const double sep = 1.0 / h;
    for (const auto* m : members) {
        bool ok = true;
        for (const auto* k : kept) {
            if (sup_dist(*m, *k) < sep) {
                ok = false;
                break;
            }
        }
        if (ok) kept.push_back(m);
    }
    rep.packing_count = kept.size();
    double diam = 0.0;  // sup-norm diameter of the box
    for (int i = 0; i < sys.d; ++i) diam = std::max(diam, ball.hi[i] - ball.lo[i]);
    double denom = std::pow(diam, sys.d) * std::pow(h, sys.d);
    rep.kappa_measured = static_cast<double>(rep.packing_count) / denom;
    rep.kappa_prime_measured = static_cast<double>(rep.count) / std::pow(h, sys.d);
    rep.regular_ok = static_cast<double>(rep.packing_count) >= kappa_target * denom;
    rep.optimal_ok = static_cast<double>(rep.count) <= kappa_prime_target * std::pow(h, sys.d);
    return rep;
}

gauge::DescribabilityVerdict system_describability(const ApproxSystemSpec& sys) {
    sys.validate();
    using V = gauge::DescribabilityVerdict;
    switch (sys.kind) {
        case ApproxSystemSpec::Kind::hom_rational:
        case ApproxSystemSpec::Kind::inhom_rational: {
            if (!sys.psi.is_pure_power())
                throw unsupported_error("system_describability: only pure power rates are supported");
            // I_{d,psi} = integral q^d psi(q)^d dq, psi = c q^-tau
            double tau = sys.psi.tau;
            if (tau <= 1.0 + 1.0 / sys.d) return V::lebesgue_full(sys.d);
            return V::nu_describable(gauge::MeasureSpec::power_law((sys.d + 1) / tau, sys.d));
        }
        case ApproxSystemSpec::Kind::algebraic: {
            if (!sys.psi.is_pure_power())
                throw unsupported_error("system_describability: only pure power rates are supported");
            // psi(h) = c h^-(omega+1); I_{n,psi} = integral h^n psi(h) dh
            double omega = sys.psi.tau - 1.0;
            int n = sys.degree;
            if (omega <= n) return V::lebesgue_full(1);
            return V::nu_describable(gauge::MeasureSpec::power_law((n + 1) / (omega + 1), 1));
        }
        case ApproxSystemSpec::Kind::fractional_part:
        case ApproxSystemSpec::Kind::random_uniform: {
            auto pd = seq::series_verdict(sys.radii, static_cast<double>(sys.d));
            if (pd > 0) return V::lebesgue_full(sys.d);
            if (pd < 0) return V::nu_describable(gauge::MeasureSpec::discrete(sys.radii, sys.d));
            throw unsupported_error("system_describability: radius series sits in the critical band");
        }
        case ApproxSystemSpec::Kind::poisson: {
            gauge::MeasureSpec nu = sys.nu;
            nu.d = sys.d;
            if (!gauge::in_rad_class(nu)) return V::lebesgue_full(sys.d);
            return V::nu_describable(nu);
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace ubiq::sys
