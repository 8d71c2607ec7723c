#include "ubiq/real.hpp"

#include <cstdlib>
#include <sstream>

namespace ubiq {

unsigned bit_budget() {
    static unsigned cached = [] {
        if (const char* env = std::getenv("UBIQLAB_BIT_BUDGET")) {
            long v = std::atol(env);
            if (v >= 64) return static_cast<unsigned>(v);
        }
        return 4096u;
    }();
    return cached;
}

namespace {

// Pull square factors out of D so that equal values share a representation.
void squarefree_split(BigInt& d, BigInt& outer) {
    outer = 1;
    for (BigInt p = 2; p * p <= d && p < 100000; ++p) {
        while (d % (p * p) == 0) {
            d /= p * p;
            outer *= p;
        }
    }
    // residual perfect square (large prime squared)
    BigInt s = isqrt_floor(d);
    if (s > 1 && s * s == d) {
        d = 1;
        outer *= s;
    }
}

}  // namespace

SurdVal::SurdVal(BigInt a_, BigInt b_, BigInt c_, BigInt D_) : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), D(std::move(D_)) {
    if (c == 0) throw validation_error("surd: zero denominator");
    if (c < 0) { a = -a; b = -b; c = -c; }
    if (b != 0) {
        if (D <= 0) throw validation_error("surd: D must be positive");
        BigInt outer;
        squarefree_split(D, outer);
        b *= outer;
        if (D == 1) { a += b; b = 0; D = 0; }
    }
    if (b == 0) D = 0;
    BigInt g = boost::multiprecision::gcd(boost::multiprecision::gcd(boost::multiprecision::abs(a), boost::multiprecision::abs(b)), c);
    if (g > 1) { a /= g; b /= g; c /= g; }
}

SurdVal SurdVal::from_rational(const BigRat& r) { return SurdVal(num(r), 0, den(r), 0); }

BigRat SurdVal::rational_value() const {
    if (!is_rational()) throw domain_error("surd: not rational");
    return BigRat(a, c);
}

int SurdVal::sign() const {
    // sign of a + b*sqrt(D)  (c > 0)
    if (b == 0) return a == 0 ? 0 : (a > 0 ? 1 : -1);
    if (a == 0) return b > 0 ? 1 : -1;
    if (a > 0 && b > 0) return 1;
    if (a < 0 && b < 0) return -1;
    BigInt a2 = a * a, b2d = b * b * D;
    if (a > 0) {  // b < 0 : sign of a^2 - b^2 D
        if (a2 == b2d) return 0;
        return a2 > b2d ? 1 : -1;
    }
    // a < 0, b > 0 : sign of b^2 D - a^2
    if (a2 == b2d) return 0;
    return b2d > a2 ? 1 : -1;
}

SurdVal SurdVal::add_rat(const BigRat& r) const {
    return SurdVal(a * den(r) + num(r) * c, b * den(r), c * den(r), D);
}

SurdVal SurdVal::scale(const BigRat& r) const {
    return SurdVal(a * num(r), b * num(r), c * den(r), D);
}

SurdVal SurdVal::sub(const SurdVal& o) const {
    if (!same_field(o)) throw domain_error("surd: mixed radicands");
    BigInt d = (b != 0) ? D : o.D;
    return SurdVal(a * o.c - o.a * c, b * o.c - o.b * c, c * o.c, d);
}

SurdVal SurdVal::square() const {
    // ((a + b sqrt(D))/c)^2 = (a^2 + b^2 D + 2ab sqrt(D)) / c^2
    return SurdVal(a * a + b * b * D, 2 * a * b, c * c, D);
}

BigInt SurdVal::floor() const {
    if (b == 0) return floor_div(a, c);
    // bracket b*sqrt(D) between consecutive integers
    BigInt t = b * b * D;
    BigInt s = isqrt_floor(t);  // s <= |b| sqrt(D) < s+1, never equal (D square-free > 1)
    BigInt lo_num = b > 0 ? a + s : a - s - 1;
    BigInt hi_num = b > 0 ? a + s + 1 : a - s;
    BigInt f_lo = floor_div(lo_num, c), f_hi = floor_div(hi_num, c);
    if (f_lo == f_hi) return f_lo;
    // the value is in [lo_num/c, hi_num/c] with exactly one integer boundary
    // candidate in between; settle by exact sign test against f_hi
    BigInt n = f_hi;
    int s_cmp = SurdVal(a - n * c, b, c, D).sign();
    return s_cmp >= 0 ? n : n - 1;
}

RatInterval SurdVal::enclosure(unsigned bits) const {
    if (b == 0) {
        BigRat v(a, c);
        return {v, v};
    }
    BigInt scale = BigInt(1) << bits;
    BigInt t = b * b * D * scale * scale;
    BigInt s = isqrt_floor(t);
    // |b| sqrt(D) in [s, s+1] / scale
    BigRat lo_r, hi_r;
    if (b > 0) {
        lo_r = (BigRat(a) + BigRat(s, scale)) / BigRat(c);
        hi_r = (BigRat(a) + BigRat(s + 1, scale)) / BigRat(c);
    } else {
        lo_r = (BigRat(a) - BigRat(s + 1, scale)) / BigRat(c);
        hi_r = (BigRat(a) - BigRat(s, scale)) / BigRat(c);
    }
    return {lo_r, hi_r};
}

RealSpec RealSpec::rational(BigRat v) {
    RealSpec r;
    r.kind_ = Kind::rational;
    r.rat_ = std::move(v);
    return r;
}

RealSpec RealSpec::surd(BigInt a, BigInt b, BigInt c, BigInt D) {
    SurdVal v(std::move(a), std::move(b), std::move(c), std::move(D));
    if (v.is_rational()) return rational(v.rational_value());
    RealSpec r;
    r.kind_ = Kind::surd;
    r.surd_ = std::move(v);
    return r;
}

RealSpec RealSpec::liouville(int base) {
    if (base < 2) throw validation_error("liouville: base must be >= 2");
    RealSpec r;
    r.kind_ = Kind::liouville;
    r.base_ = base;
    return r;
}

RealSpec RealSpec::decimal(const std::string& digits, int digits_after_point) {
    if (digits_after_point < 0) throw validation_error("decimal: negative precision");
    // parse [-]ddd[.ddd]
    std::string s = digits;
    bool neg = !s.empty() && s[0] == '-';
    if (neg || (!s.empty() && s[0] == '+')) s.erase(0, 1);
    auto dot = s.find('.');
    std::string intpart = dot == std::string::npos ? s : s.substr(0, dot);
    std::string fracpart = dot == std::string::npos ? "" : s.substr(dot + 1);
    if (intpart.empty() && fracpart.empty()) throw validation_error("decimal: empty literal");
    for (char ch : intpart + fracpart)
        if (ch < '0' || ch > '9') throw validation_error("decimal: bad digit");
    BigInt numv = intpart.empty() ? BigInt(0) : BigInt(intpart);
    BigInt denv = 1;
    for (char ch : fracpart) {
        numv = numv * 10 + (ch - '0');
        denv *= 10;
    }
    RealSpec r;
    r.kind_ = Kind::decimal;
    r.rat_ = BigRat(neg ? -numv : numv, denv);
    r.half_ulp_ = BigRat(1, 2 * pow_int(10, static_cast<unsigned long>(digits_after_point)));
    return r;
}

RealSpec RealSpec::from_double(double v) {
    // doubles are exact dyadic rationals
    return rational(BigRat(v));
}

bool RealSpec::is_rational() const { return kind_ == Kind::rational; }

BigRat RealSpec::rational_value() const {
    if (kind_ != Kind::rational) throw domain_error("real: not exactly rational");
    return rat_;
}

BigRat liouville_partial(int base, int terms) {
    BigRat s = 0;
    unsigned long f = 1;
    for (int k = 1; k <= terms; ++k) {
        f *= static_cast<unsigned long>(k);
        s += BigRat(1, pow_int(base, f));
    }
    return s;
}

int liouville_terms_for(int base, unsigned bits) {
    // need 2*base^{-(K+1)!} <= 2^{-bits}; base >= 2 so (K+1)! >= bits+1 suffices
    unsigned long f = 1;
    int k = 0;
    while (f < bits + 2) {
        ++k;
        f *= static_cast<unsigned long>(k + 1);
        if (k > 20) break;  // 21! overflows any sane budget anyway
    }
    return k;
}

RatInterval RealSpec::enclosure(unsigned bits) const {
    switch (kind_) {
        case Kind::rational:
            return {rat_, rat_};
        case Kind::surd:
            return surd_.enclosure(bits);
        case Kind::liouville: {
            int K = liouville_terms_for(base_, bits);
            BigRat lo = liouville_partial(base_, K);
            unsigned long f = 1;
            for (int k = 1; k <= K + 1; ++k) f *= static_cast<unsigned long>(k);
            BigRat tail = BigRat(2, pow_int(base_, f));
            return {lo, lo + tail};
        }
        case Kind::decimal:
            return {rat_ - half_ulp_, rat_ + half_ulp_};
    }
    throw std::logic_error("unreachable");
}

double RealSpec::to_double() const { return enclosure(64).to_double(); }

BigInt RealSpec::floor_exact() const {
    switch (kind_) {
        case Kind::rational:
            return floor_rat(rat_);
        case Kind::surd:
            return surd_.floor();
        case Kind::liouville: {
            // irrational, so some finite enclosure decides the floor
            for (unsigned bits = 64;; bits *= 2) {
                RatInterval iv = enclosure(bits);
                if (floor_rat(iv.lo) == floor_rat(iv.hi)) return floor_rat(iv.lo);
                if (bits > bit_budget()) throw precision_exhausted("liouville floor undecided");
            }
        }
        case Kind::decimal: {
            RatInterval iv = enclosure(0);
            if (floor_rat(iv.lo) == floor_rat(iv.hi)) return floor_rat(iv.lo);
            throw precision_exhausted("decimal floor straddles an integer");
        }
    }
    throw std::logic_error("unreachable");
}

std::string RealSpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::rational:
            os << num(rat_) << "/" << den(rat_);
            break;
        case Kind::surd:
            os << "(" << surd_.a << "+" << surd_.b << "*sqrt(" << surd_.D << "))/" << surd_.c;
            break;
        case Kind::liouville:
            os << "sum " << base_ << "^-k!";
            break;
        case Kind::decimal:
            os << "decimal(" << to_double() << ")";
            break;
    }
    return os.str();
}

ExactVal::ExactVal(BigRat v) : tag_(Tag::rational), rat_(std::move(v)) {}

ExactVal::ExactVal(SurdVal v) {
    if (v.is_rational()) {
        tag_ = Tag::rational;
        rat_ = v.rational_value();
    } else {
        tag_ = Tag::surd;
        surd_ = std::move(v);
    }
}

ExactVal::ExactVal(std::function<RatInterval(unsigned)> refiner, bool refinable)
    : tag_(Tag::interval), refine_(std::move(refiner)), refinable_(refinable) {}

bool ExactVal::is_rational() const { return tag_ == Tag::rational; }

BigRat ExactVal::rational_value() const {
    if (tag_ != Tag::rational) throw domain_error("exact value: not rational");
    return rat_;
}

RatInterval ExactVal::enclosure(unsigned bits) const {
    switch (tag_) {
        case Tag::rational:
            return {rat_, rat_};
        case Tag::surd:
            return surd_.enclosure(bits);
        case Tag::interval:
            return refine_(bits);
    }
    throw std::logic_error("unreachable");
}

int ExactVal::sign(unsigned budget) const {
    if (tag_ == Tag::rational) return rat_ == 0 ? 0 : (rat_ > 0 ? 1 : -1);
    if (tag_ == Tag::surd) return surd_.sign();
    if (budget == 0) budget = bit_budget();
    for (unsigned bits = 64;; bits *= 2) {
        RatInterval iv = refine_(bits);
        if (iv.lo > 0) return 1;
        if (iv.hi < 0) return -1;
        if (!refinable_ || bits > budget) throw precision_exhausted("sign undecided within bit budget");
    }
}

int ExactVal::compare(const ExactVal& x, const ExactVal& y, unsigned budget) {
    if (x.tag_ == Tag::rational && y.tag_ == Tag::rational)
        return x.rat_ == y.rat_ ? 0 : (x.rat_ > y.rat_ ? 1 : -1);
    if (x.tag_ == Tag::surd && y.tag_ == Tag::rational)
        return x.surd_.sub(SurdVal::from_rational(y.rat_)).sign();
    if (x.tag_ == Tag::rational && y.tag_ == Tag::surd)
        return -y.surd_.sub(SurdVal::from_rational(x.rat_)).sign();
    if (x.tag_ == Tag::surd && y.tag_ == Tag::surd && x.surd_.same_field(y.surd_))
        return x.surd_.sub(y.surd_).sign();
    // distinct square-free radicands (or opaque intervals): values coincide
    // only if a nontrivial algebraic relation holds, which the square-free
    // normalization rules out for surds; refine until separated
    if (budget == 0) budget = bit_budget();
    for (unsigned bits = 64;; bits *= 2) {
        RatInterval ix = x.enclosure(bits), iy = y.enclosure(bits);
        if (ix.hi < iy.lo) return -1;
        if (iy.hi < ix.lo) return 1;
        bool can_refine = (x.tag_ != Tag::interval || x.refinable_) && (y.tag_ != Tag::interval || y.refinable_);
        if (!can_refine || bits > budget) throw precision_exhausted("comparison undecided within bit budget");
    }
}

ExactVal ExactVal::scale(const BigRat& r) const {
    switch (tag_) {
        case Tag::rational:
            return ExactVal(rat_ * r);
        case Tag::surd:
            return ExactVal(surd_.scale(r));
        case Tag::interval: {
            auto f = refine_;
            bool rf = refinable_;
            BigRat rr = r;
            return ExactVal(
                [f, rr](unsigned bits) {
                    // widen the request so the scaled width still meets 2^-bits
                    RatInterval iv = f(bits + 64);
                    if (rr >= 0) return RatInterval{iv.lo * rr, iv.hi * rr};
                    return RatInterval{iv.hi * rr, iv.lo * rr};
                },
                rf);
        }
    }
    throw std::logic_error("unreachable");
}

ExactVal ExactVal::squared() const {
    switch (tag_) {
        case Tag::rational:
            return ExactVal(rat_ * rat_);
        case Tag::surd:
            return ExactVal(surd_.square());
        case Tag::interval: {
            auto f = refine_;
            bool rf = refinable_;
            return ExactVal(
                [f](unsigned bits) {
                    RatInterval iv = f(bits + 64);
                    BigRat alo = boost::multiprecision::abs(iv.lo), ahi = boost::multiprecision::abs(iv.hi);
                    BigRat mx = alo > ahi ? alo : ahi;
                    BigRat mn = (iv.lo <= 0 && iv.hi >= 0) ? BigRat(0) : (alo < ahi ? alo : ahi);
                    return RatInterval{mn * mn, mx * mx};
                },
                rf);
        }
    }
    throw std::logic_error("unreachable");
}

double ExactVal::to_double() const { return enclosure(64).to_double(); }

}  // namespace ubiq
