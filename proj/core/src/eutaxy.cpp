#include "ubiq/eutaxy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "ubiq/rng.hpp"

namespace ubiq::eutaxy {

bool DyadicCube::contains(const DyadicCube& sub) const {
    if (sub.gen < gen || sub.dim() != dim()) return false;
    int shift = sub.gen - gen;
    for (int i = 0; i < dim(); ++i)
        if ((sub.k[i] >> shift) != k[i]) return false;
    return true;
}

std::string DyadicCube::describe() const {
    std::ostringstream os;
    os << gen << ":";
    for (int i = 0; i < dim(); ++i) os << (i ? "," : "") << k[i];
    return os.str();
}

namespace {

// floor(2^j * x) for one exact coordinate
BigInt scaled_floor(const RealSpec& x, int j) {
    switch (x.kind()) {
        case RealSpec::Kind::rational: {
            BigRat v = x.rational_value();
            return j >= 0 ? floor_rat(v * BigRat(BigInt(1) << j)) : floor_rat(v / BigRat(BigInt(1) << (-j)));
        }
        case RealSpec::Kind::surd: {
            SurdVal v = x.surd_value().scale(j >= 0 ? BigRat(BigInt(1) << j) : BigRat(1, BigInt(1) << (-j)));
            return v.floor();
        }
        default: {
            // refinement loop; boundary straddling raises precision_exhausted
            for (unsigned bits = 96;; bits *= 2) {
                RatInterval iv = x.enclosure(bits);
                BigRat scale = j >= 0 ? BigRat(BigInt(1) << j) : BigRat(1, BigInt(1) << (-j));
                BigInt flo = floor_rat(iv.lo * scale), fhi = floor_rat(iv.hi * scale);
                if (flo == fhi) return flo;
                if (!x.refinable() || bits > bit_budget())
                    throw precision_exhausted("cube boundary unresolved at the bit budget");
            }
        }
    }
}

}  // namespace

DyadicCube cube_of(const Point& x, int j) {
    if (x.empty()) throw validation_error("cube_of: empty point");
    DyadicCube c;
    c.gen = j;
    c.k.reserve(x.size());
    for (const auto& coord : x) c.k.push_back(scaled_floor(coord, j));
    return c;
}

namespace {

// {m x} with exact floor arithmetic per kind; returns the generation-G cube
// coordinate floor(2^G {m x})
BigInt frac_cube_coord(const RealSpec& x, const BigInt& m, int G) {
    switch (x.kind()) {
        case RealSpec::Kind::rational: {
            BigRat v = frac_rat(x.rational_value() * BigRat(m));
            return floor_rat(v * BigRat(BigInt(1) << G));
        }
        case RealSpec::Kind::surd: {
            SurdVal v = x.surd_value().scale(BigRat(m));
            SurdVal f = v.sub_rat(BigRat(v.floor()));
            return f.scale(BigRat(BigInt(1) << G)).floor();
        }
        case RealSpec::Kind::liouville: {
            // partial sum + strictly positive tail; grow the partial sum
            // until the scaled floor is certified
            int base = x.liouville_base();
            for (int terms = 3;; ++terms) {
                unsigned long f = 1;
                for (int k = 1; k <= terms; ++k) f *= static_cast<unsigned long>(k);
                if (f > 100000) throw precision_exhausted("liouville cube coordinate unresolved");
                BigRat partial = liouville_partial(base, terms);
                unsigned long fn = f * static_cast<unsigned long>(terms + 1);
                BigRat tail_hi = BigRat(2, pow_int(base, fn));  // 0 < tail < tail_hi
                BigRat lo = frac_rat(partial * BigRat(m));
                BigRat scale(BigInt(1) << G);
                BigRat tail_scaled = tail_hi * BigRat(m) * scale;
                BigRat s_lo = lo * scale;
                BigInt flo = floor_rat(s_lo);
                // value in [s_lo, s_lo + tail_scaled); certified if no
                // boundary in between (an integral s_lo stays certified:
                // the true value sits just above the boundary)
                if (s_lo == BigRat(flo)) return flo % (BigInt(1) << G) >= 0 ? flo : flo;  // exact boundary, tail pushes inside
                if (floor_rat(s_lo + tail_scaled) == flo) return flo;
            }
        }
        default: {
            RealSpec shifted = x;  // decimal: compute via enclosure once
            for (unsigned bits = 128;; bits *= 2) {
                RatInterval iv = shifted.enclosure(bits);
                BigRat lo = frac_rat(iv.lo * BigRat(m));
                BigRat hi = lo + (iv.hi - iv.lo) * BigRat(m);
                BigRat scale(BigInt(1) << G);
                BigInt flo = floor_rat(lo * scale), fhi = floor_rat(hi * scale);
                if (flo == fhi) return flo;
                if (!shifted.refinable() || bits > bit_budget())
                    throw precision_exhausted("cube coordinate unresolved at the bit budget");
            }
        }
    }
}

BigInt frac_multiplier_rule(const sys::ApproxSystemSpec::FracGen& gen, std::uint64_t n) {
    using Type = sys::ApproxSystemSpec::FracGen::Type;
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
        case Type::fast_growth: {
            if (gen.growth == "factorial") {
                BigInt f = 1;
                for (std::uint64_t k = 2; k <= n; ++k) f *= k;
                return f;
            }
            return pow_int(gen.base, n * n);
        }
    }
    return BigInt(n);
}

class FracPartSource final : public PointSource {
public:
    explicit FracPartSource(sys::ApproxSystemSpec::FracGen gen) : gen_(std::move(gen)) {}
    int dim() const override { return 1; }
    std::vector<BigInt> cube_index(std::uint64_t n, int g) const override {
        return {frac_cube_coord(gen_.x, frac_multiplier_rule(gen_, n), g)};
    }
    std::string describe() const override { return "fractional parts"; }

private:
    sys::ApproxSystemSpec::FracGen gen_;
};

class UniformSource final : public PointSource {
public:
    UniformSource(int d, std::uint64_t seed) : d_(d), rng_(CounterRng::keyed(seed, "eutaxy.uniform")) {}
    int dim() const override { return d_; }
    std::vector<BigInt> cube_index(std::uint64_t n, int g) const override {
        std::vector<BigInt> k(d_);
        for (int i = 0; i < d_; ++i) {
            double u = rng_.uniform(n * static_cast<std::uint64_t>(d_) + static_cast<std::uint64_t>(i));
            k[i] = floor_rat(BigRat(u) * BigRat(BigInt(1) << g));  // u is exact dyadic
        }
        return k;
    }
    std::string describe() const override { return "uniform random points"; }

private:
    int d_;
    CounterRng rng_;
};

class ListSource final : public PointSource {
public:
    explicit ListSource(std::vector<Point> pts) : pts_(std::move(pts)) {
        if (pts_.empty()) throw validation_error("list source: no points");
    }
    int dim() const override { return static_cast<int>(pts_[0].size()); }
    std::vector<BigInt> cube_index(std::uint64_t n, int g) const override {
        // a finite list repeats its last point beyond the end (indices past
        // the data cannot create new hits in fresh cubes deterministically);
        // callers stay within range in practice
        const Point& p = pts_[std::min<std::uint64_t>(n, pts_.size()) - 1];
        return cube_of(p, g).k;
    }
    std::string describe() const override { return "point list"; }

private:
    std::vector<Point> pts_;
};

}  // namespace

std::unique_ptr<PointSource> fractional_part_source(const sys::ApproxSystemSpec::FracGen& gen) {
    return std::make_unique<FracPartSource>(gen);
}

std::unique_ptr<PointSource> uniform_source(int d, std::uint64_t seed) {
    return std::make_unique<UniformSource>(d, seed);
}

std::unique_ptr<PointSource> list_source(std::vector<Point> points) {
    return std::make_unique<ListSource>(std::move(points));
}

std::uint64_t count_m(const PointSource& pts, const DyadicCube& lambda, int j, std::uint64_t budget,
                      unsigned threads) {
    if (j < 0) throw validation_error("count_m: j must be nonnegative");
    const int d = pts.dim();
    if (lambda.dim() != d) throw validation_error("count_m: cube dimension mismatch");
    const int G = lambda.gen + j;
    if (static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(G) > 40)
        throw budget_exceeded("count_m: generation too deep");
    const std::uint64_t n_max = 1ull << (d * G);
    if (n_max > budget) throw budget_exceeded("count_m: index bound exceeds budget");
    const std::uint64_t cells = 1ull << (d * j);

    auto relative_cell = [&](const std::vector<BigInt>& k) -> std::int64_t {
        // position within lambda, or -1 if outside
        std::uint64_t idx = 0;
        for (int i = 0; i < d; ++i) {
            BigInt rel = k[i] - (lambda.k[i] << j);
            if (rel < 0 || rel >= (BigInt(1) << j)) return -1;
            idx = (idx << j) | rel.convert_to<std::uint64_t>();
        }
        return static_cast<std::int64_t>(idx);
    };

    auto scan = [&](std::uint64_t n0, std::uint64_t n1, std::vector<bool>& hit) {
        for (std::uint64_t n = n0; n <= n1; ++n) {
            std::int64_t cell = relative_cell(pts.cube_index(n, G));
            if (cell >= 0) hit[static_cast<std::size_t>(cell)] = true;
        }
    };

    std::vector<bool> hit(cells, false);
    if (threads <= 1 || n_max < 1024) {
        scan(1, n_max, hit);
    } else {
        std::vector<std::vector<bool>> parts(threads, std::vector<bool>(cells, false));
        std::vector<std::thread> pool;
        std::uint64_t chunk = (n_max + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            std::uint64_t a = 1 + w * chunk, b = std::min(n_max, a + chunk - 1);
            if (a > b) break;
            pool.emplace_back(scan, a, b, std::ref(parts[w]));
        }
        for (auto& th : pool) th.join();
        for (const auto& p : parts)
            for (std::size_t i = 0; i < cells; ++i)
                if (p[i]) hit[i] = true;
    }
    std::uint64_t count = 0;
    for (bool b : hit) count += b ? 1 : 0;
    return count;
}

EutaxyProfile eutaxy_profile(const PointSource& pts, const DyadicCube& lambda, int j_max, unsigned window,
                             std::uint64_t budget, unsigned threads) {
    if (j_max < 0) throw validation_error("eutaxy_profile: j_max must be nonnegative");
    if (window < 1) throw validation_error("eutaxy_profile: window must be >= 1");
    EutaxyProfile out;
    out.base = lambda;
    out.j_max = j_max;
    out.window = window;
    const int d = pts.dim();
    for (int j = 0; j <= j_max; ++j) {
        std::uint64_t c = count_m(pts, lambda, j, budget, threads);
        out.counts.push_back(c);
        out.normalized.push_back(static_cast<double>(c) / std::pow(2.0, d * j));
    }
    std::size_t from = out.normalized.size() > window ? out.normalized.size() - window : 0;
    double mn = out.normalized[from];
    bool decr = true;
    for (std::size_t i = from; i < out.normalized.size(); ++i) {
        mn = std::min(mn, out.normalized[i]);
        if (i > from && out.normalized[i] > out.normalized[i - 1] + 1e-12) decr = false;
    }
    out.trailing_min = mn;
    out.decreasing_trend = decr;
    return out;
}

const char* to_string(EutaxyVerdict v) {
    switch (v) {
        case EutaxyVerdict::sufficient_holds:
            return "sufficient-holds";
        case EutaxyVerdict::necessary_fails:
            return "necessary-fails";
        case EutaxyVerdict::inconclusive:
            return "inconclusive";
    }
    return "?";
}

EutaxyVerdict eutaxy_verdict(const EutaxyProfile& profile, const EutaxyThresholds& th) {
    if (!(th.zero < th.low)) throw validation_error("eutaxy_verdict: thresholds must leave a band");
    if (profile.trailing_min >= th.low) return EutaxyVerdict::sufficient_holds;
    if (profile.trailing_min <= th.zero && profile.decreasing_trend) return EutaxyVerdict::necessary_fails;
    return EutaxyVerdict::inconclusive;
}

}  // namespace ubiq::eutaxy
