#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ubiq/real.hpp"
#include "ubiq/system.hpp"

namespace ubiq::eutaxy {

// Half-open dyadic cube 2^-gen (k + [0,1)^d).
struct DyadicCube {
    int gen = 0;
    std::vector<BigInt> k;

    int dim() const { return static_cast<int>(k.size()); }
    static DyadicCube unit(int d) { return {0, std::vector<BigInt>(d, BigInt(0))}; }
    bool contains(const DyadicCube& sub) const;  // sub nested in *this
    std::string describe() const;
};

// Generation-j cube containing x (exact; throws precision_exhausted when a
// decimal coordinate straddles a cube boundary).
DyadicCube cube_of(const Point& x, int j);

// Indexed point source x_1, x_2, ... with exact cube placement.
class PointSource {
public:
    virtual ~PointSource() = default;
    virtual int dim() const = 0;
    // index tuple of the generation-`gen` cube containing x_n
    virtual std::vector<BigInt> cube_index(std::uint64_t n, int gen) const = 0;
    virtual std::string describe() const = 0;
};

// {a_n x} for the fractional-part generators (multiplier rule from the
// system spec), exact for rational/surd/liouville x.
std::unique_ptr<PointSource> fractional_part_source(const sys::ApproxSystemSpec::FracGen& gen);
// independent uniforms in [0,1)^d (counter rng)
std::unique_ptr<PointSource> uniform_source(int d, std::uint64_t seed);
// fixed list of points (e.g. a monotone system enumeration)
std::unique_ptr<PointSource> list_source(std::vector<Point> points);

// #M(lambda, j): generation-(<lambda>+j) subcubes of lambda hit by some x_n
// with n <= 2^{d(<lambda>+j)}.
std::uint64_t count_m(const PointSource& pts, const DyadicCube& lambda, int j,
                      std::uint64_t budget = (1ull << 26), unsigned threads = 1);

struct EutaxyProfile {
    DyadicCube base;
    int j_max = 0;
    unsigned window = 4;
    std::vector<std::uint64_t> counts;      // index j = 0..j_max
    std::vector<double> normalized;         // 2^{-dj} * count
    double trailing_min = 0.0;              // liminf proxy: min over the last `window`
    bool decreasing_trend = false;          // nonincreasing across the window
    // single-cube profiles approximate the uniform (all-cubes) condition;
    // flagged for reports
    std::string note = "single-cube profile; liminf proxy = trailing-window minimum";
};

EutaxyProfile eutaxy_profile(const PointSource& pts, const DyadicCube& lambda, int j_max, unsigned window = 4,
                             std::uint64_t budget = (1ull << 26), unsigned threads = 1);

struct EutaxyThresholds {
    double low = 0.02;    // SufficientHolds at or above
    double zero = 0.005;  // NecessaryFails at or below (with decreasing trend)
};

enum class EutaxyVerdict { sufficient_holds, necessary_fails, inconclusive };

const char* to_string(EutaxyVerdict v);

// Desk-scale heuristic verdict from a profile.
EutaxyVerdict eutaxy_verdict(const EutaxyProfile& profile, const EutaxyThresholds& thresholds = {});

}  // namespace ubiq::eutaxy
