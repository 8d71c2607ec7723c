#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ubiq/gauge.hpp"
#include "ubiq/sequence.hpp"

namespace ubiq::sys {
struct Box;
}

namespace ubiq::cover {

// Shepp sums S_N = sum_{n<=N} n^-2 exp(2(r_1+...+r_n)).
struct SheppResult {
    enum class Verdict { diverges, converges, indeterminate };
    Verdict verdict = Verdict::indeterminate;
    std::string method;                          // "analytic" or "tail-regression"
    std::vector<std::pair<std::uint64_t, double>> partial_sums;  // at requested checkpoints
};

SheppResult shepp_series(const seq::RadiusSeqSpec& r, const std::vector<std::uint64_t>& checkpoints);

// Dvoretzky-style simulation report.
struct CoverReport {
    int resolution = 0;              // grid generation j
    std::uint64_t trials = 0;
    std::uint64_t n_balls = 0;
    bool torus = false;
    std::vector<double> covered_fraction;           // per trial, exact interval-union measure
    std::vector<std::uint64_t> hit_histogram;       // grid-center hit counts, aggregated
    std::vector<std::pair<std::uint64_t, double>> tail_coverage;  // (m, mean fraction covered by balls n >= m)
    double mean_covered = 0.0;
    double mean_uncovered = 0.0;

    std::string to_json() const;  // canonical serialization (determinism checks)
};

// Independent uniform covering simulation on an interval (d = 1), exact
// per-trial covered measure plus grid-center occupancy; reproducible per
// seed and independent of `threads`.
CoverReport simulate_uniform(const sys::Box& box, const seq::RadiusSeqSpec& radii, std::uint64_t n_balls,
                             int resolution, std::uint64_t trials, std::uint64_t seed, bool torus = false,
                             unsigned threads = 1);

// A draw of the truncated Poisson configuration: radii nonincreasing in
// (rho_min, 1], positions uniform in the box.
struct PoissonSample {
    std::vector<double> radii;
    std::vector<std::vector<double>> positions;
    double intensity = 0.0;  // Phi_nu(rho_min) * vol(U)
    std::uint64_t seed = 0;
};

PoissonSample sample_poisson(const gauge::MeasureSpec& nu, const sys::Box& box, double rho_min,
                             std::uint64_t seed);

struct IntensityRow {
    double rho;
    double empirical_mean;
    double expected;
    double z_score;
};

std::vector<IntensityRow> poisson_intensity_check(const gauge::MeasureSpec& nu, const sys::Box& box,
                                                  const std::vector<double>& rho_grid, std::uint64_t trials,
                                                  std::uint64_t seed);

// Levy-measure utilities: pushforward of the magnitude measure under
// z -> z^{1/alpha}, and the moment-finiteness exponent
// beta = inf{ gamma >= 0 : <j, z^gamma> finite }.
gauge::MeasureSpec levy_pushforward(const gauge::MeasureSpec& jmeasure, double alpha);
double blumenthal_getoor(const gauge::MeasureSpec& jmeasure);

}  // namespace ubiq::cover
