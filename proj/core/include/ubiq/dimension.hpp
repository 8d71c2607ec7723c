#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ubiq/gauge.hpp"
#include "ubiq/system.hpp"

namespace ubiq::dim {

// Critical exponent s_U of sum r_i^s over the members meeting the region.
struct CoveringExponent {
    double value = 0.0;
    std::string method;  // "analytic" or "partial-sum-regression"
    double residual = 0.0;
};

CoveringExponent covering_exponent(const sys::ApproxSystemSpec& sys, const sys::Box& region,
                                   const std::vector<double>& height_grid = {});

// Tail of sum g(2 r_i) over members with height >= from_height; a convergent
// verdict carries decreasing partial tails as the zero-measure witness.
struct TailGaugeSum {
    enum class Kind { converges, diverges, indeterminate } kind;
    std::vector<double> partial_tails;  // decreasing witnesses (convergent case)
    std::string method;
};

TailGaugeSum tail_gauge_sum(const sys::ApproxSystemSpec& sys, const gauge::GaugeSpec& g, double from_height,
                            double height_budget = 1e6);

// Disjoint closed balls B(x_i, r_i) inside V with r_i <= rho, greedy in
// enumeration order, stopping at total measure >= vol(V) / (2*3^d).
struct Packing {
    struct Ball {
        BigRat center;
        BigRat radius;
        double height;
    };
    std::vector<Ball> balls;
    double total_measure = 0.0;
    double target = 0.0;
    bool shortfall = false;
};

Packing greedy_packing(const sys::ApproxSystemSpec& sys, const sys::Box& v, double rho,
                       std::uint64_t budget = 4'000'000);

// Finite-depth ubiquity construction.  Node compacts are I_u = B_u^t (the
// concentric closed ball of radius r^t / 2); strict mode enforces the
// doubly-exponential diameter clause, relaxed mode caps the per-node radius
// bound at max(paper value, diam(I_u)/4) and keeps the rest.
enum class CantorMode { strict, relaxed };

struct CantorNode {
    int parent = -1;
    std::vector<int> children;
    BigRat center;
    BigRat ball_radius;       // r_{i_u}, exact
    double compact_radius;    // r^t / 2
    double zeta;              // node mass
    int depth = 0;            // generations below the root
};

struct CantorTree {
    std::vector<CantorNode> nodes;  // nodes[0] is the root
    int d = 1;
    double t = 1.5;
    int depth = 0;
    CantorMode mode = CantorMode::relaxed;

    struct ConditionReport {
        bool every_node_has_child = true;     // (0)
        bool root_mass_formula = true;        // (1)
        bool nested_compacts = true;          // (2)
        bool diameter_clause = true;          // (3), diameter part (strict only)
        bool disjoint_siblings = true;        // (3), disjointness
        bool sibling_measure_bound = true;    // (3), measure part
        bool mass_additivity = true;          // (4)
        std::vector<std::string> failures;
        bool all(bool strict_mode) const {
            return every_node_has_child && root_mass_formula && nested_compacts && disjoint_siblings &&
                   sibling_measure_bound && mass_additivity && (!strict_mode || diameter_clause);
        }
    };

    ConditionReport check_conditions(double rel_tol = 1e-12) const;
    // per-generation branching minima and sibling-gap minima for the
    // dimension lower bound
    std::vector<std::uint64_t> branching_minima() const;   // m_j, j = 1..depth
    std::vector<double> separation_minima() const;         // eps_j, j = 1..depth
};

// Root ball is the largest ball centered in V with diameter < 1; aborts
// with the offending node path on a packing shortfall.
CantorTree build_cantor(const sys::ApproxSystemSpec& sys, double t, const sys::Box& v, int depth,
                        CantorMode mode = CantorMode::relaxed, std::uint64_t node_budget = 400'000);

// zeta-mass of the minimal node cover of B intersected with the tree limit;
// requires diam(B) < e^{-d/t}.
double mass_of_ball(const CantorTree& tree, double center, double radius);

// Lower-bound formula dim >= liminf log(m_1...m_{j-1}) / -log(m_j^{1/d} eps_j).
struct MinDimInput {
    // explicit finite sequences (m_j, eps_j), j = 1..J
    std::vector<std::uint64_t> m;
    std::vector<double> eps;
    // or the parametric family m_j = m, eps_j = ratio^j, evaluated in closed form
    std::optional<std::pair<std::uint64_t, double>> parametric;  // (m, ratio)
};

struct MinDimBound {
    double value = 0.0;
    bool closed_form = false;
    std::vector<double> ratios;  // per-j values for explicit inputs
};

MinDimBound mindim_bound(const MinDimInput& input, int d, std::uint64_t j_eval = 0);

// Minimal dyadic-cover cost of a finite union of cubes/intervals, exhaustive
// over generations [g0-1, g0+search_depth].
struct TargetSet {
    // closed intervals [lo, hi] in d = 1 (cubes enter as their closures)
    std::vector<std::pair<BigRat, BigRat>> intervals;
};

double net_mass_upper(const TargetSet& target, const gauge::GaugeSpec& g, int search_depth, int d = 1);
double net_mass_upper_power(const TargetSet& target, double s, int search_depth);

// Least-squares slope of log2(occupied cells) against generation.
struct BoxDimension {
    double slope = 0.0;
    double residual = 0.0;
    double half_band = 0.0;  // 95% confidence half-width on the slope
    bool degenerate = false;
};

BoxDimension box_dimension(const std::vector<std::pair<int, std::uint64_t>>& occupancy);

// Occupied generation-j cells of a union of balls from an enumeration.
std::uint64_t occupied_cells(const std::vector<std::pair<double, double>>& balls, int j);

}  // namespace ubiq::dim
