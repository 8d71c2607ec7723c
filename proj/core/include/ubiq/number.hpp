#pragma once

#include <optional>
#include <vector>

#include "ubiq/real.hpp"

namespace ubiq::num {

struct CfResult {
    std::vector<BigInt> quotients;                    // a_0; a_1, a_2, ...
    std::vector<std::pair<BigInt, BigInt>> convergents;  // (p_k, q_k)
    bool complete = true;  // false when precision ran out before `depth` terms
    bool terminated = false;  // rational input, expansion is finite
};

// Continued-fraction expansion: Euclid for rationals, the periodic (P,Q,N)
// recurrence for quadratic surds, exact rational-interval agreement for the
// rest.  Every emitted quotient is certified.
CfResult cf_expand(const RealSpec& x, int depth);

// ||q x||_infty: sup-norm distance of q*x to the integer lattice.
ExactVal dist_to_lattice(const Point& x, const BigInt& q);

struct KappaEstimates {
    double kappa_star;       // min over q <= q_max of q^{1/d} ||q x||
    double kappa;            // min over the trailing window (liminf proxy)
    double abs_error;        // certified enclosure half-width of the reported values
    BigInt argmin_q;         // where kappa_star is attained
};

// kappa_* and a trailing-window liminf proxy for kappa, both from exact
// minimization of q * ||q x||^d.
KappaEstimates kappa_exponents(const Point& x, std::uint64_t q_max, std::uint64_t window);

struct DirichletSolution {
    std::vector<BigInt> p;
    BigInt q;
};

// Smallest q in [1, Q^d) with ||q x|| <= 1/Q and the witnessing integer
// point; existence is guaranteed by the pigeon-hole bound.
DirichletSolution dirichlet_solve(const Point& x, const BigInt& Q);

struct IrrationalityEstimate {
    double tau_hat;   // 1 + max_k log q_{k+1} / log q_k over certified convergents
    bool exact;       // true when bounded partial quotients force tau = 2
    int certified_terms;
};

// Certified lower bound on the irrationality exponent (exact 2.0 for
// bounded-quotient inputs such as quadratic surds).
IrrationalityEstimate irrationality_exponent(const RealSpec& x, int depth);

}  // namespace ubiq::num
