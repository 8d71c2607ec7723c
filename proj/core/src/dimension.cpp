#include "ubiq/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "ubiq/farey.hpp"

namespace ubiq::dim {

CoveringExponent covering_exponent(const sys::ApproxSystemSpec& sys, const sys::Box& region,
                                   const std::vector<double>& height_grid) {
    sys.validate();
    region.validate();
    CoveringExponent out;
    using Kind = sys::ApproxSystemSpec::Kind;
    if ((sys.kind == Kind::hom_rational || sys.kind == Kind::inhom_rational) && sys.psi.is_pure_power()) {
        // sum over q of q^d (c q^-tau)^s: critical at tau s = d + 1
        out.value = (sys.d + 1) / sys.psi.tau;
        out.method = "analytic";
        return out;
    }
    if (sys.kind == Kind::algebraic && sys.psi.is_pure_power()) {
        // sum over heights h of h^{n-1} * #… ~ h^n psi(h)^s
        out.value = (sys.degree + 1) / sys.psi.tau;
        out.method = "analytic";
        return out;
    }
    if ((sys.kind == Kind::fractional_part || sys.kind == Kind::random_uniform)) {
        double s = seq::critical_exponent(sys.radii, sys.d);
        out.value = s;
        out.method = "analytic";
        return out;
    }
    // partial-sum regression over the height grid: fit log N(rho) ~ -s log rho
    std::vector<double> grid = height_grid;
    if (grid.empty()) grid = {64, 128, 256, 512, 1024};
    std::vector<std::pair<double, double>> pts;  // (log r, log count of radii >= r)
    double hmax = *std::max_element(grid.begin(), grid.end());
    auto en = sys::enumerate_system(sys, hmax);
    std::vector<double> radii;
    for (const auto& p : en.pairs) {
        bool inside = true;
        for (int i = 0; i < sys.d; ++i) {
            double v = p.x[i].to_double();
            if (!(region.lo[i] < v && v < region.hi[i])) inside = false;
        }
        if (inside) radii.push_back(p.r);
    }
    std::sort(radii.begin(), radii.end(), std::greater<>());
    if (radii.size() < 8) {
        out.value = 0.0;  // finite system
        out.method = "analytic";
        return out;
    }
    for (std::size_t k = 7; k < radii.size(); k += std::max<std::size_t>(1, radii.size() / 32)) {
        if (radii[k] <= 0) break;
        pts.emplace_back(std::log(radii[k]), std::log(static_cast<double>(k + 1)));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = static_cast<double>(pts.size());
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.value = std::max(0.0, -slope);
    out.method = "partial-sum-regression";
    double mean_res = 0;
    for (auto& [x, y] : pts) {
        double pred = (sy - slope * sx) / n + slope * x;
        mean_res += (y - pred) * (y - pred);
    }
    out.residual = std::sqrt(mean_res / std::max(1.0, n - 2));
    return out;
}

TailGaugeSum tail_gauge_sum(const sys::ApproxSystemSpec& sys, const gauge::GaugeSpec& g, double from_height,
                            double height_budget) {
    sys.validate();
    g.validate();
    TailGaugeSum out;
    using Kind = sys::ApproxSystemSpec::Kind;
    bool family_gauge =
        g.family == gauge::GaugeSpec::Family::power || g.family == gauge::GaugeSpec::Family::powerlog;
    // analytic verdict for rational power systems and family gauges:
    // sum_q q^d g(2 c q^-tau)
    if ((sys.kind == Kind::hom_rational || sys.kind == Kind::inhom_rational) && sys.psi.is_pure_power() &&
        family_gauge) {
        double u = g.s, t = g.family == gauge::GaugeSpec::Family::powerlog ? g.t : 0.0;
        double expo = sys.psi.tau * u - sys.d;  // term ~ q^{-expo} log^t
        bool conv = expo > 1 || (expo == 1 && t < -1);
        out.kind = conv ? TailGaugeSum::Kind::converges : TailGaugeSum::Kind::diverges;
        out.method = "analytic";
        if (!conv) return out;
    } else if (sys.kind == Kind::algebraic && sys.psi.is_pure_power() && family_gauge) {
        double u = g.s;
        double expo = sys.psi.tau * u - sys.degree;
        bool conv = expo > 1;
        out.kind = conv ? TailGaugeSum::Kind::converges : TailGaugeSum::Kind::diverges;
        out.method = "analytic";
        if (!conv) return out;
    } else {
        out.method = "partial-sum";
    }
    // partial tails over the enumerated range
    auto en = sys::enumerate_system(sys, height_budget);
    std::vector<double> terms;
    for (const auto& p : en.pairs)
        if (p.height >= from_height) terms.push_back(g.eval(std::min(1.0, 2.0 * p.r)));
    if (terms.empty()) {
        out.kind = TailGaugeSum::Kind::converges;
        out.partial_tails = {0.0};
        if (out.method == "partial-sum") out.method = "empty-tail";
        return out;
    }
    // suffix sums at a few anchor points, which decrease for a convergent tail
    std::vector<double> suffix(terms.size() + 1, 0.0);
    for (std::size_t i = terms.size(); i-- > 0;) suffix[i] = suffix[i + 1] + terms[i];
    for (std::size_t k = 0; k < 6; ++k) {
        std::size_t at = k * terms.size() / 6;
        out.partial_tails.push_back(suffix[at]);
    }
    if (out.method == "partial-sum") {
        // crude decision: compare the last two dyadic blocks
        double first_half = suffix[0] - suffix[terms.size() / 2];
        double second_half = suffix[terms.size() / 2];
        if (second_half < 0.05 * first_half)
            out.kind = TailGaugeSum::Kind::converges;
        else if (second_half > 0.5 * first_half)
            out.kind = TailGaugeSum::Kind::diverges;
        else
            out.kind = TailGaugeSum::Kind::indeterminate;
    }
    return out;
}

namespace {

// candidate fractions p/q inside the open interval with psi(q) <= rho_cap,
// ball contained in the interval, coprime by construction
struct Candidate {
    farey::Frac f;
    BigRat radius;
    double height;
};

// exact radius psi(q) = c q^-tau for integer tau and rational c; falls back
// to double otherwise
BigRat exact_power_radius(const sys::RateSpec& psi, const BigInt& q) {
    double tau = psi.tau;
    auto tau_i = static_cast<long>(tau);
    if (tau == static_cast<double>(tau_i) && tau_i >= 1 && psi.c == 1.0)
        return BigRat(1, pow_int(q, static_cast<unsigned long>(tau_i)));
    // rational approximation of the double radius (exact dyadic)
    return BigRat(psi.eval(q.convert_to<double>()));
}

BigInt min_denominator_for(const sys::ApproxSystemSpec& sys, const BigRat& rho_cap) {
    double rho_d = to_double(rho_cap);
    double q_min_d = std::pow(sys.psi.c / rho_d, 1.0 / sys.psi.tau);
    BigInt q_min = ceil_rat(BigRat(std::max(1.0, q_min_d)));
    while (exact_power_radius(sys.psi, q_min) > rho_cap) ++q_min;
    while (q_min > 1 && exact_power_radius(sys.psi, q_min - 1) <= rho_cap) --q_min;
    return q_min;
}

std::vector<Candidate> rational_candidates(const sys::ApproxSystemSpec& sys, const BigRat& lo, const BigRat& hi,
                                           const BigRat& rho_cap, const BigInt& q_max, std::uint64_t budget,
                                           bool* truncated) {
    if (sys.kind != sys::ApproxSystemSpec::Kind::hom_rational || sys.d != 1)
        throw unsupported_error("interval enumeration requires the one-dimensional rational system");
    BigInt q_min = min_denominator_for(sys, rho_cap);
    std::vector<Candidate> out;
    std::uint64_t visited = 0;
    farey::Walker walk(lo, hi, q_max);
    farey::Frac f;
    while (walk.next(&f)) {
        if (++visited > budget) {
            *truncated = true;
            break;
        }
        if (f.q < q_min) continue;
        BigRat r = exact_power_radius(sys.psi, f.q);
        if (r > rho_cap) continue;
        BigRat v = f.value();
        if (!(lo < v - r && v + r < hi)) continue;  // closed ball inside the open interval
        out.push_back({f, r, std::pow(f.q.convert_to<double>(), 2.0)});
    }
    // greedy order: height (i.e. q), then position
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        if (a.f.q != b.f.q) return a.f.q < b.f.q;
        return BigRat(a.f.p, a.f.q) < BigRat(b.f.p, b.f.q);
    });
    return out;
}



// greedy disjoint selection until the measure target is met
struct SelectResult {
    std::vector<Candidate> picked;
    double total = 0.0;
    bool reached = false;
};

SelectResult greedy_select(std::vector<Candidate> candidates, double target, std::uint64_t max_children) {
    SelectResult res;
    std::vector<std::pair<BigRat, BigRat>> taken;  // [c-r, c+r]
    for (auto& c : candidates) {
        BigRat v = c.f.value();
        BigRat a = v - c.radius, b = v + c.radius;
        bool ok = true;
        for (auto& [ta, tb] : taken) {
            if (!(b < ta || tb < a)) {  // closed balls must be disjoint
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        taken.emplace_back(a, b);
        res.total += 2.0 * to_double(c.radius);
        res.picked.push_back(std::move(c));
        if (res.total >= target) {
            res.reached = true;
            break;
        }
        if (res.picked.size() >= max_children) break;
    }
    return res;
}

// enumerate-and-select with denominator doubling until the measure target is
// met or the budget runs out
SelectResult packed_selection(const sys::ApproxSystemSpec& sys, const BigRat& lo, const BigRat& hi,
                              const BigRat& rho_cap, double target, std::uint64_t budget, bool* truncated) {
    BigInt q_min = min_denominator_for(sys, rho_cap);
    BigInt q_max = q_min * 4;
    SelectResult best;
    for (int round = 0; round < 12; ++round) {
        bool trunc = false;
        auto cands = rational_candidates(sys, lo, hi, rho_cap, q_max, budget, &trunc);
        SelectResult sel = greedy_select(std::move(cands), target, budget);
        if (sel.total > best.total) best = std::move(sel);
        if (best.reached || trunc) {
            if (truncated) *truncated = trunc;
            return best;
        }
        q_max *= 4;
    }
    return best;
}

}  // namespace

Packing greedy_packing(const sys::ApproxSystemSpec& sys, const sys::Box& v, double rho,
                       std::uint64_t budget) {
    v.validate();
    if (v.dim() != 1) throw unsupported_error("greedy_packing: only d = 1 is supported");
    if (!(rho > 0)) throw domain_error("greedy_packing: rho must be positive");
    BigRat lo(v.lo[0]), hi(v.hi[0]);
    double target = v.volume() / (2.0 * std::pow(3.0, v.dim()));
    bool truncated = false;
    if (sys.kind == sys::ApproxSystemSpec::Kind::hom_rational && sys.d == 1) {
        SelectResult sel = packed_selection(sys, lo, hi, BigRat(rho), target, budget, &truncated);
        Packing out;
        out.target = target;
        out.total_measure = sel.total;
        out.shortfall = !sel.reached;
        for (auto& c : sel.picked) out.balls.push_back({c.f.value(), c.radius, c.height});
        return out;
    }
    std::vector<Candidate> cands;
    {
        // generic route via height enumeration
        auto en = sys::enumerate_system(sys, 1e6, budget);
        truncated = en.truncated;
        for (const auto& p : en.pairs) {
            if (p.r > rho || p.x_rat.empty()) continue;
            BigRat c = p.x_rat[0], r(p.r);
            if (!(lo < c - r && c + r < hi)) continue;
            Candidate cd;
            cd.f = {num(c), den(c)};
            cd.radius = r;
            cd.height = p.height;
            cands.push_back(std::move(cd));
        }
        std::stable_sort(cands.begin(), cands.end(),
                         [](const Candidate& a, const Candidate& b) { return a.height < b.height; });
    }
    SelectResult sel = greedy_select(std::move(cands), target, budget);
    Packing out;
    out.target = target;
    out.total_measure = sel.total;
    out.shortfall = !sel.reached;
    for (auto& c : sel.picked) out.balls.push_back({c.f.value(), c.radius, c.height});
    return out;
}

namespace {

double log_paper_rho(int d, double t, double compact_diam) {
    // log of exp(-(2*6^d/t) * diam^{d(1/t-1)-1}); stays finite in log space
    double expo = d * (1.0 / t - 1.0) - 1.0;
    return -(2.0 * std::pow(6.0, d) / t) * std::pow(compact_diam, expo);
}

}  // namespace

CantorTree build_cantor(const sys::ApproxSystemSpec& sys, double t, const sys::Box& v, int depth,
                        CantorMode mode, std::uint64_t node_budget) {
    sys.validate();
    v.validate();
    if (!(t > 1.0)) throw validation_error("build_cantor: t must exceed 1");
    if (depth < 0) throw validation_error("build_cantor: depth must be nonnegative");
    if (v.dim() != 1) throw unsupported_error("build_cantor: only d = 1 is supported");

    CantorTree tree;
    tree.d = 1;
    tree.t = t;
    tree.depth = depth;
    tree.mode = mode;

    // root: a ball centered in V with diameter in (0,1)
    double vol = v.volume();
    double root_diam = std::min(0.9, vol * 0.9);
    CantorNode root;
    root.center = (BigRat(v.lo[0]) + BigRat(v.hi[0])) / 2;
    root.ball_radius = BigRat(root_diam / 2.0);  // root has no generating ball; store the compact radius
    root.compact_radius = root_diam / 2.0;
    root.zeta = std::pow(root_diam, 1.0 / t) * std::log(1.0 / root_diam);
    root.depth = 0;
    tree.nodes.push_back(root);

    std::vector<int> frontier{0};
    for (int level = 1; level <= depth; ++level) {
        std::vector<int> next;
        for (int u : frontier) {
            double diam_u = 2.0 * tree.nodes[u].compact_radius;
            double log_rho = log_paper_rho(1, t, diam_u);
            double rho;
            if (mode == CantorMode::strict) {
                if (log_rho < std::log(1e-300))
                    throw budget_exceeded("build_cantor: strict-mode radius bound underflows at node depth " +
                                          std::to_string(level));
                rho = std::exp(log_rho);
            } else {
                double paper = log_rho > std::log(1e-300) ? std::exp(log_rho) : 0.0;
                rho = std::max({paper, diam_u / 4.0, std::pow(2.0, -40.0)});
            }
            BigRat c = tree.nodes[u].center;
            BigRat half(tree.nodes[u].compact_radius);
            bool truncated = false;
            double target = diam_u / 6.0;  // vol(I_u) / (2*3^d), d = 1
            SelectResult sel = packed_selection(sys, c - half, c + half, BigRat(rho), target, node_budget, &truncated);
            if (!sel.reached) {
                std::ostringstream path;
                path << "node depth " << level - 1 << " center " << to_double(c);
                throw budget_exceeded("build_cantor: packing shortfall at " + path.str() +
                                      (truncated ? " (enumeration truncated)" : ""));
            }
            for (auto& cd : sel.picked) {
                CantorNode n;
                n.parent = u;
                n.center = cd.f.value();
                n.ball_radius = cd.radius;
                double r = to_double(cd.radius);
                n.compact_radius = std::pow(r, t) / 2.0;
                n.depth = level;
                tree.nodes[u].children.push_back(static_cast<int>(tree.nodes.size()));
                next.push_back(static_cast<int>(tree.nodes.size()));
                tree.nodes.push_back(std::move(n));
                if (tree.nodes.size() > node_budget)
                    throw budget_exceeded("build_cantor: node budget exceeded");
            }
            // masses: children split the parent mass by ball measure
            double sum = 0.0;
            for (int ch : tree.nodes[u].children) sum += 2.0 * to_double(tree.nodes[ch].ball_radius);
            for (int ch : tree.nodes[u].children) {
                tree.nodes[ch].zeta =
                    tree.nodes[u].zeta * (2.0 * to_double(tree.nodes[ch].ball_radius)) / sum;
            }
        }
        frontier = std::move(next);
    }
    return tree;
}

CantorTree::ConditionReport CantorTree::check_conditions(double rel_tol) const {
    ConditionReport rep;
    auto fail = [&](const std::string& why) { rep.failures.push_back(why); };

    // (1) root mass formula
    double root_diam = 2.0 * nodes[0].compact_radius;
    double expect = std::pow(root_diam, d / t) * std::log(1.0 / root_diam);
    if (std::abs(nodes[0].zeta - expect) > rel_tol * std::max(1.0, std::abs(expect))) {
        rep.root_mass_formula = false;
        fail("root mass formula");
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const CantorNode& n = nodes[i];
        bool leaf = n.children.empty();
        // (0) non-leaf nodes below the built depth always have children by
        // construction; interior childless nodes are a violation
        if (leaf && n.depth < depth) {
            rep.every_node_has_child = false;
            fail("childless interior node");
        }
        if (n.parent >= 0) {
            const CantorNode& p = nodes[n.parent];
            double r = to_double(n.ball_radius);
            // (2) I_u = B_u^t subset of B_u subset of I_parent
            if (!(n.compact_radius < r)) {
                rep.nested_compacts = false;
                fail("compact not inside its ball");
            }
            double off = std::abs(to_double(n.center - p.center));
            if (off + r > p.compact_radius * (1.0 + rel_tol)) {
                rep.nested_compacts = false;
                fail("ball leaks out of the parent compact");
            }
            // (3) diameter clause
            double lr = log_paper_rho(d, t, 2.0 * p.compact_radius);
            if (std::log(std::max(r, 1e-320)) > lr + rel_tol) rep.diameter_clause = false;
        }
        if (!leaf) {
            // (3) disjoint siblings + measure bound, (4) mass additivity
            double sum_measure = 0.0, sum_zeta = 0.0;
            for (std::size_t a = 0; a < n.children.size(); ++a) {
                const CantorNode& ca = nodes[n.children[a]];
                sum_measure += 2.0 * to_double(ca.ball_radius);
                sum_zeta += ca.zeta;
                for (std::size_t b = a + 1; b < n.children.size(); ++b) {
                    const CantorNode& cb = nodes[n.children[b]];
                    BigRat gap = boost::multiprecision::abs(ca.center - cb.center) - ca.ball_radius - cb.ball_radius;
                    if (gap < 0) {
                        rep.disjoint_siblings = false;
                        fail("sibling balls overlap");
                    }
                }
            }
            double need = 2.0 * n.compact_radius / (2.0 * std::pow(3.0, d));
            if (sum_measure < need * (1.0 - rel_tol)) {
                rep.sibling_measure_bound = false;
                fail("sibling measure bound");
            }
            if (std::abs(sum_zeta - n.zeta) > rel_tol * std::max(1.0, std::abs(n.zeta))) {
                rep.mass_additivity = false;
                fail("children masses do not sum to the parent mass");
            }
        }
    }
    return rep;
}

std::vector<std::uint64_t> CantorTree::branching_minima() const {
    std::vector<std::uint64_t> m(static_cast<std::size_t>(depth), UINT64_MAX);
    for (const auto& n : nodes) {
        if (n.depth < depth && !n.children.empty()) {
            auto j = static_cast<std::size_t>(n.depth);  // children live at generation depth+1
            m[j] = std::min(m[j], static_cast<std::uint64_t>(n.children.size()));
        }
    }
    return m;
}

std::vector<double> CantorTree::separation_minima() const {
    // eps_j = min pairwise distance between generation-j compacts
    std::vector<double> eps(static_cast<std::size_t>(depth), std::numeric_limits<double>::infinity());
    std::map<int, std::vector<const CantorNode*>> by_depth;
    for (const auto& n : nodes) by_depth[n.depth].push_back(&n);
    for (int j = 1; j <= depth; ++j) {
        const auto& gen = by_depth[j];
        double mn = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < gen.size(); ++a)
            for (std::size_t b = a + 1; b < gen.size(); ++b) {
                double dist = std::abs(to_double(gen[a]->center - gen[b]->center)) - gen[a]->compact_radius -
                              gen[b]->compact_radius;
                mn = std::min(mn, std::max(dist, 0.0));
            }
        eps[static_cast<std::size_t>(j - 1)] = mn;
    }
    return eps;
}

double mass_of_ball(const CantorTree& tree, double center, double radius) {
    double diam = 2.0 * radius;
    if (!(diam < std::exp(-tree.d / tree.t))) throw domain_error("mass_of_ball: ball too large");
    // minimal node cover of B intersect the limit set
    double total = 0.0;
    std::vector<int> stack{0};
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        const CantorNode& n = tree.nodes[u];
        double c = to_double(n.center), r = n.compact_radius;
        if (c + r < center - radius || c - r > center + radius) continue;  // disjoint
        bool contained = center - radius <= c - r && c + r <= center + radius;
        if (contained || n.children.empty()) {
            total += n.zeta;
            continue;
        }
        for (int ch : n.children) stack.push_back(ch);
    }
    return total;
}

MinDimBound mindim_bound(const MinDimInput& input, int d, std::uint64_t j_eval) {
    if (d < 1) throw validation_error("mindim_bound: d must be >= 1");
    MinDimBound out;
    if (input.parametric) {
        auto [m, ratio] = *input.parametric;
        if (m < 1) throw domain_error("mindim_bound: branching must be positive");
        if (!(ratio > 0 && ratio < 1)) throw domain_error("mindim_bound: separation ratio must lie in (0,1)");
        // liminf of (j-1) log m / (j log(1/ratio) - (1/d) log m) = log m / log(1/ratio)
        out.value = m == 1 ? 0.0 : std::log(static_cast<double>(m)) / std::log(1.0 / ratio);
        out.closed_form = true;
        (void)j_eval;
        return out;
    }
    const auto& m = input.m;
    const auto& eps = input.eps;
    if (m.size() != eps.size() || m.empty()) throw validation_error("mindim_bound: sequence length mismatch");
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] < 1) throw domain_error("mindim_bound: branching must be positive");
        if (!(eps[i] > 0)) throw domain_error("mindim_bound: separations must be positive");
        if (i > 0 && eps[i] >= eps[i - 1]) throw domain_error("mindim_bound: separations must be decreasing");
    }
    double log_prod = 0.0;  // log(m_1 ... m_{j-1})
    for (std::size_t j = 1; j <= m.size(); ++j) {
        double denom = -std::log(std::pow(static_cast<double>(m[j - 1]), 1.0 / d) * eps[j - 1]);
        double ratio = denom > 0 ? log_prod / denom : 0.0;
        out.ratios.push_back(ratio);
        log_prod += std::log(static_cast<double>(m[j - 1]));
    }
    // liminf proxy: minimum over the trailing half of the available ratios
    std::size_t from = out.ratios.size() / 2;
    double mn = out.ratios[from];
    for (std::size_t i = from; i < out.ratios.size(); ++i) mn = std::min(mn, out.ratios[i]);
    out.value = mn;
    return out;
}

namespace {

// minimal dyadic cover cost by exhaustive recursion over the generation band
double cover_cost(const TargetSet& target, const gauge::GaugeSpec& g, int gen, const BigInt& k, int max_gen) {
    // cube [k, k+1] / 2^gen (closure)
    BigRat lo = gen >= 0 ? BigRat(k, BigInt(1) << gen) : BigRat(k * (BigInt(1) << (-gen)));
    BigRat hi = gen >= 0 ? BigRat(k + 1, BigInt(1) << gen) : BigRat((k + 1) * (BigInt(1) << (-gen)));
    bool hit = false;
    for (auto& [a, b] : target.intervals) {
        if (!(b < lo || hi < a)) {
            hit = true;
            break;
        }
    }
    if (!hit) return 0.0;
    double own = g.eval(to_double(hi - lo));
    if (gen >= max_gen) return own;
    double split = cover_cost(target, g, gen + 1, 2 * k, max_gen) +
                   cover_cost(target, g, gen + 1, 2 * k + 1, max_gen);
    return std::min(own, split);
}

}  // namespace

double net_mass_upper(const TargetSet& target, const gauge::GaugeSpec& g, int search_depth, int d) {
    if (d != 1) throw unsupported_error("net_mass_upper: only d = 1 is supported");
    if (target.intervals.empty()) return 0.0;
    if (search_depth < 0 || search_depth > 12) throw budget_exceeded("net_mass_upper: search depth out of range");
    // base generation g0: cubes of the scale of the whole target
    BigRat lo = target.intervals[0].first, hi = target.intervals[0].second;
    for (auto& [a, b] : target.intervals) {
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    }
    double span = to_double(hi - lo);
    int g0 = span >= 1.0 ? 0 : static_cast<int>(std::floor(-std::log2(std::max(span, 1e-12))));
    int start = g0 - 1;
    BigInt k_lo = floor_rat(lo * pow2_rat(start));
    BigInt k_hi = floor_rat(hi * pow2_rat(start));
    double total = 0.0;
    for (BigInt k = k_lo; k <= k_hi; ++k) total += cover_cost(target, g, start, k, g0 + search_depth);
    return total;
}

double net_mass_upper_power(const TargetSet& target, double s, int search_depth) {
    return net_mass_upper(target, gauge::GaugeSpec::power(s), search_depth, 1);
}

BoxDimension box_dimension(const std::vector<std::pair<int, std::uint64_t>>& occupancy) {
    BoxDimension out;
    if (occupancy.size() < 4) throw validation_error("box_dimension: need at least four generations");
    // fit the top half to reduce transient bias
    std::size_t from = occupancy.size() / 2;
    std::vector<std::pair<double, double>> pts;
    bool constant = true;
    for (std::size_t i = from; i < occupancy.size(); ++i) {
        if (occupancy[i].second != occupancy[from].second) constant = false;
        pts.emplace_back(static_cast<double>(occupancy[i].first),
                         std::log2(static_cast<double>(std::max<std::uint64_t>(1, occupancy[i].second))));
    }
    if (constant && occupancy[from].second <= 1) {
        out.slope = 0.0;
        out.degenerate = true;
        return out;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = static_cast<double>(pts.size());
    double denom = n * sxx - sx * sx;
    if (denom == 0) {
        out.degenerate = true;
        return out;
    }
    out.slope = (n * sxy - sx * sy) / denom;
    double c0 = (sy - out.slope * sx) / n;
    double ss = 0;
    for (auto& [x, y] : pts) ss += (y - c0 - out.slope * x) * (y - c0 - out.slope * x);
    out.residual = std::sqrt(ss / std::max(1.0, n - 2));
    out.half_band = 2.0 * out.residual / std::sqrt(std::max(1.0, denom));
    if (constant) out.degenerate = true;
    return out;
}

std::uint64_t occupied_cells(const std::vector<std::pair<double, double>>& balls, int j) {
    if (j < 0 || j > 30) throw validation_error("occupied_cells: generation out of range");
    std::uint64_t cells = 1ull << j;
    std::vector<bool> hit(cells, false);
    for (auto& [c, r] : balls) {
        auto lo = static_cast<std::int64_t>(std::floor((c - r) * static_cast<double>(cells)));
        auto hi = static_cast<std::int64_t>(std::floor((c + r) * static_cast<double>(cells)));
        for (std::int64_t k = std::max<std::int64_t>(0, lo); k <= std::min<std::int64_t>(cells - 1, hi); ++k)
            hit[static_cast<std::size_t>(k)] = true;
    }
    std::uint64_t n = 0;
    for (bool b : hit) n += b ? 1 : 0;
    return n;
}

}  // namespace ubiq::dim
