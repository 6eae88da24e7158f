/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

   http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "prismatic/complex.hpp"
#include "prismatic/error.hpp"
#include "prismatic/surface.hpp"

// Damped Newton ascent for the curvature prescription problem: find the
// weight vector r with kappa(r) equal to a target. The objective (a
// discrete Hilbert-Einstein functional) is never evaluated; its gradient is
// the curvature defect and its Hessian has closed-form entries, which is
// all the ascent needs. Every trial point is re-made convex first, so the
// iteration is free to move anywhere in R^n.

namespace prismatic {

struct CurvatureTarget {
    Vector kappa;

    /// Feasibility for a surface of genus g: each entry below 2 pi and the
    /// total strictly above 2 pi (2 - 2g). Throws InfeasibleTargetError
    /// naming the violated inequality.
    void check(int genus, int num_cusps) const {
        if (kappa.size() != num_cusps)
            throw InfeasibleTargetError("target has " + std::to_string(kappa.size()) +
                                        " entries for " + std::to_string(num_cusps) + " cusps");
        for (Eigen::Index i = 0; i < kappa.size(); ++i) {
            if (!std::isfinite(kappa[i]))
                throw InfeasibleTargetError("target curvature must be finite");
            if (!(kappa[i] < 2.0 * M_PI))
                throw InfeasibleTargetError("target curvature " + std::to_string(kappa[i]) +
                                            " at cusp " + std::to_string(i) +
                                            " violates kappa < 2 pi");
        }
        const double bound = 2.0 * M_PI * (2.0 - 2.0 * genus);
        if (!(kappa.sum() > bound))
            throw InfeasibleTargetError("total curvature " + std::to_string(kappa.sum()) +
                                        " violates sum kappa > 2 pi (2 - 2g) = " +
                                        std::to_string(bound));
    }
};

struct SolveOptions {
    double tol_resid = 1e-10;        // sup-norm curvature defect at success
    int max_iterations = 100;        // Newton iterations
    int max_bisections = 50;         // line-search bisection steps
    int max_expansions = 50;         // bracket doublings from t = 1
    double dirderiv_tol = 1e-12;     // accept a step when |h'(t)| drops below
    double armijo = 1e-4;            // residual decrease factor for the full step
};

struct SolveReport {
    Vector weights;
    ComplexState state;
    double residual = 0.0;
    int iterations = 0;
    int flip_count = 0;
    std::vector<double> residual_trace;  // sup-norm defect per accepted iterate
    std::vector<int> flip_log;           // edge ids in flip order, all calls
};

/// Gradient of the modified functional: the curvature defect kappa - target.
inline Vector gradient(const ComplexState& state, const CurvatureTarget& target) {
    return state.kappa - target.kappa;
}

/// Hessian d kappa_i / d r_j, assembled per prism corner from the
/// closed-form derivatives. Symmetric, negative definite; off-diagonal
/// entries are nonzero exactly for cusps joined by an edge.
inline Eigen::MatrixXd hessian(const ComplexState& state) {
    const TriangulatedSurface& s = state.metric.surface;
    const int n = s.num_cusps();
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, n);
    for (int t = 0; t < s.num_triangles(); ++t) {
        const auto lt = detail::triangle_lengths(state.metric, t);
        const auto rt = detail::triangle_weights(state.metric, state.weights, t);
        for (int c = 0; c < 3; ++c) {
            // derivatives of omega at corner c with the corner in front
            const std::array<double, 3> lrot{lt[c], lt[(c + 1) % 3], lt[(c + 2) % 3]};
            const std::array<double, 3> rrot{rt[c], rt[(c + 1) % 3], rt[(c + 2) % 3]};
            const auto d = corner_derivatives(lrot, rrot);
            const int ci = s.cusp_of_corner(t, c);
            for (int m = 0; m < 3; ++m)
                X(ci, s.cusp_of_corner(t, (c + m) % 3)) -= d[m];  // kappa = 2 pi - omega
        }
    }
    return X;
}

namespace detail {

struct TrialPoint {
    ComplexState state;
    Vector grad;
    int flips = 0;
};

}  // namespace detail

/// Newton ascent with bisection line search on the directional derivative.
/// Starting weights come from `r0` (zeros by default). The returned state
/// is convex and its curvature defect is below opts.tol_resid in sup norm.
inline SolveReport solve(const DecoratedMetric& metric, const CurvatureTarget& target,
                         const SolveOptions& opts = {}, const Vector& r0 = Vector()) {
    const TriangulatedSurface& surf = metric.surface;
    if (surf.genus() <= 1)
        throw InfeasibleTargetError("realization requires genus > 1, got " +
                                    std::to_string(surf.genus()));
    if (surf.num_cusps() < 1) throw InfeasibleTargetError("surface has no cusps");
    target.check(surf.genus(), surf.num_cusps());

    SolveReport rep;
    Vector r = r0.size() == 0 ? Vector::Zero(surf.num_cusps()) : r0;
    if (r.size() != surf.num_cusps())
        throw InfeasibleTargetError("starting weights have the wrong size");

    DecoratedMetric current = metric;
    auto evaluate = [&](const Vector& rv) {
        auto res = make_delaunay_traced(current, rv);
        detail::TrialPoint tp{std::move(res.state), Vector(), static_cast<int>(res.flips.size())};
        tp.grad = gradient(tp.state, target);
        rep.flip_count += tp.flips;
        rep.flip_log.insert(rep.flip_log.end(), res.flips.begin(), res.flips.end());
        return tp;
    };
    // a trial point can overflow the exponential range, or land so far out
    // that the prism geometry is not resolvable in double precision, when a
    // raw Newton step is enormous; such points count as unreachable and the
    // search shrinks back toward the current iterate
    auto try_evaluate = [&](const Vector& rv) -> std::optional<detail::TrialPoint> {
        try {
            return evaluate(rv);
        } catch (const RangeError&) {
            return std::nullopt;
        } catch (const StuckError&) {
            return std::nullopt;
        } catch (const NoConvergenceError&) {
            return std::nullopt;
        }
    };

    detail::TrialPoint cur = evaluate(r);
    current = cur.state.metric;  // carry the convex triangulation forward
    rep.residual_trace.push_back(cur.grad.lpNorm<Eigen::Infinity>());

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        const double resid = cur.grad.lpNorm<Eigen::Infinity>();
        if (resid <= opts.tol_resid) {
            rep.weights = r;
            rep.state = cur.state;
            rep.residual = resid;
            rep.iterations = iter;
            return rep;
        }

        // ascent direction: X d = -grad, falling back to the gradient if
        // the factorization is unusable
        const Eigen::MatrixXd X = hessian(cur.state);
        Vector d;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(X);
        if (ldlt.info() == Eigen::Success) d = ldlt.solve(-cur.grad);
        if (d.size() == 0 || !d.allFinite() || cur.grad.dot(d) <= 0.0) d = cur.grad;

        // directional derivative h(t) = (kappa(r + t d) - target) . d is
        // positive at t = 0 and decreasing in t
        auto dirderiv = [&](const detail::TrialPoint& tp) { return tp.grad.dot(d); };

        // full Newton step first, halving while it overshoots the
        // representable range
        double best_t = 1.0;
        std::optional<detail::TrialPoint> full = try_evaluate(r + d);
        for (int b = 0; !full && b < opts.max_bisections; ++b) {
            best_t *= 0.5;
            full = try_evaluate(r + best_t * d);
        }
        if (!full)
            throw NoConvergenceError("no representable point along the ascent direction");
        detail::TrialPoint best = std::move(*full);
        bool accepted =
            best_t == 1.0 && best.grad.lpNorm<Eigen::Infinity>() <= (1.0 - opts.armijo) * resid;

        if (!accepted) {
            double lo = 0.0, hi = best_t;
            detail::TrialPoint at_hi = best;
            int expansions = 0;
            while (dirderiv(at_hi) > 0.0 && expansions < opts.max_expansions) {
                auto wider = try_evaluate(r + 2.0 * hi * d);
                if (!wider) break;  // farther points are not representable
                lo = hi;            // derivative still positive here
                hi *= 2.0;
                at_hi = std::move(*wider);
            }
            best = at_hi;
            best_t = hi;
            if (dirderiv(at_hi) <= 0.0) {
                for (int b = 0; b < opts.max_bisections; ++b) {
                    if (std::abs(dirderiv(best)) <= opts.dirderiv_tol) break;
                    const double mid = 0.5 * (lo + hi);
                    auto at_mid = try_evaluate(r + mid * d);
                    if (!at_mid) {
                        hi = mid;
                        continue;
                    }
                    if (dirderiv(*at_mid) > 0.0)
                        lo = mid;
                    else
                        hi = mid;
                    if (at_mid->grad.lpNorm<Eigen::Infinity>() <=
                        best.grad.lpNorm<Eigen::Infinity>()) {
                        best = std::move(*at_mid);
                        best_t = mid;
                    }
                }
            }
        }

        r = r + best_t * d;
        cur = std::move(best);
        current = cur.state.metric;
        rep.residual_trace.push_back(cur.grad.lpNorm<Eigen::Infinity>());
    }

    std::ostringstream trace;
    for (double v : rep.residual_trace) trace << v << " ";
    throw NoConvergenceError("no convergence after " + std::to_string(opts.max_iterations) +
                             " iterations; residual trace: " + trace.str());
}

/// Conformal factors u_i = (r''_i - r'_i) / 2 between two complexes over the
/// same decorated upper boundary. For every edge the lower lengths satisfy
/// sinh(a'/2) = exp(u_i + u_j) sinh(a''/2).
inline Vector conformal_factors(const ComplexState& before, const ComplexState& after) {
    const bool same_rep = before.metric.surface.same_combinatorics(after.metric.surface) &&
                          (before.metric.lengths - after.metric.lengths).lpNorm<Eigen::Infinity>() <
                              1e-9;
    if (!same_rep) {
        // flips preserve the decorated surface; compare canonical forms
        const auto c0 = canonical_form(before.metric);
        const auto c1 = canonical_form(after.metric);
        bool ok = c0.gluing == c1.gluing && c0.corner_cusps == c1.corner_cusps;
        if (ok)
            for (size_t i = 0; i < c0.lengths.size(); ++i)
                ok = ok && std::abs(c0.lengths[i] - c1.lengths[i]) < 1e-9;
        if (!ok)
            throw DomainError("states do not share a decorated upper boundary");
    }
    return 0.5 * (after.weights - before.weights);
}

/// Largest violation of the conformal edge relation between two complexes
/// sharing a triangulation, evaluated on the second state's triangulation.
inline double conformal_relation_residual(const ComplexState& before, const ComplexState& after) {
    const Vector u = conformal_factors(before, after);
    const TriangulatedSurface& s = after.metric.surface;
    double worst = 0.0;
    for (int e = 0; e < s.num_edges(); ++e) {
        const auto cusps = s.edge_cusps(e);
        const double a1 = lower_edge_length(after.metric.lengths[e], before.weights[cusps[0]],
                                            before.weights[cusps[1]]);
        const double a2 = lower_edge_length(after.metric.lengths[e], after.weights[cusps[0]],
                                            after.weights[cusps[1]]);
        const double lhs = std::sinh(0.5 * a1);
        const double rhs = std::exp(u[cusps[0]] + u[cusps[1]]) * std::sinh(0.5 * a2);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    return worst;
}

}  // namespace prismatic
