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

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "prismatic/error.hpp"
#include "prismatic/hypgeom.hpp"
#include "prismatic/surface.hpp"

// The prismatic complex over a decorated surface: one truncated prism per
// triangle, glued along walls. Assembling caches every per-corner angle,
// the total dihedral angle of each upper edge and the cone angle around
// each vertical edge. Convexity (every exterior angle nonnegative) is
// enforced by flipping, which realizes the Epstein-Penner triangulation of
// the decoration shifted by the weights.

namespace prismatic {

/// Exterior angles smaller than this are treated as flat and never flipped.
inline constexpr double kFlipTolerance = 1e-12;

/// Assembled complex over (metric, weights). Immutable after construction.
struct ComplexState {
    DecoratedMetric metric;
    Vector weights;               // one per cusp
    std::vector<PrismAngles> prisms;  // one per triangle
    Vector phi_tilde;             // per edge, sum of the two wall angles
    Vector theta;                 // per edge, pi - phi_tilde
    Vector omega;                 // per cusp, total cone angle
    Vector kappa;                 // per cusp, 2 pi - omega

    int num_cusps() const { return static_cast<int>(omega.size()); }
    int num_edges() const { return static_cast<int>(theta.size()); }
    double min_theta() const { return theta.minCoeff(); }
    bool is_convex(double tol = kFlipTolerance) const { return min_theta() >= -tol; }
};

namespace detail {

inline std::array<double, 3> triangle_lengths(const DecoratedMetric& m, int t) {
    return {m.lengths[m.surface.edge_of_slot(TriangulatedSurface::slot(t, 0))],
            m.lengths[m.surface.edge_of_slot(TriangulatedSurface::slot(t, 1))],
            m.lengths[m.surface.edge_of_slot(TriangulatedSurface::slot(t, 2))]};
}

inline std::array<double, 3> triangle_weights(const DecoratedMetric& m, const Vector& r, int t) {
    return {r[m.surface.cusp_of_corner(t, 0)], r[m.surface.cusp_of_corner(t, 1)],
            r[m.surface.cusp_of_corner(t, 2)]};
}

}  // namespace detail

/// Builds the complex over (metric, r), caching all angles. Throws
/// InadmissiblePrismError naming triangle and corner if some prism does not
/// exist.
inline ComplexState assemble(const DecoratedMetric& metric, const Vector& r) {
    const TriangulatedSurface& s = metric.surface;
    if (r.size() != s.num_cusps())
        throw DomainError("weight count does not match cusp count");
    for (Eigen::Index i = 0; i < r.size(); ++i)
        if (!std::isfinite(r[i])) throw DomainError("non-finite weight");

    ComplexState st;
    st.metric = metric;
    st.weights = r;
    st.prisms.reserve(s.num_triangles());
    for (int t = 0; t < s.num_triangles(); ++t) {
        try {
            st.prisms.push_back(
                prism_angles(detail::triangle_lengths(metric, t), detail::triangle_weights(metric, r, t)));
        } catch (const InadmissiblePrismError& e) {
            throw InadmissiblePrismError("prism does not exist", e.corner(), t);
        }
    }
    st.phi_tilde = Vector::Zero(s.num_edges());
    for (int e = 0; e < s.num_edges(); ++e) {
        const auto es = s.edge_slots(e);
        st.phi_tilde[e] = st.prisms[TriangulatedSurface::slot_tri(es[0])]
                              .phi[TriangulatedSurface::slot_side(es[0])] +
                          st.prisms[TriangulatedSurface::slot_tri(es[1])]
                              .phi[TriangulatedSurface::slot_side(es[1])];
    }
    st.theta = Vector::Constant(s.num_edges(), M_PI) - st.phi_tilde;
    st.omega = Vector::Zero(s.num_cusps());
    for (int t = 0; t < s.num_triangles(); ++t)
        for (int c = 0; c < 3; ++c) st.omega[s.cusp_of_corner(t, c)] += st.prisms[t].omega[c];
    st.kappa = Vector::Constant(s.num_cusps(), 2.0 * M_PI) - st.omega;
    return st;
}

namespace detail {

// Edge convexity score in shifted Penner coordinates. The decoration moved
// by the weights has lengths l - r_i - r_j; an edge is convex in the complex
// exactly when the empty-circumdisk expression of the shifted lambda-lengths
// is nonnegative. Expressed through log-lengths it is safe for any inputs,
// so it can drive flips even where a prism fails to exist.
inline double penner_convexity_score(const DecoratedMetric& m, const Vector& r, int e) {
    const TriangulatedSurface& s = m.surface;
    const auto es = s.edge_slots(e);
    if (!s.edge_is_flippable(e)) return std::numeric_limits<double>::infinity();

    auto shifted = [&](int side_slot) {
        const int t = TriangulatedSurface::slot_tri(side_slot);
        const int k = TriangulatedSurface::slot_side(side_slot);
        const double l = m.lengths[s.edge_of_slot(side_slot)];
        const double ri = r[s.cusp_of_corner(t, (k + 1) % 3)];
        const double rj = r[s.cusp_of_corner(t, (k + 2) % 3)];
        return l - ri - rj;
    };

    // per triangle, (a^2 + b^2 - e^2) / (2ab) in log coordinates; every
    // exponent is shifted below zero so arbitrary inputs cannot overflow,
    // which rescales each term by a positive factor and preserves the sign
    double tval[2], logw[2];
    for (int side = 0; side < 2; ++side) {
        const int slot_e = es[side];
        const int t = TriangulatedSurface::slot_tri(slot_e);
        const int k = TriangulatedSurface::slot_side(slot_e);
        const double le = shifted(slot_e);
        const double la = shifted(TriangulatedSurface::slot(t, (k + 1) % 3));
        const double lb = shifted(TriangulatedSurface::slot(t, (k + 2) % 3));
        const double m = std::max(le, std::max(la, lb));
        tval[side] = std::exp(la - m) + std::exp(lb - m) - std::exp(le - m);
        logw[side] = m - 0.5 * (la + lb);
    }
    const double w = std::max(logw[0], logw[1]);
    return 0.5 * (tval[0] * std::exp(logw[0] - w) + tval[1] * std::exp(logw[1] - w));
}

}  // namespace detail

struct DelaunayResult {
    ComplexState state;
    std::vector<int> flips;  // edge ids at the time each flip was made
};

/// Flips until every exterior angle is at least -kFlipTolerance. The edge
/// with the most negative angle goes first, ties broken by smallest id; if
/// it is unflippable the next most negative flippable edge is taken, and if
/// no negative edge is flippable a StuckError is raised. While some prism
/// fails to exist the schedule falls back to the equivalent convexity test
/// in shifted Penner coordinates, which is defined for every state. The
/// iteration cap is 100 E flips.
inline DelaunayResult make_delaunay_traced(const DecoratedMetric& metric, const Vector& r) {
    DecoratedMetric m = metric;
    std::vector<int> flips;
    const int cap = 100 * m.surface.num_edges();
    std::ostringstream history;

    for (int iter = 0;; ++iter) {
        std::optional<ComplexState> state;
        try {
            state = assemble(m, r);
        } catch (const InadmissiblePrismError&) {
            state.reset();
        }

        int worst = -1;
        double worst_score = -kFlipTolerance;
        if (state) {
            for (int e = 0; e < m.surface.num_edges(); ++e) {
                const double th = state->theta[e];
                if (th < worst_score && m.surface.edge_is_flippable(e)) {
                    worst = e;
                    worst_score = th;
                }
            }
            if (worst == -1) {
                if (!state->is_convex()) {
                    throw StuckError(
                        "non-convex edges remain but none are flippable (min theta = " +
                        std::to_string(state->min_theta()) + ")");
                }
                return {std::move(*state), std::move(flips)};
            }
        } else {
            for (int e = 0; e < m.surface.num_edges(); ++e) {
                const double sc = detail::penner_convexity_score(m, r, e);
                if (sc < worst_score) {
                    worst = e;
                    worst_score = sc;
                }
            }
            if (worst == -1)
                throw StuckError("state has no realizable prisms and no non-convex flippable edge");
        }

        if (iter >= cap) {
            throw NoConvergenceError("flip cap " + std::to_string(cap) +
                                     " exceeded; history (edge, score): " + history.str());
        }
        history << "(" << worst << "," << worst_score << ") ";
        m = flip(m, worst);
        flips.push_back(worst);
    }
}

inline DelaunayResult make_delaunay_traced(const ComplexState& state) {
    return make_delaunay_traced(state.metric, state.weights);
}

inline ComplexState make_delaunay(const ComplexState& state) {
    return make_delaunay_traced(state.metric, state.weights).state;
}

/// Lower boundary data: hyperbolic polyhedral metric with cone points.
struct PolyhedralMetric {
    TriangulatedSurface surface;
    Vector lengths;                              // lower edge lengths a_e > 0
    std::vector<std::array<double, 3>> angles;   // interior angles per triangle corner
    Vector cone_angles;                          // per cusp/vertex
    double area = 0.0;

    PolyhedralMetric() = default;

    /// Validates lengths and derives angles, cone angles and the area.
    PolyhedralMetric(TriangulatedSurface s, Vector a) : surface(std::move(s)), lengths(std::move(a)) {
        if (lengths.size() != surface.num_edges())
            throw CombinatoricsError("lower length count does not match edge count");
        angles.resize(surface.num_triangles());
        cone_angles = Vector::Zero(surface.num_cusps());
        area = 0.0;
        for (int t = 0; t < surface.num_triangles(); ++t) {
            std::array<double, 3> a3{};
            for (int k = 0; k < 3; ++k) {
                a3[k] = lengths[surface.edge_of_slot(TriangulatedSurface::slot(t, k))];
                if (!(a3[k] > 0.0) || !std::isfinite(a3[k]))
                    throw DomainError("lower edge length must be positive and finite (triangle " +
                                      std::to_string(t) + ")");
            }
            double sum = 0.0;
            for (int k = 0; k < 3; ++k) {
                const int j = (k + 1) % 3, h = (k + 2) % 3;
                if (!(a3[j] + a3[h] > a3[k]))
                    throw DomainError("lower triangle " + std::to_string(t) +
                                      " violates the triangle inequality");
                // hyperbolic law of cosines, angle at corner k
                const double c = (std::cosh(a3[j]) * std::cosh(a3[h]) - std::cosh(a3[k])) /
                                 (std::sinh(a3[j]) * std::sinh(a3[h]));
                const double ang = std::acos(std::min(1.0, std::max(-1.0, c)));
                angles[t][k] = ang;
                cone_angles[surface.cusp_of_corner(t, k)] += ang;
                sum += ang;
            }
            area += M_PI - sum;
        }
    }
};

/// Extracts the lower boundary of a complex. Cone angles and the area are
/// recomputed from the lower side lengths alone, so comparing them against
/// the upper-boundary data is a genuine two-route check.
inline PolyhedralMetric lower_metric(const ComplexState& state) {
    const TriangulatedSurface& s = state.metric.surface;
    Vector a(s.num_edges());
    for (int e = 0; e < s.num_edges(); ++e) {
        const auto cusps = s.edge_cusps(e);
        a[e] = lower_edge_length(state.metric.lengths[e], state.weights[cusps[0]],
                                 state.weights[cusps[1]]);
    }
    return PolyhedralMetric(s, std::move(a));
}

/// Discrete Gauss-Bonnet residual: sum kappa - 2 pi (2 - 2g) - area(lower).
inline double gauss_bonnet_residual(const ComplexState& state) {
    const auto pm = lower_metric(state);
    return state.kappa.sum() - 2.0 * M_PI * (2.0 - 2.0 * state.metric.surface.genus()) - pm.area;
}

/// Rebuilds the convex complex whose lower boundary is the given metric:
/// horospheres through the lower vertices give r = 0 and upper lengths
/// l = 2 ln sinh(a/2); the result is then made convex. If the input
/// triangulation is Delaunay for the metric, the lower boundary of the
/// result reproduces it edge for edge.
inline ComplexState from_polyhedral(const PolyhedralMetric& pm) {
    Vector l(pm.surface.num_edges());
    for (int e = 0; e < pm.surface.num_edges(); ++e) {
        if (!(pm.lengths[e] > 0.0))
            throw DomainError("lower edge length must be positive (edge " + std::to_string(e) + ")");
        l[e] = 2.0 * std::log(std::sinh(0.5 * pm.lengths[e]));
    }
    DecoratedMetric m(pm.surface, std::move(l));
    return make_delaunay_traced(m, Vector::Zero(pm.surface.num_cusps())).state;
}

}  // namespace prismatic
