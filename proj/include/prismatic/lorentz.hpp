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

#include <Eigen/Dense>

#include "prismatic/complex.hpp"
#include "prismatic/error.hpp"
#include "prismatic/hypgeom.hpp"

// Independent verification path: prisms are rebuilt explicitly in the
// hyperboloid model of R^{1,3} with the bilinear form
//   <x, y> = -x1 y1 + x2 y2 + x3 y3 + x4 y4,
// and every angle and length is recovered from scalar products alone.
// Nothing here reuses the closed-form cross-section formulas beyond the
// lower edge lengths used for placement, so agreement between the two
// routes checks both.
//
// Placement gauge: the lower face lies in the plane x4 = 0, vertex 0 at
// (1,0,0,0), vertex 1 on the geodesic x3 = 0, vertex 2 with x3 > 0. The
// light-like pole of the canonical horosphere at corner i is
// e^{r_i} (x_{B_i} + e4).

namespace prismatic {

using LorentzVector = Eigen::Vector4d;

inline double lorentz_dot(const LorentzVector& x, const LorentzVector& y) {
    return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3];
}

/// Sign classification with tolerance 1e-12 on <x, x>.
enum class CausalType { TimeLike, SpaceLike, LightLike };

inline CausalType classify(const LorentzVector& x, double tol = 1e-12) {
    const double q = lorentz_dot(x, x);
    if (q < -tol) return CausalType::TimeLike;
    if (q > tol) return CausalType::SpaceLike;
    return CausalType::LightLike;
}

struct EmbeddedPrism {
    std::array<LorentzVector, 3> lower;   // B_i on the plane x4 = 0
    std::array<LorentzVector, 3> pole;    // canonical horosphere poles
    LorentzVector upper_normal;           // unit space-like normal of the ideal face
    std::array<double, 3> lower_len;      // a[k], lower edge opposite corner k
};

namespace lorentz_detail {

inline LorentzVector tangent_toward(const LorentzVector& target, const LorentzVector& p) {
    // component of `target` in the tangent space at p (a point of H^3)
    return target + lorentz_dot(target, p) * p;
}

inline LorentzVector unit_spacelike(const LorentzVector& v) {
    const double q = lorentz_dot(v, v);
    if (!(q > 0.0)) throw DegenerateInputError("expected a space-like vector");
    return v / std::sqrt(q);
}

inline LorentzVector drop_component(const LorentzVector& v, const LorentzVector& unit_dir) {
    return v - lorentz_dot(v, unit_dir) * unit_dir;
}

}  // namespace lorentz_detail

/// Rebuilds the prism over Penner lengths l (l[k] opposite corner k) and
/// weights r in the hyperboloid model. Throws InadmissiblePrismError if the
/// lower triangle degenerates (no such prism exists).
inline EmbeddedPrism embed_prism(const std::array<double, 3>& l, const std::array<double, 3>& r) {
    EmbeddedPrism P;
    for (int k = 0; k < 3; ++k)
        P.lower_len[k] = lower_edge_length(l[k], r[(k + 1) % 3], r[(k + 2) % 3]);
    const double a01 = P.lower_len[2], a02 = P.lower_len[1], a12 = P.lower_len[0];
    if (!(a01 + a02 > a12 && a02 + a12 > a01 && a12 + a01 > a02))
        throw InadmissiblePrismError("lower face violates the triangle inequality", -1);

    P.lower[0] = LorentzVector(1, 0, 0, 0);
    P.lower[1] = LorentzVector(std::cosh(a01), std::sinh(a01), 0, 0);
    const double cg = (std::cosh(a01) * std::cosh(a02) - std::cosh(a12)) /
                      (std::sinh(a01) * std::sinh(a02));
    const double gamma = std::acos(std::min(1.0, std::max(-1.0, cg)));
    P.lower[2] = LorentzVector(std::cosh(a02), std::sinh(a02) * std::cos(gamma),
                               std::sinh(a02) * std::sin(gamma), 0);

    const LorentzVector e4(0, 0, 0, 1);
    for (int i = 0; i < 3; ++i) P.pole[i] = std::exp(r[i]) * (P.lower[i] + e4);

    // normal of the plane spanned by the three ideal points: kernel of the
    // Minkowski-Gram rows of the poles
    Eigen::Matrix<double, 3, 4> rows;
    for (int i = 0; i < 3; ++i)
        rows.row(i) << -P.pole[i][0], P.pole[i][1], P.pole[i][2], P.pole[i][3];
    const Eigen::FullPivLU<Eigen::Matrix<double, 3, 4>> lu(rows);
    if (lu.dimensionOfKernel() != 1)
        throw DegenerateInputError("ideal vertices of the prism are not in general position");
    LorentzVector n = lu.kernel().col(0);
    n = lorentz_detail::unit_spacelike(n);
    if (n[3] < 0) n = -n;
    P.upper_normal = n;
    return P;
}

/// Existence test via a common tangent plane: with the poles of the
/// horospheres through the lower vertices (shifted Penner lengths
/// l - r_i - r_j), solve G c = -1 for the Gram matrix G of pairwise
/// products; a plane tangent to all three horoballs with the ideal points
/// on one side exists exactly when 1 + sum(c) > 0.
inline bool admissible_prism(const std::array<double, 3>& l, const std::array<double, 3>& r) {
    Eigen::Matrix3d G = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const int k = 3 - i - j;
            const double lp = l[k] - r[i] - r[j];
            detail::require_finite(lp, "shifted length");
            detail::require_exponent(lp, "admissible_prism");
            G(i, j) = G(j, i) = -2.0 * std::exp(lp);
        }
    const double det = 2.0 * G(0, 1) * G(0, 2) * G(1, 2);
    if (!(std::abs(det) > 0.0))
        throw DegenerateInputError("coincident ideal points: singular pole Gram matrix");
    const Eigen::Vector3d c = G.fullPivLu().solve(Eigen::Vector3d::Constant(-1.0));
    return 1.0 + c.sum() > 0.0;
}

// ---- scalar-product measurements on an embedded prism ----------------------

/// Point of the vertical edge at corner i on the canonical horosphere.
inline LorentzVector horo_point_on_vertical(const EmbeddedPrism& P, int i, double r_i) {
    const LorentzVector w =
        lorentz_detail::unit_spacelike(lorentz_detail::tangent_toward(P.pole[i], P.lower[i]));
    return P.lower[i] * std::cosh(r_i) + w * std::sinh(r_i);
}

/// Point of the upper edge (i, j) on the canonical horosphere at corner i.
inline LorentzVector horo_point_on_upper(const EmbeddedPrism& P, int i, int j) {
    const double c = -lorentz_dot(P.pole[i], P.pole[j]);
    if (!(c > 0.0)) throw DegenerateInputError("poles do not span a geodesic");
    const double t = 0.5 * std::log(2.0 / c);
    return (P.pole[i] * std::exp(-t) + P.pole[j] * std::exp(t)) / std::sqrt(2.0 * c);
}

/// Intrinsic (Euclidean) distance of two points on one horosphere.
inline double horo_arc(const LorentzVector& x, const LorentzVector& y) {
    const double q = -2.0 - 2.0 * lorentz_dot(x, y);
    return q > 0.0 ? std::sqrt(q) : 0.0;
}

namespace lorentz_detail {

// Angle between unit space-like vectors in a common tangent space, stable
// for both nearly parallel and nearly opposite pairs.
inline double angle_between_units(const LorentzVector& va, const LorentzVector& vb) {
    const LorentzVector d = va - vb;
    const LorentzVector s = va + vb;
    return 2.0 * std::atan2(std::sqrt(std::max(0.0, lorentz_dot(d, d))),
                            std::sqrt(std::max(0.0, lorentz_dot(s, s))));
}

// Interior dihedral angle along the geodesic through `p` with unit tangent
// `edge_dir`, between the half-planes toward `toward_a` and `toward_b`
// (targets projected to the tangent space at p first).
inline double dihedral_at(const LorentzVector& p, const LorentzVector& edge_dir,
                          const LorentzVector& toward_a, const LorentzVector& toward_b) {
    LorentzVector va = drop_component(tangent_toward(toward_a, p), edge_dir);
    LorentzVector vb = drop_component(tangent_toward(toward_b, p), edge_dir);
    va = unit_spacelike(va);
    vb = unit_spacelike(vb);
    return angle_between_units(va, vb);
}

}  // namespace lorentz_detail

/// Dihedral angle of the vertical edge at corner i, recovered from tangent
/// vectors at its horosphere point.
inline double embedded_omega(const EmbeddedPrism& P, int i, double r_i) {
    const int j = (i + 1) % 3, h = (i + 2) % 3;
    const LorentzVector p = horo_point_on_vertical(P, i, r_i);
    const LorentzVector edge =
        lorentz_detail::unit_spacelike(lorentz_detail::tangent_toward(P.pole[i], p));
    return lorentz_detail::dihedral_at(p, edge, P.lower[j], P.lower[h]);
}

/// Dihedral angle of the upper edge (i, j), measured at the horosphere
/// point of corner i between the ideal face and the wall of (i, j).
inline double embedded_phi(const EmbeddedPrism& P, int i, int j) {
    const int h = 3 - i - j;
    const LorentzVector q = horo_point_on_upper(P, i, j);
    const LorentzVector edge =
        lorentz_detail::unit_spacelike(lorentz_detail::tangent_toward(P.pole[j], q));
    return lorentz_detail::dihedral_at(q, edge, P.pole[h], P.lower[i]);
}

/// Every scalar-product measurement at one corner, taken in a gauge with
/// that corner at the origin so far vertices cannot poison the arithmetic.
/// phi_ij is the dihedral angle of the upper edge toward corner i+1,
/// phi_ih toward corner i+2.
struct CornerMeasurements {
    double omega;
    double phi_ij;
    double phi_ih;
    double alpha_ij;
    double alpha_ih;
    double lambda;
};

inline CornerMeasurements embedded_corner(const std::array<double, 3>& l,
                                          const std::array<double, 3>& r, int corner) {
    std::array<double, 3> lr{}, rr{};
    for (int m = 0; m < 3; ++m) {
        lr[m] = l[(corner + m) % 3];
        rr[m] = r[(corner + m) % 3];
    }
    const auto P = embed_prism(lr, rr);
    CornerMeasurements out{};
    out.omega = embedded_omega(P, 0, rr[0]);
    out.phi_ij = embedded_phi(P, 0, 1);
    out.phi_ih = embedded_phi(P, 0, 2);
    const auto p = horo_point_on_vertical(P, 0, rr[0]);
    const auto q1 = horo_point_on_upper(P, 0, 1);
    const auto q2 = horo_point_on_upper(P, 0, 2);
    out.alpha_ij = horo_arc(p, q1);
    out.alpha_ih = horo_arc(p, q2);
    out.lambda = horo_arc(q1, q2);
    return out;
}

// ---- adjacent prisms glued along a wall -------------------------------------

/// Two prisms of a complex sharing edge `e`, embedded into one copy of H^3:
/// the shared wall's lower edge runs from B(first,0) to B(first,1); the
/// second prism is reflected to the x3 < 0 side. Poles at shared corners
/// coincide.
struct EmbeddedPair {
    EmbeddedPrism first;        // triangle at the first slot of e
    EmbeddedPrism second;       // second triangle in its own gauge
    EmbeddedPrism second_glued; // second triangle mapped onto the shared wall
    std::array<double, 3> r_first{}, r_second{};
};

inline EmbeddedPair embed_adjacent(const ComplexState& state, int e) {
    const TriangulatedSurface& s = state.metric.surface;
    if (!s.edge_is_flippable(e))
        throw DegenerateInputError("edge " + std::to_string(e) + " bounds one triangle twice");
    const auto es = s.edge_slots(e);

    auto rotated = [&](int side_slot, std::array<double, 3>& lr, std::array<double, 3>& rr) {
        const int t = TriangulatedSurface::slot_tri(side_slot);
        const int k = TriangulatedSurface::slot_side(side_slot);
        const auto lt = detail::triangle_lengths(state.metric, t);
        const auto rt = detail::triangle_weights(state.metric, state.weights, t);
        for (int m = 0; m < 3; ++m) {
            lr[m] = lt[(k + 1 + m) % 3];
            rr[m] = rt[(k + 1 + m) % 3];
        }
    };

    EmbeddedPair pair;
    std::array<double, 3> l1{}, l2{};
    rotated(es[0], l1, pair.r_first);
    rotated(es[1], l2, pair.r_second);
    pair.first = embed_prism(l1, pair.r_first);
    pair.second = embed_prism(l2, pair.r_second);

    // boost that swaps the two shared lower vertices and flips x3
    const double a = pair.first.lower_len[2];
    Eigen::Matrix4d g = Eigen::Matrix4d::Identity();
    g(0, 0) = std::cosh(a);
    g(0, 1) = -std::sinh(a);
    g(1, 0) = std::sinh(a);
    g(1, 1) = -std::cosh(a);
    g(2, 2) = -1.0;
    pair.second_glued = pair.second;
    for (int i = 0; i < 3; ++i) {
        pair.second_glued.lower[i] = g * pair.second.lower[i];
        pair.second_glued.pole[i] = g * pair.second.pole[i];
    }
    pair.second_glued.upper_normal = g * pair.second.upper_normal;
    return pair;
}

/// Total dihedral angle of the shared upper edge of an embedded pair.
inline double embedded_edge_angle(const EmbeddedPair& pair) {
    return embedded_phi(pair.first, 0, 1) + embedded_phi(pair.second, 0, 1);
}

// ---- circumscribed circles of the lower faces -------------------------------

namespace lorentz_detail {

inline Eigen::Vector3d circle_vector(const std::array<LorentzVector, 3>& pts) {
    Eigen::Matrix3d M;
    for (int i = 0; i < 3; ++i) M.row(i) << -pts[i][0], pts[i][1], pts[i][2];
    return M.fullPivLu().solve(Eigen::Vector3d::Constant(-1.0));
}

}  // namespace lorentz_detail

/// Angle at which the circumscribed circles of the two lower faces of an
/// embedded pair cross at a shared vertex, each tangent oriented into the
/// half-plane of its own face's apex. Cocircular faces (a flat upper edge)
/// give pi; in general this angle equals the upper-edge dihedral angle.
inline double circumcircle_crossing_angle(const EmbeddedPair& pair) {
    const auto c1 = lorentz_detail::circle_vector(pair.first.lower);
    const auto c2 = lorentz_detail::circle_vector(pair.second_glued.lower);
    const LorentzVector& B0 = pair.first.lower[0];
    const LorentzVector& B1 = pair.first.lower[1];
    auto side = [&](const LorentzVector& x) {
        Eigen::Matrix3d D;
        D << B0[0], B0[1], B0[2], B1[0], B1[1], B1[2], x[0], x[1], x[2];
        return D.determinant();
    };
    auto tangent = [&](const Eigen::Vector3d& c, const LorentzVector& apex) {
        // direction v in R^{1,2} with <v, B0> = 0 and <v, c> = 0
        const Eigen::Vector3d rb(-B0[0], B0[1], B0[2]);
        const Eigen::Vector3d rc(-c[0], c[1], c[2]);
        Eigen::Vector3d v = rb.cross(rc);
        LorentzVector t(v[0], v[1], v[2], 0);
        t = lorentz_detail::unit_spacelike(t);
        if (side(t) * side(apex) < 0) t = -t;
        return t;
    };
    const LorentzVector t1 = tangent(c1, pair.first.lower[2]);
    const LorentzVector t2 = tangent(c2, pair.second_glued.lower[2]);
    return lorentz_detail::angle_between_units(t1, t2);
}

}  // namespace prismatic
