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
#include <string>

#include "prismatic/error.hpp"

// Closed-form trigonometry of decorated ideal triangles and truncated
// (semi-ideal, ultraparallel) prisms over them. Edge lengths of the ideal
// upper face are Penner lengths: signed distances between the canonical
// horocycles at the two endpoints, any real value. Truncation weights r
// are the lengths of the vertical edges joining the ideal vertices to the
// lower face.
//
// Conventions used throughout the library:
//   * for a triple of side lengths, entry k is the side OPPOSITE corner k;
//   * all functions are pure and thread-safe.

namespace prismatic {

namespace detail {

inline void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) throw DomainError(std::string("non-finite input ") + name);
}

// Largest exponent magnitude we feed to exp(); beyond this we refuse
// rather than saturate to inf or flush to zero.
inline constexpr double kMaxExponent = 700.0;

inline void require_exponent(double x, const char* what) {
    if (x > kMaxExponent) throw RangeError(std::string("exp overflow in ") + what, x);
    if (x < -kMaxExponent) throw RangeError(std::string("exp underflow in ") + what, x);
}

// log(e^a + e^b) without overflow.
inline double log_add_exp(double a, double b) {
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp((a > b ? b : a) - m));
}

// arccosh(1 + y) for y >= 0, accurate near y = 0.
inline double acosh1p(double y) {
    return std::log1p(y + std::sqrt(y * (y + 2.0)));
}

// Angle opposite side c in a Euclidean triangle (a, b, c), computed with
// the half-angle form, which stays accurate for needle triangles:
//   tan(C/2) = sqrt( ((c-(a-b))(c+(a-b))) / (((a+b)+c)((a+b)-c)) ).
// The caller guarantees the strict triangle inequality.
inline double euclid_angle_opposite(double a, double b, double c) {
    const double n1 = c - (a - b);
    const double n2 = c + (a - b);
    const double d1 = (a + b) + c;
    const double d2 = (a + b) - c;
    return 2.0 * std::atan2(std::sqrt(n1 * n2), std::sqrt(d1 * d2));
}

}  // namespace detail

/// Dihedral angles and horospherical cross-section data of one truncated prism.
///
/// omega[i]  dihedral angle of the vertical edge at corner i
/// phi[k]    dihedral angle of the upper edge opposite corner k
/// alpha     alpha(i, j): horospherical arc at corner i on the wall of the
///           upper edge (i, j) (Euclidean length on the canonical horosphere)
/// lambda[i] horospherical arc at corner i on the upper ideal face
///
/// At every corner i with the other corners j, h the cross-section is a
/// Euclidean triangle with sides (alpha(i,j), alpha(i,h), lambda[i]), so
/// omega[i] + phi[j] + phi[h] = pi.
struct PrismAngles {
    std::array<double, 3> omega{};
    std::array<double, 3> phi{};
    std::array<double, 3> lambda{};
    std::array<std::array<double, 3>, 3> alpha{};  // alpha[i][j], diagonal unused

    double arc(int i, int j) const { return alpha[i][j]; }
};

/// Horocyclic arc of a decorated ideal triangle at the corner opposite
/// side l_opp:  alpha = exp((l_opp - l_adj1 - l_adj2) / 2).
inline double corner_h_length(double l_opp, double l_adj1, double l_adj2) {
    detail::require_finite(l_opp, "l_opp");
    detail::require_finite(l_adj1, "l_adj1");
    detail::require_finite(l_adj2, "l_adj2");
    const double x = 0.5 * (l_opp - l_adj1 - l_adj2);
    detail::require_exponent(x, "corner_h_length");
    return std::exp(x);
}

/// Horospherical arc at the near corner of a trapezoidal prism wall:
///   alpha^2 = exp(r_other - r_here - l) + exp(-2 r_here).
inline double lateral_arc(double r_here, double r_other, double l) {
    detail::require_finite(r_here, "r_here");
    detail::require_finite(r_other, "r_other");
    detail::require_finite(l, "l");
    const double e1 = r_other - r_here - l;
    const double e2 = -2.0 * r_here;
    detail::require_exponent(e1 > e2 ? e1 : e2, "lateral_arc");
    // factor out the dominant exponent so the sum cannot overflow
    const double hi = e1 > e2 ? e1 : e2;
    const double lo = e1 > e2 ? e2 : e1;
    return std::exp(0.5 * hi) * std::sqrt(1.0 + std::exp(lo - hi));
}

/// Length of the lower edge of a trapezoidal prism wall:
///   cosh(a) = 1 + 2 exp(l - r1 - r2),
/// evaluated in logarithmic form so large exponents stay finite.
inline double lower_edge_length(double l, double r1, double r2) {
    detail::require_finite(l, "l");
    detail::require_finite(r1, "r1");
    detail::require_finite(r2, "r2");
    const double x = l - r1 - r2;
    if (x > 30.0) {
        // a = x + log(e^{-x} + 2 + 2 sqrt(1 + e^{-x}))
        const double t = std::exp(-x);
        return x + std::log(t + 2.0 + 2.0 * std::sqrt(1.0 + t));
    }
    return detail::acosh1p(2.0 * std::exp(x));
}

/// Lower edge length from the distance rho between the supporting lines of
/// the upper and lower edges: cosh(a) = 1 + 2 / sinh^2(rho). Strictly
/// decreasing in rho.
inline double lower_edge_from_plane_distance(double rho) {
    detail::require_finite(rho, "rho");
    if (rho <= 0.0) throw DomainError("lower_edge_from_plane_distance requires rho > 0");
    if (rho >= 20.0) {
        // arccosh(1+y) = sqrt(2y) (1 + O(y)) with y = 2/sinh^2(rho)
        const double q = std::exp(-2.0 * rho);
        return 4.0 * std::exp(-rho) / (1.0 - q);
    }
    const double s = std::sinh(rho);
    return detail::acosh1p(2.0 / (s * s));
}

/// Angles of the Euclidean triangle with side lengths (s1, s2, s3),
/// returned as (angle opposite s3, angle opposite s2, angle opposite s1).
/// Throws InadmissiblePrismError if the strict triangle inequality fails;
/// `corner` only labels the error message.
inline std::array<double, 3> euclid_angles(double s1, double s2, double s3, int corner = -1) {
    detail::require_finite(s1, "s1");
    detail::require_finite(s2, "s2");
    detail::require_finite(s3, "s3");
    if (!(s1 > 0.0 && s2 > 0.0 && s3 > 0.0) ||
        !(s1 + s2 > s3 && s2 + s3 > s1 && s3 + s1 > s2)) {
        throw InadmissiblePrismError("horospherical cross-section violates the triangle inequality",
                                     corner);
    }
    return {detail::euclid_angle_opposite(s1, s2, s3),
            detail::euclid_angle_opposite(s1, s3, s2),
            detail::euclid_angle_opposite(s2, s3, s1)};
}

/// All angles of the truncated prism over a decorated ideal triangle with
/// Penner lengths l (l[k] opposite corner k) and truncation weights r.
/// Each upper-edge angle is measured at both of its corners; the two values
/// agree for a genuine prism and are averaged here.
inline PrismAngles prism_angles(const std::array<double, 3>& l, const std::array<double, 3>& r) {
    PrismAngles p;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int h = (i + 2) % 3;
        p.lambda[i] = corner_h_length(l[i], l[j], l[h]);
        p.alpha[i][j] = lateral_arc(r[i], r[j], l[h]);  // wall of edge (i,j), opposite h
        p.alpha[i][h] = lateral_arc(r[i], r[h], l[j]);
    }
    std::array<double, 3> phi_sum{};  // two estimates per upper edge
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int h = (i + 2) % 3;
        // cross-section triangle at corner i: the angle opposite lambda is
        // omega_i, the angle opposite alpha(i,j) is at the edge (i,h), i.e.
        // phi[j]; the angle opposite alpha(i,h) is phi[h].
        const auto ang = euclid_angles(p.alpha[i][j], p.alpha[i][h], p.lambda[i], i);
        p.omega[i] = ang[0];
        phi_sum[h] += ang[1];
        phi_sum[j] += ang[2];
    }
    for (int k = 0; k < 3; ++k) p.phi[k] = 0.5 * phi_sum[k];
    return p;
}

/// Derivatives of the vertical-edge angle omega at corner 0 with respect to
/// (r0, r1, r2), holding every upper-face length fixed. Closed forms:
///   d(omega_0)/d(r0) =  cot(phi01) (a01^2 + q) / (2 a01^2)
///                     + cot(phi02) (a02^2 + q) / (2 a02^2)
///   d(omega_0)/d(r1) =  cot(phi01) (q - a01^2) / (2 a01^2)
///   d(omega_0)/d(r2) =  cot(phi02) (q - a02^2) / (2 a02^2)
/// with q = exp(-2 r0), a0j = lateral arc toward corner j and phi0j the
/// dihedral angle of the upper edge (0, j).
inline std::array<double, 3> corner_derivatives(const std::array<double, 3>& l,
                                                const std::array<double, 3>& r) {
    const double a01 = lateral_arc(r[0], r[1], l[2]);
    const double a02 = lateral_arc(r[0], r[2], l[1]);
    const double lam = corner_h_length(l[0], l[1], l[2]);
    // angle opposite a02 sits on the edge (0,1); opposite a01 on (0,2)
    const auto ang = euclid_angles(a01, a02, lam, 0);
    const double phi01 = ang[1];  // dihedral angle of upper edge (0,1)
    const double phi02 = ang[2];  // dihedral angle of upper edge (0,2)
    const double q = std::exp(-2.0 * r[0]);
    const double s01 = a01 * a01;
    const double s02 = a02 * a02;
    const double c01 = std::cos(phi01) / std::sin(phi01);
    const double c02 = std::cos(phi02) / std::sin(phi02);
    return {c01 * (s01 + q) / (2.0 * s01) + c02 * (s02 + q) / (2.0 * s02),
            c01 * (q - s01) / (2.0 * s01),
            c02 * (q - s02) / (2.0 * s02)};
}

}  // namespace prismatic
