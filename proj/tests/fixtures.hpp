// Shared test fixtures: small ideal triangulations with known topology.
#pragma once

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "prismatic/surface.hpp"

namespace fixtures {

using prismatic::DecoratedMetric;
using prismatic::TriangulatedSurface;
using Pair = prismatic::TriangulatedSurface::GluingPair;

// Thrice-punctured sphere: two ideal triangles glued along all three sides.
inline TriangulatedSurface fx0_surface() {
    std::vector<Pair> pairs = {
        {{{0, 0}, {1, 0}}},
        {{{0, 1}, {1, 2}}},
        {{{0, 2}, {1, 1}}},
    };
    return TriangulatedSurface(2, pairs);
}

inline DecoratedMetric fx0(double l = 0.0) {
    auto s = fx0_surface();
    return DecoratedMetric(s, prismatic::Vector::Constant(s.num_edges(), l));
}

// One-vertex genus-2 surface: octagon with identification a b a' b' c d c' d',
// fan-triangulated from one vertex. 6 triangles, 9 edges, 1 cusp.
inline TriangulatedSurface fx1_surface() {
    std::vector<Pair> pairs = {
        // fan diagonals
        {{{0, 1}, {1, 2}}},
        {{{1, 1}, {2, 2}}},
        {{{2, 1}, {3, 2}}},
        {{{3, 1}, {4, 2}}},
        {{{4, 1}, {5, 2}}},
        // octagon side identifications
        {{{0, 2}, {1, 0}}},
        {{{0, 0}, {2, 0}}},
        {{{3, 0}, {5, 0}}},
        {{{4, 0}, {5, 1}}},
    };
    return TriangulatedSurface(6, pairs);
}

inline DecoratedMetric fx1(double l = 2.0) {
    auto s = fx1_surface();
    return DecoratedMetric(s, prismatic::Vector::Constant(s.num_edges(), l));
}

// Genus-2 surface with two cusps: fx1 with its last fan triangle subdivided
// by an interior vertex. 8 triangles, 12 edges, 2 cusps.
inline TriangulatedSurface fx2_surface() {
    std::vector<Pair> pairs = {
        {{{0, 1}, {1, 2}}},
        {{{1, 1}, {2, 2}}},
        {{{2, 1}, {3, 2}}},
        {{{3, 1}, {4, 2}}},
        {{{4, 1}, {5, 2}}},
        {{{0, 2}, {1, 0}}},
        {{{0, 0}, {2, 0}}},
        {{{3, 0}, {6, 2}}},
        {{{4, 0}, {7, 2}}},
        {{{5, 0}, {6, 1}}},
        {{{6, 0}, {7, 1}}},
        {{{7, 0}, {5, 1}}},
    };
    return TriangulatedSurface(8, pairs);
}

inline DecoratedMetric fx2(double l = 2.0) {
    auto s = fx2_surface();
    return DecoratedMetric(s, prismatic::Vector::Constant(s.num_edges(), l));
}

// A thrice-punctured sphere with a self-folded triangle; edge 0 is unflippable.
inline TriangulatedSurface self_folded_surface() {
    std::vector<Pair> pairs = {
        {{{0, 0}, {0, 1}}},
        {{{0, 2}, {1, 0}}},
        {{{1, 1}, {1, 2}}},
    };
    return TriangulatedSurface(2, pairs);
}

// One-vertex genus-g surface: 4g-gon with the standard identification,
// fan-triangulated from one polygon vertex. 4g-2 triangles, 6g-3 edges.
inline std::vector<Pair> one_vertex_fan_pairs(int genus) {
    const int sides = 4 * genus;
    const int faces = sides - 2;
    // boundary side i of the polygon as a slot of the fan
    auto boundary = [&](int i) -> std::array<int, 2> {
        if (i == 0) return {0, 2};
        if (i == sides - 1) return {faces - 1, 1};
        return {i - 1, 0};
    };
    std::vector<Pair> pairs;
    for (int j = 1; j <= faces - 1; ++j) pairs.push_back({{{j - 1, 1}, {j, 2}}});
    for (int k = 0; k < genus; ++k) {
        pairs.push_back({{boundary(4 * k), boundary(4 * k + 2)}});
        pairs.push_back({{boundary(4 * k + 1), boundary(4 * k + 3)}});
    }
    return pairs;
}

// Star-subdivides triangle t of a gluing list in place: t is replaced and
// two triangles are appended, adding one interior vertex.
inline void star_subdivide(std::vector<Pair>& pairs, int& num_triangles, int t) {
    const int b = num_triangles, c = num_triangles + 1;
    auto remap = [&](std::array<int, 2> slot) -> std::array<int, 2> {
        if (slot[0] != t) return slot;
        if (slot[1] == 0) return {b, 2};
        if (slot[1] == 1) return {c, 2};
        return {t, 2};
    };
    for (auto& p : pairs) {
        p[0] = remap(p[0]);
        p[1] = remap(p[1]);
    }
    pairs.push_back({{{t, 0}, {b, 1}}});
    pairs.push_back({{{b, 0}, {c, 1}}});
    pairs.push_back({{{c, 0}, {t, 1}}});
    num_triangles += 2;
}

// Genus-3 surface with three cusps: two fan triangles star-subdivided. The
// two interior vertices are not joined by any edge of this triangulation.
inline TriangulatedSurface fx3_surface() {
    auto pairs = one_vertex_fan_pairs(3);
    int faces = 10;
    star_subdivide(pairs, faces, 0);
    star_subdivide(pairs, faces, 5);
    return TriangulatedSurface(faces, pairs);
}

inline DecoratedMetric fx3(double l = 2.0) {
    auto s = fx3_surface();
    return DecoratedMetric(s, prismatic::Vector::Constant(s.num_edges(), l));
}

// Closed form for the symmetric genus-2 fixture: with all upper lengths 2,
// the curvature at the single cusp vanishes at r* = (2 - ln u)/2 where
// u = 1/(2 (1 - cos(pi/9))) - 1.
inline double fx1_u() {
    return 1.0 / (2.0 * (1.0 - std::cos(M_PI / 9.0))) - 1.0;
}
inline double fx1_rstar() { return 0.5 * (2.0 - std::log(fx1_u())); }

inline prismatic::Vector random_vector(std::mt19937& rng, int n, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    prismatic::Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = d(rng);
    return v;
}

}  // namespace fixtures
