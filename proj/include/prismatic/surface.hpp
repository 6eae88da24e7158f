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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "prismatic/error.hpp"
#include "prismatic/hypgeom.hpp"

// Ideal triangulations of a punctured surface in the general sense: loops,
// multiple edges and triangles with two sides glued together are all legal.
//
// Conventions:
//   * every triangle carries corners 0,1,2 in counterclockwise order;
//   * side k of a triangle is the side opposite corner k, directed from
//     corner k+1 to corner k+2 (mod 3);
//   * a gluing identifies two side slots so that their directions are
//     reversed, which keeps the glued surface oriented;
//   * side slots and corner slots are both encoded as 3*t + k.

namespace prismatic {

using Vector = Eigen::VectorXd;

struct SurfaceReport {
    int num_triangles = 0;
    int num_edges = 0;
    int num_cusps = 0;
    int genus = 0;
    std::vector<std::vector<int>> cusp_corners;  // corner slots per cusp, walk order
};

class TriangulatedSurface {
public:
    using GluingPair = std::array<std::array<int, 2>, 2>;  // [[t,k],[t',k']]

    TriangulatedSurface() = default;

    /// Builds and validates a surface from gluing pairs. Throws
    /// CombinatoricsError on non-involutions, unglued slots, disconnected
    /// surfaces or inconsistent Euler characteristic. Cusp ids are assigned
    /// deterministically: orbit of the smallest corner slot first.
    TriangulatedSurface(int num_triangles, const std::vector<GluingPair>& pairs)
        : TriangulatedSurface(num_triangles, involution_from_pairs(num_triangles, pairs), {}) {}

    int num_triangles() const { return num_triangles_; }
    int num_edges() const { return static_cast<int>(edge_slots_.size()); }
    int num_cusps() const { return num_cusps_; }
    int genus() const { return genus_; }

    static int slot(int tri, int side) { return 3 * tri + side; }
    static int slot_tri(int s) { return s / 3; }
    static int slot_side(int s) { return s % 3; }

    int glued_to(int s) const { return gluing_[s]; }
    int edge_of_slot(int s) const { return slot_edge_[s]; }
    const std::array<int, 2>& edge_slots(int e) const { return edge_slots_[e]; }
    int cusp_of_corner(int tri, int corner) const { return corner_cusp_[3 * tri + corner]; }

    /// The two cusps at the ends of an edge (tail = smaller slot side).
    std::array<int, 2> edge_cusps(int e) const {
        const auto& es = edge_slots_[e];
        const int t = slot_tri(es[0]), k = slot_side(es[0]);
        const int t2 = slot_tri(es[1]), k2 = slot_side(es[1]);
        return {corner_cusp_[3 * t + (k + 1) % 3], corner_cusp_[3 * t2 + (k2 + 1) % 3]};
    }

    bool edge_is_flippable(int e) const {
        const auto& es = edge_slots_[e];
        return slot_tri(es[0]) != slot_tri(es[1]);
    }

    const std::vector<int>& gluing() const { return gluing_; }
    const std::vector<int>& corner_cusps() const { return corner_cusp_; }

    /// Gluing pairs in deterministic (edge id) order.
    std::vector<GluingPair> gluing_pairs() const {
        std::vector<GluingPair> out;
        out.reserve(edge_slots_.size());
        for (const auto& es : edge_slots_) {
            out.push_back({{{slot_tri(es[0]), slot_side(es[0])},
                            {slot_tri(es[1]), slot_side(es[1])}}});
        }
        return out;
    }

    SurfaceReport report() const {
        SurfaceReport r;
        r.num_triangles = num_triangles_;
        r.num_edges = num_edges();
        r.num_cusps = num_cusps_;
        r.genus = genus_;
        r.cusp_corners = cusp_corners_;
        return r;
    }

    /// Next corner slot when walking counterclockwise around the vertex of
    /// the given corner: cross side (c+1) of the triangle.
    int next_corner_around_cusp(int corner_slot) const {
        const int t = slot_tri(corner_slot);
        const int c = slot_side(corner_slot);
        const int target = gluing_[slot(t, (c + 1) % 3)];
        return slot(slot_tri(target), (slot_side(target) + 1) % 3);
    }

    bool same_combinatorics(const TriangulatedSurface& other) const {
        return num_triangles_ == other.num_triangles_ && gluing_ == other.gluing_;
    }

    /// Internal: rebuilds a surface keeping caller-supplied cusp labels
    /// (used by flips, where geometric vertex identity must survive).
    static TriangulatedSurface with_cusp_labels(int num_triangles, std::vector<int> gluing,
                                                std::vector<int> corner_cusps) {
        return TriangulatedSurface(num_triangles, std::move(gluing), std::move(corner_cusps));
    }

private:
    TriangulatedSurface(int num_triangles, std::vector<int> gluing, std::vector<int> cusp_labels)
        : num_triangles_(num_triangles), gluing_(std::move(gluing)) {
        if (num_triangles_ <= 0) throw CombinatoricsError("surface needs at least one triangle");
        const int n_slots = 3 * num_triangles_;
        if (static_cast<int>(gluing_.size()) != n_slots)
            throw CombinatoricsError("gluing table has the wrong size");
        for (int s = 0; s < n_slots; ++s) {
            const int g = gluing_[s];
            if (g < 0 || g >= n_slots)
                throw CombinatoricsError("slot " + slot_name(s) + " is unglued or out of range");
            if (g == s) throw CombinatoricsError("gluing fixes slot " + slot_name(s));
            if (gluing_[g] != s)
                throw CombinatoricsError("gluing is not an involution at slot " + slot_name(s));
        }
        build_edges();
        check_connected();
        build_cusps(cusp_labels);
        // Euler characteristic of a closed oriented surface: V - E + F = 2 - 2g
        const int chi = num_cusps_ - num_edges() + num_triangles_;
        if ((2 - chi) % 2 != 0 || chi > 2)
            throw CombinatoricsError("gluing does not describe an oriented surface (chi = " +
                                     std::to_string(chi) + ")");
        genus_ = (2 - chi) / 2;
    }

    static std::vector<int> involution_from_pairs(int num_triangles,
                                                  const std::vector<GluingPair>& pairs) {
        const int n_slots = 3 * num_triangles;
        std::vector<int> g(n_slots, -1);
        for (const auto& p : pairs) {
            int a = slot_checked(num_triangles, p[0][0], p[0][1]);
            int b = slot_checked(num_triangles, p[1][0], p[1][1]);
            if (a == b) throw CombinatoricsError("gluing fixes slot " + slot_name(a));
            if (g[a] != -1 || g[b] != -1)
                throw CombinatoricsError("slot glued twice: " + slot_name(g[a] != -1 ? a : b));
            g[a] = b;
            g[b] = a;
        }
        for (int s = 0; s < n_slots; ++s)
            if (g[s] == -1) throw CombinatoricsError("slot " + slot_name(s) + " is unglued");
        return g;
    }

    static int slot_checked(int num_triangles, int t, int k) {
        if (t < 0 || t >= num_triangles || k < 0 || k > 2)
            throw CombinatoricsError("slot (" + std::to_string(t) + "," + std::to_string(k) +
                                     ") out of range");
        return slot(t, k);
    }

    static std::string slot_name(int s) {
        return "(" + std::to_string(slot_tri(s)) + "," + std::to_string(slot_side(s)) + ")";
    }

    void build_edges() {
        const int n_slots = 3 * num_triangles_;
        slot_edge_.assign(n_slots, -1);
        edge_slots_.clear();
        for (int s = 0; s < n_slots; ++s) {
            if (slot_edge_[s] != -1) continue;
            const int g = gluing_[s];
            const int id = static_cast<int>(edge_slots_.size());
            edge_slots_.push_back({s, g});
            slot_edge_[s] = id;
            slot_edge_[g] = id;
        }
    }

    void check_connected() const {
        std::vector<char> seen(num_triangles_, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            const int t = stack.back();
            stack.pop_back();
            for (int k = 0; k < 3; ++k) {
                const int t2 = slot_tri(gluing_[slot(t, k)]);
                if (!seen[t2]) {
                    seen[t2] = 1;
                    ++count;
                    stack.push_back(t2);
                }
            }
        }
        if (count != num_triangles_) throw CombinatoricsError("surface is not connected");
    }

    void build_cusps(const std::vector<int>& cusp_labels) {
        const int n_corners = 3 * num_triangles_;
        corner_cusp_.assign(n_corners, -1);
        cusp_corners_.clear();
        for (int c0 = 0; c0 < n_corners; ++c0) {
            if (corner_cusp_[c0] != -1) continue;
            const int id = static_cast<int>(cusp_corners_.size());
            std::vector<int> orbit;
            int c = c0;
            do {
                if (corner_cusp_[c] != -1)
                    throw CombinatoricsError("corner walk does not close up");
                corner_cusp_[c] = id;
                orbit.push_back(c);
                c = next_corner_around_cusp(c);
            } while (c != c0);
            cusp_corners_.push_back(std::move(orbit));
        }
        num_cusps_ = static_cast<int>(cusp_corners_.size());
        if (!cusp_labels.empty()) {
            // remap deterministic orbit ids to the supplied labels
            if (static_cast<int>(cusp_labels.size()) != n_corners)
                throw CombinatoricsError("cusp label table has the wrong size");
            std::vector<int> orbit_to_label(num_cusps_, -1);
            for (int c = 0; c < n_corners; ++c) {
                const int o = corner_cusp_[c];
                if (orbit_to_label[o] == -1) orbit_to_label[o] = cusp_labels[c];
                if (orbit_to_label[o] != cusp_labels[c])
                    throw CombinatoricsError("cusp labels are not constant on a vertex orbit");
            }
            std::vector<std::vector<int>> relabeled(num_cusps_);
            for (int o = 0; o < num_cusps_; ++o) {
                const int lab = orbit_to_label[o];
                if (lab < 0 || lab >= num_cusps_ || !relabeled[lab].empty())
                    throw CombinatoricsError("cusp labels are not a permutation");
                relabeled[lab] = std::move(cusp_corners_[o]);
            }
            cusp_corners_ = std::move(relabeled);
            corner_cusp_ = cusp_labels;
        }
    }

    int num_triangles_ = 0;
    std::vector<int> gluing_;
    std::vector<std::array<int, 2>> edge_slots_;
    std::vector<int> slot_edge_;
    std::vector<int> corner_cusp_;
    std::vector<std::vector<int>> cusp_corners_;
    int num_cusps_ = 0;
    int genus_ = 0;
};

/// Penner data on a triangulated surface: one real length per edge.
struct DecoratedMetric {
    TriangulatedSurface surface;
    Vector lengths;  // indexed by edge id

    DecoratedMetric() = default;
    DecoratedMetric(TriangulatedSurface s, Vector l) : surface(std::move(s)), lengths(std::move(l)) {
        if (lengths.size() != surface.num_edges())
            throw CombinatoricsError("edge length count does not match edge count");
        for (Eigen::Index i = 0; i < lengths.size(); ++i)
            if (!std::isfinite(lengths[i]))
                throw DomainError("non-finite edge length at edge " + std::to_string(i));
    }
};

inline SurfaceReport validate(const TriangulatedSurface& s) { return s.report(); }

/// One oriented edge leaving a cusp.
struct OrientedEdge {
    int edge = -1;
    int tail_cusp = -1;
    int head_cusp = -1;
    bool loop = false;
};

/// The oriented edges leaving one cusp (loops appear once per end) together
/// with the corner slots around the cusp in walk order.
struct OrientedStar {
    std::vector<int> corners;
    std::vector<OrientedEdge> out_edges;

    int count_loops() const {
        int n = 0;
        for (const auto& e : out_edges) n += e.loop ? 1 : 0;
        return n;
    }
    int count_petals() const { return static_cast<int>(out_edges.size()) - count_loops(); }
};

inline OrientedStar oriented_star(const TriangulatedSurface& s, int cusp) {
    if (cusp < 0 || cusp >= s.num_cusps()) throw CombinatoricsError("invalid cusp id");
    OrientedStar star;
    star.corners = s.report().cusp_corners[cusp];
    for (int c : star.corners) {
        // the side crossed when stepping to the next corner starts at this cusp
        const int t = TriangulatedSurface::slot_tri(c);
        const int k = (TriangulatedSurface::slot_side(c) + 1) % 3;
        const int side = TriangulatedSurface::slot(t, k);
        OrientedEdge oe;
        oe.edge = s.edge_of_slot(side);
        oe.tail_cusp = cusp;
        // side k runs from corner k+1 to corner k+2; the walk leaves from
        // corner k+2 (= c), so the head is the cusp of corner k+1.
        oe.head_cusp = s.cusp_of_corner(t, (k + 1) % 3);
        oe.loop = oe.head_cusp == cusp;
        star.out_edges.push_back(oe);
    }
    return star;
}

namespace detail {
inline double ptolemy_new_length(double l_a, double l_c, double l_b, double l_d, double l_old) {
    // lambda_new * lambda_old = lambda_a lambda_c + lambda_b lambda_d, in logs
    return 2.0 * log_add_exp(0.5 * (l_a + l_c), 0.5 * (l_b + l_d)) - l_old;
}
}  // namespace detail

/// Flips one edge of a decorated surface. The new diagonal length satisfies
/// the Ptolemy relation on lambda = exp(l/2), so the decorated surface is
/// unchanged as a metric object. Cusp labels are carried through. Edge ids
/// are re-derived for the new gluing.
inline DecoratedMetric flip(const DecoratedMetric& metric, int edge) {
    const TriangulatedSurface& s = metric.surface;
    if (edge < 0 || edge >= s.num_edges()) throw FlipError("invalid edge id " + std::to_string(edge));
    if (!s.edge_is_flippable(edge))
        throw FlipError("edge " + std::to_string(edge) + " is self-adjacent and cannot be flipped");

    const auto es = s.edge_slots(edge);
    const int t = TriangulatedSurface::slot_tri(es[0]);
    const int k = TriangulatedSurface::slot_side(es[0]);
    const int t2 = TriangulatedSurface::slot_tri(es[1]);
    const int k2 = TriangulatedSurface::slot_side(es[1]);

    // quadrilateral P,Q,R,S in ccw order; the flipped edge is the diagonal QS
    const int cP = TriangulatedSurface::slot(t, k);
    const int cQ = TriangulatedSurface::slot(t, (k + 1) % 3);
    const int cS = TriangulatedSurface::slot(t, (k + 2) % 3);
    const int cR = TriangulatedSurface::slot(t2, k2);

    const int sPQ = TriangulatedSurface::slot(t, (k + 2) % 3);
    const int sQR = TriangulatedSurface::slot(t2, (k2 + 1) % 3);
    const int sRS = TriangulatedSurface::slot(t2, (k2 + 2) % 3);
    const int sSP = TriangulatedSurface::slot(t, (k + 1) % 3);

    const double l_new = detail::ptolemy_new_length(
        metric.lengths[s.edge_of_slot(sPQ)], metric.lengths[s.edge_of_slot(sRS)],
        metric.lengths[s.edge_of_slot(sQR)], metric.lengths[s.edge_of_slot(sSP)],
        metric.lengths[edge]);

    // new triangles: t = (P,Q,R) with the diagonal opposite Q, and
    // t2 = (P,R,S) with the diagonal opposite S
    std::vector<int> gluing = s.gluing();
    std::vector<int> labels = s.corner_cusps();
    std::vector<double> slot_length(gluing.size());
    for (size_t sl = 0; sl < gluing.size(); ++sl)
        slot_length[sl] = metric.lengths[s.edge_of_slot(static_cast<int>(sl))];

    const int nPQ = TriangulatedSurface::slot(t, 2);
    const int nQR = TriangulatedSurface::slot(t, 0);
    const int nRS = TriangulatedSurface::slot(t2, 0);
    const int nSP = TriangulatedSurface::slot(t2, 1);
    const int nDiagT = TriangulatedSurface::slot(t, 1);
    const int nDiagT2 = TriangulatedSurface::slot(t2, 2);

    auto remap = [&](int old_slot) {
        if (old_slot == sPQ) return nPQ;
        if (old_slot == sQR) return nQR;
        if (old_slot == sRS) return nRS;
        if (old_slot == sSP) return nSP;
        return old_slot;
    };

    std::vector<int> new_gluing = gluing;
    std::vector<double> new_slot_length = slot_length;
    for (int old_slot : {sPQ, sQR, sRS, sSP}) {
        const int partner = remap(gluing[old_slot]);
        const int ns = remap(old_slot);
        new_gluing[ns] = partner;
        new_gluing[partner] = ns;
        new_slot_length[ns] = slot_length[old_slot];
        if (partner != gluing[old_slot]) new_slot_length[partner] = slot_length[old_slot];
    }
    new_gluing[nDiagT] = nDiagT2;
    new_gluing[nDiagT2] = nDiagT;
    new_slot_length[nDiagT] = l_new;
    new_slot_length[nDiagT2] = l_new;

    std::vector<int> new_labels = labels;
    new_labels[TriangulatedSurface::slot(t, 0)] = labels[cP];
    new_labels[TriangulatedSurface::slot(t, 1)] = labels[cQ];
    new_labels[TriangulatedSurface::slot(t, 2)] = labels[cR];
    new_labels[TriangulatedSurface::slot(t2, 0)] = labels[cP];
    new_labels[TriangulatedSurface::slot(t2, 1)] = labels[cR];
    new_labels[TriangulatedSurface::slot(t2, 2)] = labels[cS];

    TriangulatedSurface ns =
        TriangulatedSurface::with_cusp_labels(s.num_triangles(), new_gluing, new_labels);
    Vector lengths(ns.num_edges());
    for (int e = 0; e < ns.num_edges(); ++e) lengths[e] = new_slot_length[ns.edge_slots(e)[0]];
    return DecoratedMetric(std::move(ns), std::move(lengths));
}

/// Canonical relabeling of a decorated surface: breadth-first triangle
/// discovery from every possible root slot, keeping the lexicographically
/// smallest gluing encoding. Two representations of the same decorated
/// surface canonicalize to identical gluing tables; lengths and per-corner
/// cusp labels are transported along.
struct CanonicalMetric {
    std::vector<int> gluing;
    std::vector<double> lengths;     // by canonical edge id
    std::vector<int> corner_cusps;   // by canonical corner slot, original cusp ids
};

inline CanonicalMetric canonical_form(const DecoratedMetric& metric) {
    const TriangulatedSurface& s = metric.surface;
    const int F = s.num_triangles();
    const int n_slots = 3 * F;

    std::vector<int> best_gluing;
    std::vector<int> best_new_of_old;  // old slot -> new slot

    for (int root = 0; root < n_slots; ++root) {
        // new_tri[old_t] and rot[old_t]: old corner c maps to (c - rot) mod 3
        std::vector<int> new_tri(F, -1), rot(F, 0);
        std::vector<int> order;
        order.reserve(F);
        const int rt = TriangulatedSurface::slot_tri(root);
        new_tri[rt] = 0;
        rot[rt] = TriangulatedSurface::slot_side(root);
        order.push_back(rt);
        for (int qi = 0; qi < F; ++qi) {
            const int ot = order[qi];
            for (int nk = 0; nk < 3; ++nk) {
                const int ok = (nk + rot[ot]) % 3;
                const int target = s.glued_to(TriangulatedSurface::slot(ot, ok));
                const int tt = TriangulatedSurface::slot_tri(target);
                if (new_tri[tt] == -1) {
                    new_tri[tt] = static_cast<int>(order.size());
                    rot[tt] = TriangulatedSurface::slot_side(target);
                    order.push_back(tt);
                }
            }
        }
        std::vector<int> new_of_old(n_slots);
        for (int ot = 0; ot < F; ++ot)
            for (int ok = 0; ok < 3; ++ok)
                new_of_old[TriangulatedSurface::slot(ot, ok)] =
                    TriangulatedSurface::slot(new_tri[ot], (ok - rot[ot] + 3) % 3);
        std::vector<int> enc(n_slots);
        for (int os = 0; os < n_slots; ++os) enc[new_of_old[os]] = new_of_old[s.glued_to(os)];
        if (best_gluing.empty() || enc < best_gluing) {
            best_gluing = std::move(enc);
            best_new_of_old = std::move(new_of_old);
        }
    }

    CanonicalMetric out;
    out.gluing = best_gluing;
    out.corner_cusps.assign(n_slots, -1);
    for (int os = 0; os < n_slots; ++os)
        out.corner_cusps[best_new_of_old[os]] =
            s.cusp_of_corner(TriangulatedSurface::slot_tri(os), TriangulatedSurface::slot_side(os));
    // canonical edge ids: scan canonical slots in order
    std::vector<int> canon_edge(n_slots, -1);
    int n_edges = 0;
    for (int cs = 0; cs < n_slots; ++cs) {
        if (canon_edge[cs] != -1) continue;
        canon_edge[cs] = n_edges;
        canon_edge[out.gluing[cs]] = n_edges;
        ++n_edges;
    }
    out.lengths.assign(n_edges, 0.0);
    for (int os = 0; os < n_slots; ++os)
        out.lengths[canon_edge[best_new_of_old[os]]] = metric.lengths[s.edge_of_slot(os)];
    return out;
}

}  // namespace prismatic
