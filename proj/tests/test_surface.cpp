#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "prismatic/surface.hpp"

using namespace prismatic;
using Catch::Approx;

TEST_CASE("validate computes the topology of the fixtures") {
    SECTION("one-vertex genus-2 octagon") {
        const auto r = validate(fixtures::fx1_surface());
        CHECK(r.num_triangles == 6);
        CHECK(r.num_edges == 9);
        CHECK(r.num_cusps == 1);
        CHECK(r.genus == 2);
        CHECK(r.cusp_corners[0].size() == 18);
    }
    SECTION("thrice-punctured sphere") {
        const auto r = validate(fixtures::fx0_surface());
        CHECK(r.num_triangles == 2);
        CHECK(r.num_edges == 3);
        CHECK(r.num_cusps == 3);
        CHECK(r.genus == 0);
    }
    SECTION("two-cusp genus-2 variant") {
        const auto r = validate(fixtures::fx2_surface());
        CHECK(r.num_triangles == 8);
        CHECK(r.num_edges == 12);
        CHECK(r.num_cusps == 2);
        CHECK(r.genus == 2);
        // the star-subdivision vertex has exactly three corner incidences
        std::multiset<size_t> sizes{r.cusp_corners[0].size(), r.cusp_corners[1].size()};
        CHECK(sizes == std::multiset<size_t>{3, 21});
    }
    SECTION("generalized fan reproduces the octagon fixture") {
        const TriangulatedSurface fan2(6, fixtures::one_vertex_fan_pairs(2));
        CHECK(fan2.same_combinatorics(fixtures::fx1_surface()));
    }
    SECTION("three-cusp genus-3 variant") {
        const auto r = validate(fixtures::fx3_surface());
        CHECK(r.num_triangles == 14);
        CHECK(r.num_edges == 21);
        CHECK(r.num_cusps == 3);
        CHECK(r.genus == 3);
        // the two interior vertices are not joined by an edge
        const auto s = fixtures::fx3_surface();
        std::multiset<size_t> sizes;
        for (const auto& orbit : r.cusp_corners) sizes.insert(orbit.size());
        CHECK(sizes == std::multiset<size_t>{3, 3, 36});
        int small_pair_edges = 0;
        for (int e = 0; e < s.num_edges(); ++e) {
            const auto cusps = s.edge_cusps(e);
            if (cusps[0] != cusps[1] && cusps[0] > 0 && cusps[1] > 0) ++small_pair_edges;
        }
        CHECK(small_pair_edges == 0);
    }
}

TEST_CASE("validate rejects malformed gluings") {
    using Pair = TriangulatedSurface::GluingPair;
    SECTION("fixed point") {
        std::vector<Pair> pairs = {{{{0, 0}, {0, 0}}}, {{{0, 1}, {1, 1}}},
                                   {{{0, 2}, {1, 2}}}, {{{1, 0}, {1, 0}}}};
        CHECK_THROWS_AS(TriangulatedSurface(2, pairs), CombinatoricsError);
    }
    SECTION("unglued slot") {
        std::vector<Pair> pairs = {{{{0, 0}, {1, 0}}}, {{{0, 1}, {1, 2}}}};
        CHECK_THROWS_AS(TriangulatedSurface(2, pairs), CombinatoricsError);
    }
    SECTION("slot glued twice") {
        std::vector<Pair> pairs = {{{{0, 0}, {1, 0}}}, {{{0, 0}, {1, 1}}},
                                   {{{0, 1}, {1, 2}}}, {{{0, 2}, {1, 1}}}};
        CHECK_THROWS_AS(TriangulatedSurface(2, pairs), CombinatoricsError);
    }
    SECTION("disconnected surface") {
        // two disjoint thrice-punctured spheres
        std::vector<Pair> pairs = {{{{0, 0}, {1, 0}}}, {{{0, 1}, {1, 2}}}, {{{0, 2}, {1, 1}}},
                                   {{{2, 0}, {3, 0}}}, {{{2, 1}, {3, 2}}}, {{{2, 2}, {3, 1}}}};
        CHECK_THROWS_AS(TriangulatedSurface(4, pairs), CombinatoricsError);
    }
}

TEST_CASE("cusp and edge ids are deterministic") {
    const auto s = fixtures::fx2_surface();
    // cusp 0 is the orbit of the smallest corner slot
    CHECK(s.cusp_of_corner(0, 0) == 0);
    // edge ids ordered by smallest side slot
    for (int e = 0; e + 1 < s.num_edges(); ++e) {
        const int a = std::min(s.edge_slots(e)[0], s.edge_slots(e)[1]);
        const int b = std::min(s.edge_slots(e + 1)[0], s.edge_slots(e + 1)[1]);
        CHECK(a < b);
    }
    // rebuilding from emitted pairs reproduces ids
    const TriangulatedSurface s2(s.num_triangles(), s.gluing_pairs());
    CHECK(s2.same_combinatorics(s));
    CHECK(s2.corner_cusps() == s.corner_cusps());
}

TEST_CASE("corner walks close up and cover all corners") {
    for (const auto& s : {fixtures::fx0_surface(), fixtures::fx1_surface(),
                          fixtures::fx2_surface(), fixtures::self_folded_surface()}) {
        const auto r = validate(s);
        size_t total = 0;
        for (const auto& orbit : r.cusp_corners) total += orbit.size();
        CHECK(total == static_cast<size_t>(3 * s.num_triangles()));
    }
}

TEST_CASE("oriented_star") {
    SECTION("one-vertex surface sees every edge as a double loop") {
        const auto s = fixtures::fx1_surface();
        const auto star = oriented_star(s, 0);
        CHECK(star.out_edges.size() == 18);
        CHECK(star.count_loops() == 18);
        CHECK(star.count_petals() == 0);
        // each of the nine edges appears exactly twice
        std::map<int, int> seen;
        for (const auto& oe : star.out_edges) seen[oe.edge]++;
        CHECK(seen.size() == 9);
        for (const auto& [e, n] : seen) CHECK(n == 2);
    }
    SECTION("thrice-punctured sphere has two petals per cusp") {
        const auto s = fixtures::fx0_surface();
        for (int c = 0; c < 3; ++c) {
            const auto star = oriented_star(s, c);
            CHECK(star.count_petals() == 2);
            CHECK(star.count_loops() == 0);
        }
    }
    SECTION("oriented edge ends sum to twice the edge count") {
        for (const auto& s : {fixtures::fx0_surface(), fixtures::fx1_surface(),
                              fixtures::fx2_surface(), fixtures::self_folded_surface()}) {
            int total = 0;
            for (int c = 0; c < s.num_cusps(); ++c)
                total += static_cast<int>(oriented_star(s, c).out_edges.size());
            CHECK(total == 2 * s.num_edges());
        }
    }
    CHECK_THROWS_AS(oriented_star(fixtures::fx0_surface(), 5), CombinatoricsError);
}

TEST_CASE("flip") {
    SECTION("Ptolemy update on the all-zero sphere") {
        const auto m = fixtures::fx0(0.0);
        const auto m2 = flip(m, 0);
        CHECK(m2.surface.num_edges() == 3);
        CHECK(validate(m2.surface).genus == 0);
        CHECK(validate(m2.surface).num_cusps == 3);
        // exactly one edge changed, to 2 ln 2
        int changed = 0;
        for (int e = 0; e < 3; ++e) {
            if (std::abs(m2.lengths[e]) > 1e-12) {
                ++changed;
                CHECK(m2.lengths[e] == Approx(2.0 * std::log(2.0)).epsilon(1e-14));
            }
        }
        CHECK(changed == 1);
    }
    SECTION("flip preserves F, E, g, n") {
        auto m = fixtures::fx2(1.0);
        std::mt19937 rng(5);
        for (int k = 0; k < 20; ++k) {
            std::uniform_int_distribution<int> pick(0, m.surface.num_edges() - 1);
            int e = pick(rng);
            if (!m.surface.edge_is_flippable(e)) continue;
            const auto before = validate(m.surface);
            m = flip(m, e);
            const auto after = validate(m.surface);
            CHECK(after.num_triangles == before.num_triangles);
            CHECK(after.num_edges == before.num_edges);
            CHECK(after.genus == before.genus);
            CHECK(after.num_cusps == before.num_cusps);
        }
    }
    SECTION("double flip restores the decorated surface") {
        auto base = fixtures::fx1(2.0);
        // make it less symmetric first
        base.lengths[0] = 1.0;
        base.lengths[4] = 2.5;
        for (int e = 0; e < base.surface.num_edges(); ++e) {
            if (!base.surface.edge_is_flippable(e)) continue;
            const auto once = flip(base, e);
            // the new diagonal occupies side 1 of the first triangle of e
            const int t = TriangulatedSurface::slot_tri(base.surface.edge_slots(e)[0]);
            const int diag = once.surface.edge_of_slot(TriangulatedSurface::slot(t, 1));
            const auto twice = flip(once, diag);
            const auto c0 = canonical_form(base);
            const auto c1 = canonical_form(twice);
            REQUIRE(c0.gluing == c1.gluing);
            REQUIRE(c0.corner_cusps == c1.corner_cusps);
            for (size_t i = 0; i < c0.lengths.size(); ++i)
                CHECK(c0.lengths[i] == Approx(c1.lengths[i]).margin(1e-12));
        }
    }
    SECTION("double flip preserves cusp labels on a two-cusp surface") {
        std::mt19937 rng(19);
        auto base = fixtures::fx2(1.0);
        base.lengths = fixtures::random_vector(rng, base.surface.num_edges(), -0.5, 1.5);
        int checked = 0;
        for (int e = 0; e < base.surface.num_edges() && checked < 5; ++e) {
            if (!base.surface.edge_is_flippable(e)) continue;
            ++checked;
            const auto once = flip(base, e);
            const int t = TriangulatedSurface::slot_tri(base.surface.edge_slots(e)[0]);
            const int diag = once.surface.edge_of_slot(TriangulatedSurface::slot(t, 1));
            const auto twice = flip(once, diag);
            const auto c0 = canonical_form(base);
            const auto c1 = canonical_form(twice);
            REQUIRE(c0.gluing == c1.gluing);
            REQUIRE(c0.corner_cusps == c1.corner_cusps);
            for (size_t i = 0; i < c0.lengths.size(); ++i)
                CHECK(c0.lengths[i] == Approx(c1.lengths[i]).margin(1e-12));
        }
        CHECK(checked == 5);
    }
    SECTION("self-adjacent edges cannot be flipped") {
        const auto s = fixtures::self_folded_surface();
        DecoratedMetric m(s, Vector::Zero(s.num_edges()));
        CHECK_FALSE(s.edge_is_flippable(0));
        CHECK_THROWS_AS(flip(m, 0), FlipError);
        CHECK_THROWS_AS(flip(m, 99), FlipError);
    }
}

TEST_CASE("canonical form is label independent") {
    // relabel fx2's triangles and check the canonical encodings agree
    const auto s = fixtures::fx2_surface();
    std::mt19937 rng(101);
    DecoratedMetric m(s, fixtures::random_vector(rng, s.num_edges(), -1, 2));
    // rotate triangle indices by 3
    const int F = s.num_triangles();
    std::vector<TriangulatedSurface::GluingPair> pairs;
    for (const auto& p : s.gluing_pairs()) {
        TriangulatedSurface::GluingPair q = {
            {{{(p[0][0] + 3) % F, p[0][1]}}, {{(p[1][0] + 3) % F, p[1][1]}}}};
        pairs.push_back(q);
    }
    TriangulatedSurface s2(F, pairs);
    Vector lengths2(s2.num_edges());
    for (int e = 0; e < s2.num_edges(); ++e) {
        const auto es = s2.edge_slots(e);
        const int t = TriangulatedSurface::slot_tri(es[0]);
        const int k = TriangulatedSurface::slot_side(es[0]);
        const int old_slot = TriangulatedSurface::slot((t - 3 + F) % F, k);
        lengths2[e] = m.lengths[s.edge_of_slot(old_slot)];
    }
    DecoratedMetric m2(s2, lengths2);
    const auto c1 = canonical_form(m);
    const auto c2 = canonical_form(m2);
    CHECK(c1.gluing == c2.gluing);
    for (size_t i = 0; i < c1.lengths.size(); ++i)
        CHECK(c1.lengths[i] == Approx(c2.lengths[i]).margin(1e-15));
}
