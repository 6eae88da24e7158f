#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "fixtures.hpp"
#include "prismatic/complex.hpp"

using namespace prismatic;
using Catch::Approx;

namespace {

std::vector<double> sorted_thetas(const ComplexState& st) {
    std::vector<double> v(st.theta.data(), st.theta.data() + st.theta.size());
    std::sort(v.begin(), v.end());
    return v;
}

// Random flips followed by a random weight vector, then made convex.
ComplexState random_convex_state(std::mt19937& rng, DecoratedMetric m, double rmax = 1.5) {
    std::uniform_int_distribution<int> nflips(0, 5);
    const int n = nflips(rng);
    for (int i = 0; i < n; ++i) {
        std::uniform_int_distribution<int> pick(0, m.surface.num_edges() - 1);
        const int e = pick(rng);
        if (m.surface.edge_is_flippable(e)) m = flip(m, e);
    }
    const Vector r = fixtures::random_vector(rng, m.surface.num_cusps(), -rmax, rmax);
    return make_delaunay_traced(m, r).state;
}

}  // namespace

TEST_CASE("assemble on the symmetric genus-2 fixture") {
    const auto m = fixtures::fx1(2.0);
    SECTION("critical weights give a flat-curvature complex with theta = pi/9") {
        const double rstar = fixtures::fx1_rstar();
        const auto st = assemble(m, Vector::Constant(1, rstar));
        CHECK(st.kappa[0] == Approx(0.0).margin(1e-12));
        for (int e = 0; e < st.num_edges(); ++e)
            CHECK(st.theta[e] == Approx(M_PI / 9.0).margin(1e-12));
        CHECK(st.is_convex());
    }
    SECTION("zero weights") {
        const auto st = assemble(m, Vector::Zero(1));
        const double expected =
            2.0 * M_PI -
            18.0 * std::acos(1.0 - std::exp(-2.0) / (2.0 * (std::exp(-2.0) + 1.0)));
        CHECK(st.kappa[0] == Approx(expected).margin(1e-12));
    }
    SECTION("inadmissible weights name triangle and corner") {
        // one weight pushed far up collapses a cross-section in some prism
        Vector r(2);
        r << 0.0, 9.0;
        try {
            assemble(fixtures::fx2(1.0), r);
            FAIL("expected inadmissibility");
        } catch (const InadmissiblePrismError& e) {
            CHECK(e.triangle() >= 0);
            CHECK(e.corner() >= 0);
        }
    }
}

TEST_CASE("cusp relabeling permutes curvatures") {
    // fx2 with triangles rotated: same complex, cusp ids move with labels
    const auto s = fixtures::fx2_surface();
    std::mt19937 rng(41);
    const Vector l = fixtures::random_vector(rng, s.num_edges(), 0.5, 2.0);
    const Vector r = fixtures::random_vector(rng, 2, -0.3, 0.3);
    const auto st = assemble(DecoratedMetric(s, l), r);

    const int F = s.num_triangles();
    std::vector<TriangulatedSurface::GluingPair> pairs;
    for (const auto& p : s.gluing_pairs())
        pairs.push_back({{{{(p[0][0] + 5) % F, p[0][1]}}, {{(p[1][0] + 5) % F, p[1][1]}}}});
    TriangulatedSurface s2(F, pairs);
    Vector l2(s2.num_edges());
    for (int e = 0; e < s2.num_edges(); ++e) {
        const auto es = s2.edge_slots(e);
        const int old_slot = TriangulatedSurface::slot(
            (TriangulatedSurface::slot_tri(es[0]) - 5 + F) % F, TriangulatedSurface::slot_side(es[0]));
        l2[e] = l[s.edge_of_slot(old_slot)];
    }
    // map cusp ids through a shared corner
    Vector r2(2);
    for (int c = 0; c < 2; ++c) {
        bool found = false;
        for (int t = 0; t < F && !found; ++t)
            for (int k = 0; k < 3 && !found; ++k)
                if (s.cusp_of_corner(t, k) == c) {
                    r2[s2.cusp_of_corner((t + 5) % F, k)] = r[c];
                    found = true;
                }
    }
    const auto st2 = assemble(DecoratedMetric(s2, l2), r2);
    std::multiset<double> k1, k2;
    for (int c = 0; c < 2; ++c) {
        k1.insert(st.kappa[c]);
        k2.insert(st2.kappa[c]);
    }
    auto it2 = k2.begin();
    for (auto it = k1.begin(); it != k1.end(); ++it, ++it2) CHECK(*it == Approx(*it2).margin(1e-12));
}

TEST_CASE("make_delaunay") {
    SECTION("already convex input returns unchanged") {
        const auto m = fixtures::fx1(2.0);
        const auto res = make_delaunay_traced(m, Vector::Constant(1, fixtures::fx1_rstar()));
        CHECK(res.flips.empty());
    }
    SECTION("one flip recovers the sphere fixture") {
        const auto m0 = fixtures::fx0(0.0);
        const auto base = make_delaunay_traced(m0, Vector::Zero(3));
        CHECK(base.flips.empty());
        const auto perturbed = flip(m0, 1);
        const auto res = make_delaunay_traced(perturbed, Vector::Zero(3));
        CHECK(res.flips.size() == 1);
        const auto t0 = sorted_thetas(base.state);
        const auto t1 = sorted_thetas(res.state);
        for (size_t i = 0; i < t0.size(); ++i) CHECK(t0[i] == Approx(t1[i]).margin(1e-12));
    }
    SECTION("idempotence") {
        std::mt19937 rng(59);
        for (int trial = 0; trial < 10; ++trial) {
            const auto st = random_convex_state(rng, fixtures::fx2(1.0));
            const auto again = make_delaunay_traced(st);
            CHECK(again.flips.empty());
            const auto t0 = sorted_thetas(st);
            const auto t1 = sorted_thetas(again.state);
            for (size_t i = 0; i < t0.size(); ++i) CHECK(t0[i] == Approx(t1[i]).margin(1e-12));
        }
    }
    SECTION("handles inadmissible starting states") {
        // spread-out lengths at zero weights break some prisms, yet the
        // Epstein-Penner state exists and is reached
        const auto s = fixtures::fx2_surface();
        std::mt19937 rng(61);
        for (int trial = 0; trial < 20; ++trial) {
            Vector l = fixtures::random_vector(rng, s.num_edges(), -1.0, 2.0);
            DecoratedMetric m(s, l);
            const auto res = make_delaunay_traced(m, Vector::Zero(2));
            CHECK(res.state.is_convex());
        }
    }
    SECTION("random decorations always terminate under the cap") {
        std::mt19937 rng(63);
        for (int seed = 0; seed < 100; ++seed) {
            const auto s = seed % 3 == 0   ? fixtures::fx1_surface()
                           : seed % 3 == 1 ? fixtures::fx2_surface()
                                           : fixtures::fx3_surface();
            DecoratedMetric m(s, fixtures::random_vector(rng, s.num_edges(), -1.0, 2.0));
            const Vector r = fixtures::random_vector(rng, s.num_cusps(), -0.5, 0.5);
            const auto res = make_delaunay_traced(m, r);
            CHECK(res.state.is_convex());
            CHECK(static_cast<int>(res.flips.size()) <= 100 * s.num_edges());
        }
    }
    SECTION("path independence of the final angles") {
        std::mt19937 rng(67);
        const auto m = fixtures::fx2(1.0);
        Vector r = fixtures::random_vector(rng, 2, -0.5, 0.5);
        const auto ref = make_delaunay_traced(m, r);
        for (int trial = 0; trial < 10; ++trial) {
            auto per = m;
            for (int i = 0; i < 3; ++i) {
                std::uniform_int_distribution<int> pick(0, per.surface.num_edges() - 1);
                const int e = pick(rng);
                if (per.surface.edge_is_flippable(e)) per = flip(per, e);
            }
            const auto res = make_delaunay_traced(per, r);
            const auto t0 = sorted_thetas(ref.state);
            const auto t1 = sorted_thetas(res.state);
            for (size_t i = 0; i < t0.size(); ++i) CHECK(t0[i] == Approx(t1[i]).margin(1e-9));
            for (int c = 0; c < 2; ++c)
                CHECK(res.state.kappa[c] == Approx(ref.state.kappa[c]).margin(1e-9));
        }
    }
}

TEST_CASE("lower_metric") {
    SECTION("symmetric fixture at the critical weights") {
        const double u = fixtures::fx1_u();
        const double rstar = fixtures::fx1_rstar();
        const auto st = assemble(fixtures::fx1(2.0), Vector::Constant(1, rstar));
        const auto pm = lower_metric(st);
        const double a_expected = std::acosh(1.0 + 2.0 * u);
        for (int e = 0; e < 9; ++e) CHECK(pm.lengths[e] == Approx(a_expected).margin(1e-12));
        for (int t = 0; t < 6; ++t)
            for (int k = 0; k < 3; ++k) CHECK(pm.angles[t][k] == Approx(M_PI / 9.0).margin(1e-9));
        CHECK(pm.cone_angles[0] == Approx(2.0 * M_PI).margin(1e-9));
        CHECK(pm.area == Approx(4.0 * M_PI).margin(1e-9));
        // cos(pi/9) = cosh a / (1 + cosh a) at the critical complex
        CHECK(std::cos(M_PI / 9.0) ==
              Approx(std::cosh(a_expected) / (1.0 + std::cosh(a_expected))).margin(1e-12));
    }
    SECTION("all-zero prisms give acosh(3) lower edges") {
        const auto st = assemble(fixtures::fx0(0.0), Vector::Zero(3));
        const auto pm = lower_metric(st);
        for (int e = 0; e < 3; ++e) CHECK(pm.lengths[e] == Approx(std::acosh(3.0)).margin(1e-14));
    }
    SECTION("Gauss-Bonnet on random convex states") {
        std::mt19937 rng(71);
        for (int trial = 0; trial < 24; ++trial) {
            const auto m = trial % 3 == 0   ? fixtures::fx1(2.0)
                           : trial % 3 == 1 ? fixtures::fx2(1.5)
                                            : fixtures::fx3(2.0);
            const auto st = random_convex_state(rng, m);
            CHECK(gauss_bonnet_residual(st) == Approx(0.0).margin(1e-9));
        }
    }
}

TEST_CASE("from_polyhedral") {
    SECTION("unit prisms invert to the zero decoration") {
        const auto s = fixtures::fx1_surface();
        PolyhedralMetric pm(s, Vector::Constant(9, std::acosh(3.0)));
        const auto st = from_polyhedral(pm);
        for (int e = 0; e < 9; ++e) CHECK(st.metric.lengths[e] == Approx(0.0).margin(1e-12));
        CHECK(st.weights.norm() == Approx(0.0));
    }
    SECTION("round trip reproduces a Delaunay lower metric") {
        std::mt19937 rng(73);
        for (int trial = 0; trial < 10; ++trial) {
            const auto st = random_convex_state(
                rng, trial % 2 == 0 ? fixtures::fx1(2.0) : fixtures::fx2(1.5), 0.8);
            const auto pm = lower_metric(st);
            const auto back = from_polyhedral(pm);
            REQUIRE(back.metric.surface.same_combinatorics(pm.surface));
            const auto pm2 = lower_metric(back);
            for (int e = 0; e < pm.surface.num_edges(); ++e)
                CHECK(pm2.lengths[e] == Approx(pm.lengths[e]).margin(1e-10));
            // gauge-invariant quantities agree with the generating state
            for (int c = 0; c < st.num_cusps(); ++c)
                CHECK(back.kappa[c] == Approx(st.kappa[c]).margin(1e-10));
        }
    }
    SECTION("rejects nonpositive lengths") {
        const auto s = fixtures::fx0_surface();
        CHECK_THROWS_AS(PolyhedralMetric(s, Vector::Constant(3, -1.0)), DomainError);
    }
}

TEST_CASE("flat edges do not affect curvatures or other angles") {
    // walk along a segment in weight space until an exterior angle changes
    // sign, bisect onto the wall, then flip the flat edge by hand
    std::mt19937 rng(79);
    int found = 0;
    for (int trial = 0; trial < 60 && found < 3; ++trial) {
        const auto m = fixtures::fx2(trial % 2 == 0 ? 1.0 : 1.6);
        const Vector r0 = fixtures::random_vector(rng, 2, -1.0, 1.0);
        const Vector r1 = fixtures::random_vector(rng, 2, -1.0, 1.0);
        DecoratedMetric fixed_metric = m;
        try {
            fixed_metric = make_delaunay_traced(m, r0).state.metric;
        } catch (const Error&) {
            continue;
        }
        auto eval = [&](double t) {
            const Vector r = (1 - t) * r0 + t * r1;
            return assemble(fixed_metric, r);
        };
        int wall_edge = -1;
        try {
            const auto st0 = eval(0.0);
            const auto st1 = eval(1.0);
            for (int e = 0; e < st1.num_edges(); ++e)
                if (st1.theta[e] < -1e-6 && st0.theta[e] > 1e-6 &&
                    fixed_metric.surface.edge_is_flippable(e))
                    wall_edge = e;
        } catch (const InadmissiblePrismError&) {
            continue;
        }
        if (wall_edge == -1) continue;
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (eval(mid).theta[wall_edge] > 0)
                lo = mid;
            else
                hi = mid;
        }
        const auto wall = eval(0.5 * (lo + hi));
        if (std::abs(wall.theta[wall_edge]) > 1e-10) continue;
        ++found;
        const auto flipped = assemble(flip(wall.metric, wall_edge), wall.weights);
        for (int c = 0; c < 2; ++c)
            CHECK(flipped.kappa[c] == Approx(wall.kappa[c]).margin(1e-9));
        auto tv0 = sorted_thetas(wall);
        auto tv1 = sorted_thetas(flipped);
        for (size_t i = 0; i < tv0.size(); ++i) CHECK(tv0[i] == Approx(tv1[i]).margin(1e-9));
    }
    CHECK(found >= 1);
}
