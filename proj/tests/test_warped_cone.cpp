#include <cmath>
#include <vector>

#include <doctest.h>

#include "warpcone/errors.hpp"
#include "warpcone/rng.hpp"
#include "warpcone/warp_synth.hpp"
#include "warpcone/warped_cone.hpp"

using namespace warpcone;
using namespace warpcone::cone;

namespace {
constexpr double kPi = 3.14159265358979323846;

ConeSpace flat_cone(double t_max = 6.0) {
    // f(t) = t over a circle of length 2*pi: the Euclidean plane in polar
    // coordinates.  Unrolled closed form available for every pair.
    return ConeSpace(warp::WarpFunction::conical(1.0),
                     Fiber{Fiber::Kind::Circle, 2 * kPi}, t_max);
}

double flat_closed_form(double t1, double t2, double dtheta) {
    // Polar law of cosines; through the tip when the angle reaches pi.
    const double a = std::min(dtheta, kPi);
    return std::sqrt(t1 * t1 + t2 * t2 - 2 * t1 * t2 * std::cos(a));
}
} // namespace

TEST_CASE("fiber coordinate arithmetic") {
    Fiber circle{Fiber::Kind::Circle, 10.0};
    CHECK(circle.reduce(12.5) == doctest::Approx(2.5));
    CHECK(circle.reduce(-1.0) == doctest::Approx(9.0));
    CHECK(circle.distance(1.0, 9.5) == doctest::Approx(1.5));
    CHECK(circle.distance(0.0, 5.0) == doctest::Approx(5.0));
    CHECK(circle.injrad() == doctest::Approx(5.0));
    Fiber seg{Fiber::Kind::Interval, 4.0};
    CHECK(seg.distance(1.0, 3.5) == doctest::Approx(2.5));
}

TEST_CASE("path_length basic segments") {
    auto cone = flat_cone();
    // Radial path: pure base motion.
    std::vector<ConePoint> radial{{0.0, 0.3}, {1.0, 0.3}};
    CHECK(path_length(cone, radial) == doctest::Approx(1.0));
    // Fixed-t fiber arc, refined: f(t) * fiber distance.
    std::vector<ConePoint> arc;
    for (int i = 0; i <= 64; ++i)
        arc.push_back({2.0, 1.5 * i / 64.0});
    CHECK(path_length(cone, arc) ==
          doctest::Approx(2.0 * 1.5).epsilon(1e-4));
    // Short two-sample arc is the first-order chord.
    std::vector<ConePoint> tiny{{1.0, 0.0}, {1.0, 1e-5}};
    CHECK(path_length(cone, tiny) == doctest::Approx(1e-5).epsilon(1e-6));
    // Out-of-range sample rejected.
    std::vector<ConePoint> bad{{-1.0, 0.0}, {1.0, 0.0}};
    CHECK_THROWS_AS(path_length(cone, bad), invalid_input);
}

TEST_CASE("flat-cone geodesics match the unrolled closed form") {
    auto cone = flat_cone();
    SUBCASE("radial") {
        auto g = geodesic(cone, {1.0, 0.0}, {2.0, 0.0});
        CHECK(g.length == doctest::Approx(1.0).epsilon(1e-9));
        CHECK_FALSE(g.through_tip);
    }
    SUBCASE("right angle") {
        auto g = geodesic(cone, {1.0, 0.0}, {1.0, kPi / 2});
        CHECK(g.length == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
        CHECK_FALSE(g.through_tip);
        REQUIRE(g.clairaut.has_value());
    }
    SUBCASE("antipodal goes through the tip") {
        auto g = geodesic(cone, {1.0, 0.0}, {1.0, kPi});
        CHECK(g.length == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(g.through_tip);
    }
    SUBCASE("identical endpoints") {
        auto g = geodesic(cone, {1.0, 0.3}, {1.0, 0.3});
        CHECK(g.length == doctest::Approx(0.0));
    }
    SUBCASE("random pairs") {
        Rng rng(555u);
        for (int i = 0; i < 50; ++i) {
            ConePoint x{rng.uniform(0.05, 3.0), rng.uniform(0.0, 2 * kPi)};
            ConePoint y{rng.uniform(0.05, 3.0), rng.uniform(0.0, 2 * kPi)};
            const double expect = flat_closed_form(
                x.t, y.t, cone.fiber.distance(x.theta, y.theta));
            auto g = geodesic(cone, x, y);
            CHECK(std::abs(g.length - expect) / expect < 1e-6);
        }
    }
}

TEST_CASE("through_tip_sufficient threshold") {
    auto unit = flat_cone(); // delta = 1
    CHECK(through_tip_sufficient(unit, {1.0, 0.0}, {1.0, kPi}));
    CHECK_FALSE(through_tip_sufficient(unit, {1.0, 0.0}, {1.0, kPi - 0.01}));
    // delta = 0.5 over L = 4*pi: the same fiber distance pi no longer
    // saturates the rescaled threshold.
    ConeSpace half(warp::WarpFunction::conical(0.5),
                   Fiber{Fiber::Kind::Circle, 4 * kPi}, 6.0);
    CHECK_FALSE(through_tip_sufficient(half, {1.0, 0.0}, {1.0, kPi}));
    CHECK_FALSE(geodesic(half, {1.0, 0.0}, {1.0, kPi}).through_tip);
    // delta = 2: rescaled separation 2*pi >= pi.
    ConeSpace twice(warp::WarpFunction::conical(2.0),
                    Fiber{Fiber::Kind::Circle, kPi}, 6.0);
    ConePoint p{1.0, 0.0}, q{1.0, kPi / 2};
    CHECK(through_tip_sufficient(twice, p, q));
    CHECK(geodesic(twice, p, q).through_tip);
}

TEST_CASE("structure invariants on a synthesized cone") {
    auto f = warp::synthesize(1.0, 0.8);
    ConeSpace cone(f, Fiber{Fiber::Kind::Circle, 2 * kPi / 0.8 * 1.05}, 2.5);
    Rng rng(777u);
    for (int i = 0; i < 30; ++i) {
        ConePoint x{rng.uniform(f.t0() + 0.02, 2.4), rng.uniform(0.0, cone.fiber.L)};
        ConePoint y{rng.uniform(f.t0() + 0.02, 2.4), rng.uniform(0.0, cone.fiber.L)};
        auto g = geodesic(cone, x, y);
        REQUIRE(g.samples.size() >= 2);
        // Discrete convexity of t along the polyline (chord test).
        for (std::size_t j = 1; j + 1 < g.samples.size(); ++j) {
            const double s0 = g.cum_length[j - 1], s1 = g.cum_length[j],
                         s2 = g.cum_length[j + 1];
            if (s2 - s0 < 1e-12) continue;
            const double chord = g.samples[j - 1].t +
                                 (g.samples[j + 1].t - g.samples[j - 1].t) *
                                     (s1 - s0) / (s2 - s0);
            CHECK(g.samples[j].t <= chord + 1e-7);
        }
        if (g.through_tip) {
            // Fiber coordinate locally constant on each side of the tip.
            std::size_t tip = 0;
            for (std::size_t j = 1; j < g.samples.size(); ++j)
                if (g.samples[j].t < g.samples[tip].t) tip = j;
            for (std::size_t j = 1; j < g.samples.size(); ++j) {
                if (j <= tip)
                    CHECK(std::abs(g.samples[j].theta - g.samples[0].theta) <
                          1e-9);
                else
                    CHECK(std::abs(g.samples[j].theta -
                                   g.samples.back().theta) < 1e-9);
            }
        } else {
            // Monotone fiber projection (theta unwrapped in samples).
            const double dir =
                g.samples.back().theta >= g.samples.front().theta ? 1.0 : -1.0;
            for (std::size_t j = 1; j < g.samples.size(); ++j)
                CHECK(dir * (g.samples[j].theta - g.samples[j - 1].theta) >=
                      -1e-9);
        }
        // Discrete length functional agrees with the reported length up to
        // the O(h^2) polyline error, and converges under refinement.
        const double err257 = std::abs(path_length(cone, g.samples) - g.length);
        CHECK(err257 < 1e-2 * g.length + 1e-9);
        auto fine = geodesic(cone, x, y, 2049);
        const double err2049 =
            std::abs(path_length(cone, fine.samples) - fine.length);
        CHECK(err2049 < err257 / 8 + 1e-9);
        CHECK(g.length >= std::abs(x.t - y.t) - 1e-9);
    }
}

TEST_CASE("triangle inequality on random triples") {
    auto f = warp::synthesize(1.0, 0.8);
    ConeSpace cone(f, Fiber{Fiber::Kind::Circle, 2 * kPi / 0.8 * 1.05}, 2.5);
    Rng rng(4711u);
    for (int i = 0; i < 15; ++i) {
        ConePoint x{rng.uniform(f.t0() + 0.05, 2.4), rng.uniform(0.0, cone.fiber.L)};
        ConePoint y{rng.uniform(f.t0() + 0.05, 2.4), rng.uniform(0.0, cone.fiber.L)};
        ConePoint z{rng.uniform(f.t0() + 0.05, 2.4), rng.uniform(0.0, cone.fiber.L)};
        CHECK(distance(cone, x, z) <=
              distance(cone, x, y) + distance(cone, y, z) + 1e-6);
    }
}

TEST_CASE("distance oracle") {
    auto cone = flat_cone(3.0);
    SUBCASE("identical points") {
        CHECK(distance_oracle(cone, {1.0, 0.5}, {1.0, 0.5}, 50, 100) ==
              doctest::Approx(0.0));
    }
    SUBCASE("flat right angle within 2% at (400, 800)") {
        const double d =
            distance_oracle(cone, {1.0, 0.0}, {1.0, kPi / 2}, 400, 800);
        CHECK(std::abs(d - std::sqrt(2.0)) / std::sqrt(2.0) < 0.02);
        CHECK(d >= std::sqrt(2.0) - 1e-9); // upper bound property
    }
    SUBCASE("radial chain within 1%") {
        const double d = distance_oracle(cone, {0.0, 0.3}, {1.0, 0.3}, 200, 64);
        CHECK(std::abs(d - 1.0) < 0.01);
        CHECK(d >= 1.0 - 1e-9);
    }
    SUBCASE("resolution floor enforced") {
        CHECK_THROWS_AS(distance_oracle(cone, {1.0, 0.0}, {1.0, 1.0}, 4, 100),
                        invalid_input);
    }
}

TEST_CASE("tip_angle formula") {
    ConeSpace cone(warp::WarpFunction::conical(0.5),
                   Fiber{Fiber::Kind::Circle, 4 * kPi}, 6.0);
    CHECK(tip_angle(cone, 0.3, 0.3) == doctest::Approx(0.0));
    CHECK(tip_angle(cone, 0.0, kPi * 0.5) == doctest::Approx(kPi)); // d = pi*delta
    CHECK(tip_angle(cone, 0.0, 0.5) == doctest::Approx(1.0));       // d = delta
    CHECK(tip_angle(cone, 0.0, 5.0) == doctest::Approx(kPi));       // saturated
}

TEST_CASE("log injectivity near the tip") {
    auto f = warp::synthesize(1.0, 0.8);
    ConeSpace cone(f, Fiber{Fiber::Kind::Circle, 2 * kPi / 0.8 * 1.05}, 2.5);
    auto rep = log_injectivity_check(cone, 100, 12345u);
    CHECK(rep.pass);
    CHECK(rep.collisions == 0);
    CHECK(rep.samples == 100);
    // Determinism.
    auto rep2 = log_injectivity_check(cone, 100, 12345u);
    CHECK(rep.collisions == rep2.collisions);
}

TEST_CASE("point_at interpolates along the polyline") {
    auto cone = flat_cone();
    auto g = geodesic(cone, {1.0, 0.0}, {1.0, kPi / 2});
    auto start = g.point_at(0.0);
    CHECK(start.t == doctest::Approx(1.0));
    auto end = g.point_at(g.length);
    CHECK(end.t == doctest::Approx(1.0).epsilon(1e-9));
    // Midpoint of the unrolled chord between (1,0) and (0,1) is at radius
    // sqrt(2)/2.
    auto mid = g.point_at(g.length / 2);
    CHECK(mid.t == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-6));
}
