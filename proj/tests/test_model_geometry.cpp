#include <cmath>

#include <doctest.h>

#include "warpcone/errors.hpp"
#include "warpcone/model_geometry.hpp"
#include "warpcone/rng.hpp"

using namespace warpcone;
using namespace warpcone::model;

namespace {
constexpr double kPi = 3.14159265358979323846;

ModelTriangle random_triangle(Rng& rng, double kappa) {
    // Rejection-sample valid side triples, respecting the model diameter
    // for kappa > 0.
    const double cap = kappa > 0.0 ? 0.95 * kPi / std::sqrt(kappa) : 4.0;
    for (;;) {
        ModelTriangle tri;
        tri.kappa = kappa;
        tri.a = rng.uniform(1e-3, cap);
        tri.b = rng.uniform(1e-3, cap);
        tri.c = rng.uniform(1e-3, cap);
        if (tri.a + tri.b <= tri.c || tri.b + tri.c <= tri.a ||
            tri.a + tri.c <= tri.b)
            continue;
        // Spherical realizability also needs perimeter < 2*pi/sqrt(kappa).
        if (kappa > 0.0 &&
            tri.a + tri.b + tri.c >= 1.999 * kPi / std::sqrt(kappa))
            continue;
        return tri;
    }
}
} // namespace

TEST_CASE("model_angle pinned values") {
    CHECK(model_angle(0.0, 1.0, 1.0, 2.0) == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(model_angle(0.0, 3.0, 4.0, 5.0) ==
          doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(model_angle(-1.0, 1.0, 1.0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("model_chord pinned values") {
    CHECK(model_chord(0.0, 1.0, 1.0, 0.0) == doctest::Approx(0.0));
    CHECK(model_chord(0.0, 1.0, 1.0, kPi) == doctest::Approx(2.0).epsilon(1e-12));
    // Hyperbolic right angle with unit legs: cosh c = cosh(1)^2.
    const double expect = std::acosh(std::cosh(1.0) * std::cosh(1.0));
    CHECK(model_chord(-1.0, 1.0, 1.0, kPi / 2) ==
          doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("degenerate and invalid inputs throw") {
    ModelTriangle bad{0.0, 1.0, 1.0, 3.0};
    CHECK_THROWS_AS(validate_triangle(bad), invalid_input);
    // Angle at a degenerate vertex is an error, not a value.
    CHECK_THROWS_AS(model_angle(0.0, 0.0, 1.0, 1.0), invalid_input);
    CHECK_THROWS_AS(model_angle(0.0, 1.0, 0.0, 1.0), invalid_input);
    // Spherical diameter constraint.
    ModelTriangle big{1.0, kPi + 0.2, 1.0, kPi};
    CHECK_THROWS_AS(validate_triangle(big), invalid_input);
}

TEST_CASE("angle/chord round trip over random triangles") {
    Rng rng(20240817u);
    for (double kappa : {-2.0, -1.0, -0.25, 0.0, 0.5, 1.0}) {
        for (int i = 0; i < 200; ++i) {
            auto tri = random_triangle(rng, kappa);
            const double gamma = model_angle(kappa, tri.a, tri.b, tri.c);
            const double back = model_chord(kappa, tri.a, tri.b, gamma);
            CHECK(std::abs(back - tri.c) < 1e-9);
        }
    }
}

TEST_CASE("monotonicity of angle in c and chord in gamma") {
    Rng rng(7u);
    for (int i = 0; i < 100; ++i) {
        const double kappa = rng.uniform(-2.0, 0.0);
        const double a = rng.uniform(0.1, 3.0);
        const double b = rng.uniform(0.1, 3.0);
        const double cmax = a + b;
        double prev_angle = -1.0;
        for (int j = 1; j <= 20; ++j) {
            const double c =
                std::abs(a - b) + (cmax - std::abs(a - b)) * j / 21.0;
            const double ang = model_angle(kappa, a, b, c);
            CHECK(ang > prev_angle);
            prev_angle = ang;
        }
        double prev_chord = -1.0;
        for (int j = 0; j <= 20; ++j) {
            const double chord = model_chord(kappa, a, b, kPi * j / 20.0);
            CHECK(chord >= prev_chord);
            prev_chord = chord;
        }
    }
}

TEST_CASE("chord is nonincreasing in kappa (thin-triangle direction)") {
    Rng rng(19u);
    for (int i = 0; i < 100; ++i) {
        const double a = rng.uniform(0.1, 1.5);
        const double b = rng.uniform(0.1, 1.5);
        const double gamma = rng.uniform(0.05, kPi - 0.05);
        double prev = 1e300;
        for (double kappa : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0}) {
            const double chord = model_chord(kappa, a, b, gamma);
            CHECK(chord <= prev + 1e-12);
            prev = chord;
        }
    }
}

TEST_CASE("continuity at kappa = 0") {
    Rng rng(99u);
    for (int i = 0; i < 50; ++i) {
        const double a = rng.uniform(0.1, 2.0);
        const double b = rng.uniform(0.1, 2.0);
        const double gamma = rng.uniform(0.1, kPi - 0.1);
        const double c0 = model_chord(0.0, a, b, gamma);
        for (double kappa : {-1e-9, 1e-9, -1e-12, 1e-12}) {
            const double ck = model_chord(kappa, a, b, gamma);
            CHECK(std::abs(ck - c0) / c0 < 1e-9);
            const double g0 = model_angle(0.0, a, b, c0);
            const double gk = model_angle(kappa, a, b, c0);
            CHECK(std::abs(gk - g0) < 1e-9 * (1.0 + g0));
        }
    }
}

TEST_CASE("comparison_point embedding") {
    ModelTriangle t345{0.0, 3.0, 4.0, 5.0};
    // Side endpoints coincide with vertices: distance zero.
    auto a1 = comparison_point(t345, SideId::a, 1.0); // vertex C
    auto b1 = comparison_point(t345, SideId::b, 1.0); // vertex C
    CHECK(model_distance(0.0, a1, b1) < 1e-12);
    auto c0 = comparison_point(t345, SideId::c, 0.0); // vertex A
    CHECK(model_distance(0.0, c0, c0) == doctest::Approx(0.0));

    // Equilateral midsegment: half the third side.
    ModelTriangle eq{0.0, 2.0, 2.0, 2.0};
    auto ma = comparison_point(eq, SideId::a, 0.5);
    auto mb = comparison_point(eq, SideId::b, 0.5);
    CHECK(model_distance(0.0, ma, mb) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("comparison_point reproduces side lengths") {
    Rng rng(4242u);
    for (double kappa : {-1.0, 0.0}) {
        for (int i = 0; i < 50; ++i) {
            auto tri = random_triangle(rng, kappa);
            // Endpoint-to-endpoint distances along each side equal the side
            // lengths of the abstract triangle.
            auto c_start = comparison_point(tri, SideId::c, 0.0); // A
            auto c_end = comparison_point(tri, SideId::c, 1.0);   // B
            auto b_end = comparison_point(tri, SideId::b, 1.0);   // C
            CHECK(model_distance(kappa, c_start, c_end) ==
                  doctest::Approx(tri.c).epsilon(1e-9));
            CHECK(model_distance(kappa, c_start, b_end) ==
                  doctest::Approx(tri.b).epsilon(1e-9));
            CHECK(model_distance(kappa, c_end, b_end) ==
                  doctest::Approx(tri.a).epsilon(1e-9));
            // Arc-length parameterization along a side.
            const double s = rng.uniform(0.0, 1.0);
            auto p = comparison_point(tri, SideId::c, s);
            CHECK(model_distance(kappa, c_start, p) ==
                  doctest::Approx(s * tri.c).epsilon(1e-9));
        }
    }
}
