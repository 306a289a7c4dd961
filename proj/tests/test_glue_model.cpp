#include <cmath>

#include <doctest.h>

#include "warpcone/errors.hpp"
#include "warpcone/filling_conditions.hpp"
#include "warpcone/glue_model.hpp"
#include "warpcone/rng.hpp"
#include "warpcone/warp_synth.hpp"

using namespace warpcone;
using namespace warpcone::glue;

namespace {
constexpr double kPi = 3.14159265358979323846;

fill::ManifoldDescriptor manifold(double L = 8.0, double w = 1.0) {
    fill::ManifoldDescriptor m;
    m.dimension = 2;
    m.boundary_lengths = {L};
    m.w = w;
    m.surface = fill::SurfaceData{2, 1};
    return m;
}

GluedSpace make_glued(double b = 0.5, double delta = 0.5,
                      double b_prime = 0.8) {
    return GluedSpace(manifold(), warp::synthesize(b, delta), b_prime);
}

fill::SubspaceDescriptor constant_family(double b, double b_prime, double c,
                                         double half_length) {
    fill::SubspaceDescriptor s;
    s.b = b;
    s.b_prime = b_prime;
    s.c = c;
    for (int i = 0; i < 151; ++i) {
        s.grid.push_back(b_prime * i / 150.0);
        fill::ArcFamily fam;
        fam.arcs.push_back(fill::Arc{0.0, half_length});
        s.levels.push_back({fam});
    }
    return s;
}
} // namespace

TEST_CASE("reparameterizations xi and alpha") {
    auto g = make_glued();
    CHECK(g.xi(0.5) == doctest::Approx(0.0));       // xi(b) = 0
    CHECK(g.xi(0.8) == doctest::Approx(0.8));       // xi(b') = b'
    CHECK(g.xi(0.9) == doctest::Approx(0.9));       // identity above b'
    const double t0 = g.cones[0].f.t0();
    CHECK(g.alpha(t0) == doctest::Approx(0.0));
    CHECK(g.alpha(0.5) == doctest::Approx(1.0));
    Rng rng(11u);
    for (int i = 0; i < 100; ++i) {
        const double t = rng.uniform(0.5, 0.99);
        CHECK(g.xi_inverse(g.xi(t)) == doctest::Approx(t).epsilon(1e-12));
        const double tc = rng.uniform(t0, 0.5);
        CHECK(g.alpha_inverse(g.alpha(tc)) ==
              doctest::Approx(tc).epsilon(1e-12));
    }
    // Strictly increasing.
    CHECK(g.xi(0.6) > g.xi(0.55));
    CHECK(g.alpha(0.2) > g.alpha(0.1));
}

TEST_CASE("phi chart dispatch and seam agreement") {
    auto g = make_glued();
    const double b = g.b;

    // Apex maps to the cone point zeta = 0.
    auto apex = phi(g, 0, {g.cones[0].f.t0(), 1.0});
    CHECK(apex.chart == ConeOffPoint::Chart::Cone);
    CHECK(apex.zeta == doctest::Approx(0.0));

    // At t = b both formulas give the boundary point: zeta = 1 in the cone
    // chart, depth 0 in the collar chart.
    auto seam = phi(g, 0, {b, 2.0});
    if (seam.chart == ConeOffPoint::Chart::Cone) {
        CHECK(seam.zeta == doctest::Approx(1.0));
    } else {
        CHECK(seam.t == doctest::Approx(0.0));
    }
    CHECK(seam.theta == doctest::Approx(2.0));

    // b' is fixed by xi.
    auto outer = phi(g, 0, {g.b_prime, 0.7});
    CHECK(outer.chart == ConeOffPoint::Chart::Collar);
    CHECK(outer.t == doctest::Approx(g.b_prime));
    CHECK(outer.theta == doctest::Approx(0.7));

    CHECK_THROWS_AS(phi(g, 0, {g.cones[0].f.t0() - 0.1, 0.0}), invalid_input);
}

TEST_CASE("phi is injective on sampled distinct points") {
    auto g = make_glued();
    Rng rng(23u);
    std::vector<ConeOffPoint> images;
    std::vector<cone::ConePoint> inputs;
    for (int i = 0; i < 200; ++i) {
        cone::ConePoint p{rng.uniform(g.cones[0].f.t0(), 0.999),
                          rng.uniform(0.0, 8.0)};
        inputs.push_back(p);
        images.push_back(phi(g, 0, p));
    }
    for (std::size_t i = 0; i < images.size(); ++i) {
        for (std::size_t j = i + 1; j < images.size(); ++j) {
            const bool same_input =
                std::abs(inputs[i].t - inputs[j].t) < 1e-12 &&
                std::abs(inputs[i].theta - inputs[j].theta) < 1e-12;
            if (same_input) continue;
            const bool same_image =
                images[i].chart == images[j].chart &&
                std::abs(images[i].t - images[j].t) < 1e-12 &&
                std::abs(images[i].zeta - images[j].zeta) < 1e-12 &&
                std::abs(images[i].theta - images[j].theta) < 1e-12;
            CHECK_FALSE(same_image);
        }
    }
}

TEST_CASE("psi seam and identity properties") {
    auto g = make_glued(0.85, warp::delta_from_c(4.0), 0.95);
    auto s = constant_family(0.85, 0.95, 4.0, 1.5);
    auto repB = fill::check_condition_B(manifold(), s);
    REQUIRE(repB.witness.has_value());
    const auto& w = *repB.witness;

    Rng rng(99u);
    for (int i = 0; i < 50; ++i) {
        ConeOffPoint x;
        x.chart = (i % 2 == 0) ? ConeOffPoint::Chart::Collar
                               : ConeOffPoint::Chart::Cone;
        if (x.chart == ConeOffPoint::Chart::Collar) {
            x.t = rng.uniform(0.0, 0.999);
        } else {
            x.zeta = rng.uniform(0.0, 1.0);
        }
        x.theta = rng.uniform(0.0, 8.0);

        // Psi_0 is the identity.
        auto y0 = psi(g, 0.0, x, w);
        CHECK(y0.chart == x.chart);
        CHECK(y0.t == doctest::Approx(x.t));
        CHECK(y0.zeta == doctest::Approx(x.zeta));
        CHECK(y0.theta == doctest::Approx(x.theta).epsilon(1e-9));

        // Charts and non-fiber coordinates are preserved for every s.
        auto y1 = psi(g, 0.7, x, w);
        CHECK(y1.chart == x.chart);
        CHECK(y1.t == doctest::Approx(x.t));
        CHECK(y1.zeta == doctest::Approx(x.zeta));
    }

    // The outer region is fixed pointwise.
    ConeOffPoint outer;
    outer.chart = ConeOffPoint::Chart::Collar;
    outer.t = 0.95;
    outer.theta = 3.3;
    for (double sv : {0.2, 0.5, 1.0}) {
        auto y = psi(g, sv, outer, w);
        CHECK(y.t == doctest::Approx(0.95));
        CHECK(y.theta == doctest::Approx(3.3));
    }

    // Constant family: the witness is the identity isotopy, so Psi_s fixes
    // the fiber coordinate everywhere.
    ConeOffPoint mid;
    mid.chart = ConeOffPoint::Chart::Collar;
    mid.t = 0.4;
    mid.theta = 1.1;
    auto y = psi(g, 1.0, mid, w);
    CHECK(y.theta == doctest::Approx(1.1).epsilon(1e-9));

    // Missing witness is an error.
    fill::IsotopyWitness none;
    CHECK_THROWS_AS(psi(g, 0.5, mid, none), invalid_input);
}

TEST_CASE("collar closed form") {
    // Radial pairs: |t2 - t1|.
    CHECK(collar_distance(8.0, 0.2, 1.0, 0.7, 1.0) == doctest::Approx(0.5));
    // Same point.
    CHECK(collar_distance(8.0, 0.3, 2.0, 0.3, 2.0) == doctest::Approx(0.0));
    // Symmetry and circle reduction.
    CHECK(collar_distance(8.0, 0.1, 0.5, 0.4, 7.9) ==
          doctest::Approx(collar_distance(8.0, 0.4, 7.9, 0.1, 0.5)));
    CHECK(collar_distance(8.0, 0.1, 0.5, 0.4, 0.5 + 8.0) ==
          doctest::Approx(collar_distance(8.0, 0.1, 0.5, 0.4, 0.5)));
    // Level arc at depth t is longer than the geodesic chord.
    const double arc = std::cosh(0.5) * 1.0;
    CHECK(collar_distance(8.0, 0.5, 0.0, 0.5, 1.0) < arc);
}

TEST_CASE("seam isometry check passes on the band") {
    auto g = make_glued(0.5, 0.5, 0.8);
    auto rep = seam_isometry_check(g, 0, 25, 42u);
    CHECK(rep.pass);
    CHECK(rep.pairs_tested == 25);
    CHECK(rep.max_rel_error < 1e-4);
    // Determinism.
    auto rep2 = seam_isometry_check(g, 0, 25, 42u);
    CHECK(rep.max_rel_error == rep2.max_rel_error);
    CHECK(rep.pairs_rejected == rep2.pairs_rejected);
}

TEST_CASE("glued space validates its constants") {
    CHECK_THROWS_AS(make_glued(0.5, 0.5, 0.4), invalid_input);  // b' < b
    CHECK_THROWS_AS(make_glued(0.5, 0.5, 1.5), invalid_input);  // b' > w
    CHECK(make_glued().cones.size() == 1);
    CHECK(kPi > 3.0); // silence unused-constant warnings in some configs
}
