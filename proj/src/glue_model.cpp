#include "warpcone/glue_model.hpp"

#include <algorithm>
#include <cmath>

#include "warpcone/errors.hpp"
#include "warpcone/rng.hpp"

namespace warpcone::glue {

GluedSpace::GluedSpace(fill::ManifoldDescriptor manifold,
                       warp::WarpFunction warping, double b_prime_val)
    : m(std::move(manifold)), b(warping.b()), b_prime(b_prime_val) {
    m.validate();
    if (!(b > 0.0 && b_prime > b && b_prime < m.w))
        throw invalid_input("bad-b-range");
    cones.reserve(m.boundary_lengths.size());
    for (double L : m.boundary_lengths) {
        cone::Fiber fib{cone::Fiber::Kind::Circle, L};
        cones.emplace_back(warping, fib, m.w);
    }
}

double GluedSpace::xi(double t) const {
    if (t < b - 1e-12) throw invalid_input("out-of-range");
    if (t >= b_prime) return t;
    return b_prime * (std::max(t, b) - b) / (b_prime - b);
}

double GluedSpace::xi_inverse(double u) const {
    if (u < -1e-12) throw invalid_input("out-of-range");
    if (u >= b_prime) return u;
    return b + std::max(u, 0.0) * (b_prime - b) / b_prime;
}

double GluedSpace::alpha(double t) const {
    const double t0 = cones.front().t0();
    if (t < t0 - 1e-12 || t > b + 1e-12) throw invalid_input("out-of-range");
    return std::clamp((t - t0) / (b - t0), 0.0, 1.0);
}

double GluedSpace::alpha_inverse(double zeta) const {
    if (zeta < -1e-12 || zeta > 1.0 + 1e-12)
        throw invalid_input("out-of-range");
    const double t0 = cones.front().t0();
    return t0 + std::clamp(zeta, 0.0, 1.0) * (b - t0);
}

ConeOffPoint phi(const GluedSpace& g, std::size_t component,
                 const cone::ConePoint& y) {
    if (component >= g.cones.size()) throw invalid_input("bad-component");
    const cone::ConeSpace& c = g.cones[component];
    if (y.t < c.t0() - 1e-12 || y.t >= c.t_max)
        throw invalid_input("out-of-range");
    ConeOffPoint p;
    p.component = component;
    p.theta = c.fiber.reduce(y.theta);
    if (y.t <= g.b) {
        p.chart = ConeOffPoint::Chart::Cone;
        p.zeta = g.alpha(y.t);
    } else {
        p.chart = ConeOffPoint::Chart::Collar;
        p.t = g.xi(y.t);
    }
    return p;
}

ConeOffPoint psi(const GluedSpace& g, double s, const ConeOffPoint& x,
                 const fill::IsotopyWitness& witness) {
    if (s < 0.0 || s > 1.0) throw invalid_input("out-of-range");
    if (witness.empty()) throw invalid_input("isotopy-undefined");
    ConeOffPoint out = x;
    if (x.chart == ConeOffPoint::Chart::Cone) {
        out.theta = witness.apply_inverse(s * g.b, x.component, x.theta);
        return out;
    }
    if (x.t >= g.b_prime) return out; // outer region: identity
    double pre = witness.apply_inverse(s * g.xi_inverse(x.t), x.component,
                                       x.theta);
    out.theta = witness.apply(s * x.t, x.component, pre);
    return out;
}

double collar_distance(double L, double t1, double theta1, double t2,
                       double theta2) {
    cone::Fiber fib{cone::Fiber::Kind::Circle, L};
    double dth = fib.distance(theta1, theta2);
    double arg = std::cosh(t1) * std::cosh(t2) * std::cosh(dth) -
                 std::sinh(t1) * std::sinh(t2);
    return std::acosh(std::max(arg, 1.0));
}

SeamReport seam_isometry_check(const GluedSpace& g, std::size_t component,
                               int n_pairs, std::uint64_t seed) {
    if (component >= g.cones.size()) throw invalid_input("bad-component");
    if (n_pairs < 0) throw invalid_input("negative-pair-count");
    const cone::ConeSpace& c = g.cones[component];
    const double band_lo = g.b;
    const double band_hi = c.t_max;
    if (band_hi - band_lo < 1e-6) throw invalid_input("band-too-thin");

    SeamReport r;
    r.pairs_requested = n_pairs;
    r.seed = seed;
    const double L = c.fiber.L;

    for (int i = 0; i < n_pairs; ++i) {
        Rng item(Rng::derive(seed, static_cast<std::uint64_t>(i)));
        bool accepted = false;
        // Resample until the cone geodesic stays inside the band, where the
        // warping equals cosh and the two models describe the same metric.
        for (int attempt = 0; attempt < 64 && !accepted; ++attempt) {
            double t1 = item.uniform(band_lo, band_hi * (1 - 1e-9));
            double t2 = item.uniform(band_lo, band_hi * (1 - 1e-9));
            double th1 = item.uniform(0.0, L);
            // Keep the fiber separation small relative to the band height so
            // that a reasonable fraction of geodesics stays above t = b.
            double th2 = th1 + item.uniform(-1.0, 1.0) *
                                   std::min(L / 2.0, band_hi - band_lo);
            cone::GeodesicPath path =
                cone::geodesic(c, {t1, th1}, {t2, th2}, 257);
            if (path.through_tip || path.min_t < band_lo - 1e-9) continue;
            double ref = collar_distance(L, t1, th1, t2, th2);
            double denom = std::max(ref, 1e-9);
            double rel = std::abs(path.length - ref) / denom;
            r.max_rel_error = std::max(r.max_rel_error, rel);
            ++r.pairs_tested;
            accepted = true;
        }
        if (!accepted) ++r.pairs_rejected;
    }
    r.pass = r.pairs_tested > 0 && r.max_rel_error < 1e-4;
    return r;
}

} // namespace warpcone::glue
