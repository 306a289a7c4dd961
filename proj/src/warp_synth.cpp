#include "warpcone/warp_synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "warpcone/errors.hpp"

namespace warpcone::warp {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Shape parameter of the smooth derivative profile
//   sigma(u) = u + alpha * u(1-u)(2u-1),
// strictly increasing on [0,1] with sigma'(u) >= 1 - alpha > 0.
constexpr double kSmoothAlpha = 0.5;

double sigma(Profile p, double u) {
    if (p == Profile::Smooth)
        return u + kSmoothAlpha * u * (1.0 - u) * (2.0 * u - 1.0);
    return u;
}

double dsigma(Profile p, double u) {
    if (p == Profile::Smooth)
        return 1.0 + kSmoothAlpha * (-6.0 * u * u + 6.0 * u - 1.0);
    return 1.0;
}

// Integral of sigma over [0, u].
double int_sigma(Profile p, double u) {
    const double u2 = u * u;
    if (p == Profile::Smooth)
        return 0.5 * u2 + kSmoothAlpha * (-0.5 * u2 * u2 + u2 * u - 0.5 * u2);
    return 0.5 * u2;
}

double min_dsigma(Profile p) {
    return p == Profile::Smooth ? 1.0 - kSmoothAlpha : 1.0;
}

} // namespace

std::string profile_name(Profile p) {
    switch (p) {
    case Profile::LinearDerivative: return "linear-derivative";
    case Profile::Smooth: return "smooth";
    default: return "conical";
    }
}

Profile profile_from_name(const std::string& name) {
    if (name == "linear-derivative") return Profile::LinearDerivative;
    if (name == "smooth") return Profile::Smooth;
    if (name == "conical") return Profile::Conical;
    throw invalid_input("unknown profile: " + name);
}

double WarpFunction::g(double t) const {
    const double h = b_ - t0_;
    const double u = (t - t0_) / h;
    return delta_ * (t - t0_) + (std::sinh(b_) - delta_) * h * int_sigma(profile_, u);
}

double WarpFunction::dg(double t) const {
    const double u = (t - t0_) / (b_ - t0_);
    return delta_ + (std::sinh(b_) - delta_) * sigma(profile_, u);
}

double WarpFunction::ddg(double t) const {
    const double u = (t - t0_) / (b_ - t0_);
    return (std::sinh(b_) - delta_) * dsigma(profile_, u) / (b_ - t0_);
}

double WarpFunction::f(double t) const {
    if (profile_ == Profile::Conical) return delta_ * (t - t0_);
    return t < b_ ? g(t) : std::cosh(t);
}

double WarpFunction::df(double t) const {
    if (profile_ == Profile::Conical) return delta_;
    return t < b_ ? dg(t) : std::sinh(t);
}

double WarpFunction::ddf(double t) const {
    if (profile_ == Profile::Conical) return 0.0;
    return t < b_ ? ddg(t) : std::cosh(t);
}

std::pair<double, double> WarpFunction::ddf_at_b() const {
    if (profile_ == Profile::Conical) return {0.0, 0.0};
    return {ddg(b_), std::cosh(b_)};
}

WarpFunction WarpFunction::conical(double delta, double t0) {
    if (delta <= 0.0) throw invalid_input("nonpositive apex slope");
    WarpFunction w;
    w.profile_ = Profile::Conical;
    w.t0_ = t0;
    w.b_ = t0 + 1.0; // no gluing level; kept for coordinate bookkeeping
    w.delta_ = delta;
    w.mu_ = 0.0;
    w.K_ = 0.0;
    return w;
}

WarpFunction synthesize(double b, double delta, Profile profile) {
    if (b <= 0.0) throw invalid_input("nonpositive-b");
    if (profile == Profile::Conical)
        throw invalid_input("conical profile is not synthesized; use WarpFunction::conical");
    if (delta <= 0.0 || delta >= std::sinh(b))
        throw invalid_input("slope-too-large: requires 0 < delta < sinh(b)");

    WarpFunction w;
    w.profile_ = profile;
    w.b_ = b;
    w.delta_ = delta;

    // Solve g(b) = cosh(b) for t0 by bisection.  g(b) is continuous and
    // strictly decreasing in t0, negativeward as t0 -> b and large as
    // t0 -> -inf, so the root is bracketed in (-10 b - 10, b).
    const double target = std::cosh(b);
    double lo = -10.0 * b - 10.0, hi = b - 1e-13;
    auto g_at_b = [&](double t0) {
        w.t0_ = t0;
        return w.g(b) - target;
    };
    if (g_at_b(lo) < 0.0)
        throw solver_failure("t0 bracket failed at lower end");
    for (int i = 0; i < 200 && hi - lo > 1e-12 * (1.0 + std::abs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        (g_at_b(mid) >= 0.0 ? lo : hi) = mid;
    }
    w.t0_ = lo;

    w.mu_ = (std::sinh(b) - delta) * min_dsigma(profile) / (b - w.t0_);
    w.K_ = std::max(-1.0, -w.mu_ / std::cosh(b));
    return w;
}

WarpFunction WarpFunction::from_parameters(Profile profile, double t0, double b,
                                           double delta, double mu, double K) {
    if (profile == Profile::Conical) {
        auto w = conical(delta, t0);
        return w;
    }
    WarpFunction w = synthesize(b, delta, profile);
    if (std::abs(w.t0() - t0) > 1e-6 * (1.0 + std::abs(t0)) ||
        std::abs(w.mu() - mu) > 1e-6 * (1.0 + std::abs(mu)) ||
        std::abs(w.K() - K) > 1e-6)
        throw invalid_input("warping parameters are inconsistent with (b, delta, profile)");
    return w;
}

namespace {

// One sweep of the a.e. certificate at a fixed resolution.
double fk_grid_min(const WarpFunction& f, double K, int n) {
    const double lo = f.t0(), hi = f.b() + 5.0;
    double min_v = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
        double t = lo + (hi - lo) * static_cast<double>(i) / n;
        if (std::abs(t - f.b()) < 1e-12 * (1.0 + std::abs(f.b())))
            continue; // f'' undefined at the gluing point
        min_v = std::min(min_v, f.ddf(t) + K * f.f(t));
    }
    return min_v;
}

constexpr double kCertSlack = 1e-9;

} // namespace

ConvexityCertificate check_fk_convex_ae(const WarpFunction& f, double K, int n) {
    if (n < 2) throw invalid_input("grid resolution must be >= 2");
    if (K > 0.0) throw invalid_input("requires K <= 0");

    // Refine by doubling until two successive resolutions agree on pass/fail.
    double min_v = fk_grid_min(f, K, n);
    bool pass = min_v >= -kCertSlack;
    int used = n;
    for (int round = 0; round < 8; ++round) {
        used *= 2;
        const double m2 = fk_grid_min(f, K, used);
        const bool p2 = m2 >= -kCertSlack;
        min_v = std::min(min_v, m2);
        if (p2 == pass) break;
        pass = p2;
    }
    return ConvexityCertificate{min_v, pass, used};
}

ConvexityCertificate check_fk_convex_barrier(
    const WarpFunction& f, double K,
    const std::vector<std::pair<double, double>>& subintervals) {
    if (K >= 0.0) throw invalid_input("requires K < 0");
    const double s = std::sqrt(-K);

    double min_gap = std::numeric_limits<double>::infinity();
    bool pass = true;
    int used = 0;
    for (auto [p, q] : subintervals) {
        if (q <= p) throw invalid_input("degenerate-subinterval");
        if (p < f.t0() - 1e-12 || q > f.b() + 5.0 + 1e-12)
            throw invalid_input("subinterval outside [t0, b+5]");
        // Barrier g'' + K g = 0 with g(p) = f(p), g(q) = f(q):
        //   g(t) = A cosh(s(t-p)) + B sinh(s(t-p)).
        const double A = f.f(p);
        const double h = q - p;
        const double B = (f.f(q) - A * std::cosh(s * h)) / std::sinh(s * h);

        int n = 256;
        double local_min = 0.0;
        bool local_pass = true;
        for (int round = 0; round < 8; ++round) {
            local_min = std::numeric_limits<double>::infinity();
            for (int i = 0; i <= n; ++i) {
                const double t = p + h * static_cast<double>(i) / n;
                const double g = A * std::cosh(s * (t - p)) + B * std::sinh(s * (t - p));
                local_min = std::min(local_min, g - f.f(t));
            }
            const bool p2 = local_min >= -kCertSlack;
            if (round > 0 && p2 == local_pass) break;
            local_pass = p2;
            n *= 2;
        }
        used = std::max(used, n);
        min_gap = std::min(min_gap, local_min);
        pass = pass && local_pass;
    }
    return ConvexityCertificate{min_gap, pass, used};
}

double delta_from_c(double c) {
    if (c <= 0.0) throw invalid_input("nonpositive-c");
    return kPi / c;
}

} // namespace warpcone::warp
