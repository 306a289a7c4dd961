#pragma once

#include <string>
#include <utility>
#include <vector>

namespace warpcone::warp {

enum class Profile {
    LinearDerivative, // f' affine on [t0, b]; f'' piecewise constant
    Smooth,           // cubic-perturbed derivative profile, f'' continuous on (t0, b)
    Conical,          // f(t) = delta (t - t0); flat test cone, no cosh tail
};

std::string profile_name(Profile p);
Profile profile_from_name(const std::string& name);

// Warping function for a metric cone: f(t0) = 0, apex slope delta, convex and
// strictly increasing, equal to cosh(t) for t >= b (except Conical, which
// stays linear).  Immutable after construction.
class WarpFunction {
public:
    double f(double t) const;
    double df(double t) const;
    // Second derivative; at the gluing point t = b the one-sided values
    // differ, and the right-hand value is returned.
    double ddf(double t) const;
    // One-sided second derivatives at t = b: {left, right}.
    std::pair<double, double> ddf_at_b() const;

    double t0() const { return t0_; }
    double b() const { return b_; }
    double delta() const { return delta_; }
    double mu() const { return mu_; }
    double K() const { return K_; }
    Profile profile() const { return profile_; }
    // Endpoints of the interpolating segment, for serialization.
    std::vector<double> knots() const { return {t0_, b_}; }

    static WarpFunction conical(double delta, double t0 = 0.0);
    // For serialization round trips; validates the invariants on a grid.
    static WarpFunction from_parameters(Profile profile, double t0, double b,
                                        double delta, double mu, double K);

private:
    friend WarpFunction synthesize(double b, double delta, Profile profile);
    WarpFunction() = default;

    double g(double t) const;   // interpolating segment on [t0, b]
    double dg(double t) const;
    double ddg(double t) const;

    double t0_ = 0.0, b_ = 1.0, delta_ = 1.0, mu_ = 0.0, K_ = 0.0;
    Profile profile_ = Profile::Conical;
};

// Builds a warping function with parameters (b, delta): C^1 at b against
// cosh, f(t0) = 0, f'(t0+) = delta, f'' >= mu > 0 on (t0, b), and
// K = max{-1, -mu/cosh(b)}.  Throws invalid_input for delta >= sinh(b) or
// b <= 0.
WarpFunction synthesize(double b, double delta,
                        Profile profile = Profile::LinearDerivative);

struct ConvexityCertificate {
    double min_value = 0.0; // min of f'' + K f (grid check) or g - f (barrier)
    bool pass = false;
    int grid_points = 0;
};

// Grid check of f'' + K f >= 0 on [t0, b+5] excluding t = b.  The grid is
// doubled until two successive resolutions agree on pass/fail.
ConvexityCertificate check_fk_convex_ae(const WarpFunction& f, double K, int n);

// Barrier check: on each subinterval [p, q], the solution of g'' + K g = 0
// matching f at p and q must dominate f.
ConvexityCertificate check_fk_convex_barrier(const WarpFunction& f, double K,
                                             const std::vector<std::pair<double, double>>& subintervals);

// delta = pi / c (the apex slope forced by the fiber injectivity bound).
double delta_from_c(double c);

} // namespace warpcone::warp
