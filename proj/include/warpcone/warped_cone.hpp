#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "warpcone/warp_synth.hpp"

namespace warpcone::cone {

// One-dimensional fiber: a circle of circumference L or an interval [0, L].
struct Fiber {
    enum class Kind { Circle, Interval };
    Kind kind = Kind::Circle;
    double L = 0.0;

    // Circle coordinates reduced into [0, L).
    double reduce(double theta) const;
    double distance(double a, double b) const;
    // Circle injectivity radius L/2; the curvature bound kappa = (pi/injrad)^2
    // only makes sense for circle fibers.
    double injrad() const;
};

struct ConePoint {
    double t = 0.0;
    double theta = 0.0;
};

// Warped product [t0, t_max) x_f F with the length metric.
struct ConeSpace {
    warp::WarpFunction f;
    Fiber fiber;
    double t_max = 0.0;

    ConeSpace(warp::WarpFunction warping, Fiber fib, double tmax);
    double t0() const { return f.t0(); }
    void require_in_range(const ConePoint& p) const;
};

struct GeodesicPath {
    std::vector<ConePoint> samples;  // theta stored unwrapped (continuous)
    std::vector<double> cum_length;  // discrete cumulative length per sample
    double length = 0.0;
    std::optional<double> clairaut;  // f^2 theta' for tip-avoiding paths
    bool through_tip = false;
    bool oracle_fallback = false;    // set when shooting failed and the mesh
                                     // oracle supplied the length
    double min_t = 0.0;

    // Point at arc length s along the sampled polyline.
    ConePoint point_at(double s) const;
};

// Discrete length functional: sum of sqrt(dt^2 + f(mid)^2 dtheta^2) over
// consecutive samples; fiber steps use the minimal circle representative.
double path_length(const ConeSpace& cone, const std::vector<ConePoint>& samples);

// Shortest path between x and y: the through-tip candidate is compared
// against tip-avoiding candidates found by shooting on the Clairaut constant.
// Ties go to the through-tip path.
GeodesicPath geodesic(const ConeSpace& cone, ConePoint x, ConePoint y,
                      int n_samples = 257);

// Length-only fast path (no polyline assembly).
double distance(const ConeSpace& cone, ConePoint x, ConePoint y);

// Sufficient condition for the shortest path to pass through the cone point:
// apex slope times fiber separation at least pi.
bool through_tip_sufficient(const ConeSpace& cone, const ConePoint& x,
                            const ConePoint& y);

// Brute-force Dijkstra distance on an (n_t x n_theta) mesh plus the tip.
// Overestimates the true distance; converges from above as the mesh refines.
double distance_oracle(const ConeSpace& cone, ConePoint x, ConePoint y,
                       int n_t, int n_theta);

// Alexandrov angle at the cone point between the radial directions toward two
// fiber points: min{pi, d_F(p1, p2) / delta}.
double tip_angle(const ConeSpace& cone, double p1, double p2);

struct LogInjectivityReport {
    int samples = 0;
    int collisions = 0;
    bool pass = false;
    std::uint64_t seed = 0;
};

// Samples m points near the tip and verifies that the (direction, distance)
// pairs of their radial geodesics are pairwise distinct.
LogInjectivityReport log_injectivity_check(const ConeSpace& cone, int m,
                                           std::uint64_t seed = 0);

} // namespace warpcone::cone
