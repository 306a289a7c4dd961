#pragma once

#include <cstdint>

#include "warpcone/warped_cone.hpp"

namespace warpcone::cat {

struct CatReport {
    double K_tested = 0.0;
    int triangles_sampled = 0;
    int triangles_skipped = 0;
    int comparisons = 0;
    double max_violation = 0.0; // worst chord excess over the comparison chord
    bool pass = false;
    std::uint64_t seed = 0;
};

// Sampled CAT(K) comparison test: random geodesic triangles, chord distances
// between points on distinct sides checked against the model-plane comparison
// chord.  Pass iff the worst excess stays within the discretization slack.
CatReport cat_test(const cone::ConeSpace& cone, double K, int n_triangles,
                   int points_per_side, std::uint64_t seed);

// kappa = (pi / injrad)^2.
double kappa_from_injrad(double injrad);

struct HypothesisAudit {
    double delta = 0.0;
    double K_F = 0.0;          // (pi / injrad(fiber))^2
    bool slope_ok = false;     // delta^2 >= K_F
    bool fk_ae_ok = false;
    bool fk_barrier_ok = false;
    double certified_K = 0.0;
    bool all_hold = false;
};

// Re-checks the curvature-bound hypotheses for the cone: apex slope against
// the fiber curvature bound, and both convexity certificates at the cone's
// certified K.  Does not run the sampled comparison test.
HypothesisAudit hypothesis_audit(const cone::ConeSpace& cone);

} // namespace warpcone::cat
