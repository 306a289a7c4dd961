#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "warpcone/warped_cone.hpp"

namespace warpcone::fill {

struct SurfaceData {
    int genus = 0;
    int boundary_count = 0;
};

// Desk-scale stand-in for a hyperbolic manifold with totally geodesic
// boundary: the boundary is a disjoint union of circles, with a collar of
// buffer width w.
struct ManifoldDescriptor {
    int dimension = 2;
    std::vector<double> boundary_lengths; // circle circumferences L_i
    double w = 0.0;                       // buffer width of the boundary
    std::optional<SurfaceData> surface;

    void validate() const;
    double boundary_injrad() const; // min L_i / 2
};

struct Arc {
    double center = 0.0;
    double half_length = 0.0;
};

// Finite disjoint union of closed arcs on one boundary circle.  An empty
// family and the full circle are both allowed.
struct ArcFamily {
    std::vector<Arc> arcs;
    bool full_circle = false;

    bool contains(double theta, double circle_len, double tol = 1e-12) const;
    double total_length() const;
};

// Normalizes (sorts, reduces centers mod L) and checks pairwise disjointness.
ArcFamily normalize_arcs(const ArcFamily& fam, double circle_len);

// Buffer width of the arc family in its circle: half the minimal
// complementary gap, +inf for empty or full families.
double buffer_width_arcs(double circle_len, const ArcFamily& fam);

// The level family {P_t}: per grid value, one ArcFamily per boundary
// component, plus the subspace constants (b, b', c).
struct SubspaceDescriptor {
    std::vector<double> grid; // increasing t samples covering [0, b']
    std::vector<std::vector<ArcFamily>> levels; // levels[g][component]
    double b = 0.0;
    double b_prime = 0.0;
    double c = 0.0;

    void validate(const ManifoldDescriptor& m) const;
    // Nearest grid level at coordinate t.
    std::size_t level_index(double t) const;
    // P*_t convention: levels below b resolve to the level at b.
    const ArcFamily& level_at(double t, std::size_t component) const;
};

struct ConditionAReport {
    bool feasible = false;
    double margin = 0.0;   // injrad(boundary) * sinh(w) - pi
    double witness_b = 0.0;
    double witness_c = 0.0;
};

// Conditions A1/A2: feasible iff injrad * sinh(w) > pi (strict).
ConditionAReport check_condition_A(const ManifoldDescriptor& m);
bool check_clubsuit(const ManifoldDescriptor& m);

struct GenusObstruction {
    double area = 0.0;       // 2 pi (2g + k - 2)
    bool passes_area_bound = false; // area > 2 k pi
    bool genus_ok = false;          // g > 1
    bool hyperbolic_valid = false;  // 2g + k - 2 > 0
};

GenusObstruction genus_obstruction(const ManifoldDescriptor& m);

// Piecewise-linear isotopy witness built from arc endpoint interpolation;
// evaluates Phi_t and its inverse on each boundary circle.
class IsotopyWitness {
public:
    IsotopyWitness() = default;
    IsotopyWitness(std::vector<double> grid,
                   std::vector<std::vector<std::vector<double>>> endpoints,
                   std::vector<double> circle_lens);

    double apply(double t, std::size_t component, double theta) const;
    double apply_inverse(double t, std::size_t component, double theta) const;
    bool empty() const { return grid_.empty(); }

private:
    std::vector<double> endpoints_at(double t, std::size_t component) const;
    std::vector<double> grid_;
    // endpoints_[g][component]: sorted arc endpoints (2 per arc, unwrapped
    // against level 0) at grid value g
    std::vector<std::vector<std::vector<double>>> endpoints_;
    std::vector<double> circle_lens_;
};

struct ConditionBReport {
    bool B1 = false; // constant arc count + continuous endpoints (isotopy)
    bool B2 = false; // nested levels
    bool B3 = false; // buffer width > c/2 on every level below b'
    std::string detail;
    std::optional<IsotopyWitness> witness; // present when B1 holds
};

ConditionBReport check_condition_B(const ManifoldDescriptor& m,
                                   const SubspaceDescriptor& s,
                                   double grid_spacing_threshold = -1.0);

struct EpsilonBound {
    double eps_max = 0.0;
    double L_bar = 0.0;
};

// Radius bound for the local-convexity argument at level t_y:
//   L_bar = (2 t_y + t0)/3,
//   eps   = min{(b'-t_y)/3, (t_y-L_bar)/2, c f(L_bar)/2, lcr/2}.
EpsilonBound epsilon_bound(double t_y, const warp::WarpFunction& f,
                           double b_prime, double c, double lcr);

// Membership in the coned-off subspace Y at cone coordinates (t, theta).
bool y_membership(double t, double theta, const SubspaceDescriptor& s,
                  double circle_len, std::size_t component = 0);

struct ProbeReport {
    int pairs_requested = 0;
    int pairs_tested = 0;
    int pairs_skipped = 0;
    int exits_detected = 0;
    bool pass = false;
    std::uint64_t seed = 0;
};

// Samples pairs of points of Y inside epsilon-balls, computes their
// geodesics, and checks that every path sample stays in Y.  Sampling includes
// gap-flanking pairs near the tip, the configuration that witnesses a failure
// when the buffer-width condition B3 is violated.
ProbeReport local_convexity_probe(const cone::ConeSpace& cone,
                                  const SubspaceDescriptor& s, int n_pairs,
                                  std::uint64_t seed, double lcr = 1.0,
                                  std::size_t component = 0);

} // namespace warpcone::fill
