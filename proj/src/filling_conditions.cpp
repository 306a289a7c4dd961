#include "warpcone/filling_conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "warpcone/errors.hpp"
#include "warpcone/rng.hpp"

namespace warpcone::fill {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double reduce_mod(double x, double period) {
    double r = std::fmod(x, period);
    if (r < 0.0) r += period;
    return r;
}
} // namespace

// ---------------------------------------------------------------------------
// ManifoldDescriptor

void ManifoldDescriptor::validate() const {
    if (dimension < 2) throw invalid_input("dimension-too-small");
    if (boundary_lengths.empty()) throw invalid_input("no-boundary");
    for (double L : boundary_lengths) {
        if (!(L > 0.0)) throw invalid_input("nonpositive-boundary-length");
    }
    if (!(w > 0.0)) throw invalid_input("nonpositive-buffer-width");
    if (surface) {
        if (surface->genus < 0 || surface->boundary_count < 1)
            throw invalid_input("bad-surface-data");
        if (static_cast<std::size_t>(surface->boundary_count) !=
            boundary_lengths.size())
            throw invalid_input("boundary-count-mismatch");
    }
}

double ManifoldDescriptor::boundary_injrad() const {
    double m = kInf;
    for (double L : boundary_lengths) m = std::min(m, L / 2.0);
    return m;
}

// ---------------------------------------------------------------------------
// ArcFamily

bool ArcFamily::contains(double theta, double circle_len, double tol) const {
    if (full_circle) return true;
    double th = reduce_mod(theta, circle_len);
    for (const Arc& a : arcs) {
        double d = std::abs(reduce_mod(th - a.center + circle_len / 2.0,
                                       circle_len) - circle_len / 2.0);
        if (d <= a.half_length + tol) return true;
    }
    return false;
}

double ArcFamily::total_length() const {
    double s = 0.0;
    for (const Arc& a : arcs) s += 2.0 * a.half_length;
    return s;
}

ArcFamily normalize_arcs(const ArcFamily& fam, double circle_len) {
    if (!(circle_len > 0.0)) throw invalid_input("nonpositive-circle-length");
    if (fam.full_circle) return fam;
    ArcFamily out;
    out.arcs = fam.arcs;
    for (Arc& a : out.arcs) {
        if (!(a.half_length >= 0.0)) throw invalid_input("negative-half-length");
        a.center = reduce_mod(a.center, circle_len);
    }
    std::sort(out.arcs.begin(), out.arcs.end(),
              [](const Arc& x, const Arc& y) { return x.center < y.center; });
    if (fam.total_length() >= circle_len) {
        // Arcs cover the whole circle only if they actually tile it; a
        // covering with overlaps is rejected below, an exact cover is allowed.
        if (out.arcs.size() == 1 &&
            2.0 * out.arcs[0].half_length >= circle_len) {
            out.arcs.clear();
            out.full_circle = true;
            return out;
        }
    }
    const std::size_t n = out.arcs.size();
    for (std::size_t i = 0; i + 1 < n || (n > 1 && i + 1 == n); ++i) {
        const Arc& cur = out.arcs[i];
        const Arc& nxt = out.arcs[(i + 1) % n];
        double gap = nxt.center - cur.center;
        if (i + 1 == n) gap += circle_len; // wrap-around gap
        gap -= cur.half_length + nxt.half_length;
        if (gap < -1e-12) throw invalid_input("overlapping arcs");
        if (i + 1 == n) break;
    }
    return out;
}

double buffer_width_arcs(double circle_len, const ArcFamily& fam) {
    ArcFamily norm = normalize_arcs(fam, circle_len);
    if (norm.full_circle || norm.arcs.empty()) return kInf;
    const std::size_t n = norm.arcs.size();
    if (n == 1) {
        double gap = circle_len - 2.0 * norm.arcs[0].half_length;
        return std::max(0.0, gap) / 2.0;
    }
    double min_gap = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        const Arc& cur = norm.arcs[i];
        const Arc& nxt = norm.arcs[(i + 1) % n];
        double gap = nxt.center - cur.center;
        if (i + 1 == n) gap += circle_len;
        gap -= cur.half_length + nxt.half_length;
        min_gap = std::min(min_gap, std::max(0.0, gap));
    }
    return min_gap / 2.0;
}

// ---------------------------------------------------------------------------
// SubspaceDescriptor

void SubspaceDescriptor::validate(const ManifoldDescriptor& m) const {
    m.validate();
    if (grid.size() < 2) throw invalid_input("grid-too-small");
    if (levels.size() != grid.size()) throw invalid_input("levels-grid-mismatch");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw invalid_input("grid-not-increasing");
    }
    if (!(b > 0.0 && b_prime > b)) throw invalid_input("bad-b-range");
    if (!(c > 0.0)) throw invalid_input("nonpositive-c");
    for (const auto& level : levels) {
        if (level.size() != m.boundary_lengths.size())
            throw invalid_input("level-component-mismatch");
    }
}

std::size_t SubspaceDescriptor::level_index(double t) const {
    auto it = std::lower_bound(grid.begin(), grid.end(), t);
    if (it == grid.end()) return grid.size() - 1;
    if (it == grid.begin()) return 0;
    std::size_t hi = static_cast<std::size_t>(it - grid.begin());
    return (t - grid[hi - 1] < grid[hi] - t) ? hi - 1 : hi;
}

const ArcFamily& SubspaceDescriptor::level_at(double t,
                                              std::size_t component) const {
    double tt = std::max(t, b); // P*_t = P_b below the gluing depth
    return levels[level_index(tt)][component];
}

// ---------------------------------------------------------------------------
// Condition A / clubsuit / genus

ConditionAReport check_condition_A(const ManifoldDescriptor& m) {
    m.validate();
    ConditionAReport r;
    double injrad = m.boundary_injrad();
    r.margin = injrad * std::sinh(m.w) - kPi;
    r.feasible = r.margin > 0.0;
    if (r.feasible) {
        r.witness_b = m.w * (1.0 - 1e-6);
        r.witness_c = injrad;
    }
    return r;
}

bool check_clubsuit(const ManifoldDescriptor& m) {
    return check_condition_A(m).feasible;
}

GenusObstruction genus_obstruction(const ManifoldDescriptor& m) {
    m.validate();
    if (!m.surface) throw invalid_input("not-a-surface");
    GenusObstruction r;
    int g = m.surface->genus;
    int k = m.surface->boundary_count;
    int chi_term = 2 * g + k - 2; // -Euler characteristic
    r.hyperbolic_valid = chi_term > 0;
    r.area = 2.0 * kPi * chi_term;
    r.passes_area_bound = r.area > 2.0 * k * kPi;
    r.genus_ok = g > 1;
    return r;
}

// ---------------------------------------------------------------------------
// IsotopyWitness

IsotopyWitness::IsotopyWitness(
    std::vector<double> grid,
    std::vector<std::vector<std::vector<double>>> endpoints,
    std::vector<double> circle_lens)
    : grid_(std::move(grid)), endpoints_(std::move(endpoints)),
      circle_lens_(std::move(circle_lens)) {}

std::vector<double> IsotopyWitness::endpoints_at(double t,
                                                 std::size_t component) const {
    if (grid_.empty()) throw invalid_input("isotopy-undefined");
    if (component >= circle_lens_.size()) throw invalid_input("bad-component");
    double tt = std::clamp(t, grid_.front(), grid_.back());
    auto it = std::upper_bound(grid_.begin(), grid_.end(), tt);
    std::size_t hi = std::min<std::size_t>(
        static_cast<std::size_t>(it - grid_.begin()), grid_.size() - 1);
    std::size_t lo = hi == 0 ? 0 : hi - 1;
    double u = (hi == lo) ? 0.0
                          : (tt - grid_[lo]) / (grid_[hi] - grid_[lo]);
    const auto& a = endpoints_[lo][component];
    const auto& b = endpoints_[hi][component];
    if (a.size() != b.size()) throw invalid_input("isotopy-undefined");
    std::vector<double> e(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        e[i] = (1.0 - u) * a[i] + u * b[i];
    return e;
}

double IsotopyWitness::apply(double t, std::size_t component,
                             double theta) const {
    // Phi_t maps the level-0 arc configuration onto the level-t one by
    // piecewise-linear interpolation on arcs and gaps alike.
    const auto e0 = endpoints_at(grid_.front(), component);
    const auto et = endpoints_at(t, component);
    double L = circle_lens_[component];
    if (e0.empty()) return theta; // no arcs: identity
    const std::size_t n = e0.size();
    double th = e0.front() + reduce_mod(theta - e0.front(), L);
    for (std::size_t i = 0; i < n; ++i) {
        double lo0 = e0[i];
        double hi0 = (i + 1 < n) ? e0[i + 1] : e0[0] + L;
        if (th >= lo0 - 1e-12 && th <= hi0 + 1e-12) {
            double lot = et[i];
            double hit = (i + 1 < n) ? et[i + 1] : et[0] + L;
            double u = (hi0 > lo0) ? (th - lo0) / (hi0 - lo0) : 0.0;
            return reduce_mod(lot + u * (hit - lot), L);
        }
    }
    throw solver_failure("isotopy-lookup");
}

double IsotopyWitness::apply_inverse(double t, std::size_t component,
                                     double theta) const {
    const auto e0 = endpoints_at(grid_.front(), component);
    const auto et = endpoints_at(t, component);
    double L = circle_lens_[component];
    if (e0.empty()) return theta;
    const std::size_t n = et.size();
    double th = et.front() + reduce_mod(theta - et.front(), L);
    for (std::size_t i = 0; i < n; ++i) {
        double lot = et[i];
        double hit = (i + 1 < n) ? et[i + 1] : et[0] + L;
        if (th >= lot - 1e-12 && th <= hit + 1e-12) {
            double lo0 = e0[i];
            double hi0 = (i + 1 < n) ? e0[i + 1] : e0[0] + L;
            double u = (hit > lot) ? (th - lot) / (hit - lot) : 0.0;
            return reduce_mod(lo0 + u * (hi0 - lo0), L);
        }
    }
    throw solver_failure("isotopy-lookup");
}

// ---------------------------------------------------------------------------
// Condition B

namespace {

// Sorted endpoint list (start_0, end_0, start_1, ...) of a normalized family,
// unwrapped so the first start is in [0, L) and the list increases.
std::vector<double> endpoint_list(const ArcFamily& fam) {
    std::vector<double> e;
    e.reserve(2 * fam.arcs.size());
    for (const Arc& a : fam.arcs) {
        e.push_back(a.center - a.half_length);
        e.push_back(a.center + a.half_length);
    }
    return e;
}

// Cyclically aligns `e` against `ref` (both sorted endpoint lists of equal
// size) by minimizing total displacement over arc rotations and winding.
std::vector<double> align_endpoints(const std::vector<double>& ref,
                                    std::vector<double> e, double L) {
    if (ref.size() != e.size() || e.empty()) return e;
    const std::size_t n = e.size();
    double best_cost = kInf;
    std::vector<double> best = e;
    // rotate by whole arcs (pairs of endpoints) and shift by multiples of L
    for (std::size_t rot = 0; rot < n; rot += 2) {
        for (int wind = -1; wind <= 1; ++wind) {
            std::vector<double> cand(n);
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t j = (i + rot) % n;
                double shift = (i + rot >= n ? L : 0.0) + wind * L;
                cand[i] = e[j] + shift;
            }
            double cost = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                cost += std::abs(cand[i] - ref[i]);
            if (cost < best_cost) {
                best_cost = cost;
                best = cand;
            }
        }
    }
    return best;
}

bool family_nested_in(const ArcFamily& inner, const ArcFamily& outer,
                      double L, double tol = 1e-9) {
    if (outer.full_circle) return true;
    if (inner.full_circle) return false;
    for (const Arc& a : inner.arcs) {
        if (!outer.contains(a.center - a.half_length, L, tol) ||
            !outer.contains(a.center + a.half_length, L, tol) ||
            !outer.contains(a.center, L, tol))
            return false;
    }
    return true;
}

} // namespace

ConditionBReport check_condition_B(const ManifoldDescriptor& m,
                                   const SubspaceDescriptor& s,
                                   double grid_spacing_threshold) {
    s.validate(m);
    ConditionBReport r;
    std::ostringstream detail;

    double threshold = grid_spacing_threshold > 0.0
                           ? grid_spacing_threshold
                           : s.b_prime / 100.0;
    for (std::size_t i = 1; i < s.grid.size(); ++i) {
        if (s.grid[i] - s.grid[i - 1] > threshold)
            throw invalid_input("grid-gap");
    }

    const std::size_t n_comp = m.boundary_lengths.size();
    const std::size_t n_grid = s.grid.size();

    // B1: constant arc count per component, with endpoints moving
    // continuously in t (small displacement between consecutive grid levels).
    bool b1 = true;
    std::vector<std::vector<std::vector<double>>> witness_endpoints(n_grid);
    std::vector<std::vector<ArcFamily>> norm(n_grid);
    for (std::size_t g = 0; g < n_grid && b1; ++g) {
        norm[g].resize(n_comp);
        witness_endpoints[g].resize(n_comp);
        for (std::size_t cpt = 0; cpt < n_comp; ++cpt) {
            double L = m.boundary_lengths[cpt];
            norm[g][cpt] = normalize_arcs(s.levels[g][cpt], L);
            if (norm[g][cpt].full_circle) {
                b1 = false;
                detail << "B1: full-circle level at grid " << g << "; ";
                break;
            }
            std::vector<double> e = endpoint_list(norm[g][cpt]);
            if (g == 0) {
                witness_endpoints[g][cpt] = e;
                continue;
            }
            const auto& prev = witness_endpoints[g - 1][cpt];
            if (e.size() != prev.size()) {
                b1 = false;
                detail << "B1: arc count changes at grid " << g
                       << " component " << cpt << "; ";
                break;
            }
            e = align_endpoints(prev, std::move(e), L);
            double max_move = 0.0;
            for (std::size_t i = 0; i < e.size(); ++i)
                max_move = std::max(max_move, std::abs(e[i] - prev[i]));
            if (max_move > L / 4.0) {
                b1 = false;
                detail << "B1: endpoint jump " << max_move << " at grid " << g
                       << "; ";
                break;
            }
            witness_endpoints[g][cpt] = std::move(e);
        }
    }
    r.B1 = b1;
    if (b1) {
        r.witness = IsotopyWitness(s.grid, std::move(witness_endpoints),
                                   m.boundary_lengths);
    }

    // B2: consecutive levels nest (deeper level contained in shallower one).
    bool b2 = b1;
    for (std::size_t g = 1; g + 0 < n_grid && b2; ++g) {
        for (std::size_t cpt = 0; cpt < n_comp; ++cpt) {
            if (!family_nested_in(norm[g][cpt], norm[g - 1][cpt],
                                  m.boundary_lengths[cpt])) {
                b2 = false;
                detail << "B2: level " << g << " not nested in level " << g - 1
                       << " on component " << cpt << "; ";
                break;
            }
        }
    }
    if (!b1) {
        b2 = true;
        for (std::size_t g = 1; g < n_grid && b2; ++g) {
            for (std::size_t cpt = 0; cpt < n_comp; ++cpt) {
                ArcFamily cur =
                    normalize_arcs(s.levels[g][cpt], m.boundary_lengths[cpt]);
                ArcFamily prev = normalize_arcs(s.levels[g - 1][cpt],
                                                m.boundary_lengths[cpt]);
                if (!family_nested_in(cur, prev, m.boundary_lengths[cpt])) {
                    b2 = false;
                    detail << "B2: level " << g << " not nested in level "
                           << g - 1 << " on component " << cpt << "; ";
                    break;
                }
            }
        }
    }
    r.B2 = b2;

    // B3: buffer width of every level below b' exceeds c/2.
    bool b3 = true;
    for (std::size_t g = 0; g < n_grid && b3; ++g) {
        if (s.grid[g] > s.b_prime) break;
        for (std::size_t cpt = 0; cpt < n_comp; ++cpt) {
            double bw = buffer_width_arcs(m.boundary_lengths[cpt],
                                          s.levels[g][cpt]);
            if (!(bw > s.c / 2.0)) {
                b3 = false;
                detail << "B3: buffer width " << bw << " <= c/2 = "
                       << s.c / 2.0 << " at grid " << g << " component " << cpt
                       << "; ";
                break;
            }
        }
    }
    r.B3 = b3;
    r.detail = detail.str();
    return r;
}

// ---------------------------------------------------------------------------
// Epsilon bound

EpsilonBound epsilon_bound(double t_y, const warp::WarpFunction& f,
                           double b_prime, double c, double lcr) {
    if (!(t_y > f.t0() && t_y < b_prime))
        throw invalid_input("t_y-out-of-range");
    if (!(c > 0.0) || !(lcr > 0.0)) throw invalid_input("nonpositive-constant");
    EpsilonBound r;
    r.L_bar = (2.0 * t_y + f.t0()) / 3.0;
    r.eps_max = std::min({(b_prime - t_y) / 3.0, (t_y - r.L_bar) / 2.0,
                          c * f.f(r.L_bar) / 2.0, lcr / 2.0});
    return r;
}

// ---------------------------------------------------------------------------
// Y membership and local-convexity probe

bool y_membership(double t, double theta, const SubspaceDescriptor& s,
                  double circle_len, std::size_t component) {
    const ArcFamily& fam = s.level_at(t, component);
    // Tolerance grows near the tip: a fixed angular resolution there costs
    // almost nothing in arc length.
    return fam.contains(theta, circle_len, 1e-7 * circle_len);
}

ProbeReport local_convexity_probe(const cone::ConeSpace& cone,
                                  const SubspaceDescriptor& s, int n_pairs,
                                  std::uint64_t seed, double lcr,
                                  std::size_t component) {
    if (n_pairs < 0) throw invalid_input("negative-pair-count");
    if (cone.fiber.kind != cone::Fiber::Kind::Circle)
        throw invalid_input("probe-needs-circle-fiber");
    ProbeReport r;
    r.pairs_requested = n_pairs;
    r.seed = seed;
    const double L = cone.fiber.L;
    const double t0 = cone.t0();

    // Candidate (t, theta) pairs: random pairs inside a shared epsilon-ball
    // of Y, plus adversarial pairs flanking a gap near the tip, where a chord
    // cutting across the removed sector is shortest if B3 fails.
    struct Pair {
        cone::ConePoint a, b;
    };
    std::vector<Pair> pairs;
    pairs.reserve(static_cast<std::size_t>(n_pairs));
    Rng rng(seed);

    auto sample_in_family = [&](const ArcFamily& fam, Rng& r2) {
        if (fam.full_circle || fam.arcs.empty())
            return r2.uniform(0.0, L);
        const Arc& a = fam.arcs[r2.uniform_index(fam.arcs.size())];
        return a.center + r2.uniform(-a.half_length, a.half_length);
    };

    const int n_adversarial = n_pairs / 4;
    for (int i = 0; i < n_pairs; ++i) {
        Rng item(Rng::derive(seed, static_cast<std::uint64_t>(i)));
        if (i < n_adversarial) {
            // Gap-flanking pair near the tip.
            double t_y = t0 + (s.b_prime - t0) * item.uniform(0.02, 0.15);
            const ArcFamily fam =
                normalize_arcs(s.level_at(t_y, component), L);
            if (fam.arcs.empty() || fam.full_circle) continue;
            std::size_t j = item.uniform_index(fam.arcs.size());
            const Arc& cur = fam.arcs[j];
            const Arc& nxt = fam.arcs[(j + 1) % fam.arcs.size()];
            double eps_t = 0.02 * (s.b_prime - t0);
            Pair p;
            p.a = {t_y + item.uniform(0.0, eps_t),
                   cur.center + cur.half_length * item.uniform(0.6, 1.0)};
            p.b = {t_y + item.uniform(0.0, eps_t),
                   nxt.center - nxt.half_length * item.uniform(0.6, 1.0)};
            pairs.push_back(p);
        } else {
            double t_y;
            warp::WarpFunction const& f = cone.f;
            double span = std::min(s.b_prime, cone.t_max) - t0;
            t_y = t0 + span * item.uniform(0.05, 0.9);
            EpsilonBound eb;
            try {
                eb = epsilon_bound(t_y, f, std::min(s.b_prime, cone.t_max),
                                   s.c, lcr);
            } catch (const invalid_input&) {
                continue;
            }
            const ArcFamily fam = s.level_at(t_y, component);
            double th0 = sample_in_family(normalize_arcs(fam, L), item);
            Pair p;
            for (cone::ConePoint* q : {&p.a, &p.b}) {
                double dt = item.uniform(-eb.eps_max, eb.eps_max);
                double ds = item.uniform(-eb.eps_max, eb.eps_max);
                q->t = std::clamp(t_y + dt, t0, cone.t_max * (1 - 1e-9));
                double ft = std::max(f.f(q->t), 1e-12);
                q->theta = th0 + ds / ft;
            }
            if (!y_membership(p.a.t, p.a.theta, s, L, component) ||
                !y_membership(p.b.t, p.b.theta, s, L, component))
                continue;
            pairs.push_back(p);
        }
    }

    r.pairs_skipped = n_pairs - static_cast<int>(pairs.size());
    for (const Pair& p : pairs) {
        // Probe pairs sit inside epsilon-balls, so the geodesics are short;
        // 129 samples resolve Y-exits at well below the arc-width scale.
        cone::GeodesicPath path = cone::geodesic(cone, p.a, p.b, 129);
        ++r.pairs_tested;
        bool exits = false;
        for (const cone::ConePoint& q : path.samples) {
            if (q.t <= t0 + 1e-12) continue; // the tip belongs to Y
            if (!y_membership(q.t, q.theta, s, L, component)) {
                exits = true;
                break;
            }
        }
        if (exits) ++r.exits_detected;
    }
    r.pass = r.exits_detected == 0 && r.pairs_tested > 0;
    return r;
}

} // namespace warpcone::fill
