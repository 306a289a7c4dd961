#include "warpcone/warped_cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "warpcone/errors.hpp"
#include "warpcone/rng.hpp"

namespace warpcone::cone {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTieTol = 1e-9;      // through-tip wins ties within this
constexpr double kSweepTol = 1e-11;   // shooting tolerance on the fiber sweep

// Inverse of the (strictly increasing) warping function on [lo, hi]:
// bracketed Newton, safe because f is convex and f' >= delta > 0.
double invert_f(const warp::WarpFunction& f, double value, double lo,
                double hi) {
    double a = lo, b = hi;
    double t = 0.5 * (a + b);
    for (int i = 0; i < 80; ++i) {
        const double r = f.f(t) - value;
        (r > 0.0 ? b : a) = t;
        const double d = f.df(t);
        double tn = (d > 0.0) ? t - r / d : 0.5 * (a + b);
        if (!(tn > a && tn < b)) tn = 0.5 * (a + b);
        if (std::abs(tn - t) <= 1e-16 * (1.0 + std::abs(t))) return tn;
        t = tn;
    }
    return t;
}

// Both leg integrals have an integrable 1/sqrt singularity at `lo` when
// c = f(lo) (turning point or grazing leg), with all the action concentrated
// at the scale f - c ~ c, which can be many orders below hi - lo.  The
// substitution f(t) = c cosh(phi) is scale-free and removes the singularity:
//   dtheta = dphi / (cosh(phi) f'(t)),   ds = c cosh(phi) dphi / f'(t).
double leg_integral(const warp::WarpFunction& f, double c, double lo,
                    double hi, bool sweep) {
    const double ratio_lo = std::max(f.f(lo) / c, 1.0);
    const double ratio_hi = std::max(f.f(hi) / c, 1.0);
    const double phi_lo = std::acosh(ratio_lo);
    const double phi_hi = std::acosh(ratio_hi);
    if (phi_hi <= phi_lo) return 0.0;
    auto integrand = [&](double phi) {
        const double fv = c * std::cosh(phi);
        const double t = invert_f(f, fv, lo, hi);
        const double d = std::max(f.df(t), 1e-300);
        return sweep ? 1.0 / (std::cosh(phi) * d) : fv / d;
    };
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, phi_lo, phi_hi, 9, 1e-11);
}

// Illinois regula falsi for a monotone function with g(a), g(b) of opposite
// sign; converges in ~10 evaluations where plain bisection needs ~60.
template <class G>
double illinois(G&& g, double a, double b, double ga, double gb, double xtol,
                double ytol) {
    // A root at (or within tolerance of) an endpoint breaks the sign test
    // below: with gb == 0 the secant step degenerates and the bracket
    // collapses toward the wrong end. Handle endpoint roots up front.
    if (std::abs(ga) <= ytol) return a;
    if (std::abs(gb) <= ytol) return b;
    for (int i = 0; i < 80 && std::abs(b - a) > xtol; ++i) {
        const double denom = gb - ga;
        double m = (denom != 0.0) ? b - gb * (b - a) / denom : 0.5 * (a + b);
        if (!(std::min(a, b) < m && m < std::max(a, b))) m = 0.5 * (a + b);
        const double gm = g(m);
        if (std::abs(gm) < ytol) return m;
        if (gm * gb < 0.0) {
            a = b;
            ga = gb;
        } else {
            ga *= 0.5;
        }
        b = m;
        gb = gm;
    }
    return 0.5 * (a + b);
}

// Fiber sweep of a Clairaut leg: integral of c / (f sqrt(f^2 - c^2)).
double leg_sweep(const warp::WarpFunction& f, double c, double lo, double hi) {
    if (c == 0.0 || hi <= lo) return 0.0;
    return leg_integral(f, c, lo, hi, /*sweep=*/true);
}

// Arc length of a Clairaut leg: integral of f / sqrt(f^2 - c^2).
double leg_length(const warp::WarpFunction& f, double c, double lo, double hi) {
    if (hi <= lo) return 0.0;
    if (c == 0.0) return hi - lo;
    return leg_integral(f, c, lo, hi, /*sweep=*/false);
}

enum class PathKind { ThroughTip, Monotone, Turning };

struct Shot {
    PathKind kind = PathKind::ThroughTip;
    double length = 0.0;
    double c = 0.0;       // Clairaut constant (tip-avoiding kinds)
    double t_star = 0.0;  // turning level (Turning)
    double signed_sweep = 0.0;
};

// Tip-avoiding candidate with total fiber sweep |target_sweep|, or nullopt if
// the cone admits none in that direction.  Monotone-in-parameter bisection:
// the sweep grows with the Clairaut constant and grows as the turning level
// descends toward the tip.
std::optional<Shot> shoot(const warp::WarpFunction& f, double t0, double t1,
                          double t2, double target_sweep) {
    const double sweep = std::abs(target_sweep);
    const double tmin = std::min(t1, t2), tmax = std::max(t1, t2);

    if (sweep < 1e-15) {
        Shot s;
        s.kind = PathKind::Monotone;
        s.length = tmax - tmin;
        s.c = 0.0;
        s.signed_sweep = 0.0;
        return s;
    }

    const double cmax = f.f(tmin);
    const double graze = (tmax > tmin) ? leg_sweep(f, cmax, tmin, tmax) : 0.0;

    if (sweep <= graze) {
        auto g = [&](double c) { return leg_sweep(f, c, tmin, tmax) - sweep; };
        const double c = illinois(g, 0.0, cmax, -sweep, graze - sweep,
                                  1e-15 * cmax, kSweepTol);
        Shot s;
        s.kind = PathKind::Monotone;
        s.c = c;
        s.length = leg_length(f, c, tmin, tmax);
        s.signed_sweep = target_sweep;
        return s;
    }

    // Turning regime: descend to level t* < tmin and come back up.
    auto turn_sweep = [&](double ts) {
        const double c = f.f(ts);
        return leg_sweep(f, c, ts, t1) + leg_sweep(f, c, ts, t2);
    };
    const double floor_ts = t0 + std::max(1e-13 * (tmax - t0), 1e-300);
    const double deep = turn_sweep(floor_ts);
    if (deep < sweep)
        return std::nullopt; // sweep saturates below the target: no candidate

    auto g = [&](double ts2) { return turn_sweep(ts2) - sweep; };
    const double ts = illinois(g, floor_ts, tmin, deep - sweep, graze - sweep,
                               1e-14 * (tmax - t0), kSweepTol);
    const double c = f.f(ts);
    Shot s;
    s.kind = PathKind::Turning;
    s.c = c;
    s.t_star = ts;
    s.length = leg_length(f, c, ts, t1) + leg_length(f, c, ts, t2);
    s.signed_sweep = target_sweep;
    return s;
}

// Candidate fiber displacements from x to y, signed: both arc directions on a
// circle, the single difference on an interval.
std::vector<double> signed_displacements(const Fiber& fiber, double th1, double th2) {
    if (fiber.kind == Fiber::Kind::Interval)
        return {th2 - th1};
    const double fwd = fiber.reduce(th2 - th1);
    std::vector<double> out{fwd};
    if (fwd > 0.0) out.push_back(fwd - fiber.L);
    return out;
}

Shot solve(const ConeSpace& cone, const ConePoint& x, const ConePoint& y) {
    const auto& f = cone.f;
    const double t0 = cone.t0();
    const double d_F = cone.fiber.distance(x.theta, y.theta);

    Shot tip;
    tip.kind = PathKind::ThroughTip;
    tip.length = (x.t - t0) + (y.t - t0);

    // Radial case: an endpoint sits at the tip.
    if (x.t <= t0 || y.t <= t0) return tip;

    // Sufficient through-tip criterion: rescaled fiber separation reaches pi.
    if (f.delta() * d_F >= kPi) return tip;

    Shot best = tip;
    for (double disp : signed_displacements(cone.fiber, x.theta, y.theta)) {
        auto cand = shoot(f, t0, x.t, y.t, disp);
        if (cand && cand->length < best.length - kTieTol)
            best = *cand;
    }
    return best;
}

} // namespace

double Fiber::reduce(double theta) const {
    if (kind == Kind::Interval) return theta;
    double r = std::fmod(theta, L);
    if (r < 0.0) r += L;
    return r;
}

double Fiber::distance(double a, double b) const {
    if (kind == Kind::Interval) return std::abs(a - b);
    const double d = reduce(a - b);
    return std::min(d, L - d);
}

double Fiber::injrad() const {
    if (kind != Kind::Circle)
        throw invalid_input("injectivity radius is defined for circle fibers");
    return 0.5 * L;
}

ConeSpace::ConeSpace(warp::WarpFunction warping, Fiber fib, double tmax)
    : f(std::move(warping)), fiber(fib), t_max(tmax) {
    if (fiber.L <= 0.0) throw invalid_input("fiber length must be positive");
    if (!(f.t0() < f.b() && f.b() < t_max))
        throw invalid_input("requires t0 < b < t_max");
}

void ConeSpace::require_in_range(const ConePoint& p) const {
    if (p.t < t0() - 1e-12 || p.t >= t_max)
        throw invalid_input("out-of-range sample: t outside [t0, t_max)");
    if (fiber.kind == Fiber::Kind::Interval && (p.theta < -1e-12 || p.theta > fiber.L + 1e-12))
        throw invalid_input("out-of-range sample: theta outside [0, L]");
}

double path_length(const ConeSpace& cone, const std::vector<ConePoint>& samples) {
    if (samples.size() < 2)
        throw invalid_input("path requires at least 2 samples");
    for (const auto& p : samples) cone.require_in_range(p);
    double total = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double dt = samples[i].t - samples[i - 1].t;
        double dth = samples[i].theta - samples[i - 1].theta;
        if (cone.fiber.kind == Fiber::Kind::Circle) {
            dth = cone.fiber.reduce(dth);
            dth = std::min(dth, cone.fiber.L - dth);
        }
        const double fmid = cone.f.f(0.5 * (samples[i].t + samples[i - 1].t));
        total += std::sqrt(dt * dt + fmid * fmid * dth * dth);
    }
    return total;
}

ConePoint GeodesicPath::point_at(double s) const {
    if (samples.empty()) return {};
    if (s <= 0.0) return samples.front();
    if (s >= cum_length.back()) return samples.back();
    const auto it = std::lower_bound(cum_length.begin(), cum_length.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - cum_length.begin());
    if (i == 0) return samples.front();
    const double s0 = cum_length[i - 1], s1 = cum_length[i];
    const double u = (s1 > s0) ? (s - s0) / (s1 - s0) : 0.0;
    return ConePoint{samples[i - 1].t + u * (samples[i].t - samples[i - 1].t),
                     samples[i - 1].theta + u * (samples[i].theta - samples[i - 1].theta)};
}

namespace {

// Sample grid on [lo, hi] with quadratic clustering toward `cluster_end`
// (one of lo/hi); resolves the 1/sqrt behavior at turning points.
std::vector<double> clustered_grid(double lo, double hi, int n, bool cluster_lo) {
    std::vector<double> ts(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        const double u = static_cast<double>(k) / n;
        const double w = cluster_lo ? u * u : 1.0 - (1.0 - u) * (1.0 - u);
        ts[static_cast<std::size_t>(k)] = lo + (hi - lo) * w;
    }
    return ts;
}

void append_leg(const warp::WarpFunction& f, GeodesicPath& path, double c,
                const std::vector<double>& ts, bool descending, double dir,
                double theta_start) {
    // ts ascends from the lower level; walk it in path order.
    double theta = theta_start;
    double s = path.cum_length.empty() ? 0.0 : path.cum_length.back();
    const int n = static_cast<int>(ts.size()) - 1;
    for (int k = 1; k <= n; ++k) {
        const int a = descending ? n - k : k - 1;
        const int b = descending ? n - k + 1 : k;
        const double lo = ts[static_cast<std::size_t>(std::min(a, b))];
        const double hi = ts[static_cast<std::size_t>(std::max(a, b))];
        theta += dir * leg_sweep(f, c, lo, hi);
        s += leg_length(f, c, lo, hi);
        path.samples.push_back({descending ? lo : hi, theta});
        path.cum_length.push_back(s);
    }
}

} // namespace

GeodesicPath geodesic(const ConeSpace& cone, ConePoint x, ConePoint y, int n_samples) {
    cone.require_in_range(x);
    cone.require_in_range(y);
    if (cone.fiber.kind == Fiber::Kind::Circle) {
        x.theta = cone.fiber.reduce(x.theta);
        y.theta = cone.fiber.reduce(y.theta);
    }
    n_samples = std::max(n_samples, 9);

    GeodesicPath path;
    if (x.t == y.t && cone.fiber.distance(x.theta, y.theta) == 0.0) {
        path.samples = {x, x};
        path.cum_length = {0.0, 0.0};
        path.length = 0.0;
        path.min_t = x.t;
        path.clairaut = 0.0;
        return path;
    }

    Shot shot;
    try {
        shot = solve(cone, x, y);
    } catch (const std::exception&) {
        // no-convergence: fall back to the mesh oracle and flag the result
        path.length = distance_oracle(cone, x, y, 200, 400);
        path.samples = {x, y};
        path.cum_length = {0.0, path.length};
        path.oracle_fallback = true;
        path.min_t = std::min(x.t, y.t);
        return path;
    }

    const double t0 = cone.t0();
    const int half = n_samples / 2;

    if (shot.kind == PathKind::ThroughTip) {
        path.through_tip = true;
        path.min_t = t0;
        double s = 0.0;
        for (int k = 0; k <= half; ++k) {
            const double t = x.t + (t0 - x.t) * static_cast<double>(k) / half;
            s = x.t - t;
            path.samples.push_back({t, x.theta});
            path.cum_length.push_back(s);
        }
        for (int k = 1; k <= half; ++k) {
            const double t = t0 + (y.t - t0) * static_cast<double>(k) / half;
            path.samples.push_back({t, y.theta});
            path.cum_length.push_back((x.t - t0) + (t - t0));
        }
        path.length = (x.t - t0) + (y.t - t0);
        return path;
    }

    path.clairaut = shot.c;
    const double dir = (shot.signed_sweep >= 0.0) ? 1.0 : -1.0;

    if (shot.kind == PathKind::Monotone) {
        const double tmin = std::min(x.t, y.t), tmax = std::max(x.t, y.t);
        path.min_t = tmin;
        path.samples.push_back(x);
        path.cum_length.push_back(0.0);
        const bool ascending = y.t >= x.t;
        auto ts = clustered_grid(tmin, tmax, n_samples - 1, /*cluster_lo=*/true);
        append_leg(cone.f, path, shot.c, ts, /*descending=*/!ascending, dir, x.theta);
    } else {
        path.min_t = shot.t_star;
        path.samples.push_back(x);
        path.cum_length.push_back(0.0);
        auto down = clustered_grid(shot.t_star, x.t, half, /*cluster_lo=*/true);
        append_leg(cone.f, path, shot.c, down, /*descending=*/true, dir, x.theta);
        auto up = clustered_grid(shot.t_star, y.t, half, /*cluster_lo=*/true);
        append_leg(cone.f, path, shot.c, up, /*descending=*/false, dir,
                   path.samples.back().theta);
    }
    // Pin the endpoint exactly (quadrature drift is ~1e-10).
    path.samples.back().t = y.t;
    path.samples.back().theta = x.theta + shot.signed_sweep;
    path.length = path.cum_length.back();
    return path;
}

double distance(const ConeSpace& cone, ConePoint x, ConePoint y) {
    cone.require_in_range(x);
    cone.require_in_range(y);
    if (cone.fiber.kind == Fiber::Kind::Circle) {
        x.theta = cone.fiber.reduce(x.theta);
        y.theta = cone.fiber.reduce(y.theta);
    }
    if (x.t == y.t && cone.fiber.distance(x.theta, y.theta) == 0.0) return 0.0;
    return solve(cone, x, y).length;
}

bool through_tip_sufficient(const ConeSpace& cone, const ConePoint& x,
                            const ConePoint& y) {
    if (x.t <= cone.t0() || y.t <= cone.t0())
        throw invalid_input("through_tip_sufficient requires non-tip points");
    return cone.f.delta() * cone.fiber.distance(x.theta, y.theta) >= kPi;
}

double distance_oracle(const ConeSpace& cone, ConePoint x, ConePoint y,
                       int n_t, int n_theta) {
    if (n_t < 8 || n_theta < 8)
        throw invalid_input("resolution-too-low: mesh resolutions must be >= 8");
    cone.require_in_range(x);
    cone.require_in_range(y);
    const bool circle = cone.fiber.kind == Fiber::Kind::Circle;
    if (circle) {
        x.theta = cone.fiber.reduce(x.theta);
        y.theta = cone.fiber.reduce(y.theta);
    }

    const double t0 = cone.t0();
    const double R = cone.t_max - t0;
    const double L = cone.fiber.L;

    // Geometric level spacing toward the tip keeps mesh cells near-square in
    // the metric, where f is close to linear.
    const double eps0 = 1e-3 * R;
    const double h = std::log(R / eps0) / (n_t - 1);
    std::vector<double> levels(static_cast<std::size_t>(n_t));
    for (int i = 0; i < n_t; ++i)
        levels[static_cast<std::size_t>(i)] = t0 + eps0 * std::exp(h * i);

    const int ncols = circle ? n_theta : n_theta + 1;
    const double htheta = circle ? L / n_theta : L / n_theta;
    const int n_grid = n_t * ncols;
    const int tip_id = n_grid, src_id = n_grid + 1, dst_id = n_grid + 2;

    // Coprime offsets within Chebyshev radius 3: fine enough directionally to
    // keep the graph metric within ~1.5% of the length metric.
    static const std::vector<std::pair<int, int>> offsets = [] {
        std::vector<std::pair<int, int>> v;
        for (int di = -3; di <= 3; ++di)
            for (int dj = -3; dj <= 3; ++dj) {
                if (di == 0 && dj == 0) continue;
                if (std::gcd(std::abs(di), std::abs(dj)) != 1) continue;
                v.emplace_back(di, dj);
            }
        return v;
    }();

    // Length of the straight coordinate segment (ta,tha) -> (tb,thb), by
    // composite Simpson on sqrt(dt^2 + f(t)^2 dth^2).  A segment is a genuine
    // path, so accurate segment lengths keep the graph metric an upper bound
    // on the true distance.
    auto seg_weight = [&](double ta, double tha, double tb, double thb,
                          int n_panels) {
        const double dth = circle ? std::min(cone.fiber.reduce(tha - thb),
                                             L - cone.fiber.reduce(tha - thb))
                                  : std::abs(tha - thb);
        const double dt = tb - ta;
        auto speed = [&](double u) {
            const double f = cone.f.f(ta + u * dt);
            return std::sqrt(dt * dt + f * f * dth * dth);
        };
        const double hu = 1.0 / n_panels;
        double sum = speed(0.0) + speed(1.0);
        for (int k = 1; k < n_panels; ++k)
            sum += 2.0 * speed(k * hu);
        for (int k = 0; k < n_panels; ++k)
            sum += 4.0 * speed((k + 0.5) * hu);
        return sum * hu / 6.0;
    };

    std::vector<double> dist(static_cast<std::size_t>(n_grid) + 3,
                             std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    auto relax = [&](int id, double d) {
        if (d < dist[static_cast<std::size_t>(id)]) {
            dist[static_cast<std::size_t>(id)] = d;
            heap.emplace(d, id);
        }
    };

    auto col_theta = [&](int j) { return j * htheta; };
    auto locate_level = [&](double t) {
        const auto it = std::lower_bound(levels.begin(), levels.end(), t);
        int i = static_cast<int>(it - levels.begin());
        return std::clamp(i, 0, n_t - 1);
    };

    // Endpoints join the mesh through a small index window of exact segments.
    auto attach = [&](const ConePoint& p) {
        const int ic = locate_level(p.t);
        const int jc = static_cast<int>(std::lround(p.theta / htheta));
        std::vector<std::pair<int, double>> links;
        for (int di = -3; di <= 3; ++di)
            for (int dj = -3; dj <= 3; ++dj) {
                const int i = ic + di;
                if (i < 0 || i >= n_t) continue;
                int j = jc + dj;
                if (circle) j = ((j % ncols) + ncols) % ncols;
                else if (j < 0 || j >= ncols) continue;
                const double w = seg_weight(p.t, p.theta, levels[static_cast<std::size_t>(i)], col_theta(j), 32);
                links.emplace_back(i * ncols + j, w);
            }
        links.emplace_back(tip_id, p.t - t0);
        return links;
    };

    const auto src_links = attach(x);
    const auto dst_links = attach(y);

    relax(src_id, 0.0);
    relax(dst_id, seg_weight(x.t, x.theta, y.t, y.theta, 64)); // direct segment

    while (!heap.empty()) {
        auto [d, id] = heap.top();
        heap.pop();
        if (d > dist[static_cast<std::size_t>(id)]) continue;
        if (id == dst_id) return d;

        if (id == src_id) {
            for (auto [nid, w] : src_links) relax(nid, d + w);
            continue;
        }
        if (id == tip_id) {
            for (int j = 0; j < ncols; ++j)
                relax(j, d + (levels[0] - t0));
            for (auto [nid, w] : dst_links)
                if (nid == tip_id) relax(dst_id, d + w);
            continue;
        }
        const int i = id / ncols, j = id % ncols;
        if (i == 0) relax(tip_id, d + (levels[0] - t0));
        for (auto [di, dj] : offsets) {
            const int i2 = i + di;
            if (i2 < 0 || i2 >= n_t) continue;
            int j2 = j + dj;
            if (circle) j2 = ((j2 % ncols) + ncols) % ncols;
            else if (j2 < 0 || j2 >= ncols) continue;
            const double w = seg_weight(levels[static_cast<std::size_t>(i)], col_theta(j),
                                        levels[static_cast<std::size_t>(i2)], col_theta(j2), 2);
            relax(i2 * ncols + j2, d + w);
        }
        // reverse links into the endpoint nodes
        for (auto [nid, w] : dst_links)
            if (nid == id) relax(dst_id, d + w);
    }
    throw solver_failure("oracle: target unreachable");
}

double tip_angle(const ConeSpace& cone, double p1, double p2) {
    return std::min(kPi, cone.fiber.distance(p1, p2) / cone.f.delta());
}

LogInjectivityReport log_injectivity_check(const ConeSpace& cone, int m,
                                           std::uint64_t seed) {
    if (m < 2) throw invalid_input("log injectivity check requires m >= 2");
    Rng rng(seed);
    const double t0 = cone.t0();
    const double band = 0.3 * (cone.f.b() - t0);

    struct Log { double direction, radius; };
    std::vector<Log> logs;
    logs.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double t = t0 + band * (1e-6 + (1.0 - 1e-6) * rng.uniform());
        const double th = cone.fiber.kind == Fiber::Kind::Circle
                              ? rng.uniform(0.0, cone.fiber.L)
                              : rng.uniform(0.0, cone.fiber.L);
        // Radial geodesics from the tip: log = (fiber direction, distance).
        logs.push_back({th, t - t0});
    }

    LogInjectivityReport report;
    report.samples = m;
    report.seed = seed;
    for (std::size_t i = 0; i < logs.size(); ++i)
        for (std::size_t j = i + 1; j < logs.size(); ++j) {
            const bool same_dir = tip_angle(cone, logs[i].direction, logs[j].direction) == 0.0;
            const bool same_rad = logs[i].radius == logs[j].radius;
            if (same_dir && same_rad) ++report.collisions;
        }
    report.pass = report.collisions == 0;
    return report;
}

} // namespace warpcone::cone
