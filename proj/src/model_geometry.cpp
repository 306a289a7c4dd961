#include "warpcone/model_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "warpcone/errors.hpp"

namespace warpcone::model {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// |kappa| below this is treated as flat.  The stable half-angle formulas
// below are continuous through kappa = 0, so the cutoff only avoids division
// by a denormal scale factor.
constexpr double kFlatEps = 1e-150;

void require_positive_sides_for_angle(double a, double b) {
    if (a <= 0.0 || b <= 0.0)
        throw invalid_input("degenerate-vertex: angle requires a, b > 0");
}

void check_diameter(double kappa, double a, double b, double c) {
    if (kappa <= 0.0) return;
    const double limit = kPi / std::sqrt(kappa);
    if (a >= limit || b >= limit || c >= limit)
        throw invalid_input("diameter-exceeded: side >= pi/sqrt(kappa)");
}

} // namespace

void validate_triangle(const ModelTriangle& tri) {
    const double a = tri.a, b = tri.b, c = tri.c;
    if (a < 0.0 || b < 0.0 || c < 0.0)
        throw invalid_input("invalid-triangle: negative side");
    const double slack = 1e-12 * (1.0 + a + b + c);
    if (a > b + c + slack || b > a + c + slack || c > a + b + slack)
        throw invalid_input("invalid-triangle: triangle inequality fails");
    if (tri.kappa > 0.0) {
        check_diameter(tri.kappa, a, b, c);
        if (a + b + c >= 2.0 * kPi / std::sqrt(tri.kappa))
            throw invalid_input("diameter-exceeded: perimeter >= 2 pi/sqrt(kappa)");
    }
}

// The law of cosines in M_kappa is evaluated through half-angle identities:
//
//   hyperbolic:  sinh^2(s c/2) = sinh^2(s(a-b)/2) + sinh(sa) sinh(sb) sin^2(g/2)
//   spherical:   sin^2(s c/2)  = sin^2(s(a-b)/2)  + sin(sa)  sin(sb)  sin^2(g/2)
//
// with s = sqrt(|kappa|).  These have no cancellation for small s and reduce
// exactly to the Euclidean law of cosines in the limit.

double model_angle(double kappa, double a, double b, double c) {
    require_positive_sides_for_angle(a, b);
    if (c < 0.0)
        throw invalid_input("invalid-triangle: negative side");
    const double slack = 1e-12 * (1.0 + a + b + c);
    if (c > a + b + slack || a > b + c + slack || b > a + c + slack)
        throw invalid_input("invalid-triangle: triangle inequality fails");
    check_diameter(kappa, a, b, c);

    // The common denominator sinh(sa)sinh(sb) (resp. sin, or 4ab) cancels in
    // the atan2 ratio, so only the two numerators are formed.
    double num_sin, num_cos;
    if (std::abs(kappa) < kFlatEps) {
        num_sin = (c - (a - b)) * (c + (a - b));
        num_cos = ((a + b) - c) * ((a + b) + c);
    } else if (kappa < 0.0) {
        const double s = std::sqrt(-kappa);
        const double sd = std::sinh(0.5 * s * (a - b));
        const double ss = std::sinh(0.5 * s * (a + b));
        const double sc = std::sinh(0.5 * s * c);
        num_sin = sc * sc - sd * sd;
        num_cos = ss * ss - sc * sc;
    } else {
        const double s = std::sqrt(kappa);
        const double sd = std::sin(0.5 * s * (a - b));
        const double ss = std::sin(0.5 * s * (a + b));
        const double sc = std::sin(0.5 * s * c);
        num_sin = sc * sc - sd * sd;
        num_cos = ss * ss - sc * sc;
    }
    num_sin = std::max(num_sin, 0.0);
    num_cos = std::max(num_cos, 0.0);
    return 2.0 * std::atan2(std::sqrt(num_sin), std::sqrt(num_cos));
}

double model_chord(double kappa, double a, double b, double gamma) {
    if (a < 0.0 || b < 0.0)
        throw invalid_input("invalid-triangle: negative side");
    if (gamma < 0.0 || gamma > kPi + 1e-12)
        throw invalid_input("invalid-triangle: angle outside [0, pi]");
    gamma = std::clamp(gamma, 0.0, kPi);
    if (kappa > 0.0) {
        const double limit = kPi / std::sqrt(kappa);
        if (a >= limit || b >= limit)
            throw invalid_input("diameter-exceeded: side >= pi/sqrt(kappa)");
    }

    const double sg = std::sin(0.5 * gamma);
    if (std::abs(kappa) < kFlatEps) {
        const double d2 = (a - b) * (a - b) + 4.0 * a * b * sg * sg;
        return std::sqrt(std::max(d2, 0.0));
    }
    if (kappa < 0.0) {
        const double s = std::sqrt(-kappa);
        const double sd = std::sinh(0.5 * s * (a - b));
        const double rhs = sd * sd + std::sinh(s * a) * std::sinh(s * b) * sg * sg;
        return 2.0 / s * std::asinh(std::sqrt(std::max(rhs, 0.0)));
    }
    const double s = std::sqrt(kappa);
    const double sd = std::sin(0.5 * s * (a - b));
    double rhs = sd * sd + std::sin(s * a) * std::sin(s * b) * sg * sg;
    rhs = std::clamp(rhs, 0.0, 1.0);
    return 2.0 / s * std::asin(std::sqrt(rhs));
}

ModelPoint comparison_point(const ModelTriangle& tri, SideId side, double s) {
    validate_triangle(tri);
    if (s < 0.0 || s > 1.0)
        throw invalid_input("invalid-triangle: fraction outside [0,1]");

    // Vertices about A: r_A = 0, B = (c, 0), C = (b, angle_A).
    const double angle_A = (tri.b > 0.0 && tri.c > 0.0)
                               ? model_angle(tri.kappa, tri.b, tri.c, tri.a)
                               : 0.0;
    const ModelPoint A{0.0, 0.0};
    const ModelPoint B{tri.c, 0.0};
    const ModelPoint C{tri.b, angle_A};

    ModelPoint u, v;
    double side_len;
    switch (side) {
    case SideId::a: u = B; v = C; side_len = tri.a; break;
    case SideId::b: u = A; v = C; side_len = tri.b; break;
    default:        u = A; v = B; side_len = tri.c; break;
    }
    const double d = s * side_len;
    if (d <= 0.0) return u;
    if (d >= side_len) return v;

    if (u.r == 0.0) // segment starts at A: stay on the ray toward v
        return ModelPoint{d, v.phi};

    // Resolve the point through the triangle A,u,v: distance from A via the
    // angle of the side at u, then the polar angle via the angle at A.
    const double dist_uv = side_len;
    const double dist_Av = v.r;
    const double beta = model_angle(tri.kappa, u.r, dist_uv, dist_Av);
    const double r = model_chord(tri.kappa, u.r, d, beta);
    double dphi = (r > 0.0) ? model_angle(tri.kappa, u.r, r, d) : 0.0;
    const double sign = (v.phi >= u.phi) ? 1.0 : -1.0;
    return ModelPoint{r, u.phi + sign * dphi};
}

double model_distance(double kappa, const ModelPoint& p, const ModelPoint& q) {
    const double dphi = std::abs(p.phi - q.phi);
    if (p.r == 0.0) return q.r;
    if (q.r == 0.0) return p.r;
    return model_chord(kappa, p.r, q.r, std::min(dphi, kPi));
}

} // namespace warpcone::model
