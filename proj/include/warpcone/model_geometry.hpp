#pragma once

#include <cstddef>

namespace warpcone::model {

// Triangle in the constant-curvature model plane M_kappa, described by its
// three side lengths.  Side a joins vertices B,C; side b joins A,C; side c
// joins A,B.
struct ModelTriangle {
    double kappa = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

enum class SideId { a, b, c };

// Point of an isometrically embedded model triangle, in geodesic polar
// coordinates about vertex A.
struct ModelPoint {
    double r = 0.0;
    double phi = 0.0;
};

// Throws invalid_input if the sides violate the triangle inequality or, for
// kappa > 0, the model diameter constraint.
void validate_triangle(const ModelTriangle& tri);

// Angle opposite side c in the model plane of curvature kappa.
// Requires a, b > 0 (the Alexandrov angle needs nondegenerate segments).
double model_angle(double kappa, double a, double b, double c);

// Length of the side opposite the angle gamma between sides of lengths a, b.
double model_chord(double kappa, double a, double b, double gamma);

// Point at arc-length fraction s in [0,1] along a side of the embedded
// triangle.  Orientation: side a runs B->C, side b runs A->C, side c A->B.
ModelPoint comparison_point(const ModelTriangle& tri, SideId side, double s);

// Distance between two embedded points of the same triangle.
double model_distance(double kappa, const ModelPoint& p, const ModelPoint& q);

} // namespace warpcone::model
