#pragma once

#include <Eigen/Core>

#include <utility>

namespace rw2 {

/// Side lengths of the apex triangle: a = RW2([mu],[delta0]),
/// b = RW2([nu],[delta0]), c = RW2([mu],[nu]).
struct SideTriple {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Coefficients of the flat quadratic form on a two-ray filling cone:
/// A = int ||x||^2 dmu, B = int <x, T(x)> dmu, C = int ||T(x)||^2 dmu.
struct ConeCoefficients {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
};

/// W2 from its mean/shape decomposition: sqrt(||mean_gap||^2 + rw2^2).
double w2_decompose(const Eigen::VectorXd& mean_gap, double rw2);

/// Law-of-cosines angle between two rays, in [0, pi]. The cosine is clamped
/// to [-1, 1] against floating-point noise near collinear configurations.
/// Throws degenerate_ray_error if a or b vanishes, geometry_error if the
/// triple violates the triangle inequality beyond tolerance.
double angle_from_sides(const SideTriple& t);

/// Orthogonal distance from a point at given norm to a ray: norm * sin(theta).
double projection_distance(double norm, double theta);

/// Distance to the closed ray: the apex is the nearest ray point once
/// theta >= pi/2, so this returns norm there instead of norm * sin(theta).
double ray_distance(double norm, double theta);

/// Cone inner product: ||a|| * ||b|| * cos(theta). Exposed as a scalar only;
/// the underlying space is conic, not linear.
double inner_product(double norm_a, double norm_b, double theta);

/// Exact W2 between two points (a1,b1), (a2,b2) of a filling cone with the
/// given quadratic form: sqrt(da^2 A + 2 da db B + db^2 C).
double filling_cone_distance(const ConeCoefficients& coef, std::pair<double, double> p1,
                             std::pair<double, double> p2);

} // namespace rw2
