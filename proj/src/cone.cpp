#include "rw2/cone.hpp"

#include "rw2/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rw2 {

double w2_decompose(const Eigen::VectorXd& mean_gap, double rw2) {
    if (rw2 < 0.0) throw input_error("w2_decompose: rw2 must be nonnegative");
    if (!mean_gap.allFinite() || !std::isfinite(rw2))
        throw input_error("w2_decompose: non-finite input");
    return std::sqrt(mean_gap.squaredNorm() + rw2 * rw2);
}

double angle_from_sides(const SideTriple& t) {
    if (!(t.a > 0.0) || !(t.b > 0.0))
        throw degenerate_ray_error("angle_from_sides: ray collapsed to the apex (a or b is 0)");
    if (t.c < 0.0) throw input_error("angle_from_sides: negative side length");

    const double tol = 1e-9 * (t.a + t.b + t.c) + 1e-300;
    if (t.c > t.a + t.b + tol || t.c < std::abs(t.a - t.b) - tol)
        throw geometry_error("angle_from_sides: side triple violates the triangle inequality");

    double cosv = (t.a * t.a + t.b * t.b - t.c * t.c) / (2.0 * t.a * t.b);
    cosv = std::clamp(cosv, -1.0, 1.0);
    return std::acos(cosv);
}

double projection_distance(double norm, double theta) {
    if (norm < 0.0) throw input_error("projection_distance: norm must be nonnegative");
    return norm * std::sin(theta);
}

double ray_distance(double norm, double theta) {
    if (norm < 0.0) throw input_error("ray_distance: norm must be nonnegative");
    return theta >= M_PI / 2.0 ? norm : norm * std::sin(theta);
}

double inner_product(double norm_a, double norm_b, double theta) {
    if (norm_a < 0.0 || norm_b < 0.0) throw input_error("inner_product: norms must be nonnegative");
    return norm_a * norm_b * std::cos(theta);
}

double filling_cone_distance(const ConeCoefficients& coef, std::pair<double, double> p1,
                             std::pair<double, double> p2) {
    if (coef.A < 0.0 || coef.C < 0.0)
        throw geometry_error("filling_cone_distance: diagonal coefficients must be nonnegative");
    const double da = p1.first - p2.first;
    const double db = p1.second - p2.second;
    double sq = da * da * coef.A + 2.0 * da * db * coef.B + db * db * coef.C;
    const double scale = coef.A + std::abs(coef.B) + coef.C;
    if (sq < -1e-12 * std::max(1.0, scale))
        throw geometry_error("filling_cone_distance: quadratic form is not positive semidefinite");
    return std::sqrt(std::max(0.0, sq));
}

} // namespace rw2
