#pragma once

#include <string>
#include <vector>

namespace rw2 {

enum class Family { gaussian, uniform, logistic, laplace };

const char* family_name(Family f);
Family family_from_name(const std::string& name);

/// Squared L2 norm of the family's unit-scale quantile function:
/// 1 (gaussian), 1/12 (uniform), pi^2/3 (logistic), 2 (laplace).
double family_psi_norm2(Family f);

/// Unit-scale quantile function psi of the family at u in (0, 1).
double family_psi(Family f, double u);

/// How a 1D empirical measure relates to one parametric ray.
struct ProjectionReport {
    double l = 0.0;          // projection length on the unit-normalized ray, sigma_mu * cos(theta)
    double l_raw = 0.0;      // unnormalized quantile inner product int F_mu^{-1} psi du
    double theta = 0.0;      // RW2 angle in [0, pi]
    double p = 0.0;          // orthogonal projection distance sigma_mu * sin(theta)
    double sigma_mu = 0.0;   // RW2 norm of the sample
    double sigma_star = 0.0; // optimal scale on the unit-normalized ray (= l)
    double scale_star = 0.0; // optimal scale in the family's natural parameter, l_raw / ||psi||^2
    Family family = Family::gaussian;
};

/// Closed-form projection of a 1D sample onto the Gaussian ray. The input is
/// centered and sorted internally; throws degenerate_ray_error when all
/// samples coincide (sigma_mu = 0). O(n log n).
ProjectionReport gaussian_projection(std::vector<double> samples);

/// Same for the uniform / logistic / laplace rays, via the closed quantile
/// antiderivatives. The cosine is normalized by ||psi|| so that samples from
/// the family itself drive theta to 0.
ProjectionReport family_projection(std::vector<double> samples, Family family);

/// Exact 1D W2 between two equal-weight samples (merged quantile breakpoints).
double quantile_w2_1d(std::vector<double> x, std::vector<double> y);

/// Exact 1D W2 between a sample and a family member at the given natural
/// scale, via per-bin closed antiderivatives.
double quantile_w2_1d(std::vector<double> x, Family family, double scale);

} // namespace rw2
