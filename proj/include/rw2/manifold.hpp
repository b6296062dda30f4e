#pragma once

#include "rw2/cloud.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace rw2 {

/// Covariance parameterization Sigma = R diag(lambda) R^T with orthogonal R
/// and nonnegative eigenvalues under the trace budget sum(lambda) <= 1.
struct GaussianFactor {
    Eigen::MatrixXd R;
    Eigen::VectorXd lambda;

    Eigen::MatrixXd sigma() const { return R * lambda.asDiagonal() * R.transpose(); }
};

struct TrajectoryPoint {
    int iter = 0;
    double rw2 = 0.0;       // refreshed dual estimate of RW2(mu, N(0, Sigma))
    double trace = 0.0;     // sum(lambda) after the covariance step
    double objective = 0.0; // frozen-f transport cost used for the gradient
};

struct NearestGaussianConfig {
    int outer_iters = 400;
    int inner_steps = 1;    // covariance steps per dual refresh
    int dual_steps = 150;   // ascent steps per refresh (warm-started)
    int batch = 512;
    double eta_f = 0.5;
    double eta_cov = 0.15;
    double cov_decay = 80;  // eta_cov(t) = eta_cov / sqrt(1 + t/cov_decay)
    double max_lambda_step = 0.05; // per-coordinate cap on one eigenvalue move
    int final_eval_batch = 65536;
    int patience = 60;
    double tol = 1e-4;
    std::uint64_t seed = 0;
};

struct NearestGaussianResult {
    Eigen::MatrixXd sigma_star;
    double p_star = 0.0;          // final RW2 estimate to N(0, Sigma*)
    double theta_star = 0.0;      // cone angle from the side triple
    double rotation_angle = 0.0;  // principal-axis angle of Sigma* in [0, pi); d = 2 only
    double p_std_err = 0.0;
    std::vector<TrajectoryPoint> trajectory;
    bool early_stopped = false;
};

/// Monte-Carlo gradient of the frozen-f transport cost with respect to R.
/// Rows of `residuals` are r_l = y_l - x_{i(l)}, rows of `xi` the standard
/// normal draws: (1/m) sum_l r_l (Lambda^{1/2} xi_l)^T.
Eigen::MatrixXd grad_R(const Eigen::MatrixXd& residuals, const Eigen::MatrixXd& xi,
                       const Eigen::VectorXd& lambda);

/// Same objective, gradient in lambda: (1/2m) sum_l (R^T r_l) .* xi_l / sqrt(lambda),
/// with lambda floored at 1e-8 inside the square root.
Eigen::VectorXd grad_lambda(const Eigen::MatrixXd& residuals, const Eigen::MatrixXd& xi,
                            const Eigen::MatrixXd& R, const Eigen::VectorXd& lambda);

/// One descent step on the orthogonal group: project G to the tangent space at
/// R, step R - eta * G_tan, retract by thin QR with a positive-diagonal sign
/// fix (symmetric polar factor if the QR factor is rank-deficient).
Eigen::MatrixXd riemannian_step(const Eigen::MatrixXd& R, const Eigen::MatrixXd& G, double eta);

/// Euclidean projection onto {lambda >= 0, sum(lambda) <= 1}: clip negatives,
/// then sorted-threshold simplex projection if the clipped sum exceeds 1.
Eigen::VectorXd project_lambda(const Eigen::VectorXd& raw);

/// Bures-Wasserstein distance between N(0, Sigma1) and N(0, Sigma2):
/// sqrt(tr(Sigma1 + Sigma2 - 2 (Sigma2^{1/2} Sigma1 Sigma2^{1/2})^{1/2})).
double gaussian_w2_closed_form(const Eigen::MatrixXd& sigma1, const Eigen::MatrixXd& sigma2);

/// Alternating nearest-Gaussian search: dual-potential refresh, then
/// Riemannian covariance steps with f frozen. The cloud must be centered with
/// rw2_norm > 0; the trace budget keeps sum(lambda) <= 1.
NearestGaussianResult nearest_gaussian(const SampleCloud& cloud, const NearestGaussianConfig& cfg);

/// PCA-separable estimate of RW2(mu, N(0, Sigma_mu)): rotate into the PCA
/// basis, exact 1D quantile W2 per coordinate against N(0, sigma_k^2), root of
/// the sum. Exact for coordinate-separable measures, heuristic otherwise.
double pca_separable_rw2(const SampleCloud& cloud);

struct GridSearchResult {
    Eigen::VectorXd lambda_values; // grid axis, (i + 0.5) / n_lambda
    Eigen::VectorXd theta_values;  // grid axis, j * pi / n_theta
    Eigen::MatrixXd landscape;     // mean W2^2 estimate, n_lambda x n_theta
    double lambda_star = 0.0; // largest eigenvalue of the best cell
    double theta_star = 0.0;  // major-axis rotation angle of the best cell
    double value_star = 0.0;
    double value_moment_match = 0.0; // same estimator at Sigma = Sigma_mu
};

/// Brute-force landscape over Sigma(lambda, theta) = R(theta) diag(lambda,
/// 1 - lambda) R(theta)^T for a 2D cloud, estimated by mc_gaussian_rw2^2
/// averaged over seed replicates. Replicate seeds are shared across cells
/// (common random numbers) so neighboring cells are comparable.
GridSearchResult counterexample_grid_search(const SampleCloud& cloud, int n_lambda, int n_theta,
                                            int m, int n_seeds, std::uint64_t seed);

/// Principal-axis rotation angle of a symmetric 2x2 matrix, in [0, pi).
double rotation_angle_2d(const Eigen::MatrixXd& sigma);

} // namespace rw2
