#include "rw2/manifold.hpp"

#include "rw2/discrete_ot.hpp"
#include "rw2/errors.hpp"
#include "rw2/onedim.hpp"
#include "rw2/rng.hpp"
#include "rw2/semidual.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rw2 {

namespace {

constexpr double kLambdaFloor = 1e-8; // keeps 1/sqrt(lambda) finite

Eigen::VectorXd floored_sqrt(const Eigen::VectorXd& lambda) {
    return lambda.cwiseMax(kLambdaFloor).cwiseSqrt();
}

// Argmin atom per target row: minimizes g_i - <x_i, y_l>, lowest index on ties.
void frozen_argmin(const Eigen::MatrixXd& X, const Eigen::VectorXd& g, const Eigen::MatrixXd& Y,
                   Eigen::VectorXi& idx, Eigen::VectorXd& vals) {
    Eigen::MatrixXd S = (-(X * Y.transpose())).colwise() + g;
    idx.resize(Y.rows());
    vals.resize(Y.rows());
    for (Eigen::Index l = 0; l < Y.rows(); ++l) {
        Eigen::Index imin = 0;
        vals(l) = S.col(l).minCoeff(&imin);
        idx(l) = static_cast<int>(imin);
    }
}

} // namespace

Eigen::MatrixXd grad_R(const Eigen::MatrixXd& residuals, const Eigen::MatrixXd& xi,
                       const Eigen::VectorXd& lambda) {
    if (residuals.rows() != xi.rows() || residuals.cols() != xi.cols() ||
        lambda.size() != residuals.cols())
        throw input_error("grad_R: shape mismatch");
    const double inv_m = 1.0 / static_cast<double>(residuals.rows());
    return inv_m * (residuals.transpose() * xi) * floored_sqrt(lambda).asDiagonal();
}

Eigen::VectorXd grad_lambda(const Eigen::MatrixXd& residuals, const Eigen::MatrixXd& xi,
                            const Eigen::MatrixXd& R, const Eigen::VectorXd& lambda) {
    if (residuals.rows() != xi.rows() || R.rows() != residuals.cols() ||
        lambda.size() != residuals.cols())
        throw input_error("grad_lambda: shape mismatch");
    const double inv_2m = 0.5 / static_cast<double>(residuals.rows());
    Eigen::MatrixXd rot = residuals * R; // row l = (R^T r_l)^T
    Eigen::VectorXd acc = (rot.array() * xi.array()).colwise().sum();
    return inv_2m * acc.cwiseQuotient(floored_sqrt(lambda));
}

Eigen::MatrixXd riemannian_step(const Eigen::MatrixXd& R, const Eigen::MatrixXd& G, double eta) {
    if (R.rows() != R.cols() || G.rows() != R.rows() || G.cols() != R.cols())
        throw input_error("riemannian_step: shape mismatch");
    Eigen::MatrixXd RtG = R.transpose() * G;
    Eigen::MatrixXd tangent = G - R * (0.5 * (RtG + RtG.transpose()));
    Eigen::MatrixXd A = R - eta * tangent;

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(R.rows(), R.cols());
    Eigen::VectorXd diag = qr.matrixQR().diagonal();
    const double floor = 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff());
    if (diag.cwiseAbs().minCoeff() <= floor) {
        // Rank-deficient factor: fall back to the symmetric polar factor.
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        return svd.matrixU() * svd.matrixV().transpose();
    }
    for (Eigen::Index j = 0; j < Q.cols(); ++j)
        if (diag(j) < 0.0) Q.col(j) = -Q.col(j);
    return Q;
}

Eigen::VectorXd project_lambda(const Eigen::VectorXd& raw) {
    if (!raw.allFinite()) throw input_error("project_lambda: non-finite input");
    Eigen::VectorXd clipped = raw.cwiseMax(0.0);
    if (clipped.sum() <= 1.0) return clipped;

    // Sorted-threshold projection onto the simplex sum(lambda) = 1.
    std::vector<double> u(raw.data(), raw.data() + raw.size());
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, tau = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        cum += u[k];
        const double t = (cum - 1.0) / static_cast<double>(k + 1);
        if (k + 1 == u.size() || u[k + 1] <= t) {
            tau = t;
            break;
        }
    }
    return (raw.array() - tau).cwiseMax(0.0);
}

double gaussian_w2_closed_form(const Eigen::MatrixXd& sigma1, const Eigen::MatrixXd& sigma2) {
    if (sigma1.rows() != sigma2.rows() || sigma1.cols() != sigma2.cols())
        throw input_error("gaussian_w2_closed_form: dimension mismatch");
    Eigen::MatrixXd root2 = psd_sqrt(sigma2);
    Eigen::MatrixXd inner = root2 * sigma1 * root2;
    Eigen::MatrixXd cross = psd_sqrt(0.5 * (inner + inner.transpose()));
    const double sq = sigma1.trace() + sigma2.trace() - 2.0 * cross.trace();
    return std::sqrt(std::max(0.0, sq));
}

double rotation_angle_2d(const Eigen::MatrixXd& sigma) {
    if (sigma.rows() != 2 || sigma.cols() != 2)
        throw input_error("rotation_angle_2d: need a 2x2 matrix");
    double angle = 0.5 * std::atan2(2.0 * sigma(0, 1), sigma(0, 0) - sigma(1, 1));
    if (angle < 0.0) angle += M_PI;
    return angle;
}

NearestGaussianResult nearest_gaussian(const SampleCloud& cloud,
                                       const NearestGaussianConfig& cfg) {
    if (cloud.n() < 1) throw input_error("nearest_gaussian: empty cloud");
    if (cloud.rw2_norm <= 0.0)
        throw degenerate_ray_error("nearest_gaussian: cloud has zero RW2 norm");
    if (cfg.outer_iters < 1 || cfg.inner_steps < 1 || cfg.batch < 1)
        throw input_error("nearest_gaussian: bad iteration budget");
    const Eigen::Index d = cloud.d();

    // Moment matching as the warm start, eigenvalues rescaled into the budget.
    Eigen::MatrixXd cov = moment_matching(cloud).second;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    GaussianFactor factor;
    factor.R = es.eigenvectors();
    factor.lambda = es.eigenvalues().cwiseMax(0.0);
    const double tr = factor.lambda.sum();
    if (tr > 1.0) factor.lambda *= 1.0 / tr;

    Eigen::VectorXd f = Eigen::VectorXd::Zero(cloud.n());
    Eigen::VectorXd g;
    Eigen::VectorXi idx;
    Eigen::VectorXd vals;

    NearestGaussianResult res;
    res.trajectory.reserve(static_cast<std::size_t>(cfg.outer_iters));
    double best_obj = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd best_sigma;
    Eigen::VectorXd best_f = f;
    int stall = 0;

    AscentConfig acfg;
    acfg.batch = cfg.batch;
    acfg.steps = cfg.dual_steps;
    acfg.eta0 = cfg.eta_f;
    acfg.eval_batch = 4 * cfg.batch;

    for (int t = 0; t < cfg.outer_iters; ++t) {
        Eigen::MatrixXd sigma = factor.sigma();
        acfg.seed = mix_seed(cfg.seed, 2 * static_cast<std::uint64_t>(t));
        AscentResult asc = dual_ascent(cloud, sigma, acfg, &f);
        f = asc.potential.f;

        // Best-iterate selection: the descent is stochastic, so the last
        // iterate is not necessarily the best one seen.
        const double obj = asc.rw2 * asc.rw2;
        if (obj < best_obj) {
            best_sigma = sigma;
            best_f = f;
        }
        if (obj < best_obj * (1.0 - cfg.tol)) {
            best_obj = obj;
            stall = 0;
        } else {
            best_obj = std::min(best_obj, obj);
            if (++stall >= cfg.patience) {
                res.early_stopped = true;
                res.trajectory.push_back({t, asc.rw2, factor.lambda.sum(), 0.0});
                break;
            }
        }

        Rng rng(mix_seed(cfg.seed, 2 * static_cast<std::uint64_t>(t) + 1));
        double frozen_obj = 0.0;
        for (int s = 0; s < cfg.inner_steps; ++s) {
            Eigen::MatrixXd xi = rng.gauss_matrix(cfg.batch, d);
            Eigen::MatrixXd Y = xi * floored_sqrt(factor.lambda).asDiagonal() *
                                factor.R.transpose();
            g = 0.5 * cloud.data.rowwise().squaredNorm() - f;
            frozen_argmin(cloud.data, g, Y, idx, vals);
            frozen_obj = f.mean() + (vals + 0.5 * Y.rowwise().squaredNorm()).mean();

            Eigen::MatrixXd residuals = Y;
            for (Eigen::Index l = 0; l < Y.rows(); ++l)
                residuals.row(l) -= cloud.data.row(idx(l));

            const double eta =
                cfg.eta_cov / std::sqrt(1.0 + static_cast<double>(t) / cfg.cov_decay);
            Eigen::MatrixXd GR = grad_R(residuals, xi, factor.lambda);
            Eigen::VectorXd Gl = grad_lambda(residuals, xi, factor.R, factor.lambda);
            factor.R = riemannian_step(factor.R, GR, eta);
            // The 1/sqrt(lambda) factor makes the eigenvalue gradient explode
            // near the boundary; cap the per-step move instead of the gradient.
            Eigen::VectorXd step =
                (eta * Gl).cwiseMax(-cfg.max_lambda_step).cwiseMin(cfg.max_lambda_step);
            factor.lambda = project_lambda(factor.lambda - step);
        }

        res.trajectory.push_back({t, asc.rw2, factor.lambda.sum(), frozen_obj});
    }

    Eigen::MatrixXd sigma = best_sigma.size() ? best_sigma : factor.sigma();
    res.sigma_star = 0.5 * (sigma + sigma.transpose());

    f = best_f;
    acfg.seed = mix_seed(cfg.seed, 0x66696e616cULL);
    acfg.eval_batch = cfg.final_eval_batch;
    AscentResult fin = dual_ascent(cloud, res.sigma_star, acfg, &f);
    res.p_star = fin.rw2;
    res.p_std_err = fin.std_err;

    // Cone angle via the side triple (||[mu]||, ||N(0, Sigma*)||, p*); the
    // cosine is clamped because p* carries Monte-Carlo noise.
    const double a = cloud.rw2_norm;
    const double b = std::sqrt(std::max(0.0, res.sigma_star.trace()));
    double cosv = (b > 0.0) ? (a * a + b * b - res.p_star * res.p_star) / (2.0 * a * b) : 0.0;
    res.theta_star = std::acos(std::clamp(cosv, -1.0, 1.0));
    res.rotation_angle = (d == 2) ? rotation_angle_2d(res.sigma_star)
                                  : std::numeric_limits<double>::quiet_NaN();
    return res;
}

double pca_separable_rw2(const SampleCloud& cloud) {
    Eigen::MatrixXd cov = moment_matching(cloud).second;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    Eigen::MatrixXd Z = cloud.data * es.eigenvectors();
    double total = 0.0;
    for (Eigen::Index k = 0; k < Z.cols(); ++k) {
        std::vector<double> coord(Z.col(k).data(), Z.col(k).data() + Z.rows());
        const double sigma_k = std::sqrt(std::max(0.0, es.eigenvalues()(k)));
        const double w2 = quantile_w2_1d(std::move(coord), Family::gaussian, sigma_k);
        total += w2 * w2;
    }
    return std::sqrt(total);
}

GridSearchResult counterexample_grid_search(const SampleCloud& cloud, int n_lambda, int n_theta,
                                            int m, int n_seeds, std::uint64_t seed) {
    if (cloud.d() != 2) throw input_error("counterexample_grid_search: need a 2D cloud");
    if (n_lambda < 1 || n_theta < 1 || n_seeds < 1)
        throw input_error("counterexample_grid_search: empty grid");

    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n_seeds));
    for (int s = 0; s < n_seeds; ++s) seeds[s] = mix_seed(seed, static_cast<std::uint64_t>(s));

    auto mean_w2sq = [&](const Eigen::MatrixXd& sigma) {
        double acc = 0.0;
        for (std::uint64_t sd : seeds) {
            const double v = mc_gaussian_rw2(cloud.data, sigma, m, sd);
            acc += v * v;
        }
        return acc / static_cast<double>(n_seeds);
    };

    GridSearchResult res;
    res.lambda_values.resize(n_lambda);
    res.theta_values.resize(n_theta);
    res.landscape.resize(n_lambda, n_theta);
    res.value_star = std::numeric_limits<double>::infinity();

    for (int i = 0; i < n_lambda; ++i)
        res.lambda_values(i) = (i + 0.5) / static_cast<double>(n_lambda);
    for (int j = 0; j < n_theta; ++j)
        res.theta_values(j) = j * M_PI / static_cast<double>(n_theta);

    for (int i = 0; i < n_lambda; ++i) {
        const double lam = res.lambda_values(i);
        for (int j = 0; j < n_theta; ++j) {
            const double th = res.theta_values(j);
            Eigen::Matrix2d rot;
            rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
            Eigen::Matrix2d sigma =
                rot * Eigen::Vector2d(lam, 1.0 - lam).asDiagonal() * rot.transpose();
            const double v = mean_w2sq(sigma);
            res.landscape(i, j) = v;
            if (v < res.value_star) {
                // Sigma(lam, th) = Sigma(1 - lam, th + pi/2); report the
                // major-axis convention (largest eigenvalue first).
                res.value_star = v;
                res.lambda_star = std::max(lam, 1.0 - lam);
                res.theta_star = rotation_angle_2d(sigma);
            }
        }
    }

    res.value_moment_match = mean_w2sq(moment_matching(cloud).second);
    return res;
}

} // namespace rw2
