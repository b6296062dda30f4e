#include "rw2/semidual.hpp"

#include "rw2/discrete_ot.hpp"
#include "rw2/errors.hpp"
#include "rw2/rng.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace rw2 {

namespace {

// Column vector of argmin indices for a batch: entry l minimizes
// g_i - (X Y^T)_{il} with g_i = 1/2 ||x_i||^2 - f_i. Ties go to the lowest
// index because Eigen's minCoeff scans in order.
void batch_argmin(const Eigen::MatrixXd& X, const Eigen::VectorXd& g, const Eigen::MatrixXd& Y,
                  Eigen::VectorXi& idx, Eigen::VectorXd& vals) {
    Eigen::MatrixXd S = (-(X * Y.transpose())).colwise() + g; // n x m
    const Eigen::Index m = Y.rows();
    idx.resize(m);
    vals.resize(m);
    for (Eigen::Index l = 0; l < m; ++l) {
        Eigen::Index imin = 0;
        vals(l) = S.col(l).minCoeff(&imin);
        idx(l) = static_cast<int>(imin);
    }
}

void check_target(const SampleCloud& cloud, const Eigen::MatrixXd& sigma) {
    if (cloud.n() < 1) throw input_error("dual_ascent: empty cloud");
    if (sigma.rows() != cloud.d() || sigma.cols() != cloud.d())
        throw input_error("dual_ascent: covariance dimension mismatch");
}

} // namespace

int nearest_atom(const SampleCloud& cloud, const Eigen::VectorXd& y, const Eigen::VectorXd& f) {
    if (y.size() != cloud.d()) throw input_error("nearest_atom: dimension mismatch");
    if (f.size() != cloud.n()) throw input_error("nearest_atom: potential length mismatch");
    Eigen::VectorXd s =
        0.5 * (cloud.data.rowwise() - y.transpose()).rowwise().squaredNorm() - f;
    Eigen::Index imin = 0;
    s.minCoeff(&imin);
    // minCoeff returns the first minimizer, but make the tie rule explicit.
    for (Eigen::Index i = 0; i < imin; ++i)
        if (s(i) == s(imin)) return static_cast<int>(i);
    return static_cast<int>(imin);
}

double dual_objective_mc(const SampleCloud& cloud, const Eigen::MatrixXd& sigma,
                         const Eigen::VectorXd& f, int m, std::uint64_t seed) {
    check_target(cloud, sigma);
    if (f.size() != cloud.n()) throw input_error("dual_objective_mc: potential length mismatch");
    if (m < 1) throw input_error("dual_objective_mc: need at least one draw");
    Eigen::MatrixXd root = psd_sqrt(sigma);
    Rng rng(seed);
    Eigen::MatrixXd Y = rng.gauss_matrix(m, cloud.d()) * root.transpose();
    Eigen::VectorXd g = 0.5 * cloud.data.rowwise().squaredNorm() - f;
    Eigen::VectorXd y2 = 0.5 * Y.rowwise().squaredNorm();
    Eigen::VectorXi idx;
    Eigen::VectorXd vals;
    batch_argmin(cloud.data, g, Y, idx, vals);
    return f.mean() + (vals + y2).mean();
}

AscentResult dual_ascent(const SampleCloud& cloud, const Eigen::MatrixXd& sigma,
                         const AscentConfig& cfg, const Eigen::VectorXd* warm_f) {
    check_target(cloud, sigma);
    if (cfg.batch < 1 || cfg.steps < 0) throw input_error("dual_ascent: bad batch or step count");
    const Eigen::Index n = cloud.n();

    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    if (warm_f) {
        if (warm_f->size() != n) throw input_error("dual_ascent: warm start length mismatch");
        f = *warm_f;
        f.array() -= f.mean();
    }

    Eigen::MatrixXd root = psd_sqrt(sigma);
    Rng rng(cfg.seed);
    const double inv_n = 1.0 / static_cast<double>(n);
    const double inv_m = 1.0 / static_cast<double>(cfg.batch);
    const double fcap = 1e6 * (1.0 + cloud.rw2_norm * cloud.rw2_norm + sigma.trace());

    Eigen::VectorXd grad(n), g(n);
    Eigen::VectorXi idx;
    Eigen::VectorXd vals;
    for (int k = 0; k < cfg.steps; ++k) {
        Eigen::MatrixXd Y = rng.gauss_matrix(cfg.batch, cloud.d()) * root.transpose();
        g = 0.5 * cloud.data.rowwise().squaredNorm() - f;
        batch_argmin(cloud.data, g, Y, idx, vals);
        grad.setConstant(inv_n);
        for (Eigen::Index l = 0; l < idx.size(); ++l) grad(idx(l)) -= inv_m;
        const double eta =
            cfg.eta0 / std::sqrt(1.0 + static_cast<double>(k) / cfg.step_decay);
        f += eta * grad;
        f.array() -= f.mean();
        if (!f.allFinite() || f.cwiseAbs().maxCoeff() > fcap)
            throw ascent_error("dual_ascent: potentials diverged");
        if (cfg.progress && cfg.progress_every > 0 && (k + 1) % cfg.progress_every == 0) {
            Eigen::VectorXd y2 = 0.5 * Y.rowwise().squaredNorm();
            (*cfg.progress) << "iter=" << (k + 1) << " L=" << f.mean() + (vals + y2).mean()
                            << '\n';
        }
    }

    // Held-out estimate with a per-draw variance for the standard error.
    const int me = cfg.eval_batch > 0 ? cfg.eval_batch : 10 * cfg.batch;
    Eigen::MatrixXd Y = rng.gauss_matrix(me, cloud.d()) * root.transpose();
    g = 0.5 * cloud.data.rowwise().squaredNorm() - f;
    batch_argmin(cloud.data, g, Y, idx, vals);
    Eigen::VectorXd terms = vals + 0.5 * Y.rowwise().squaredNorm();
    const double fbar = f.mean();
    const double lhat = fbar + terms.mean();
    double var = 0.0;
    if (me > 1)
        var = (terms.array() - terms.mean()).square().sum() / static_cast<double>(me - 1);

    AscentResult res;
    res.potential.f = f;
    res.potential.iteration = cfg.steps;
    res.potential.objective = lhat;
    res.objective = lhat;
    res.rw2 = std::sqrt(std::max(0.0, 2.0 * lhat));
    res.std_err = std::sqrt(var / static_cast<double>(me));
    return res;
}

AscentResult dual_ascent_discrete(const SampleCloud& cloud, const Eigen::MatrixXd& targets,
                                  int steps, double eta0) {
    if (cloud.n() < 1 || targets.rows() < 1) throw input_error("dual_ascent_discrete: empty input");
    if (targets.cols() != cloud.d())
        throw input_error("dual_ascent_discrete: dimension mismatch");
    const Eigen::Index n = cloud.n(), m = targets.rows();
    const double inv_n = 1.0 / static_cast<double>(n);
    const double inv_m = 1.0 / static_cast<double>(m);

    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd y2 = 0.5 * targets.rowwise().squaredNorm();
    Eigen::VectorXd best_f = f;
    double best_obj = -std::numeric_limits<double>::infinity();
    long best_iter = 0;

    Eigen::VectorXd grad(n), g(n);
    Eigen::VectorXi idx;
    Eigen::VectorXd vals;
    for (int k = 0; k <= steps; ++k) {
        g = 0.5 * cloud.data.rowwise().squaredNorm() - f;
        batch_argmin(cloud.data, g, targets, idx, vals);
        const double obj = f.mean() + (vals + y2).mean();
        if (obj > best_obj) {
            best_obj = obj;
            best_f = f;
            best_iter = k;
        }
        if (k == steps) break;
        grad.setConstant(inv_n);
        for (Eigen::Index l = 0; l < m; ++l) grad(idx(l)) -= inv_m;
        const double eta = eta0 / std::sqrt(1.0 + static_cast<double>(k) / 50.0);
        f += eta * grad;
        f.array() -= f.mean();
        if (!f.allFinite()) throw ascent_error("dual_ascent_discrete: potentials diverged");
    }

    AscentResult res;
    res.potential.f = best_f;
    res.potential.iteration = best_iter;
    res.potential.objective = best_obj;
    res.objective = best_obj;
    res.rw2 = std::sqrt(std::max(0.0, 2.0 * best_obj));
    res.std_err = 0.0;
    return res;
}

} // namespace rw2
