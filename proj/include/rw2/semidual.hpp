#pragma once

#include "rw2/cloud.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>

namespace rw2 {

/// Kantorovich potentials attached to the empirical atoms, kept mean-centered.
struct DualPotential {
    Eigen::VectorXd f;
    long iteration = 0;
    double objective = 0.0; // running estimate of L(f, Sigma)
};

struct AscentConfig {
    int batch = 256;          // fresh Gaussian draws per step
    int steps = 20000;        // dual steps K1
    double eta0 = 0.5;        // initial stepsize
    double step_decay = 1000; // eta(k) = eta0 / sqrt(1 + k/step_decay)
    std::uint64_t seed = 0;
    int eval_batch = 0; // held-out evaluation draws; 0 means 10 * batch

    std::ostream* progress = nullptr; // line-delimited "iter=<k> L=<value>" records
    int progress_every = 0;
};

struct AscentResult {
    DualPotential potential;
    double rw2 = 0.0;       // sqrt(max(0, 2 * L_hat)) on the evaluation batch
    double objective = 0.0; // L_hat on the evaluation batch
    double std_err = 0.0;   // Monte-Carlo standard error of L_hat
};

/// Index of argmin_i (1/2 ||x_i - y||^2 - f_i); ties go to the lowest index.
int nearest_atom(const SampleCloud& cloud, const Eigen::VectorXd& y, const Eigen::VectorXd& f);

/// Unbiased Monte-Carlo estimate of the semi-discrete dual objective
/// L(f, Sigma) = (1/n) sum f_i + E[min_i (1/2 ||x_i - Y||^2 - f_i)].
double dual_objective_mc(const SampleCloud& cloud, const Eigen::MatrixXd& sigma,
                         const Eigen::VectorXd& f, int m, std::uint64_t seed);

/// Stochastic dual ascent for RW2(mu, N(0, Sigma)) with per-step centering of
/// f and a fresh held-out batch for the final estimate. Warm start optional.
AscentResult dual_ascent(const SampleCloud& cloud, const Eigen::MatrixXd& sigma,
                         const AscentConfig& cfg, const Eigen::VectorXd* warm_f = nullptr);

/// Deterministic full-expectation variant against a fixed discrete target
/// (equal weights on the rows of `targets`): every step uses the exact
/// expectation over the target atoms. Returns the best iterate found.
AscentResult dual_ascent_discrete(const SampleCloud& cloud, const Eigen::MatrixXd& targets,
                                  int steps, double eta0);

} // namespace rw2
