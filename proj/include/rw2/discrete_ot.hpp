#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <utility>
#include <vector>

namespace rw2 {

/// Sparse coupling returned by the exact solver; `cost` is the total squared
/// transport cost sum mass * ||x - y||^2.
struct TransportPlan {
    struct Entry {
        int src;
        int dst;
        double mass;
    };
    std::vector<Entry> pairs;
    double cost = 0.0;
};

struct OtOptions {
    std::size_t max_cost_entries = 4000000; // n*m cap of the dense solver
};

/// Exact discrete optimal transport with squared Euclidean cost. Weights must
/// be nonnegative and sum to 1 on each side. Equal weights with n == m route
/// through the assignment fast path; everything else through network simplex.
std::pair<double, TransportPlan> exact_ot_cost(const Eigen::MatrixXd& X,
                                               const Eigen::VectorXd& a,
                                               const Eigen::MatrixXd& Y,
                                               const Eigen::VectorXd& b,
                                               const OtOptions& opts = {});

/// Translation-invariant W2 between two equal-weight clouds: centers both and
/// takes the root of the exact transport cost.
double rw2_discrete(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                    const OtOptions& opts = {});

/// Monte-Carlo RW2 from a cloud to N(0, Sigma): draws m seeded Gaussian
/// points, centers the draw, and runs the exact solver against it.
double mc_gaussian_rw2(const Eigen::MatrixXd& X, const Eigen::MatrixXd& sigma, int m,
                       std::uint64_t seed, const OtOptions& opts = {});

/// Dense squared-distance matrix between row sets, clamped at 0.
Eigen::MatrixXd pairwise_sq_dists(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

/// Symmetric PSD square root with eigenvalue floor 0; throws input_error if an
/// eigenvalue is negative beyond tolerance.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& sigma);

} // namespace rw2
