#pragma once

#include <Eigen/Core>

#include <utility>

namespace rw2 {

/// An empirical measure: centered samples (one per row), the removed mean,
/// and the RW2 norm sqrt((1/n) sum_i ||x_i - mean||^2).
struct SampleCloud {
    Eigen::MatrixXd data;   // centered, n x d
    Eigen::VectorXd mean;   // length d
    double rw2_norm = 0.0;

    Eigen::Index n() const { return data.rows(); }
    Eigen::Index d() const { return data.cols(); }
};

/// Centers the samples and records mean and RW2 norm. The input is copied,
/// never modified. Throws input_error on empty or non-finite input.
SampleCloud center_and_norm(const Eigen::MatrixXd& samples);

/// Rescales the centered data by s > 0 (dilation along the ray).
SampleCloud dilate(const SampleCloud& cloud, double s);

/// Empirical mean and (1/n)-normalized covariance. The 1/n convention keeps
/// rw2_norm^2 == trace(cov) exactly.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> moment_matching(const SampleCloud& cloud);

} // namespace rw2
