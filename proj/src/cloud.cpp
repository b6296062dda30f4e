#include "rw2/cloud.hpp"

#include "rw2/errors.hpp"

#include <cmath>

namespace rw2 {

SampleCloud center_and_norm(const Eigen::MatrixXd& samples) {
    if (samples.rows() < 1 || samples.cols() < 1)
        throw input_error("center_and_norm: need at least one sample and one dimension");
    if (!samples.allFinite()) throw input_error("center_and_norm: non-finite entries");

    SampleCloud cloud;
    cloud.mean = samples.colwise().mean();
    cloud.data = samples.rowwise() - cloud.mean.transpose();
    cloud.rw2_norm = std::sqrt(cloud.data.squaredNorm() / static_cast<double>(samples.rows()));
    return cloud;
}

SampleCloud dilate(const SampleCloud& cloud, double s) {
    if (!(s > 0.0)) throw input_error("dilate: scale must be positive");
    SampleCloud out;
    out.data = s * cloud.data;
    out.mean = cloud.mean;
    out.rw2_norm = s * cloud.rw2_norm;
    return out;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> moment_matching(const SampleCloud& cloud) {
    const double n = static_cast<double>(cloud.n());
    Eigen::MatrixXd cov = (cloud.data.transpose() * cloud.data) / n;
    cov = 0.5 * (cov + cov.transpose().eval()); // exact symmetry
    return {cloud.mean, cov};
}

} // namespace rw2
