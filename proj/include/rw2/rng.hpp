#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace rw2 {

/// Derives a child seed from a master seed and a stream index (splitmix64
/// finalizer). Used everywhere a trial/cell needs its own reproducible stream.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream);

/// Seeded random source. Gaussian draws go through the inverse normal CDF so
/// the stream is fully determined by the mt19937_64 sequence, which the
/// standard pins down bit-for-bit.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform draw strictly inside (0, 1).
    double uniform01() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double gauss();

    /// n x d matrix of independent standard normal draws, filled row by row.
    Eigen::MatrixXd gauss_matrix(Eigen::Index n, Eigen::Index d);

    Eigen::VectorXd gauss_vector(Eigen::Index d);

private:
    std::mt19937_64 gen_;
};

} // namespace rw2
