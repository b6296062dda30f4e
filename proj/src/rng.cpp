#include "rw2/rng.hpp"

#include "rw2/normal.hpp"

namespace rw2 {

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::gauss() { return norm_ppf(uniform01()); }

Eigen::MatrixXd Rng::gauss_matrix(Eigen::Index n, Eigen::Index d) {
    Eigen::MatrixXd m(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = gauss();
    return m;
}

Eigen::VectorXd Rng::gauss_vector(Eigen::Index d) {
    Eigen::VectorXd v(d);
    for (Eigen::Index j = 0; j < d; ++j) v(j) = gauss();
    return v;
}

} // namespace rw2
