#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rw2/cloud.hpp"
#include "rw2/discrete_ot.hpp"
#include "rw2/errors.hpp"
#include "rw2/onedim.hpp"
#include "rw2/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace rw2;

namespace {

Eigen::VectorXd uniform_w(Eigen::Index n) {
    return Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
}

Eigen::VectorXd random_simplex(Rng& rng, Eigen::Index n) {
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = 0.05 + rng.uniform01();
    w /= w.sum();
    // Compensate rounding so the validator's 1e-12 sum check passes.
    w(n - 1) += 1.0 - w.sum();
    return w;
}

double plan_cost(const TransportPlan& plan, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    double acc = 0.0;
    for (const auto& e : plan.pairs)
        acc += e.mass * (X.row(e.src) - Y.row(e.dst)).squaredNorm();
    return acc;
}

void check_marginals(const TransportPlan& plan, const Eigen::VectorXd& a,
                     const Eigen::VectorXd& b) {
    Eigen::VectorXd ra = Eigen::VectorXd::Zero(a.size());
    Eigen::VectorXd rb = Eigen::VectorXd::Zero(b.size());
    for (const auto& e : plan.pairs) {
        REQUIRE(e.mass > 0.0);
        ra(e.src) += e.mass;
        rb(e.dst) += e.mass;
    }
    CHECK((ra - a).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((rb - b).cwiseAbs().maxCoeff() <= 1e-10);
}

double brute_force_uniform(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    const int n = static_cast<int>(X.rows());
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += (X.row(i) - Y.row(perm[i])).squaredNorm();
        best = std::min(best, acc / n);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace

TEST_CASE("exact_ot_cost trivial examples") {
    Eigen::MatrixXd X(3, 2);
    X << 0, 0, 1, 2, -1, 0.5;
    auto [c0, p0] = exact_ot_cost(X, uniform_w(3), X, uniform_w(3));
    CHECK(c0 == doctest::Approx(0.0).epsilon(1e-14));

    Eigen::MatrixXd a(1, 2), b(1, 2);
    a << 0, 0;
    b << 3, 4;
    auto [c1, p1] = exact_ot_cost(a, uniform_w(1), b, uniform_w(1));
    CHECK(c1 == doctest::Approx(25.0).epsilon(1e-14));
    REQUIRE(p1.pairs.size() == 1);
    CHECK(p1.pairs[0].mass == doctest::Approx(1.0));

    Eigen::MatrixXd x(2, 1), y(2, 1);
    x << 0, 1;
    y << 0.5, 2;
    auto [c2, p2] = exact_ot_cost(x, uniform_w(2), y, uniform_w(2));
    CHECK(c2 == doctest::Approx(0.625).epsilon(1e-14));
    // Monotone coupling: 0 -> 0.5, 1 -> 2.
    for (const auto& e : p2.pairs) CHECK(e.src == e.dst);
}

TEST_CASE("plan marginals and cost consistency") {
    Rng rng(211);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform01() * 8);
        const int m = 2 + static_cast<int>(rng.uniform01() * 8);
        const int d = 1 + static_cast<int>(rng.uniform01() * 3);
        Eigen::MatrixXd X = rng.gauss_matrix(n, d);
        Eigen::MatrixXd Y = rng.gauss_matrix(m, d);
        const bool square_uniform = trial % 2 == 0 && n == m;
        Eigen::VectorXd a = square_uniform ? uniform_w(n) : random_simplex(rng, n);
        Eigen::VectorXd b = square_uniform ? uniform_w(m) : random_simplex(rng, m);
        auto [cost, plan] = exact_ot_cost(X, a, Y, b);
        check_marginals(plan, a, b);
        CHECK(cost == doctest::Approx(plan_cost(plan, X, Y)).epsilon(1e-10));
        CHECK(cost == plan.cost);

        auto [cost_rev, plan_rev] = exact_ot_cost(Y, b, X, a);
        CHECK(cost_rev == doctest::Approx(cost).epsilon(1e-10));
    }
}

TEST_CASE("1D agreement with the quantile formula") {
    Rng rng(223);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform01() * 12);
        const int m = trial % 3 == 0 ? n : 2 + static_cast<int>(rng.uniform01() * 12);
        Eigen::MatrixXd X = rng.gauss_matrix(n, 1);
        Eigen::MatrixXd Y = 0.7 * rng.gauss_matrix(m, 1);
        Y.array() += 0.3;
        auto [cost, plan] = exact_ot_cost(X, uniform_w(n), Y, uniform_w(m));
        std::vector<double> xs(X.data(), X.data() + n), ys(Y.data(), Y.data() + m);
        const double w = quantile_w2_1d(xs, ys);
        CHECK(cost == doctest::Approx(w * w).epsilon(1e-10));
    }
}

TEST_CASE("optimality certificates") {
    Rng rng(227);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 4 + static_cast<int>(rng.uniform01() * 4);
        const int m = 4 + static_cast<int>(rng.uniform01() * 4);
        Eigen::MatrixXd X = rng.gauss_matrix(n, 2);
        Eigen::MatrixXd Y = rng.gauss_matrix(m, 2);
        Eigen::VectorXd a = random_simplex(rng, n), b = random_simplex(rng, m);
        auto [cost, plan] = exact_ot_cost(X, a, Y, b);
        // Never above the independent (product) coupling.
        Eigen::MatrixXd C = pairwise_sq_dists(X, Y);
        CHECK(cost <= a.dot(C * b) + 1e-10);
    }
    // Never above any permutation coupling in the uniform square case.
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 6;
        Eigen::MatrixXd X = rng.gauss_matrix(n, 3);
        Eigen::MatrixXd Y = rng.gauss_matrix(n, 3);
        auto [cost, plan] = exact_ot_cost(X, uniform_w(n), Y, uniform_w(n));
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (int rep = 0; rep < 20; ++rep) {
            for (int i = n - 1; i > 0; --i)
                std::swap(perm[static_cast<std::size_t>(i)],
                          perm[static_cast<std::size_t>(rng.uniform01() * (i + 1))]);
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += (X.row(i) - Y.row(perm[i])).squaredNorm() / n;
            CHECK(cost <= acc + 1e-10);
        }
    }
}

TEST_CASE("assignment path against brute force") {
    Rng rng(229);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform01() * 4);
        Eigen::MatrixXd X = rng.gauss_matrix(n, 2);
        Eigen::MatrixXd Y = rng.gauss_matrix(n, 2);
        auto [cost, plan] = exact_ot_cost(X, uniform_w(n), Y, uniform_w(n));
        CHECK(cost == doctest::Approx(brute_force_uniform(X, Y)).epsilon(1e-10));
    }
}

TEST_CASE("assignment and network simplex agree") {
    Rng rng(233);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform01() * 20);
        Eigen::MatrixXd X = rng.gauss_matrix(n, 3);
        Eigen::MatrixXd Y = rng.gauss_matrix(n, 3);
        auto [c_jv, p_jv] = exact_ot_cost(X, uniform_w(n), Y, uniform_w(n));
        // Nudge a weight pair so the uniform fast path is skipped.
        Eigen::VectorXd a = uniform_w(n);
        a(0) += 1e-13;
        a(n - 1) -= 1e-13;
        auto [c_ns, p_ns] = exact_ot_cost(X, a, Y, uniform_w(n));
        CHECK(c_ns == doctest::Approx(c_jv).epsilon(1e-9));
    }
}

TEST_CASE("rw2_discrete") {
    Eigen::MatrixXd X(2, 1), Y(2, 1);
    X << -1, 1;
    Y << -2, 2;
    CHECK(rw2_discrete(X, Y) == doctest::Approx(1.0).epsilon(1e-12));
    // Pure translation vanishes.
    Rng rng(239);
    Eigen::MatrixXd Z = rng.gauss_matrix(30, 2);
    Eigen::MatrixXd Zs = Z;
    Zs.col(0).array() += 5.0;
    Zs.col(1).array() -= 2.5;
    CHECK(rw2_discrete(Z, Zs) == doctest::Approx(0.0).epsilon(1e-7));
    // Structured rotated clouds terminate and return a sane value.
    Eigen::MatrixXd base(256, 2);
    for (int i = 0; i < 256; ++i) {
        base(i, 0) = rng.gauss();
        base(i, 1) = 0.0;
    }
    Eigen::Matrix2d rot;
    rot << std::cos(0.5), -std::sin(0.5), std::sin(0.5), std::cos(0.5);
    const double v = rw2_discrete(base, base * rot.transpose());
    CHECK(v > 0.0);
    CHECK(v < 2.0);
}

TEST_CASE("mc_gaussian_rw2 with a point-mass target") {
    Rng rng(241);
    Eigen::MatrixXd X = rng.gauss_matrix(40, 3);
    SampleCloud cloud = center_and_norm(X);
    // Sigma = 0 collapses every draw to the origin: the distance is the norm.
    const double v = mc_gaussian_rw2(X, Eigen::MatrixXd::Zero(3, 3), 17, 9);
    CHECK(v == doctest::Approx(cloud.rw2_norm).epsilon(1e-12));
}

TEST_CASE("mc_gaussian_rw2 against the moment-matched 3-point value") {
    Eigen::MatrixXd pts(3, 2);
    pts << 0, 0, 4, 0, 0, 3;
    SampleCloud cloud = center_and_norm(pts);
    SampleCloud unit = dilate(cloud, 1.0 / cloud.rw2_norm);
    Eigen::MatrixXd sigma(2, 2);
    sigma << 32.0 / 50.0, -12.0 / 50.0, -12.0 / 50.0, 18.0 / 50.0;
    double acc = 0.0;
    const int reps = 3;
    for (int s = 1; s <= reps; ++s) {
        const double v = mc_gaussian_rw2(unit.data, sigma, 2000, static_cast<std::uint64_t>(s));
        acc += v * v / reps;
    }
    CHECK(std::abs(acc - 0.4865) <= 0.02);
}

TEST_CASE("mc_gaussian_rw2 spread shrinks with the draw count") {
    Eigen::MatrixXd pts(3, 2);
    pts << 0, 0, 4, 0, 0, 3;
    SampleCloud cloud = center_and_norm(pts);
    SampleCloud unit = dilate(cloud, 1.0 / cloud.rw2_norm);
    Eigen::MatrixXd sigma(2, 2);
    sigma << 32.0 / 50.0, -12.0 / 50.0, -12.0 / 50.0, 18.0 / 50.0;
    auto spread = [&](int m) {
        double lo = 1e300, hi = -1e300;
        for (int s = 0; s < 8; ++s) {
            const double v = mc_gaussian_rw2(unit.data, sigma, m, 100 + s);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return hi - lo;
    };
    CHECK(spread(250) > spread(4000));
}

TEST_CASE("psd_sqrt") {
    CHECK((psd_sqrt(Eigen::MatrixXd::Identity(3, 3)) - Eigen::MatrixXd::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() <= 1e-14);
    Rng rng(251);
    Eigen::MatrixXd M = rng.gauss_matrix(4, 4);
    Eigen::MatrixXd A = M.transpose() * M;
    Eigen::MatrixXd R = psd_sqrt(A);
    CHECK((R * R - A).cwiseAbs().maxCoeff() <= 1e-10 * A.cwiseAbs().maxCoeff());
    CHECK((R - R.transpose()).cwiseAbs().maxCoeff() <= 1e-12);

    CHECK_THROWS_AS(psd_sqrt(Eigen::MatrixXd::Zero(2, 3)), input_error);
    Eigen::MatrixXd asym(2, 2);
    asym << 1, 0.5, -0.5, 1;
    CHECK_THROWS_AS(psd_sqrt(asym), input_error);
    Eigen::MatrixXd neg(2, 2);
    neg << 1, 0, 0, -0.5;
    CHECK_THROWS_AS(psd_sqrt(neg), input_error);
}

TEST_CASE("input validation and the size cap") {
    Eigen::MatrixXd X(2, 1), Y(2, 2);
    X << 0, 1;
    Y << 0, 0, 1, 1;
    CHECK_THROWS_AS(exact_ot_cost(X, uniform_w(2), Y, uniform_w(2)), input_error);

    Eigen::MatrixXd Z(2, 1);
    Z << 0.5, 2;
    Eigen::VectorXd bad(2);
    bad << 0.7, 0.7;
    CHECK_THROWS_AS(exact_ot_cost(X, bad, Z, uniform_w(2)), input_error);
    bad << -0.1, 1.1;
    CHECK_THROWS_AS(exact_ot_cost(X, bad, Z, uniform_w(2)), input_error);
    CHECK_THROWS_AS(exact_ot_cost(X, uniform_w(3), Z, uniform_w(2)), input_error);
    Eigen::MatrixXd nf(2, 1);
    nf << 0.0, std::nan("");
    CHECK_THROWS_AS(exact_ot_cost(nf, uniform_w(2), Z, uniform_w(2)), input_error);

    OtOptions tiny;
    tiny.max_cost_entries = 3;
    CHECK_THROWS_AS(exact_ot_cost(X, uniform_w(2), Z, uniform_w(2), tiny), size_error);
}
