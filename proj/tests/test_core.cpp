#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rw2/cloud.hpp"
#include "rw2/cone.hpp"
#include "rw2/discrete_ot.hpp"
#include "rw2/errors.hpp"
#include "rw2/onedim.hpp"
#include "rw2/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace rw2;

TEST_CASE("center_and_norm on the 3-point cloud") {
    Eigen::MatrixXd pts(3, 2);
    pts << 0, 0, 4, 0, 0, 3;
    SampleCloud cloud = center_and_norm(pts);
    CHECK(cloud.mean(0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(cloud.mean(1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cloud.data(0, 0) == doctest::Approx(-4.0 / 3.0));
    CHECK(cloud.data(0, 1) == doctest::Approx(-1.0));
    CHECK(cloud.data(1, 0) == doctest::Approx(8.0 / 3.0));
    CHECK(cloud.data(2, 1) == doctest::Approx(2.0));
    CHECK(cloud.rw2_norm * cloud.rw2_norm == doctest::Approx(50.0 / 9.0).epsilon(1e-14));
    CHECK(pts(0, 0) == 0.0); // input untouched
}

TEST_CASE("center_and_norm degenerate and tiny inputs") {
    Eigen::MatrixXd one(1, 1);
    one << 5;
    SampleCloud c1 = center_and_norm(one);
    CHECK(c1.mean(0) == 5.0);
    CHECK(c1.data(0, 0) == 0.0);
    CHECK(c1.rw2_norm == 0.0);

    Eigen::MatrixXd pair(2, 1);
    pair << -1, 1;
    SampleCloud c2 = center_and_norm(pair);
    CHECK(c2.mean(0) == 0.0);
    CHECK(c2.rw2_norm == doctest::Approx(1.0).epsilon(1e-15));

    Eigen::MatrixXd bad(1, 1);
    bad << std::nan("");
    CHECK_THROWS_AS(center_and_norm(bad), input_error);
}

TEST_CASE("centering and norm invariants on random clouds") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform01() * 40);
        const int d = 1 + static_cast<int>(rng.uniform01() * 5);
        Eigen::MatrixXd x = 3.0 * rng.gauss_matrix(n, d);
        x.array() += 7.0;
        SampleCloud cloud = center_and_norm(x);
        const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
        CHECK(cloud.data.colwise().mean().cwiseAbs().maxCoeff() <= 1e-12 * scale);
        auto [mean, cov] = moment_matching(cloud);
        CHECK(cloud.rw2_norm * cloud.rw2_norm ==
              doctest::Approx(cov.trace()).epsilon(1e-12));
        CHECK((cov - cov.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("moment_matching examples") {
    Eigen::MatrixXd pts(3, 2);
    pts << 0, 0, 4, 0, 0, 3;
    SampleCloud raw = center_and_norm(pts);
    SampleCloud unit = dilate(raw, 1.0 / raw.rw2_norm);
    auto [mean, cov] = moment_matching(unit);
    CHECK(cov(0, 0) == doctest::Approx(32.0 / 50.0).epsilon(1e-12));
    CHECK(cov(0, 1) == doctest::Approx(-12.0 / 50.0).epsilon(1e-12));
    CHECK(cov(1, 0) == doctest::Approx(-12.0 / 50.0).epsilon(1e-12));
    CHECK(cov(1, 1) == doctest::Approx(18.0 / 50.0).epsilon(1e-12));

    Eigen::MatrixXd one(1, 3);
    one << 1, 2, 3;
    auto [m1, c1] = moment_matching(center_and_norm(one));
    CHECK(c1.cwiseAbs().maxCoeff() == 0.0);

    Eigen::MatrixXd pair(2, 1);
    pair << -1, 1;
    auto [m2, c2] = moment_matching(center_and_norm(pair));
    CHECK(c2(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("w2_decompose") {
    Eigen::VectorXd gap(2);
    gap << 3, 4;
    CHECK(w2_decompose(gap, 0.0) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(w2_decompose(Eigen::VectorXd::Zero(3), 0.7) == doctest::Approx(0.7).epsilon(1e-15));
    Eigen::VectorXd e1(2);
    e1 << 1, 0;
    CHECK(w2_decompose(e1, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(w2_decompose(e1, -0.1), input_error);
}

TEST_CASE("angle_from_sides examples and errors") {
    CHECK(angle_from_sides({1, 1, 1}) == doctest::Approx(M_PI / 3).epsilon(1e-14));
    CHECK(angle_from_sides({1, 1, 0}) == doctest::Approx(0.0));
    CHECK(angle_from_sides({1, 1, 2}) == doctest::Approx(M_PI).epsilon(1e-14));
    CHECK_THROWS_AS(angle_from_sides({0, 1, 1}), degenerate_ray_error);
    CHECK_THROWS_AS(angle_from_sides({1, 0, 1}), degenerate_ray_error);
    CHECK_THROWS_AS(angle_from_sides({1, 1, 2.1}), geometry_error);
    CHECK_THROWS_AS(angle_from_sides({1, 3, 1}), geometry_error);
    // Violation within tolerance clamps instead of throwing.
    CHECK(angle_from_sides({1, 1, 2 + 1e-12}) == doctest::Approx(M_PI));
}

TEST_CASE("angle scale invariance") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = 0.1 + rng.uniform01();
        const double b = 0.1 + rng.uniform01();
        const double c = std::abs(a - b) + rng.uniform01() * (a + b - std::abs(a - b));
        const double base = angle_from_sides({a, b, c});
        for (double s : {0.25, 3.0, 1e4}) {
            CHECK(angle_from_sides({s * a, s * b, s * c}) ==
                  doctest::Approx(base).epsilon(1e-12));
        }
    }
}

TEST_CASE("projection_distance and ray_distance") {
    CHECK(projection_distance(1.0, M_PI / 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(projection_distance(2.0, 0.0) == doctest::Approx(0.0));
    CHECK(projection_distance(1.0, 2 * M_PI / 3) ==
          doctest::Approx(std::sin(2 * M_PI / 3)).epsilon(1e-14));
    CHECK(ray_distance(1.0, 2 * M_PI / 3) == doctest::Approx(1.0));
    CHECK(ray_distance(1.0, M_PI / 4) == doctest::Approx(std::sin(M_PI / 4)).epsilon(1e-14));
}

TEST_CASE("inner_product") {
    CHECK(inner_product(1, 1, 0) == doctest::Approx(1.0));
    CHECK(inner_product(1, 1, M_PI / 2) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(inner_product(2, 3, M_PI / 3) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("filling_cone_distance closed cases") {
    for (double theta : {0.3, 1.0, 2.0}) {
        ConeCoefficients coef{1.0, std::cos(theta), 1.0};
        CHECK(filling_cone_distance(coef, {1, 0}, {0, 1}) ==
              doctest::Approx(std::sqrt(2 - 2 * std::cos(theta))).epsilon(1e-14));
        CHECK(filling_cone_distance(coef, {0.4, 0.7}, {0.4, 0.7}) == doctest::Approx(0.0));
    }
    CHECK(filling_cone_distance({1, 0, 1}, {2, 0}, {0, 2}) ==
          doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("filling-cone flatness against exact 1D quantile W2") {
    // mu = sample X, T = sorted-order monotone map onto a second sample; the
    // pushforwards a x + b T(x) form a flat 2D sheet.
    Rng rng(23);
    const int n = 64;
    std::vector<double> x(n), t(n);
    for (int i = 0; i < n; ++i) {
        x[i] = rng.gauss();
        t[i] = 2.0 * rng.uniform01() - 0.3;
    }
    std::sort(x.begin(), x.end());
    std::sort(t.begin(), t.end());
    ConeCoefficients coef{0, 0, 0};
    for (int i = 0; i < n; ++i) {
        coef.A += x[i] * x[i] / n;
        coef.B += x[i] * t[i] / n;
        coef.C += t[i] * t[i] / n;
    }
    for (double a1 : {0.2, 0.8, 1.7}) {
        for (double b1 : {0.0, 0.6, 1.1}) {
            for (double a2 : {0.5, 1.4}) {
                for (double b2 : {0.3, 0.9}) {
                    std::vector<double> u(n), v(n);
                    for (int i = 0; i < n; ++i) {
                        u[i] = a1 * x[i] + b1 * t[i];
                        v[i] = a2 * x[i] + b2 * t[i];
                    }
                    const double exact = quantile_w2_1d(u, v);
                    const double form = filling_cone_distance(coef, {a1, b1}, {a2, b2});
                    CHECK(form == doctest::Approx(exact).epsilon(1e-8));
                }
            }
        }
    }
}

TEST_CASE("rotation-angle recovery through the exact OT oracle") {
    Rng rng(31);
    const int n = 512;
    Eigen::MatrixXd base(n, 2);
    for (int i = 0; i < n; ++i) {
        base(i, 0) = rng.gauss();
        base(i, 1) = 0.0;
    }
    for (double theta0 : {0.4, M_PI / 3, 1.3}) {
        Eigen::Matrix2d rot;
        rot << std::cos(theta0), -std::sin(theta0), std::sin(theta0), std::cos(theta0);
        Eigen::MatrixXd turned = base * rot.transpose();
        SampleCloud ca = center_and_norm(base);
        SampleCloud cb = center_and_norm(turned);
        const double c = rw2_discrete(base, turned);
        const double angle = angle_from_sides({ca.rw2_norm, cb.rw2_norm, c});
        CHECK(angle == doctest::Approx(theta0).epsilon(2e-2));
    }
}

TEST_CASE("dilation and translation invariance of the angle") {
    Rng rng(47);
    const int n = 128;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.gauss() + 0.4 * rng.uniform01();
    const double base_theta = gaussian_projection(x).theta;
    for (double s : {0.5, 2.0, 17.0}) {
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) y[i] = s * x[i] + 3.25;
        CHECK(gaussian_projection(y).theta == doctest::Approx(base_theta).epsilon(1e-10));
    }
}

TEST_CASE("dilate scales the norm linearly") {
    Eigen::MatrixXd pts(3, 2);
    pts << 0, 0, 4, 0, 0, 3;
    SampleCloud cloud = center_and_norm(pts);
    SampleCloud big = dilate(cloud, 2.5);
    CHECK(big.rw2_norm == doctest::Approx(2.5 * cloud.rw2_norm).epsilon(1e-14));
    CHECK_THROWS_AS(dilate(cloud, 0.0), input_error);
    CHECK_THROWS_AS(dilate(cloud, -1.0), input_error);
}
