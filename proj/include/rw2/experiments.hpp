#pragma once

#include "rw2/manifold.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace rw2 {

/// Finite-sample study of the two-component 1D mixture 0.5 N(-m,1) + 0.5 N(m,1).
struct Gmm1dConfig {
    std::vector<double> m_values{1.0, 2.0, 3.0};
    std::vector<int> n_values{4, 16, 64, 256, 1024};
    int reps = 10;
    int overlay_n = 64;
    std::uint64_t seed = 7;
};

struct Gmm1dCell {
    double m = 0.0;
    int n = 0;
    std::vector<double> theta; // one entry per repetition
    std::vector<double> p;
    double theta_mean = 0.0, theta_var = 0.0;
    double p_mean = 0.0, p_var = 0.0;
};

struct Gmm1dReport {
    Gmm1dConfig config;
    std::vector<Gmm1dCell> cells; // m-major, then n order

    // Trend flags over the cell means.
    bool theta_nonincreasing_in_n = false;
    bool p_nonincreasing_in_n = false;
    bool theta_increasing_in_m = false; // at the largest n
    bool p_increasing_in_m = false;
    bool var_p_exceeds_var_theta = false; // at n = 16, every m

    // Density-overlay data at n = overlay_n (first repetition): the sample,
    // its moment-match scale, and the projection's optimal ray scale.
    struct Overlay {
        double m = 0.0;
        std::vector<double> sample;
        double sigma_mm = 0.0;
        double sigma_star = 0.0;
    };
    std::vector<Overlay> overlays;
};

Gmm1dReport gmm1d_experiment(const Gmm1dConfig& cfg);

/// Multi-center 2D mixture on an r x c grid of component means.
struct GmmGridConfig {
    std::vector<int> r_values{1, 2, 3};
    std::vector<int> c_values{1, 2, 3};
    double spacing = 4.0;
    int n = 2000;       // samples per trial
    int m_draws = 2000; // Gaussian draws for the exact-OT angle estimate
    int reps = 5;
    std::uint64_t seed = 7;
};

struct GmmGridCell {
    int r = 0, c = 0;
    std::vector<double> theta;
    double theta_mean = 0.0, theta_var = 0.0;
    Eigen::MatrixXd panel_sample; // first repetition, for plotting
};

struct GmmGridReport {
    GmmGridConfig config;
    std::vector<GmmGridCell> cells;
};

GmmGridReport gmm_grid_experiment(const GmmGridConfig& cfg);

/// The 3-point cloud (0,0), (4,0), (0,3), normalized to unit RW2 norm:
/// analytic moment matching, the brute-force landscape, and the manifold
/// optimizer, side by side.
struct CounterexampleConfig {
    int n_lambda = 50;
    int n_theta = 50;
    int m = 2000;
    int reps = 5;
    std::uint64_t seed = 7;
    NearestGaussianConfig ng;
};

struct CounterexampleReport {
    CounterexampleConfig config;
    Eigen::Matrix2d sigma_mm;
    Eigen::Vector2d spec_mm;  // eigenvalues, descending
    double rot_mm = 0.0;      // principal-axis angle of Sigma_mu
    GridSearchResult grid;
    NearestGaussianResult nearest;
    Eigen::Vector2d spec_star; // eigenvalues of Sigma*, descending
    double value_nearest = 0.0; // same MC estimator applied to Sigma*
    double gap = 0.0;           // grid.value_moment_match - grid.value_star
};

CounterexampleReport counterexample_experiment(const CounterexampleConfig& cfg);

/// The raw 3-point cloud before normalization.
Eigen::MatrixXd counterexample_points();

/// File emission: each writes report JSON plus CSV series (and an SVG) into
/// `dir` and returns the list of files written.
std::vector<std::string> write_gmm1d_report(const Gmm1dReport& report, const std::string& dir);
std::vector<std::string> write_gmm_grid_report(const GmmGridReport& report,
                                               const std::string& dir);
std::vector<std::string> write_counterexample_report(const CounterexampleReport& report,
                                                     const std::string& dir);

} // namespace rw2
