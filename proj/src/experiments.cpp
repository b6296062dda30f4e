#include "rw2/experiments.hpp"

#include "rw2/cloud.hpp"
#include "rw2/discrete_ot.hpp"
#include "rw2/errors.hpp"
#include "rw2/normal.hpp"
#include "rw2/onedim.hpp"
#include "rw2/rng.hpp"
#include "rw2/svg.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rw2 {

namespace {

using nlohmann::json;

double sample_mean(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

double sample_var(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = sample_mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return acc / static_cast<double>(v.size() - 1);
}

std::vector<double> draw_mixture_1d(Rng& rng, double m, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double center = rng.uniform01() < 0.5 ? -m : m;
        out[static_cast<std::size_t>(i)] = center + rng.gauss();
    }
    return out;
}

Eigen::Vector2d descending_eigenvalues(const Eigen::Matrix2d& s) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(s);
    return Eigen::Vector2d(es.eigenvalues()(1), es.eigenvalues()(0));
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw input_error(path + ": cannot open for writing");
    out << body;
    if (!out) throw input_error(path + ": write failed");
}

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

} // namespace

Gmm1dReport gmm1d_experiment(const Gmm1dConfig& cfg) {
    if (cfg.reps < 1 || cfg.m_values.empty() || cfg.n_values.empty())
        throw input_error("gmm1d_experiment: empty configuration");
    Gmm1dReport report;
    report.config = cfg;

    const std::size_t nn = cfg.n_values.size();
    std::uint64_t trial = 0;
    for (std::size_t mi = 0; mi < cfg.m_values.size(); ++mi) {
        for (std::size_t ni = 0; ni < nn; ++ni) {
            Gmm1dCell cell;
            cell.m = cfg.m_values[mi];
            cell.n = cfg.n_values[ni];
            for (int rep = 0; rep < cfg.reps; ++rep, ++trial) {
                Rng rng(mix_seed(cfg.seed, trial));
                auto sample = draw_mixture_1d(rng, cell.m, cell.n);
                auto proj = gaussian_projection(sample);
                cell.theta.push_back(proj.theta);
                cell.p.push_back(proj.p);
                if (cell.n == cfg.overlay_n && rep == 0) {
                    Gmm1dReport::Overlay ov;
                    ov.m = cell.m;
                    ov.sample = sample;
                    ov.sigma_mm = proj.sigma_mu;
                    ov.sigma_star = proj.sigma_star;
                    report.overlays.push_back(std::move(ov));
                }
            }
            cell.theta_mean = sample_mean(cell.theta);
            cell.theta_var = sample_var(cell.theta);
            cell.p_mean = sample_mean(cell.p);
            cell.p_var = sample_var(cell.p);
            report.cells.push_back(std::move(cell));
        }
    }

    auto cell_at = [&](std::size_t mi, std::size_t ni) -> const Gmm1dCell& {
        return report.cells[mi * nn + ni];
    };

    report.theta_nonincreasing_in_n = true;
    report.p_nonincreasing_in_n = true;
    for (std::size_t mi = 0; mi < cfg.m_values.size(); ++mi) {
        for (std::size_t ni = 0; ni + 1 < nn; ++ni) {
            if (cell_at(mi, ni + 1).theta_mean > cell_at(mi, ni).theta_mean)
                report.theta_nonincreasing_in_n = false;
            if (cell_at(mi, ni + 1).p_mean > cell_at(mi, ni).p_mean)
                report.p_nonincreasing_in_n = false;
        }
    }

    report.theta_increasing_in_m = true;
    report.p_increasing_in_m = true;
    for (std::size_t mi = 0; mi + 1 < cfg.m_values.size(); ++mi) {
        if (cell_at(mi + 1, nn - 1).theta_mean <= cell_at(mi, nn - 1).theta_mean)
            report.theta_increasing_in_m = false;
        if (cell_at(mi + 1, nn - 1).p_mean <= cell_at(mi, nn - 1).p_mean)
            report.p_increasing_in_m = false;
    }

    std::size_t small_ni = 0;
    for (std::size_t ni = 0; ni < nn; ++ni)
        if (cfg.n_values[ni] == 16) small_ni = ni;
    report.var_p_exceeds_var_theta = true;
    for (std::size_t mi = 0; mi < cfg.m_values.size(); ++mi)
        if (cell_at(mi, small_ni).p_var <= cell_at(mi, small_ni).theta_var)
            report.var_p_exceeds_var_theta = false;

    return report;
}

GmmGridReport gmm_grid_experiment(const GmmGridConfig& cfg) {
    if (cfg.reps < 1 || cfg.n < 2) throw input_error("gmm_grid_experiment: bad configuration");
    GmmGridReport report;
    report.config = cfg;

    std::uint64_t trial = 0;
    for (int r : cfg.r_values) {
        for (int c : cfg.c_values) {
            GmmGridCell cell;
            cell.r = r;
            cell.c = c;
            const int comps = r * c;
            for (int rep = 0; rep < cfg.reps; ++rep, ++trial) {
                Rng rng(mix_seed(cfg.seed, trial));
                Eigen::MatrixXd sample(cfg.n, 2);
                for (int i = 0; i < cfg.n; ++i) {
                    int k = static_cast<int>(rng.uniform01() * comps);
                    if (k >= comps) k = comps - 1;
                    const int gi = k / c, gj = k % c;
                    const double cx = (gi - 0.5 * (r - 1)) * cfg.spacing;
                    const double cy = (gj - 0.5 * (c - 1)) * cfg.spacing;
                    sample(i, 0) = cx + rng.gauss();
                    sample(i, 1) = cy + rng.gauss();
                }
                SampleCloud cloud = center_and_norm(sample);
                Eigen::MatrixXd cov = moment_matching(cloud).second;
                const double dist =
                    mc_gaussian_rw2(cloud.data, cov, cfg.m_draws, mix_seed(cfg.seed, trial + 1000003));
                // Moment matching puts both sides at the same distance from the
                // apex, so the law of cosines collapses to 1 - c^2 / (2 a^2).
                const double a2 = cloud.rw2_norm * cloud.rw2_norm;
                const double cosv = std::clamp(1.0 - dist * dist / (2.0 * a2), -1.0, 1.0);
                cell.theta.push_back(std::acos(cosv));
                if (rep == 0) cell.panel_sample = sample;
            }
            cell.theta_mean = sample_mean(cell.theta);
            cell.theta_var = sample_var(cell.theta);
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

Eigen::MatrixXd counterexample_points() {
    Eigen::MatrixXd pts(3, 2);
    pts << 0, 0, 4, 0, 0, 3;
    return pts;
}

CounterexampleReport counterexample_experiment(const CounterexampleConfig& cfg) {
    CounterexampleReport report;
    report.config = cfg;

    SampleCloud raw = center_and_norm(counterexample_points());
    SampleCloud cloud = dilate(raw, 1.0 / raw.rw2_norm);

    report.sigma_mm = moment_matching(cloud).second;
    report.spec_mm = descending_eigenvalues(report.sigma_mm);
    report.rot_mm = rotation_angle_2d(report.sigma_mm);

    report.grid = counterexample_grid_search(cloud, cfg.n_lambda, cfg.n_theta, cfg.m, cfg.reps,
                                             mix_seed(cfg.seed, 0xA));

    NearestGaussianConfig ncfg = cfg.ng;
    ncfg.seed = mix_seed(cfg.seed, 0xB);
    report.nearest = nearest_gaussian(cloud, ncfg);
    report.spec_star = descending_eigenvalues(report.nearest.sigma_star);

    // Same CRN replicate seeds as the grid, so the values are comparable.
    double acc = 0.0;
    for (int s = 0; s < cfg.reps; ++s) {
        const double v = mc_gaussian_rw2(cloud.data, report.nearest.sigma_star, cfg.m,
                                         mix_seed(mix_seed(cfg.seed, 0xA), static_cast<std::uint64_t>(s)));
        acc += v * v;
    }
    report.value_nearest = acc / static_cast<double>(cfg.reps);
    report.gap = report.grid.value_moment_match - report.grid.value_star;
    return report;
}

std::vector<std::string> write_gmm1d_report(const Gmm1dReport& report, const std::string& dir) {
    std::vector<std::string> files;

    json j;
    j["config"] = {{"m_values", report.config.m_values},
                   {"n_values", report.config.n_values},
                   {"reps", report.config.reps},
                   {"overlay_n", report.config.overlay_n},
                   {"seed", report.config.seed}};
    j["flags"] = {{"theta_nonincreasing_in_n", report.theta_nonincreasing_in_n},
                  {"p_nonincreasing_in_n", report.p_nonincreasing_in_n},
                  {"theta_increasing_in_m", report.theta_increasing_in_m},
                  {"p_increasing_in_m", report.p_increasing_in_m},
                  {"var_p_exceeds_var_theta", report.var_p_exceeds_var_theta}};
    json cells = json::array();
    for (const auto& c : report.cells)
        cells.push_back({{"m", c.m},
                         {"n", c.n},
                         {"theta", c.theta},
                         {"p", c.p},
                         {"theta_mean", c.theta_mean},
                         {"theta_var", c.theta_var},
                         {"p_mean", c.p_mean},
                         {"p_var", c.p_var}});
    j["cells"] = cells;
    json overlays = json::array();
    for (const auto& o : report.overlays)
        overlays.push_back({{"m", o.m},
                            {"sample", o.sample},
                            {"sigma_mm", o.sigma_mm},
                            {"sigma_star", o.sigma_star}});
    j["overlays"] = overlays;
    files.push_back(dir + "/gmm1d_report.json");
    write_text(files.back(), j.dump(2) + "\n");

    std::ostringstream means;
    means << std::setprecision(17) << "m,n,theta_mean,theta_var,p_mean,p_var\n";
    for (const auto& c : report.cells)
        means << c.m << ',' << c.n << ',' << c.theta_mean << ',' << c.theta_var << ','
              << c.p_mean << ',' << c.p_var << '\n';
    files.push_back(dir + "/gmm1d_means.csv");
    write_text(files.back(), means.str());

    std::ostringstream trials;
    trials << std::setprecision(17) << "m,n,rep,theta,p\n";
    for (const auto& c : report.cells)
        for (std::size_t rep = 0; rep < c.theta.size(); ++rep)
            trials << c.m << ',' << c.n << ',' << rep << ',' << c.theta[rep] << ',' << c.p[rep]
                   << '\n';
    files.push_back(dir + "/gmm1d_trials.csv");
    write_text(files.back(), trials.str());

    // Density overlay: centered sample values plus the two fitted normal
    // densities on a shared x grid.
    std::ostringstream overlay;
    overlay << std::setprecision(17) << "m,x,density_mm,density_star\n";
    for (const auto& o : report.overlays) {
        const double lim = 3.0 * o.sigma_mm + 1.0;
        for (int k = 0; k <= 200; ++k) {
            const double x = -lim + 2.0 * lim * k / 200.0;
            overlay << o.m << ',' << x << ',' << norm_pdf(x / o.sigma_mm) / o.sigma_mm << ','
                    << norm_pdf(x / o.sigma_star) / o.sigma_star << '\n';
        }
    }
    files.push_back(dir + "/gmm1d_overlay.csv");
    write_text(files.back(), overlay.str());

    std::ostringstream ovsamples;
    ovsamples << std::setprecision(17) << "m,value\n";
    for (const auto& o : report.overlays)
        for (double v : o.sample) ovsamples << o.m << ',' << v << '\n';
    files.push_back(dir + "/gmm1d_overlay_samples.csv");
    write_text(files.back(), ovsamples.str());

    std::vector<SvgSeries> theta_series, p_series;
    const std::size_t nn = report.config.n_values.size();
    for (std::size_t mi = 0; mi < report.config.m_values.size(); ++mi) {
        SvgSeries st, sp;
        st.label = "theta m=" + std::to_string(report.config.m_values[mi]);
        sp.label = "p m=" + std::to_string(report.config.m_values[mi]);
        for (std::size_t ni = 0; ni < nn; ++ni) {
            const auto& c = report.cells[mi * nn + ni];
            st.x.push_back(c.n);
            st.y.push_back(c.theta_mean);
            sp.x.push_back(c.n);
            sp.y.push_back(c.p_mean);
        }
        theta_series.push_back(std::move(st));
        p_series.push_back(std::move(sp));
    }
    files.push_back(dir + "/gmm1d_theta.svg");
    svg_line_chart(files.back(), theta_series, "mean RW2 angle vs sample size", true);
    files.push_back(dir + "/gmm1d_p.svg");
    svg_line_chart(files.back(), p_series, "mean projection distance vs sample size", true);

    return files;
}

std::vector<std::string> write_gmm_grid_report(const GmmGridReport& report,
                                               const std::string& dir) {
    std::vector<std::string> files;

    json j;
    j["config"] = {{"r_values", report.config.r_values},
                   {"c_values", report.config.c_values},
                   {"spacing", report.config.spacing},
                   {"n", report.config.n},
                   {"m_draws", report.config.m_draws},
                   {"reps", report.config.reps},
                   {"seed", report.config.seed}};
    json cells = json::array();
    for (const auto& c : report.cells)
        cells.push_back({{"r", c.r},
                         {"c", c.c},
                         {"theta", c.theta},
                         {"theta_mean", c.theta_mean},
                         {"theta_var", c.theta_var}});
    j["cells"] = cells;
    files.push_back(dir + "/gmm_grid_report.json");
    write_text(files.back(), j.dump(2) + "\n");

    std::ostringstream angles;
    angles << std::setprecision(17) << "r,c,rep,theta\n";
    for (const auto& c : report.cells)
        for (std::size_t rep = 0; rep < c.theta.size(); ++rep)
            angles << c.r << ',' << c.c << ',' << rep << ',' << c.theta[rep] << '\n';
    files.push_back(dir + "/gmm_grid_angles.csv");
    write_text(files.back(), angles.str());

    for (const auto& c : report.cells) {
        std::ostringstream panel;
        panel << std::setprecision(17) << "x,y\n";
        for (Eigen::Index i = 0; i < c.panel_sample.rows(); ++i)
            panel << c.panel_sample(i, 0) << ',' << c.panel_sample(i, 1) << '\n';
        files.push_back(dir + "/gmm_grid_panel_r" + std::to_string(c.r) + "c" +
                        std::to_string(c.c) + ".csv");
        write_text(files.back(), panel.str());
    }

    SvgSeries s;
    s.label = "theta";
    for (const auto& c : report.cells) {
        s.x.push_back(c.r * c.c);
        s.y.push_back(c.theta_mean);
    }
    files.push_back(dir + "/gmm_grid_theta.svg");
    svg_line_chart(files.back(), {s}, "mean RW2 angle vs component count");

    return files;
}

std::vector<std::string> write_counterexample_report(const CounterexampleReport& report,
                                                     const std::string& dir) {
    std::vector<std::string> files;

    json j;
    j["config"] = {{"n_lambda", report.config.n_lambda},
                   {"n_theta", report.config.n_theta},
                   {"m", report.config.m},
                   {"reps", report.config.reps},
                   {"seed", report.config.seed}};
    j["moment_match"] = {{"sigma", matrix_json(report.sigma_mm)},
                         {"eigenvalues", {report.spec_mm(0), report.spec_mm(1)}},
                         {"rotation_angle", report.rot_mm},
                         {"rotation_angle_over_pi", report.rot_mm / M_PI},
                         {"value", report.grid.value_moment_match}};
    j["grid"] = {{"lambda_star", report.grid.lambda_star},
                 {"theta_star", report.grid.theta_star},
                 {"theta_star_over_pi", report.grid.theta_star / M_PI},
                 {"value_star", report.grid.value_star}};
    j["nearest"] = {{"sigma", matrix_json(report.nearest.sigma_star)},
                    {"eigenvalues", {report.spec_star(0), report.spec_star(1)}},
                    {"rotation_angle", report.nearest.rotation_angle},
                    {"rotation_angle_over_pi", report.nearest.rotation_angle / M_PI},
                    {"p_star", report.nearest.p_star},
                    {"theta_star", report.nearest.theta_star},
                    {"value", report.value_nearest}};
    j["gap"] = report.gap;
    j["landscape_axes"] = {
        {"lambda", std::vector<double>(report.grid.lambda_values.data(),
                                       report.grid.lambda_values.data() +
                                           report.grid.lambda_values.size())},
        {"theta", std::vector<double>(report.grid.theta_values.data(),
                                      report.grid.theta_values.data() +
                                          report.grid.theta_values.size())}};
    files.push_back(dir + "/counterexample_report.json");
    write_text(files.back(), j.dump(2) + "\n");

    std::ostringstream landscape;
    landscape << std::setprecision(17);
    for (Eigen::Index i = 0; i < report.grid.landscape.rows(); ++i) {
        for (Eigen::Index jx = 0; jx < report.grid.landscape.cols(); ++jx) {
            if (jx) landscape << ',';
            landscape << report.grid.landscape(i, jx);
        }
        landscape << '\n';
    }
    files.push_back(dir + "/counterexample_landscape.csv");
    write_text(files.back(), landscape.str());

    std::ostringstream traj;
    traj << std::setprecision(17) << "iter,rw2,trace,objective\n";
    for (const auto& t : report.nearest.trajectory)
        traj << t.iter << ',' << t.rw2 << ',' << t.trace << ',' << t.objective << '\n';
    files.push_back(dir + "/counterexample_trajectory.csv");
    write_text(files.back(), traj.str());

    files.push_back(dir + "/counterexample_landscape.svg");
    svg_heatmap(files.back(), report.grid.landscape, "W2^2 landscape over (lambda, theta)");

    return files;
}

} // namespace rw2
