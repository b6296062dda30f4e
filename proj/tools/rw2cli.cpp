#include "rw2/cloud.hpp"
#include "rw2/discrete_ot.hpp"
#include "rw2/errors.hpp"
#include "rw2/experiments.hpp"
#include "rw2/io.hpp"
#include "rw2/manifold.hpp"
#include "rw2/onedim.hpp"
#include "rw2/rng.hpp"
#include "rw2/semidual.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using nlohmann::json;
using rw2::input_error;

constexpr const char* kVersion = "1.0.0";

class Stopwatch {
public:
    void lap(const std::string& name) {
        const auto now = std::chrono::steady_clock::now();
        laps_[name] = std::chrono::duration<double, std::milli>(now - mark_).count();
        mark_ = now;
    }
    json to_json() const {
        json j = json::object();
        for (const auto& [k, v] : laps_) j[k + "_ms"] = v;
        return j;
    }

private:
    std::chrono::steady_clock::time_point mark_ = std::chrono::steady_clock::now();
    std::map<std::string, double> laps_;
};

// Timings go to stderr so stdout stays bitwise reproducible for a fixed seed.
void emit(const std::string& command, const json& config, std::uint64_t seed,
          const json& results, const Stopwatch& sw) {
    json envelope = {{"command", command},
                     {"version", kVersion},
                     {"config", config},
                     {"seed", seed},
                     {"results", results}};
    std::cout << envelope.dump(2) << std::endl;
    std::cerr << json{{"timings", sw.to_json()}}.dump() << std::endl;
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

// key=value config file; '#' starts a comment; unknown keys are rejected
// before any output file is touched.
std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::map<std::string, std::string> kv;
    if (path.empty()) return kv;
    std::ifstream in(path);
    if (!in) throw input_error(path + ": cannot open config");
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw input_error(path + ": expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw input_error(path + ": empty key");
        if (!kv.emplace(key, value).second) throw input_error(path + ": duplicate key " + key);
    }
    return kv;
}

template <typename T>
T parse_scalar(const std::string& s);

template <>
double parse_scalar<double>(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw input_error("bad number '" + s + "'");
    return v;
}

template <>
int parse_scalar<int>(const std::string& s) {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size() || v < INT_MIN || v > INT_MAX) throw input_error("bad integer '" + s + "'");
    return static_cast<int>(v);
}

template <>
std::uint64_t parse_scalar<std::uint64_t>(const std::string& s) {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw input_error("bad seed '" + s + "'");
    return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& s) {
    std::vector<T> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_scalar<T>(tok));
    if (out.empty()) throw input_error("empty list");
    return out;
}

class ConfigReader {
public:
    explicit ConfigReader(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

    template <typename T>
    void scalar(const std::string& key, T& slot) {
        if (auto it = kv_.find(key); it != kv_.end()) {
            slot = parse_scalar<T>(it->second);
            kv_.erase(it);
        }
    }
    template <typename T>
    void list(const std::string& key, std::vector<T>& slot) {
        if (auto it = kv_.find(key); it != kv_.end()) {
            slot = parse_list<T>(it->second);
            kv_.erase(it);
        }
    }
    void finish() const {
        if (!kv_.empty()) throw input_error("unknown config key '" + kv_.begin()->first + "'");
    }

private:
    std::map<std::string, std::string> kv_;
};

struct CommonFlags {
    std::uint64_t seed = 7;
    int workers = 1;
    bool seed_set = false;
};

double degrees(double rad) { return rad * 180.0 / M_PI; }

int run_angle1d(const std::string& input, const std::string& family_name,
                const CommonFlags& common) {
    Stopwatch sw;
    Eigen::MatrixXd m = rw2::read_matrix(input);
    sw.lap("load");
    if (m.cols() != 1) throw input_error("angle1d: input must have exactly one column");
    std::vector<double> samples(m.col(0).data(), m.col(0).data() + m.rows());
    const rw2::Family fam = rw2::family_from_name(family_name);
    const rw2::ProjectionReport rep = fam == rw2::Family::gaussian
                                          ? rw2::gaussian_projection(std::move(samples))
                                          : rw2::family_projection(std::move(samples), fam);
    sw.lap("compute");
    json results = {{"family", rw2::family_name(rep.family)},
                    {"l", rep.l},
                    {"l_raw", rep.l_raw},
                    {"theta", rep.theta},
                    {"theta_degrees", degrees(rep.theta)},
                    {"p", rep.p},
                    {"sigma_mu", rep.sigma_mu},
                    {"sigma_star", rep.sigma_star},
                    {"scale_star", rep.scale_star}};
    emit("angle1d", {{"input", input}, {"family", family_name}}, common.seed, results, sw);
    return 0;
}

int run_nearest_gauss(const std::string& input, const std::string& out, int iters, int batch,
                      int dual_steps, const CommonFlags& common) {
    Stopwatch sw;
    Eigen::MatrixXd m = rw2::read_matrix(input);
    sw.lap("load");

    rw2::SampleCloud raw = rw2::center_and_norm(m);
    if (raw.rw2_norm <= 0.0)
        throw rw2::degenerate_ray_error("nearest-gauss: all samples coincide");
    const double scale = 1.0 / raw.rw2_norm;
    rw2::SampleCloud cloud = rw2::dilate(raw, scale);

    rw2::NearestGaussianConfig cfg;
    cfg.outer_iters = iters;
    cfg.batch = batch;
    cfg.dual_steps = dual_steps;
    cfg.seed = common.seed;
    rw2::NearestGaussianResult res = rw2::nearest_gaussian(cloud, cfg);

    // Moment-match baseline under the same evaluation budget, for the gap.
    rw2::AscentConfig acfg;
    acfg.batch = cfg.batch;
    acfg.steps = std::min(20000, cfg.dual_steps * cfg.outer_iters);
    acfg.eval_batch = cfg.final_eval_batch;
    acfg.seed = rw2::mix_seed(common.seed, 0x6d6dULL);
    rw2::AscentResult mm = rw2::dual_ascent(cloud, rw2::moment_matching(cloud).second, acfg);
    sw.lap("compute");

    Eigen::MatrixXd sigma_out = res.sigma_star / (scale * scale);
    rw2::write_matrix_csv(out, sigma_out);
    const std::string traj_path = out + ".trajectory.csv";
    {
        std::ofstream tout(traj_path);
        tout << std::setprecision(17) << "iter,rw2,trace,objective\n";
        for (const auto& t : res.trajectory)
            tout << t.iter << ',' << t.rw2 << ',' << t.trace << ',' << t.objective << '\n';
    }
    sw.lap("write");

    json results = {{"p_star", res.p_star},
                    {"p_std_err", res.p_std_err},
                    {"theta_star", res.theta_star},
                    {"theta_star_degrees", degrees(res.theta_star)},
                    {"sigma_trace", res.sigma_star.trace()},
                    {"value_star", res.p_star * res.p_star},
                    {"value_moment_match", mm.rw2 * mm.rw2},
                    {"gap", mm.rw2 * mm.rw2 - res.p_star * res.p_star},
                    {"early_stopped", res.early_stopped},
                    {"normalization",
                     {{"mean", std::vector<double>(raw.mean.data(), raw.mean.data() + raw.mean.size())},
                      {"scale", scale}}},
                    {"sigma_file", out},
                    {"trajectory_file", traj_path}};
    if (cloud.d() == 2) results["rotation_angle"] = res.rotation_angle;
    emit("nearest-gauss",
         {{"input", input}, {"out", out}, {"iters", iters}, {"batch", batch},
          {"dual_steps", dual_steps}},
         common.seed, results, sw);
    return 0;
}

int run_rw2_eval(const std::string& input, const std::string& sigma_path,
                 const std::string& method, int iters, int batch, int draws, int replicates,
                 const CommonFlags& common) {
    Stopwatch sw;
    Eigen::MatrixXd m = rw2::read_matrix(input);
    rw2::SampleCloud raw = rw2::center_and_norm(m);
    Eigen::MatrixXd sigma;
    if (!sigma_path.empty()) {
        sigma = rw2::read_matrix(sigma_path);
        if (sigma.rows() != sigma.cols() || sigma.rows() != raw.d())
            throw input_error("rw2-eval: sigma must be d x d for the input dimension");
        rw2::psd_sqrt(sigma); // PSD validation
    } else if (method != "separable") {
        throw input_error("rw2-eval: --sigma is required for method " + method);
    }
    sw.lap("load");

    // Stochastic methods run in unit-norm coordinates; the result is scaled
    // back, and the constants are echoed.
    const double scale = raw.rw2_norm > 0.0 ? 1.0 / raw.rw2_norm : 1.0;
    rw2::SampleCloud cloud = rw2::dilate(raw, scale);
    Eigen::MatrixXd sigma_scaled = sigma.size() ? (sigma * scale * scale).eval() : sigma;

    json results;
    results["method"] = method;
    results["normalization"] = {
        {"mean", std::vector<double>(raw.mean.data(), raw.mean.data() + raw.mean.size())},
        {"scale", scale}};

    if (method == "semidual" || method == "mc-exact") {
        std::vector<double> values;
        std::vector<double> inner_err;
        for (int r = 0; r < replicates; ++r) {
            const std::uint64_t s = rw2::mix_seed(common.seed, static_cast<std::uint64_t>(r));
            if (method == "semidual") {
                rw2::AscentConfig acfg;
                acfg.batch = batch;
                acfg.steps = iters;
                acfg.seed = s;
                rw2::AscentResult res = rw2::dual_ascent(cloud, sigma_scaled, acfg);
                values.push_back(res.rw2 / scale);
                inner_err.push_back(res.std_err);
            } else {
                values.push_back(rw2::mc_gaussian_rw2(cloud.data, sigma_scaled, draws, s) / scale);
            }
        }
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        var = values.size() > 1 ? var / static_cast<double>(values.size() - 1) : 0.0;
        results["rw2"] = mean;
        results["replicate_values"] = values;
        results["std_err"] = std::sqrt(var / static_cast<double>(values.size()));
        if (method == "semidual") results["objective_std_err"] = inner_err;
    } else if (method == "separable") {
        // Targets the moment-matched Gaussian (exact for coordinate-separable
        // measures); a provided sigma is validated and echoed only.
        results["rw2"] = rw2::pca_separable_rw2(raw);
        results["target"] = "moment_match";
        results["heuristic"] = true;
    } else if (method == "bures") {
        Eigen::MatrixXd cov = rw2::moment_matching(raw).second;
        results["rw2"] = rw2::gaussian_w2_closed_form(cov, sigma);
    } else {
        throw input_error("rw2-eval: unknown method " + method);
    }
    sw.lap("compute");

    emit("rw2-eval",
         {{"input", input}, {"sigma", sigma_path}, {"method", method}, {"iters", iters},
          {"batch", batch}, {"draws", draws}, {"replicates", replicates}},
         common.seed, results, sw);
    return 0;
}

int run_experiment(const std::string& name, const std::string& config_path,
                   const std::string& out_dir, const CommonFlags& common) {
    Stopwatch sw;
    ConfigReader cfgr(parse_config_file(config_path));
    json config_echo = {{"name", name}, {"config_file", config_path}, {"out", out_dir}};

    // Parse and validate everything before touching the output directory, so
    // a malformed config leaves no partial files behind.
    std::vector<std::string> files;
    json results;
    if (name == "gmm1d") {
        rw2::Gmm1dConfig cfg;
        cfg.seed = common.seed;
        cfgr.list("m_values", cfg.m_values);
        cfgr.list("n_values", cfg.n_values);
        cfgr.scalar("reps", cfg.reps);
        cfgr.scalar("overlay_n", cfg.overlay_n);
        if (!common.seed_set) cfgr.scalar("seed", cfg.seed);
        cfgr.finish();
        sw.lap("load");
        rw2::Gmm1dReport rep = rw2::gmm1d_experiment(cfg);
        sw.lap("compute");
        std::filesystem::create_directories(out_dir);
        files = rw2::write_gmm1d_report(rep, out_dir);
        results = {{"flags",
                    {{"theta_nonincreasing_in_n", rep.theta_nonincreasing_in_n},
                     {"p_nonincreasing_in_n", rep.p_nonincreasing_in_n},
                     {"theta_increasing_in_m", rep.theta_increasing_in_m},
                     {"p_increasing_in_m", rep.p_increasing_in_m},
                     {"var_p_exceeds_var_theta", rep.var_p_exceeds_var_theta}}}};
        config_echo["seed"] = cfg.seed;
    } else if (name == "gmm-grid") {
        rw2::GmmGridConfig cfg;
        cfg.seed = common.seed;
        cfgr.list("r_values", cfg.r_values);
        cfgr.list("c_values", cfg.c_values);
        cfgr.scalar("spacing", cfg.spacing);
        cfgr.scalar("n", cfg.n);
        cfgr.scalar("m_draws", cfg.m_draws);
        cfgr.scalar("reps", cfg.reps);
        if (!common.seed_set) cfgr.scalar("seed", cfg.seed);
        cfgr.finish();
        sw.lap("load");
        rw2::GmmGridReport rep = rw2::gmm_grid_experiment(cfg);
        sw.lap("compute");
        std::filesystem::create_directories(out_dir);
        files = rw2::write_gmm_grid_report(rep, out_dir);
        json cells = json::array();
        for (const auto& c : rep.cells)
            cells.push_back({{"r", c.r}, {"c", c.c}, {"theta_mean", c.theta_mean}});
        results = {{"cells", cells}};
        config_echo["seed"] = cfg.seed;
    } else if (name == "counterexample") {
        rw2::CounterexampleConfig cfg;
        cfg.seed = common.seed;
        cfgr.scalar("n_lambda", cfg.n_lambda);
        cfgr.scalar("n_theta", cfg.n_theta);
        cfgr.scalar("m", cfg.m);
        cfgr.scalar("reps", cfg.reps);
        cfgr.scalar("outer_iters", cfg.ng.outer_iters);
        cfgr.scalar("batch", cfg.ng.batch);
        cfgr.scalar("dual_steps", cfg.ng.dual_steps);
        if (!common.seed_set) cfgr.scalar("seed", cfg.seed);
        cfgr.finish();
        sw.lap("load");
        rw2::CounterexampleReport rep = rw2::counterexample_experiment(cfg);
        sw.lap("compute");
        std::filesystem::create_directories(out_dir);
        files = rw2::write_counterexample_report(rep, out_dir);
        results = {{"gap", rep.gap},
                   {"value_moment_match", rep.grid.value_moment_match},
                   {"value_star", rep.grid.value_star},
                   {"grid_theta_star_over_pi", rep.grid.theta_star / M_PI},
                   {"rot_mm_over_pi", rep.rot_mm / M_PI},
                   {"spec_mm", {rep.spec_mm(0), rep.spec_mm(1)}},
                   {"spec_star", {rep.spec_star(0), rep.spec_star(1)}},
                   {"nearest_rotation_over_pi", rep.nearest.rotation_angle / M_PI},
                   {"nearest_value", rep.value_nearest}};
        config_echo["seed"] = cfg.seed;
    } else {
        throw input_error("unknown experiment '" + name + "'");
    }
    sw.lap("write");
    results["files"] = files;
    emit("experiment", config_echo, config_echo["seed"].get<std::uint64_t>(), results, sw);
    return 0;
}

int run_convert(const std::string& input, const std::string& output, std::string format,
                const CommonFlags& common) {
    Stopwatch sw;
    Eigen::MatrixXd m = rw2::read_matrix(input);
    sw.lap("load");
    if (format.empty())
        format = output.size() >= 4 && output.substr(output.size() - 4) == ".csv" ? "csv" : "rw2m";
    if (format == "csv")
        rw2::write_matrix_csv(output, m);
    else if (format == "rw2m")
        rw2::write_matrix_rw2m(output, m);
    else
        throw input_error("convert: unknown format " + format);
    sw.lap("write");
    emit("convert", {{"input", input}, {"output", output}, {"format", format}}, common.seed,
         {{"rows", m.rows()}, {"cols", m.cols()}}, sw);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RW2 cone geometry toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // --seed / --workers are accepted after the subcommand

    CommonFlags common;
    app.add_option("--seed", common.seed, "master seed for all stochastic work")
        ->each([&common](const std::string&) { common.seed_set = true; });
    app.add_option("--workers", common.workers, "worker count (results are worker-invariant)")
        ->check(CLI::PositiveNumber);

    std::string input, out, sigma_path, family = "gaussian", method = "semidual";
    std::string exp_name, config_path, format;
    int ng_iters = 400, ng_batch = 512, dual_steps = 150;
    int ev_iters = 20000, ev_batch = 256, draws = 2000, replicates = 3;

    auto* angle = app.add_subcommand("angle1d", "1D projection distance and RW2 angle");
    angle->add_option("input", input, "sample file (CSV or RW2M)")->required();
    angle->add_option("--family", family, "gaussian|uniform|logistic|laplace");

    auto* ng = app.add_subcommand("nearest-gauss", "W2-nearest zero-mean Gaussian");
    ng->add_option("input", input)->required();
    ng->add_option("--out", out, "output CSV for Sigma*")->required();
    ng->add_option("--iters", ng_iters, "outer iterations");
    ng->add_option("--batch", ng_batch, "Monte-Carlo batch size");
    ng->add_option("--dual-steps", dual_steps, "dual refresh steps per outer iteration");

    auto* ev = app.add_subcommand("rw2-eval", "RW2 distance to N(0, Sigma)");
    ev->add_option("input", input)->required();
    ev->add_option("--sigma", sigma_path, "covariance CSV or RW2M");
    ev->add_option("--method", method, "semidual|mc-exact|separable|bures");
    ev->add_option("--iters", ev_iters, "semidual ascent steps");
    ev->add_option("--batch", ev_batch, "semidual batch size");
    ev->add_option("--draws", draws, "mc-exact Gaussian draw count");
    ev->add_option("--seeds", replicates, "stochastic replicate count")->check(CLI::PositiveNumber);

    auto* ex = app.add_subcommand("experiment", "scripted reproductions");
    ex->add_option("name", exp_name, "gmm1d|gmm-grid|counterexample")->required();
    ex->add_option("--config", config_path, "key=value config file");
    ex->add_option("--out", out, "output directory")->required();

    auto* cv = app.add_subcommand("convert", "CSV <-> RW2M conversion");
    cv->add_option("input", input)->required();
    cv->add_option("output", out)->required();
    cv->add_option("--format", format, "csv|rw2m (default: by output extension)");

    try {
        app.parse(argc, argv);
        if (angle->parsed()) return run_angle1d(input, family, common);
        if (ng->parsed())
            return run_nearest_gauss(input, out, ng_iters, ng_batch, dual_steps, common);
        if (ev->parsed())
            return run_rw2_eval(input, sigma_path, method, ev_iters, ev_batch, draws, replicates,
                                common);
        if (ex->parsed()) return run_experiment(exp_name, config_path, out, common);
        if (cv->parsed()) return run_convert(input, out, format, common);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << std::endl;
        return 2;
    } catch (const rw2::degenerate_ray_error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 3;
    } catch (const rw2::geometry_error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 3;
    } catch (const rw2::ascent_error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
}
