#include "rw2/discrete_ot.hpp"

#include "rw2/assignment.hpp"
#include "rw2/errors.hpp"
#include "rw2/network_simplex.hpp"
#include "rw2/rng.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace rw2 {

Eigen::MatrixXd pairwise_sq_dists(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    Eigen::VectorXd x2 = X.rowwise().squaredNorm();
    Eigen::VectorXd y2 = Y.rowwise().squaredNorm();
    Eigen::MatrixXd C = -2.0 * (X * Y.transpose());
    C.colwise() += x2;
    C.rowwise() += y2.transpose();
    return C.cwiseMax(0.0);
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& sigma) {
    if (sigma.rows() != sigma.cols()) throw input_error("psd_sqrt: matrix not square");
    if (!sigma.allFinite()) throw input_error("psd_sqrt: non-finite entries");
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() >
        1e-8 * std::max(1.0, sigma.cwiseAbs().maxCoeff()))
        throw input_error("psd_sqrt: matrix not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
    if (es.info() != Eigen::Success) throw input_error("psd_sqrt: eigendecomposition failed");
    Eigen::VectorXd ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    if (ev.minCoeff() < -1e-9 * scale) throw input_error("psd_sqrt: matrix not PSD");
    Eigen::VectorXd root = ev.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

namespace {

void check_weights(const Eigen::VectorXd& w, const char* side) {
    if (w.minCoeff() < 0.0)
        throw input_error(std::string("exact_ot_cost: negative weight on ") + side);
    if (std::abs(w.sum() - 1.0) > 1e-12)
        throw input_error(std::string("exact_ot_cost: weights on ") + side +
                          " do not sum to 1 within 1e-12");
}

bool uniform_weights(const Eigen::VectorXd& w) {
    const double target = 1.0 / static_cast<double>(w.size());
    return (w.array() - target).abs().maxCoeff() <= 1e-15 * static_cast<double>(w.size());
}

} // namespace

std::pair<double, TransportPlan> exact_ot_cost(const Eigen::MatrixXd& X,
                                               const Eigen::VectorXd& a,
                                               const Eigen::MatrixXd& Y,
                                               const Eigen::VectorXd& b, const OtOptions& opts) {
    const auto n = X.rows(), m = Y.rows();
    if (n < 1 || m < 1) throw input_error("exact_ot_cost: empty point set");
    if (X.cols() != Y.cols()) throw input_error("exact_ot_cost: dimension mismatch");
    if (a.size() != n || b.size() != m) throw input_error("exact_ot_cost: weight length mismatch");
    if (!X.allFinite() || !Y.allFinite() || !a.allFinite() || !b.allFinite())
        throw input_error("exact_ot_cost: non-finite input");
    check_weights(a, "source");
    check_weights(b, "target");
    if (static_cast<std::size_t>(n) * static_cast<std::size_t>(m) > opts.max_cost_entries)
        throw size_error("exact_ot_cost: n*m exceeds the dense solver cap");

    Eigen::MatrixXd C = pairwise_sq_dists(X, Y);
    TransportPlan plan;

    if (n == m && uniform_weights(a) && uniform_weights(b)) {
        // Equal weights, square: assignment fast path.
        std::vector<double> cost(static_cast<std::size_t>(n) * n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                cost[static_cast<std::size_t>(i) * n + j] = C(i, j);
        std::vector<int> rowsol;
        double total = solve_assignment(static_cast<int>(n), cost, rowsol);
        const double mass = 1.0 / static_cast<double>(n);
        plan.pairs.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) plan.pairs.push_back({i, rowsol[i], mass});
        plan.cost = total * mass;
        return {plan.cost, plan};
    }

    NetworkSimplex ns(n, m);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < m; ++j) ns.costs()[static_cast<std::size_t>(i) * m + j] = C(i, j);
    double sum_a = a.sum();
    for (Eigen::Index i = 0; i < n; ++i) ns.supplies()[i] = a(i);
    double acc = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
        ns.supplies()[n + j] = b(j);
        acc += b(j);
    }
    // Absorb the residual imbalance into the largest demand so the solver
    // sees an exactly balanced problem.
    Eigen::Index jmax = 0;
    b.maxCoeff(&jmax);
    ns.supplies()[n + jmax] += sum_a - acc;

    auto status = ns.solve();
    if (status != NetworkSimplex::Status::success)
        throw input_error("exact_ot_cost: network simplex failed (status " +
                          std::to_string(static_cast<int>(status)) + ")");

    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            double f = ns.flows()[static_cast<std::size_t>(i) * m + j];
            if (f > 0.0) plan.pairs.push_back({static_cast<int>(i), static_cast<int>(j), f});
        }
    }
    plan.cost = ns.total_cost();
    return {plan.cost, plan};
}

double rw2_discrete(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, const OtOptions& opts) {
    Eigen::MatrixXd Xc = X.rowwise() - X.colwise().mean();
    Eigen::MatrixXd Yc = Y.rowwise() - Y.colwise().mean();
    Eigen::VectorXd a = Eigen::VectorXd::Constant(X.rows(), 1.0 / static_cast<double>(X.rows()));
    Eigen::VectorXd b = Eigen::VectorXd::Constant(Y.rows(), 1.0 / static_cast<double>(Y.rows()));
    auto [cost, plan] = exact_ot_cost(Xc, a, Yc, b, opts);
    return std::sqrt(std::max(0.0, cost));
}

double mc_gaussian_rw2(const Eigen::MatrixXd& X, const Eigen::MatrixXd& sigma, int m,
                       std::uint64_t seed, const OtOptions& opts) {
    if (m < 1) throw input_error("mc_gaussian_rw2: need at least one draw");
    Eigen::MatrixXd root = psd_sqrt(sigma);
    Rng rng(seed);
    Eigen::MatrixXd Y = rng.gauss_matrix(m, sigma.rows()) * root.transpose();
    return rw2_discrete(X, Y, opts);
}

} // namespace rw2
