#include "rw2/onedim.hpp"

#include "rw2/errors.hpp"
#include "rw2/normal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rw2 {

const char* family_name(Family f) {
    switch (f) {
        case Family::gaussian: return "gaussian";
        case Family::uniform: return "uniform";
        case Family::logistic: return "logistic";
        case Family::laplace: return "laplace";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    if (name == "gaussian") return Family::gaussian;
    if (name == "uniform") return Family::uniform;
    if (name == "logistic") return Family::logistic;
    if (name == "laplace") return Family::laplace;
    throw input_error("unknown family: " + name);
}

double family_psi_norm2(Family f) {
    switch (f) {
        case Family::gaussian: return 1.0;
        case Family::uniform: return 1.0 / 12.0;
        case Family::logistic: return M_PI * M_PI / 3.0;
        case Family::laplace: return 2.0;
    }
    return 0.0;
}

double family_psi(Family f, double u) {
    switch (f) {
        case Family::gaussian: return norm_ppf(u);
        case Family::uniform: return u - 0.5;
        case Family::logistic: return std::log(u / (1.0 - u));
        case Family::laplace: return u <= 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
    }
    return 0.0;
}

namespace {

// Antiderivative of psi on (0, 1), continuous with Psi(0) = 0.
// Used bin-by-bin; the gaussian case is handled separately through phi.
double psi_antideriv(Family f, double u) {
    switch (f) {
        case Family::uniform: {
            double v = u - 0.5;
            return 0.5 * v * v; // constant offset cancels in differences
        }
        case Family::logistic: {
            double s = 0.0;
            if (u > 0.0) s += u * std::log(u);
            if (u < 1.0) s += (1.0 - u) * std::log(1.0 - u);
            return s;
        }
        case Family::laplace: {
            if (u <= 0.5) return u > 0.0 ? u * std::log(2.0 * u) - u : 0.0;
            return u < 1.0 ? (1.0 - u) * std::log(2.0 * (1.0 - u)) - (1.0 - u) : 0.0;
        }
        case Family::gaussian: break;
    }
    throw input_error("psi_antideriv: unsupported family");
}

struct SortedCentered {
    std::vector<double> x;
    double sigma_mu;
};

SortedCentered prepare(std::vector<double>& samples) {
    if (samples.size() < 2) throw input_error("projection: need at least two samples");
    for (double v : samples)
        if (!std::isfinite(v)) throw input_error("projection: non-finite sample");
    const double mean =
        std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
    for (double& v : samples) v -= mean;
    std::stable_sort(samples.begin(), samples.end());
    double ss = 0.0;
    for (double v : samples) ss += v * v;
    const double sigma = std::sqrt(ss / static_cast<double>(samples.size()));
    if (!(sigma > 0.0))
        throw degenerate_ray_error("projection: all samples coincide (sigma_mu = 0)");
    return {std::move(samples), sigma};
}

// l_raw = int_0^1 F_mu^{-1}(u) psi(u) du for sorted samples with bins (i-1)/n, i/n.
double raw_projection(const std::vector<double>& x, Family f) {
    const std::size_t n = x.size();
    double l = 0.0;
    if (f == Family::gaussian) {
        double phi_prev = 0.0; // phi(z_0) with z_0 = -inf
        for (std::size_t i = 1; i <= n; ++i) {
            double phi_i =
                i == n ? 0.0 : norm_pdf(norm_ppf(static_cast<double>(i) / static_cast<double>(n)));
            l += x[i - 1] * (phi_prev - phi_i);
            phi_prev = phi_i;
        }
    } else {
        double prev = psi_antideriv(f, 0.0);
        for (std::size_t i = 1; i <= n; ++i) {
            double cur = psi_antideriv(f, static_cast<double>(i) / static_cast<double>(n));
            l += x[i - 1] * (cur - prev);
            prev = cur;
        }
    }
    return l;
}

ProjectionReport make_report(const SortedCentered& sc, Family f) {
    ProjectionReport r;
    r.family = f;
    r.sigma_mu = sc.sigma_mu;
    r.l_raw = raw_projection(sc.x, f);
    const double psi_norm = std::sqrt(family_psi_norm2(f));
    const double l_unit = r.l_raw / psi_norm;
    double cosv = std::clamp(l_unit / r.sigma_mu, -1.0, 1.0);
    r.theta = std::acos(cosv);
    r.l = r.sigma_mu * cosv;
    r.p = r.sigma_mu * std::sin(r.theta);
    r.sigma_star = r.l;
    r.scale_star = r.l_raw / family_psi_norm2(f);
    return r;
}

} // namespace

ProjectionReport gaussian_projection(std::vector<double> samples) {
    SortedCentered sc = prepare(samples);
    return make_report(sc, Family::gaussian);
}

ProjectionReport family_projection(std::vector<double> samples, Family family) {
    SortedCentered sc = prepare(samples);
    return make_report(sc, family);
}

double quantile_w2_1d(std::vector<double> x, std::vector<double> y) {
    if (x.empty() || y.empty()) throw input_error("quantile_w2_1d: empty sample");
    for (double v : x)
        if (!std::isfinite(v)) throw input_error("quantile_w2_1d: non-finite sample");
    for (double v : y)
        if (!std::isfinite(v)) throw input_error("quantile_w2_1d: non-finite sample");
    std::stable_sort(x.begin(), x.end());
    std::stable_sort(y.begin(), y.end());

    // Walk the merged quantile breakpoints of the two step functions.
    const std::size_t n = x.size(), m = y.size();
    std::size_t i = 0, j = 0;
    double t = 0.0, acc = 0.0;
    while (i < n && j < m) {
        double ti = static_cast<double>(i + 1) / static_cast<double>(n);
        double tj = static_cast<double>(j + 1) / static_cast<double>(m);
        double tnext = std::min(ti, tj);
        double diff = x[i] - y[j];
        acc += diff * diff * (tnext - t);
        t = tnext;
        if (ti <= tnext) ++i;
        if (tj <= tnext) ++j;
    }
    return std::sqrt(std::max(0.0, acc));
}

double quantile_w2_1d(std::vector<double> x, Family family, double scale) {
    if (x.empty()) throw input_error("quantile_w2_1d: empty sample");
    if (!(scale >= 0.0) || !std::isfinite(scale))
        throw input_error("quantile_w2_1d: scale must be nonnegative");
    for (double v : x)
        if (!std::isfinite(v)) throw input_error("quantile_w2_1d: non-finite sample");
    std::stable_sort(x.begin(), x.end());

    // W2^2 = int (F_x^{-1})^2 - 2 s int F_x^{-1} psi + s^2 ||psi||^2;
    // the cross term is exact because int psi du = 0 for every family.
    double ss = 0.0;
    for (double v : x) ss += v * v;
    ss /= static_cast<double>(x.size());
    const double l_raw = raw_projection(x, family);
    const double w2sq = ss - 2.0 * scale * l_raw + scale * scale * family_psi_norm2(family);
    return std::sqrt(std::max(0.0, w2sq));
}

} // namespace rw2
