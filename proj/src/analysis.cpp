#include "singma/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "singma/sampling.hpp"

namespace singma {

FitResult fit_exponent(const RaySamples& samples, double dist_min, double dist_max) {
    if (!(dist_min > 0.0) || !(dist_max > dist_min)) throw std::invalid_argument("fit_exponent: need 0 < dist_min < dist_max");
    std::vector<double> X, Y;
    for (const auto& [d, v] : samples) {
        if (d < dist_min || d > dist_max) continue;
        if (!(v > 0.0)) throw std::domain_error("fit_exponent: |u| must be positive in the window");
        X.push_back(std::log(d));
        Y.push_back(std::log(v));
    }
    const int n = static_cast<int>(X.size());
    if (n < 5) throw std::invalid_argument("fit_exponent: fewer than 5 samples in the window");
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += X[i];
        my += Y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (X[i] - mx) * (X[i] - mx);
        sxy += (X[i] - mx) * (Y[i] - my);
        syy += (Y[i] - my) * (Y[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_exponent: samples have a single distance");
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = Y[i] - fit.intercept - fit.slope * X[i];
        sse += r * r;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
    fit.dist_min = dist_min;
    fit.dist_max = dist_max;
    fit.n_points = n;
    return fit;
}

namespace {
std::vector<double> log_spaced(double lo, double hi, int count) {
    if (count < 2) throw std::invalid_argument("axis samples: count must be >= 2");
    if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("axis samples: need 0 < dist_min < dist_max");
    std::vector<double> d(count);
    for (int i = 0; i < count; ++i) d[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1.0));
    d.front() = lo;
    d.back() = hi;
    return d;
}
}  // namespace

RaySamples axis_samples(const DiscreteSolution& u, double shift, double dist_min, double dist_max, int count) {
    RaySamples out;
    Vec x(2);
    for (double d : log_spaced(dist_min, dist_max, count)) {
        x << 0.0, d - shift;
        out.emplace_back(d, std::abs(u.interpolate(x)));
    }
    return out;
}

RaySamples axis_samples(const Barrier& b, double dist_min, double dist_max, int count) {
    RaySamples out;
    const int n = b.dim();
    Vec x = Vec::Zero(n);
    for (double d : log_spaced(dist_min, dist_max, count)) {
        x(n - 1) = d - b.params().gamma;
        out.emplace_back(d, std::abs(b.value(x)));
    }
    return out;
}

namespace {
void check_bootstrap_range(int n, double q) {
    if (n < 3) throw std::invalid_argument("bootstrap: n must be >= 3");
    if (!(q > 0.0 && q <= n - 2.0)) throw std::invalid_argument("bootstrap: q must lie in (0, n-2]");
}
}  // namespace

BootstrapTrace bootstrap(int n, double q, int steps) {
    check_bootstrap_range(n, q);
    if (steps < 0) throw std::invalid_argument("bootstrap: steps must be >= 0");
    BootstrapTrace tr;
    tr.n = n;
    tr.q = q;
    tr.limit = 2.0 / (n - q);
    double beta = 2.0 / n;
    for (int k = 0; k <= steps; ++k) {
        tr.beta.push_back(beta);
        tr.error.push_back(tr.limit - beta);
        beta = (beta * q + 2.0) / n;
    }
    return tr;
}

double bootstrap_error_closed_form(int n, double q, int k) {
    check_bootstrap_range(n, q);
    return 2.0 * q / (n * (n - q)) * std::pow(q / n, k);
}

int bootstrap_minimal_steps(int n, double q, double target) {
    check_bootstrap_range(n, q);
    const double gap = 2.0 / (n - q) - target;
    if (!(gap > 0.0)) throw std::invalid_argument("bootstrap: target must be below 2/(n-q)");
    for (int k = 1; k < 100000; ++k) {
        if (bootstrap_error_closed_form(n, q, k) < gap) return k;
    }
    throw std::runtime_error("bootstrap: target too close to the limit");
}

int bootstrap_minimal_steps_by_iteration(int n, double q, double target) {
    check_bootstrap_range(n, q);
    if (!(target < 2.0 / (n - q))) throw std::invalid_argument("bootstrap: target must be below 2/(n-q)");
    double beta = 2.0 / n;
    for (int k = 1; k < 100000; ++k) {
        beta = (beta * q + 2.0) / n;
        if (beta > target) return k;
    }
    throw std::runtime_error("bootstrap: target too close to the limit");
}

ComparisonResult check_comparison(const Field& lower, const Field& upper, const Domain& domain, int n_samples,
                                  std::uint64_t seed, double tolerance, double margin) {
    ComparisonResult res;
    res.worst_gap = std::numeric_limits<double>::infinity();
    for (const Vec& x : sample_domain_interior(domain, n_samples, seed, margin)) {
        const double gap = upper(x) - lower(x);
        if (gap < res.worst_gap) {
            res.worst_gap = gap;
            res.worst_point = x;
        }
        ++res.samples;
    }
    res.pass = res.samples > 0 && res.worst_gap >= -tolerance;
    return res;
}

ComparisonResult check_comparison_nodes(const Field& lower, const Field& upper, const GridSpec& grid, double tolerance) {
    ComparisonResult res;
    res.worst_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.size(); ++i) {
        const Vec x = grid.point(i);
        const double gap = upper(x) - lower(x);
        if (gap < res.worst_gap) {
            res.worst_gap = gap;
            res.worst_point = x;
        }
        ++res.samples;
    }
    res.pass = res.samples > 0 && res.worst_gap >= -tolerance;
    return res;
}

bool trace_inequality_check(const Mat& A, const Mat& B) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows() || A.rows() == 0) {
        throw std::invalid_argument("trace inequality: matrices must be square of equal size");
    }
    for (const Mat* M : {&A, &B}) {
        const double scale = std::max(M->norm(), std::numeric_limits<double>::min());
        if ((*M - M->transpose()).norm() > 1e-12 * scale) throw std::invalid_argument("trace inequality: matrix is not symmetric");
        Eigen::SelfAdjointEigenSolver<Mat> eig(*M, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() < -1e-10) throw std::invalid_argument("trace inequality: matrix is not positive semidefinite");
    }
    const int n = static_cast<int>(A.rows());
    const double lhs = (A * B).trace();
    const double rhs = n * std::pow(std::max(A.determinant(), 0.0), 1.0 / n) * std::pow(std::max(B.determinant(), 0.0), 1.0 / n);
    return lhs >= rhs - 1e-12 * std::max(1.0, std::abs(rhs));
}

double mixc_exponent(int n, double k) { return ((n - 4.0) * k - (2.0 * n + 4.0)) / (2.0 * n + 2.0 * k + 2.0); }

double mixc_identity_residual(int n, double k) {
    const double a = affine_exponent(n, k);
    return std::abs(-a * (n + 2.0 + k) - k * (a - 1.0) - mixc_exponent(n, k));
}

MixcReport mixc_probe(const DiscreteSolution& u, double k, double gamma, double dist_min, double dist_max,
                      double gap_floor) {
    const int n = 2;
    MixcReport rep;
    rep.exponent = mixc_exponent(n, k);
    rep.identity_residual = mixc_identity_residual(n, k);
    RaySamples f_samples;
    double constant = 0.0;
    for (int i = 0; i < u.grid.size(); ++i) {
        if (u.grid.nodes[i][0] != 0) continue;
        const Vec x = u.grid.point(i);
        const auto g = u.gradient(i);
        const double gap = x(0) * g[0] + x(1) * g[1] - u.values[i];
        if (u.grid.nodes[i][1] == 0) rep.gap_at_origin = gap;
        const double d = x(1) + gamma;
        if (d < dist_min || d > dist_max) continue;
        if (!(gap > gap_floor)) throw std::domain_error("mixc_probe: discrete x.Du - u is at the positivity floor");
        const double f = std::exp(-(n + 2.0 + k) * std::log(std::abs(u.values[i])) - k * std::log(gap));
        f_samples.emplace_back(d, f);
        constant = std::max(constant, f / std::pow(d, rep.exponent));
    }
    rep.samples = static_cast<int>(f_samples.size());
    rep.fit = fit_exponent(f_samples, dist_min, dist_max);
    rep.constant = constant;
    const double C0 = sharp_constant_suplemk(n, k, gamma);
    rep.gap_lower_bound = C0 * std::pow(gamma, affine_exponent(n, k)) - C0 * gamma;
    return rep;
}

double sup_norm_lower_constant(int n, double p) { return std::pow(ball_ratio_constant(n), -1.0 / (n + p)); }

SupNormReport sup_norm_bound_check(const DiscreteSolution& u, const Domain& domain, int n, double p) {
    SupNormReport rep;
    const double alpha = singular_exponent(n, p);
    const double C_alpha = c_alpha(domain.diameter(), alpha);
    rep.sup_norm = u.sup_norm();
    rep.lower_bound = sup_norm_lower_constant(n, p) * std::pow(domain.volume(), alpha);
    rep.lower_ratio = rep.sup_norm / rep.lower_bound;
    rep.lower_pass = rep.sup_norm >= rep.lower_bound;
    double worst = 0.0;
    for (int i = 0; i < u.grid.size(); ++i) {
        const double d = domain.dist_to_boundary(u.grid.point(i));
        worst = std::max(worst, std::abs(u.values[i]) / (C_alpha * std::pow(d, alpha)));
    }
    rep.upper_ratio = worst;
    rep.upper_pass = worst <= 1.0;
    return rep;
}

}  // namespace singma
