#include "singma/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Eigenvalues>

#include "singma/sampling.hpp"

namespace singma {

Jet2 fd_jet(const ScalarField& f, const Vec& x, double h) {
    const int n = static_cast<int>(x.size());
    Jet2 jet;
    jet.value = f(x);
    jet.gradient.resize(n);
    jet.hessian.resize(n, n);
    auto at = [&](int i, double di, int j, double dj) {
        Vec y = x;
        y(i) += di;
        y(j) += dj;
        return f(y);
    };
    for (int i = 0; i < n; ++i) {
        const double fp = at(i, h, i, 0.0);
        const double fm = at(i, -h, i, 0.0);
        jet.gradient(i) = (fp - fm) / (2.0 * h);
        jet.hessian(i, i) = (fp - 2.0 * jet.value + fm) / (h * h);
        for (int j = 0; j < i; ++j) {
            const double v = (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) + at(i, -h, j, -h)) / (4.0 * h * h);
            jet.hessian(i, j) = v;
            jet.hessian(j, i) = v;
        }
    }
    return jet;
}

std::string barrier_label(const Barrier& b) {
    const auto& p = b.params();
    char buf[160];
    switch (b.kind()) {
        case BarrierKind::SubVAlpha:
            if (p.p > 0.0 && std::abs(singular_exponent(p.n, p.p) - p.a) < 1e-15)
                std::snprintf(buf, sizeof buf, "%s(n=%d,p=%g)", to_string(b.kind()).c_str(), p.n, p.p);
            else
                std::snprintf(buf, sizeof buf, "%s(n=%d,alpha=%g)", to_string(b.kind()).c_str(), p.n, p.a);
            break;
        case BarrierKind::SuperWt:
            std::snprintf(buf, sizeof buf, "%s(n=%d,p=%g,t=%g)", to_string(b.kind()).c_str(), p.n, p.p, p.t);
            break;
        case BarrierKind::SubVAlphaK:
        case BarrierKind::SuperWK:
            std::snprintf(buf, sizeof buf, "%s(n=%d,k=%g,gamma=%g)", to_string(b.kind()).c_str(), p.n, p.k, p.gamma);
            break;
        case BarrierKind::ExplicitP1:
        case BarrierKind::ExplicitUJL:
            std::snprintf(buf, sizeof buf, "%s(n=%d)", to_string(b.kind()).c_str(), p.n);
            break;
        default:
            std::snprintf(buf, sizeof buf, "%s(n=%d,p=%g)", to_string(b.kind()).c_str(), p.n, p.p);
    }
    return buf;
}

namespace {

constexpr double kFdStep = 1e-4;
constexpr double kFdMargin = 0.05;

struct Accumulator {
    CheckRow row;
    double tol;
    Accumulator(const Barrier& b, std::string check, double tolerance) : tol(tolerance) {
        row.barrier = barrier_label(b);
        row.check = std::move(check);
        row.worst_margin = std::numeric_limits<double>::infinity();
    }
    void add(double margin) {
        ++row.samples;
        if (std::isnan(margin)) margin = -std::numeric_limits<double>::infinity();
        row.worst_margin = std::min(row.worst_margin, margin);
    }
    CheckRow done() {
        row.pass = row.samples > 0 && row.worst_margin >= -tol;
        return row;
    }
};

double rel_diff(const Mat& a, const Mat& b) {
    return (a - b).norm() / std::max(b.norm(), std::numeric_limits<double>::min());
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min()); }

}  // namespace

CheckRow check_pde_inequality(const Barrier& b, const VerifyOptions& opt) {
    const bool exact = b.is_explicit();
    Accumulator acc(b, exact ? "explicit_residual" : (b.is_subsolution() ? "subsolution_inequality" : "supersolution_inequality"),
                    exact ? 0.0 : opt.tolerance);
    const RhsSpec rhs = b.natural_rhs();
    for (const Vec& x : sample_barrier_interior(b, opt.samples, opt.seed, opt.margin)) {
        const double ratio = residual_ratio(b, rhs, x);
        if (exact) acc.add(1e-10 - std::abs(ratio - 1.0));
        else acc.add(b.is_subsolution() ? ratio - 1.0 : 1.0 - ratio);
    }
    return acc.done();
}

CheckRow check_convexity(const Barrier& b, const VerifyOptions& opt) {
    Accumulator acc(b, "convexity", 1e-10);
    for (const Vec& x : sample_barrier_interior(b, opt.samples, opt.seed + 1, opt.margin)) {
        const Jet2 jet = b.eval_jet(x);
        Eigen::SelfAdjointEigenSolver<Mat> eig(jet.hessian, Eigen::EigenvaluesOnly);
        const auto& ev = eig.eigenvalues();
        const double scale = std::max(ev.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
        acc.add(ev.minCoeff() / scale);
    }
    return acc.done();
}

CheckRow check_boundary(const Barrier& b, const VerifyOptions& opt) {
    Accumulator acc(b, "boundary_values", b.is_subsolution() ? 0.0 : 1e-12);
    for (const Vec& x : sample_barrier_boundary(b, opt.samples, opt.seed + 2)) {
        const double v = b.value(x);
        acc.add(b.is_subsolution() ? -v : -std::abs(v));
    }
    return acc.done();
}

CheckRow check_fd_jet(const Barrier& b, const VerifyOptions& opt, double rel_tol) {
    Accumulator acc(b, "fd_jet", 0.0);
    const ScalarField f = [&b](const Vec& y) { return b.value(y); };
    for (const Vec& x : sample_barrier_interior(b, opt.samples, opt.seed + 3, kFdMargin)) {
        const Jet2 exact = b.eval_jet(x);
        const Jet2 j1 = fd_jet(f, x, kFdStep);
        const Jet2 j2 = fd_jet(f, x, 0.5 * kFdStep);
        const Mat h_rich = (4.0 * j2.hessian - j1.hessian) / 3.0;
        const Vec g_rich = (4.0 * j2.gradient - j1.gradient) / 3.0;
        const double err = std::max({rel_diff(j1.hessian, exact.hessian), rel_diff(j1.gradient, exact.gradient),
                                     rel_diff(j1.value, exact.value), rel_diff(h_rich, exact.hessian),
                                     rel_diff(g_rich, exact.gradient)});
        acc.add(rel_tol - err);
    }
    return acc.done();
}

CheckRow check_fd_det(const Barrier& b, const VerifyOptions& opt, double rel_tol) {
    Accumulator acc(b, "fd_det", 0.0);
    const ScalarField f = [&b](const Vec& y) { return b.value(y); };
    for (const Vec& x : sample_barrier_interior(b, opt.samples, opt.seed + 4, kFdMargin)) {
        const double exact = b.det_hessian(x);
        const double d1 = fd_jet(f, x, kFdStep).hessian.determinant();
        const double d2 = fd_jet(f, x, 0.5 * kFdStep).hessian.determinant();
        const double rich = (4.0 * d2 - d1) / 3.0;
        acc.add(rel_tol - std::max(rel_diff(d1, exact), rel_diff(rich, exact)));
    }
    return acc.done();
}

CheckRow check_scaling(int n, double p, double t, const VerifyOptions& opt, double rel_tol) {
    const Barrier wt = super_wt(n, p, t);
    const Barrier w = super_w(n, p);
    Accumulator acc(wt, "scaling", 0.0);
    const double value_factor = std::pow(t, 2.0 * (1.0 + n) / (n + p));
    const double det_factor = std::pow(t, -2.0 * (1.0 + n) * p / (n + p));
    for (const Vec& x : sample_barrier_interior(wt, opt.samples, opt.seed + 5, opt.margin * t * t)) {
        Vec y = x / t;
        y(n - 1) = x(n - 1) / (t * t);
        const double ev = rel_diff(wt.value(x), value_factor * w.value(y));
        const double ed = rel_diff(wt.det_hessian(x), det_factor * w.det_hessian(y));
        acc.add(rel_tol - std::max(ev, ed));
    }
    return acc.done();
}

CheckRow check_legendre_lower_bound(const Barrier& b, const VerifyOptions& opt) {
    Accumulator acc(b, "legendre_lower_bound", opt.tolerance);
    const auto& prm = b.params();
    const int n = prm.n;
    for (const Vec& x : sample_barrier_interior(b, opt.samples, opt.seed + 6, opt.margin)) {
        const Jet2 jet = b.eval_jet(x);
        const double s = x(n - 1) + prm.gamma;
        const double rho = x.head(n - 1).squaredNorm();
        const double bound = std::pow(s, prm.a - 1.0) * prm.a * prm.gamma0 * (prm.c - rho);
        acc.add((jet.legendre_gap(x) - bound) / std::abs(bound));
    }
    return acc.done();
}

CheckRow check_linear_part_monotone(const Barrier& b, const VerifyOptions& opt) {
    Accumulator acc(b, "linear_part", opt.tolerance);
    const auto& prm = b.params();
    for (const Vec& x : sample_barrier_interior(b, opt.samples, opt.seed + 7, opt.margin)) {
        const double w = b.value(x);
        const double v = w - prm.lambda * (x(prm.n - 1) + prm.gamma);
        acc.add((std::abs(v) - std::abs(w)) / std::max(std::abs(v), 1e-300));
    }
    return acc.done();
}

namespace {

CheckRow ordering_row(const Barrier& upper, const Barrier& lower, const VerifyOptions& opt) {
    Accumulator acc(upper, "ordering_vs_" + barrier_label(lower), opt.tolerance);
    for (const Vec& x : sample_barrier_interior(upper, opt.samples, opt.seed + 8, opt.margin)) {
        acc.add(upper.value(x) - lower.value(x));
    }
    return acc.done();
}

CheckRow constant_row(const std::string& label, const std::string& check, double got, double want, double tol) {
    CheckRow row;
    row.barrier = label;
    row.check = check;
    row.samples = 1;
    row.worst_margin = tol - std::abs(got - want);
    row.pass = row.worst_margin >= 0.0;
    return row;
}

void standard_checks(std::vector<CheckRow>& rows, const Barrier& b, const VerifyOptions& opt) {
    VerifyOptions fd = opt;
    fd.samples = std::max(1, opt.samples / 10);
    rows.push_back(check_pde_inequality(b, opt));
    rows.push_back(check_convexity(b, opt));
    rows.push_back(check_boundary(b, opt));
    rows.push_back(check_fd_jet(b, fd));
    rows.push_back(check_fd_det(b, fd));
}

}  // namespace

std::vector<Barrier> power_family_barriers(int n, double p) {
    std::vector<Barrier> out{sub_valpha_for(n, p, Domain::parabola_cap(n, 1.0, 0.0).diameter())};
    if (p >= 1.0) {
        out.push_back(super_w(n, p));
        for (double t : {0.5, 1.0, 2.0}) out.push_back(super_wt(n, p, t));
    }
    if (p >= n + 2.0) out.push_back(super_w2(n, p));
    return out;
}

std::vector<Barrier> affine_family_barriers(int n, double k, double gamma) {
    const Domain dom = Domain::parabola_cap(n, 1.0, gamma);
    return {sub_valpha_k(n, k, gamma, dom.contains_origin_interior().gamma0, dom.diameter()), super_wk(n, k, gamma)};
}

std::vector<CheckRow> verify_power_family(int n, double p, const VerifyOptions& opt) {
    std::vector<CheckRow> rows;
    const double diam = Domain::parabola_cap(n, 1.0, 0.0).diameter();
    const Barrier sub = sub_valpha_for(n, p, diam);
    standard_checks(rows, sub, opt);
    if (p >= 1.0) {
        const Barrier w = super_w(n, p);
        standard_checks(rows, w, opt);
        rows.push_back(check_linear_part_monotone(w, opt));
        rows.push_back(ordering_row(w, sub, opt));
        for (double t : {0.5, 1.0, 2.0}) {
            const Barrier wt = super_wt(n, p, t);
            rows.push_back(check_pde_inequality(wt, opt));
            rows.push_back(check_convexity(wt, opt));
            rows.push_back(check_boundary(wt, opt));
            VerifyOptions sc = opt;
            sc.samples = std::max(1, opt.samples / 10);
            rows.push_back(check_scaling(n, p, t, sc));
        }
    }
    if (p >= n + 2.0) {
        const Barrier w2 = super_w2(n, p);
        standard_checks(rows, w2, opt);
    }
    if (p == 1.0) {
        const Barrier e = explicit_solution(BarrierKind::ExplicitP1, n);
        standard_checks(rows, e, opt);
        const double closed = (n + 1.0) * std::pow(2.0 * (n - 1.0), -static_cast<double>(n) / (n + 1.0));
        rows.push_back(constant_row(barrier_label(e), "sharp_constant", sharp_constant_suplem(n, 1.0), closed, 1e-12));
    }
    if (n == 2 && p == 4.0) {
        const Barrier e = explicit_solution(BarrierKind::ExplicitUJL, 2);
        standard_checks(rows, e, opt);
        rows.push_back(constant_row(barrier_label(e), "sharp_constant", sharp_constant_suplem2(2, 4.0),
                                    std::sqrt(3.0) * std::cbrt(0.5), 1e-12));
    }
    return rows;
}

std::vector<CheckRow> verify_affine_family(int n, double k, double gamma, const VerifyOptions& opt) {
    std::vector<CheckRow> rows;
    const Domain dom = Domain::parabola_cap(n, 1.0, gamma);
    const OriginInfo origin = dom.contains_origin_interior();
    const Barrier sub = sub_valpha_k(n, k, gamma, origin.gamma0, dom.diameter());
    const Barrier w = super_wk(n, k, gamma);
    standard_checks(rows, sub, opt);
    rows.push_back(check_legendre_lower_bound(sub, opt));
    standard_checks(rows, w, opt);
    rows.push_back(check_linear_part_monotone(w, opt));
    rows.push_back(ordering_row(w, sub, opt));
    return rows;
}

}  // namespace singma
