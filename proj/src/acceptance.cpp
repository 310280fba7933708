#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "singma/analysis.hpp"
#include "singma/barriers.hpp"
#include "singma/harness.hpp"
#include "singma/verify.hpp"

namespace singma {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string num(double v) { return csv_number(v); }

struct RowStats {
    int rows = 0;
    int failures = 0;
    double worst = std::numeric_limits<double>::infinity();

    void add(const CheckRow& r) {
        ++rows;
        failures += r.pass ? 0 : 1;
        worst = std::min(worst, r.worst_margin);
    }
    std::string text() const {
        return "rows=" + std::to_string(rows) + " failures=" + std::to_string(failures) + " worst_margin=" + num(worst);
    }
};

const int kDims[] = {2, 3, 5};

std::vector<double> power_grid(int n) { return {1.0, 2.0, n + 2.0, n + 4.0}; }

std::vector<Barrier> all_family_barriers() {
    std::vector<Barrier> out;
    for (int n : kDims) {
        for (double p : power_grid(n)) {
            for (auto& b : power_family_barriers(n, p)) out.push_back(b);
        }
        for (double k : {0.5, 1.0, 5.0}) {
            for (double g : {0.25, 0.5}) {
                for (auto& b : affine_family_barriers(n, k, g)) out.push_back(b);
            }
        }
    }
    return out;
}

VerifyOptions options(int samples, std::uint64_t seed) {
    VerifyOptions o;
    o.samples = samples;
    o.seed = seed;
    return o;
}

// ---- solves used by several criteria ----

Domain unit_cap() { return Domain::parabola_cap(2, 1.0, 0.0); }
constexpr double kAffineGamma = 0.5;
constexpr double kAffineK = 1.0;
constexpr double kAffineH = 1.0 / 128.0;
constexpr double kAffineDamping = 0.25;

SolveConfig grid_config(double h, double damping = 0.5) {
    SolveConfig c;
    c.h = h;
    c.damping = damping;
    return c;
}

const DiscreteSolution& cap_solution(SolutionCache& cache, double p, double h) {
    return cache.get(unit_cap(), RhsSpec::power_singular(p), grid_config(h));
}

const DiscreteSolution& affine_solution(SolutionCache& cache) {
    return cache.get(Domain::parabola_cap(2, 1.0, kAffineGamma), RhsSpec::affine_sphere(kAffineK),
                     grid_config(kAffineH, kAffineDamping));
}

// ---- criteria ----

CriterionResult barrier_inequalities(std::uint64_t seed) {
    CriterionResult r;
    r.id = 1;
    r.name = "barrier_inequalities";
    const auto t0 = Clock::now();
    RowStats st;
    for (const Barrier& b : all_family_barriers()) st.add(check_pde_inequality(b, options(10000, seed)));
    r.runtime_seconds = seconds_since(t0);
    r.expected = "every signed residual has the sign required of its barrier; runtime < 5 s";
    r.measured = st.text();
    r.tolerance = "margin >= -1e-12";
    r.pass = st.failures == 0 && st.worst >= -1e-12 && r.runtime_seconds < 5.0;
    return r;
}

CriterionResult oracle_equivalence(std::uint64_t seed) {
    CriterionResult r;
    r.id = 2;
    r.name = "oracle_equivalence";
    const auto t0 = Clock::now();
    std::vector<Barrier> bs = all_family_barriers();
    for (int n : {2, 3, 4}) bs.push_back(explicit_solution(BarrierKind::ExplicitP1, n));
    bs.push_back(explicit_solution(BarrierKind::ExplicitUJL, 2));
    RowStats st;
    for (const Barrier& b : bs) {
        st.add(check_fd_jet(b, options(1000, seed)));
        st.add(check_fd_det(b, options(1000, seed)));
    }
    r.runtime_seconds = seconds_since(t0);
    r.expected = "closed-form jet and determinant match finite differences; runtime < 5 s";
    r.measured = st.text();
    r.tolerance = "rel 1e-4";
    r.pass = st.failures == 0 && r.runtime_seconds < 5.0;
    return r;
}

CriterionResult explicit_solutions(std::uint64_t seed) {
    CriterionResult r;
    r.id = 3;
    r.name = "explicit_solutions";
    const auto t0 = Clock::now();
    RowStats st;
    for (int n : {2, 3, 4}) st.add(check_pde_inequality(explicit_solution(BarrierKind::ExplicitP1, n), options(10000, seed)));
    st.add(check_pde_inequality(explicit_solution(BarrierKind::ExplicitUJL, 2), options(10000, seed)));
    double worst_const = 0.0;
    for (int n = 2; n <= 6; ++n) {
        const double closed = (n + 1.0) * std::pow(2.0 * (n - 1.0), -static_cast<double>(n) / (n + 1.0));
        worst_const = std::max(worst_const, std::abs(sharp_constant_suplem(n, 1.0) - closed));
    }
    r.runtime_seconds = seconds_since(t0);
    r.expected = "|det D2v |v|^p - 1| < 1e-10; C(n,1) = (n+1)[2(n-1)]^(-n/(n+1)) for n = 2..6";
    r.measured = st.text() + " max_constant_error=" + num(worst_const);
    r.tolerance = "1e-10 residual, 1e-12 constant";
    r.pass = st.failures == 0 && worst_const <= 1e-12;
    return r;
}

CriterionResult scaling_identity(std::uint64_t seed) {
    CriterionResult r;
    r.id = 4;
    r.name = "scaling_identity";
    const auto t0 = Clock::now();
    RowStats st;
    for (int n : kDims) {
        for (double p : power_grid(n)) {
            for (double t : {0.5, 2.0}) st.add(check_scaling(n, p, t, options(1000, seed)));
        }
    }
    r.runtime_seconds = seconds_since(t0);
    r.expected = "value and determinant identities of w^t";
    r.measured = st.text();
    r.tolerance = "rel 1e-10";
    r.pass = st.failures == 0;
    return r;
}

double ball_error(const DiscreteSolution& s) {
    double err = 0.0;
    for (int i = 0; i < s.grid.size(); ++i) {
        const Vec x = s.grid.point(i);
        err = std::max(err, std::abs(s.values[i] - 0.5 * (x.squaredNorm() - 1.0)));
    }
    return err;
}

CriterionResult solver_smoke(SolutionCache& cache) {
    CriterionResult r;
    r.id = 5;
    r.name = "solver_smoke";
    const auto t0 = Clock::now();
    const Domain ball = Domain::ball(2, 1.0);
    const double e64 = ball_error(cache.get(ball, RhsSpec::degenerate(0.0), grid_config(1.0 / 64.0)));
    const double e128 = ball_error(cache.get(ball, RhsSpec::degenerate(0.0), grid_config(1.0 / 128.0)));
    r.runtime_seconds = seconds_since(t0);
    r.expected = "max error < 5e-2 at h=1/64, smaller at h=1/128; runtime < 120 s";
    r.measured = "err(1/64)=" + num(e64) + " err(1/128)=" + num(e128);
    r.tolerance = "5e-2";
    r.pass = e64 < 5e-2 && e128 < e64 && r.runtime_seconds < 120.0;
    return r;
}

CriterionResult sandwich(SolutionCache& cache) {
    CriterionResult r;
    r.id = 6;
    r.name = "sandwich";
    std::string measured;
    bool pass = true;
    for (double p : {1.0, 4.0}) {
        const auto t0 = Clock::now();
        const DiscreteSolution& s = cap_solution(cache, p, 1.0 / 128.0);
        const Barrier sub = sub_valpha_for(2, p, unit_cap().diameter());
        const Barrier sup = super_w(2, p);
        double lo = std::numeric_limits<double>::infinity(), hi = lo;
        for (int i = 0; i < s.grid.size(); ++i) {
            const Vec x = s.grid.point(i);
            lo = std::min(lo, s.values[i] - sub.value(x));
            hi = std::min(hi, sup.value(x) - s.values[i]);
        }
        const double dt = seconds_since(t0);
        r.runtime_seconds += dt;
        pass = pass && lo >= -5e-2 && hi >= -5e-2 && dt < 600.0;
        measured += (measured.empty() ? "" : " ") + fmt("p=%g: min(u-sub)=", p) + num(lo) + " min(sup-u)=" + num(hi);
    }
    r.expected = "sub_valpha <= u_h <= super_w at every node (p = 1, 4; h = 1/128); runtime < 600 s per p";
    r.measured = measured;
    r.tolerance = "5e-2";
    r.pass = pass;
    return r;
}

CriterionResult exponent_recovery(SolutionCache& cache) {
    CriterionResult r;
    r.id = 7;
    r.name = "exponent_recovery";
    const auto t0 = Clock::now();
    const double h = 1.0 / 256.0;
    std::string measured;
    bool pass = true;
    for (double p : {4.0, 1.0}) {
        const DiscreteSolution& s = cap_solution(cache, p, h);
        const FitResult fit = fit_exponent(axis_samples(s, 0.0, 4.0 * h, 0.1), 4.0 * h, 0.1);
        const double expected = singular_exponent(2, p);
        pass = pass && std::abs(fit.slope - expected) <= 0.07;
        measured += (measured.empty() ? "" : " ") + fmt("p=%g: slope=", p) + num(fit.slope) + " r2=" + num(fit.r_squared);
    }
    r.runtime_seconds = seconds_since(t0);
    r.expected = "slope 1/3 (p=4) and 2/3 (p=1) on [4h, 0.1], h = 1/256; runtime < 1800 s";
    r.measured = measured;
    r.tolerance = "0.07";
    r.pass = pass && r.runtime_seconds < 1800.0;
    return r;
}

CriterionResult affine_exponent_criterion(SolutionCache& cache) {
    CriterionResult r;
    r.id = 8;
    r.name = "affine_exponent";
    const auto t0 = Clock::now();
    const DiscreteSolution& s = affine_solution(cache);
    const double h = s.grid.h;
    const double a = affine_exponent(2, kAffineK);
    const FitResult fit = fit_exponent(axis_samples(s, kAffineGamma, 4.0 * h, 0.1), 4.0 * h, 0.1);
    const Barrier w = super_wk(2, kAffineK, kAffineGamma);
    const FitResult bfit = fit_exponent(axis_samples(w, 1e-8, 1e-5), 1e-8, 1e-5);
    r.runtime_seconds = seconds_since(t0);
    r.expected = "solve slope 3/8 on [4h, 0.1] (h = 1/128); super_wk slope 3/8 on [1e-8, 1e-5]";
    r.measured = "solve_slope=" + num(fit.slope) + " barrier_slope=" + num(bfit.slope);
    r.tolerance = "0.07 solve, 1e-3 barrier";
    r.pass = std::abs(fit.slope - a) <= 0.07 && std::abs(bfit.slope - a) <= 1e-3;
    return r;
}

CriterionResult bootstrap_criterion() {
    CriterionResult r;
    r.id = 9;
    r.name = "bootstrap";
    const auto t0 = Clock::now();
    double worst = 0.0;
    int mismatches = 0, targets = 0;
    for (auto [n, q] : {std::pair{3, 0.5}, std::pair{4, 1.0}, std::pair{5, 2.5}}) {
        const BootstrapTrace tr = bootstrap(n, q, 50);
        for (int k = 0; k <= 50; ++k) worst = std::max(worst, std::abs(tr.error[k] - bootstrap_error_closed_form(n, q, k)));
        for (double theta : {0.5, 0.9, 0.99, 0.999, 0.9999}) {
            const double target = 2.0 / n + theta * (tr.limit - 2.0 / n);
            ++targets;
            if (bootstrap_minimal_steps(n, q, target) != bootstrap_minimal_steps_by_iteration(n, q, target)) ++mismatches;
        }
    }
    r.runtime_seconds = seconds_since(t0);
    r.expected = "closed-form error over 50 steps; minimal k from the closed form equals the iterated one";
    r.measured = "max_error_gap=" + num(worst) + " minimal_k_mismatches=" + std::to_string(mismatches) + "/" +
                 std::to_string(targets);
    r.tolerance = "1e-12";
    r.pass = worst <= 1e-12 && mismatches == 0;
    return r;
}

CriterionResult sup_norm_criterion(SolutionCache& cache) {
    CriterionResult r;
    r.id = 10;
    r.name = "sup_norm_bounds";
    const auto t0 = Clock::now();
    const DiscreteSolution& s = cap_solution(cache, 1.0, 1.0 / 128.0);
    const SupNormReport rep = sup_norm_bound_check(s, unit_cap(), 2, 1.0);
    r.runtime_seconds = seconds_since(t0);
    r.expected = "sup|u| >= c(n,p)|Omega|^(2/(n+p)); |u| <= C_alpha dist^alpha at every node (p = 1, h = 1/128)";
    r.measured = "sup_norm=" + num(rep.sup_norm) + " lower_bound=" + num(rep.lower_bound) +
                 " max_upper_ratio=" + num(rep.upper_ratio);
    r.tolerance = "exact inequalities";
    r.pass = rep.pass();
    return r;
}

CriterionResult mixc_criterion(SolutionCache& cache) {
    CriterionResult r;
    r.id = 11;
    r.name = "mixc_rate";
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int n = 2; n <= 8; ++n) {
        for (double k : {0.5, 1.0, 2.0, 5.0, 14.0, 20.0}) worst = std::max(worst, mixc_identity_residual(n, k));
    }
    const double threshold_case = std::abs(mixc_exponent(5, 14.0));
    const DiscreteSolution& s = affine_solution(cache);
    const double h = s.grid.h;
    const MixcReport rep = mixc_probe(s, kAffineK, kAffineGamma, 4.0 * h, 0.1);
    r.runtime_seconds = seconds_since(t0);
    r.expected = "identity on the (n,k) grid; e(5,14) = 0; f slope >= -1.15 (n=2, k=1)";
    r.measured = "identity_residual=" + num(worst) + " e(5,14)=" + num(threshold_case) + " slope=" + num(rep.fit.slope) +
                 " e=" + num(rep.exponent);
    r.tolerance = "1e-12 identity, 0.15 slope";
    r.pass = worst <= 1e-12 && threshold_case <= 1e-12 && rep.fit.slope >= -1.0 - 0.15;
    return r;
}

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed, SolutionCache& cache) {
    CriterionResult r;
    switch (id) {
        case 1: r = barrier_inequalities(seed); break;
        case 2: r = oracle_equivalence(seed); break;
        case 3: r = explicit_solutions(seed); break;
        case 4: r = scaling_identity(seed); break;
        case 5: r = solver_smoke(cache); break;
        case 6: r = sandwich(cache); break;
        case 7: r = exponent_recovery(cache); break;
        case 8: r = affine_exponent_criterion(cache); break;
        case 9: r = bootstrap_criterion(); break;
        case 10: r = sup_norm_criterion(cache); break;
        case 11: r = mixc_criterion(cache); break;
        default: throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
    }
    r.seed = seed;
    return r;
}

CsvTable criteria_table(const std::vector<CriterionResult>& rows) {
    CsvTable t;
    t.header = {"id", "name", "expected", "measured", "tolerance", "pass", "seed"};
    for (const auto& r : rows) {
        t.add_row({std::to_string(r.id), r.name, r.expected, r.measured, r.tolerance, csv_bool(r.pass), std::to_string(r.seed)});
    }
    return t;
}

CsvTable criteria_timing_table(const std::vector<CriterionResult>& rows) {
    CsvTable t;
    t.header = {"id", "name", "runtime_seconds"};
    for (const auto& r : rows) t.add_row({std::to_string(r.id), r.name, fmt("%.3f", r.runtime_seconds)});
    return t;
}

}  // namespace singma
