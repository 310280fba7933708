#include <doctest.h>

#include <cmath>
#include <random>

#include "singma/analysis.hpp"

using namespace singma;

TEST_CASE("fit_exponent on pure power data") {
    RaySamples s;
    for (int i = 0; i < 30; ++i) {
        const double d = std::pow(10.0, -3.0 + 2.0 * i / 29.0);
        s.emplace_back(d, 3.0 * std::cbrt(d));
    }
    const FitResult f = fit_exponent(s, 1e-3, 0.1);
    CHECK(std::abs(f.slope - 1.0 / 3.0) < 1e-12);
    CHECK(std::abs(f.intercept - std::log(3.0)) < 1e-12);
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.n_points == 30);

    CHECK_THROWS_AS(fit_exponent(s, 1e-3, 1.3e-3), std::invalid_argument);
    RaySamples z = s;
    z[3].second = 0.0;
    CHECK_THROWS_AS(fit_exponent(z, 1e-3, 0.1), std::domain_error);
    CHECK_THROWS_AS(fit_exponent(s, 0.0, 0.1), std::invalid_argument);
}

TEST_CASE("axis slopes of barriers") {
    const Barrier ujl = explicit_solution(BarrierKind::ExplicitUJL, 2);
    CHECK(std::abs(fit_exponent(axis_samples(ujl, 1e-3, 0.1), 1e-3, 0.1).slope - 1.0 / 3.0) < 1e-6);

    // pure powers on the axis
    for (const Barrier& b : {sub_valpha_for(2, 1.0, 2.0), sub_valpha_for(3, 4.0, 2.0), explicit_solution(BarrierKind::ExplicitP1, 2),
                             sub_valpha_k(2, 1.0, 0.5, 0.5, 2.0)}) {
        CHECK(std::abs(fit_exponent(axis_samples(b, 1e-3, 5e-2), 1e-3, 5e-2).slope - b.exponent_a()) < 1e-3);
    }
    // C s - C s^a carries a linear correction of relative size s^{1-a}; the power regime
    // is resolved deeper in the boundary layer
    for (const Barrier& b : {super_w(2, 1.0), super_w(2, 4.0), super_wk(2, 1.0, 0.5)}) {
        CHECK(std::abs(fit_exponent(axis_samples(b, 1e-14, 1e-11), 1e-14, 1e-11).slope - b.exponent_a()) < 1e-3);
        CHECK(std::abs(fit_exponent(axis_samples(b, 1e-3, 5e-2), 1e-3, 5e-2).slope - b.exponent_a()) > 1e-2);
    }
    CHECK(std::abs(fit_exponent(axis_samples(super_wk(2, 1.0, 0.5), 1e-8, 1e-5), 1e-8, 1e-5).slope - 0.375) < 1e-3);
}

TEST_CASE("bootstrap recurrence") {
    const BootstrapTrace t = bootstrap(3, 1.0, 10);
    CHECK(t.beta[0] == doctest::Approx(2.0 / 3.0));
    CHECK(t.beta[1] == doctest::Approx(8.0 / 9.0));
    CHECK(t.limit == doctest::Approx(1.0));
    CHECK(t.error[0] == doctest::Approx(1.0 / 3.0));
    CHECK(t.error[1] == doctest::Approx(1.0 / 9.0));
    for (auto [n, q] : {std::pair{3, 0.5}, std::pair{4, 1.0}, std::pair{5, 2.5}, std::pair{8, 0.1}}) {
        const BootstrapTrace b = bootstrap(n, q, 50);
        for (int k = 0; k <= 50; ++k) {
            CHECK(std::abs(b.error[k] - bootstrap_error_closed_form(n, q, k)) < 1e-12);
            CHECK(b.beta[k] <= b.limit + 1e-15);
            if (b.error[k] > 1e-13) CHECK(b.beta[k] < b.limit);
            if (k && b.error[k - 1] > 1e-13) {
                CHECK(b.beta[k] > b.beta[k - 1]);
                if (b.error[k] > 1e-8) CHECK(b.error[k] / b.error[k - 1] == doctest::Approx(q / n).epsilon(1e-6));
            }
        }
        for (double theta : {0.3, 0.9, 0.999}) {
            const double target = 2.0 / n + theta * (b.limit - 2.0 / n);
            const int k = bootstrap_minimal_steps(n, q, target);
            CHECK(k == bootstrap_minimal_steps_by_iteration(n, q, target));
            CHECK(b.beta[k] > target);
            if (k > 1) CHECK(b.beta[k - 1] <= target);
        }
    }
    CHECK_THROWS_AS(bootstrap(2, 0.5, 3), std::invalid_argument);
    CHECK_THROWS_AS(bootstrap(3, 1.0, -1), std::invalid_argument);
    CHECK_THROWS_AS(bootstrap(4, 2.5, 3), std::invalid_argument);
    CHECK_THROWS_AS(bootstrap(4, 0.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(bootstrap_minimal_steps(3, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("comparison checks") {
    const Domain cap = Domain::parabola_cap(2, 1.0, 0.0);
    const Barrier sub = sub_valpha_for(2, 1.0, cap.diameter());
    const Barrier sup = super_w(2, 1.0);
    const Field lo = [&](const Vec& x) { return sub.value(x); };
    const Field hi = [&](const Vec& x) { return sup.value(x); };
    CHECK(check_comparison(lo, hi, cap, 10000).pass);
    const ComparisonResult self = check_comparison(hi, hi, cap, 1000);
    CHECK(self.pass);
    CHECK(self.worst_gap == 0.0);
    const ComparisonResult swapped = check_comparison(hi, lo, cap, 1000);
    CHECK_FALSE(swapped.pass);
    CHECK(swapped.worst_gap < 0.0);
    CHECK(swapped.worst_point.size() == 2);
}

TEST_CASE("trace inequality") {
    const Mat I = Mat::Identity(2, 2);
    CHECK(trace_inequality_check(I, I));
    Mat D = Mat::Zero(2, 2);
    D(0, 0) = 1.0;
    CHECK(trace_inequality_check(D, I));
    std::mt19937_64 rng(23);
    std::normal_distribution<double> N;
    for (int draw = 0; draw < 10000; ++draw) {
        const int n = 2 + draw % 4;
        Mat X(n, n), Y(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                X(i, j) = N(rng);
                Y(i, j) = N(rng);
            }
        }
        const Mat A = X * X.transpose(), B = Y * Y.transpose();
        CHECK(trace_inequality_check(A, B));
    }
    Mat ns = I;
    ns(0, 1) = 0.5;
    CHECK_THROWS_AS(trace_inequality_check(ns, I), std::invalid_argument);
    CHECK_THROWS_AS(trace_inequality_check(-I, I), std::invalid_argument);
}

TEST_CASE("mixc rate exponent") {
    for (int n = 2; n <= 8; ++n) {
        for (double k : {0.5, 1.0, 2.0, 5.0, 14.0, 20.0}) CHECK(mixc_identity_residual(n, k) < 1e-12);
    }
    CHECK(std::abs(mixc_exponent(5, 14.0)) < 1e-15);
    CHECK(mixc_exponent(5, 20.0) > 0.0);
    CHECK(mixc_exponent(5, 5.0) < 0.0);
    CHECK(mixc_exponent(2, 1.0) == doctest::Approx(-1.25));
}

TEST_CASE("sup-norm constants are compatible") {
    for (int n : {2, 3}) {
        for (double p : {1.0, 2.0, 4.0}) {
            for (const Domain& d : {Domain::parabola_cap(n, 1.0, 0.0), Domain::ball(n), Domain::sphere_cap(n)}) {
                const double a = singular_exponent(n, p);
                const double lower = sup_norm_lower_constant(n, p) * std::pow(d.volume(), a);
                CHECK(lower <= c_alpha(d.diameter(), a) * std::pow(0.5 * d.diameter(), a));
            }
        }
    }
}

TEST_CASE("sup-norm check on a coarse solve") {
    SolveConfig cfg;
    cfg.h = 1.0 / 16.0;
    const Domain cap = Domain::parabola_cap(2, 1.0, 0.0);
    const DiscreteSolution s = solve(cap, RhsSpec::power_singular(1.0), cfg);
    const SupNormReport r = sup_norm_bound_check(s, cap, 2, 1.0);
    CHECK(r.lower_pass);
    CHECK(r.upper_pass);
    CHECK(r.upper_ratio < 1.0);
}
