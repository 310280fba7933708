#include <doctest.h>

#include <cmath>
#include <random>

#include "singma/barriers.hpp"
#include "singma/sampling.hpp"
#include "singma/verify.hpp"

using namespace singma;

namespace {
Vec pt(std::initializer_list<double> v) {
    Vec x(static_cast<int>(v.size()));
    int i = 0;
    for (double a : v) x(i++) = a;
    return x;
}
}  // namespace

TEST_CASE("c_alpha") {
    CHECK(c_alpha(1.0, 0.5) == doctest::Approx(12.0).epsilon(1e-14));
    CHECK(c_alpha(2.0, 2.0 / 3.0) == doctest::Approx(40.5).epsilon(1e-14));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.01, 0.99), D(0.1, 5.0);
    for (int i = 0; i < 200; ++i) {
        const double diam = D(rng), a = U(rng);
        CHECK(c_alpha(diam, a) >= 4.0 * (1.0 + 2.0 * diam * diam) * (1.0 - 1e-15));
    }
    CHECK(c_alpha(3.0, 0.5) == doctest::Approx(4.0 * (1.0 + 18.0)));
    CHECK_THROWS_AS(c_alpha(1.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(c_alpha(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("subsolution values and determinant") {
    const Barrier v = sub_valpha(2, 1.0 / 3.0, 2.0);
    CHECK(v.value(pt({0, 0.5})) == doctest::Approx(std::cbrt(0.5) * (0.0 - 40.5)).epsilon(1e-14));
    for (int n : {2, 3, 5}) {
        const double p = 2.0, a = singular_exponent(n, p);
        const Barrier s = sub_valpha_for(n, p, 2.0);
        Vec x = Vec::Zero(n);
        x(n - 1) = 0.37;
        const double want = std::pow(2.0, n - 1) * std::pow(0.37, n * a - 2.0) * a * (1.0 - a) * s.constant();
        CHECK(s.det_hessian(x) == doctest::Approx(want).epsilon(1e-12));
        CHECK(residual(s, s.natural_rhs(), x) > 0.0);
    }
}

TEST_CASE("super_w symmetry and sign") {
    const Barrier w = super_w(3, 1.0);
    const Jet2 j = w.eval_jet(pt({0, 0, 0.3}));
    CHECK(j.gradient(0) == 0.0);
    CHECK(j.gradient(1) == 0.0);
    CHECK(j.hessian_symmetric());
    for (const Vec& x : sample_barrier_interior(super_w(2, 1.0), 500, 3)) {
        CHECK(residual(super_w(2, 1.0), RhsSpec::power_singular(1.0), x) <= 0.0);
    }
}

TEST_CASE("sharp constants") {
    CHECK(sharp_constant_suplem(2, 1.0) == doctest::Approx(3.0 * std::pow(2.0, -2.0 / 3.0)).epsilon(1e-14));
    for (int n = 2; n <= 6; ++n) {
        const double closed = (n + 1.0) * std::pow(2.0 * (n - 1.0), -static_cast<double>(n) / (n + 1.0));
        CHECK(std::abs(sharp_constant_suplem(n, 1.0) - closed) < 1e-12);
    }
    CHECK(sharp_constant_suplem2(2, 4.0) == doctest::Approx(std::sqrt(3.0) * std::cbrt(0.5)).epsilon(1e-14));
    for (int n = 2; n <= 5; ++n) {
        for (double p : {n + 2.0, n + 4.0}) {
            const double c = sharp_constant_suplem2(n, p);
            CHECK(std::isfinite(c));
            CHECK(c > 0.0);
        }
    }
    CHECK_THROWS_AS(sharp_constant_suplem(2, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(sharp_constant_suplem2(2, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(sharp_constant_suplemk(2, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(sharp_constant_suplemk(2, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("affine exponent identities") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> N(2, 9);
    std::uniform_real_distribution<double> K(0.01, 30.0);
    for (int i = 0; i < 20; ++i) {
        const int n = N(rng);
        const double k = K(rng), a = affine_exponent(n, k), b = 1.0 - a;
        CHECK(std::abs(a * (2 * n + 2 * k + 2) - 2 - k) < 1e-12);
        CHECK(std::abs(b * (2 * n + 2 * k + 2) - n - k + 1 - (n + 1)) < 1e-12);
    }
    for (int n = 2; n <= 6; ++n) CHECK(std::abs(affine_exponent(n, 1e-12) - 1.0 / (n + 1.0)) < 1e-11);
}

TEST_CASE("subsolution constant for the affine family") {
    for (int n : {2, 3}) {
        for (double k : {0.5, 1.0, 5.0}) {
            const double g0 = 0.5, diam = 2.0, a = affine_exponent(n, k);
            const double C = subsolution_constant_k(n, k, g0, diam);
            auto lhs = [&](double c) {
                return std::pow(2.0, n - 1) * std::pow(a * g0, k) * ((a - a * a) * c - a * (1 + a) * diam * diam) *
                       std::pow(c - diam * diam, n + 2 * k + 2);
            };
            CHECK(C >= 1.0 + diam * diam);
            CHECK(lhs(C) >= 1.0);
            if (C > 1.0 + diam * diam + 1e-9) CHECK(lhs(C - 1e-8 * C) < 1.0);
        }
    }
    CHECK_THROWS_AS(sub_valpha_k(2, 1.0, 0.2, 0.5, 2.0), std::invalid_argument);
}

TEST_CASE("super_wt reduces to super_w at t = 1") {
    const Barrier w = super_w(2, 2.0), w1 = super_wt(2, 2.0, 1.0);
    for (const Vec& x : sample_barrier_interior(w, 1000, 9)) CHECK(std::abs(w.value(x) - w1.value(x)) <= 1e-15);
}

TEST_CASE("explicit solutions") {
    const Barrier ujl = explicit_solution(BarrierKind::ExplicitUJL, 2);
    CHECK(ujl.value(pt({0, 0.5})) == doctest::Approx(-std::sqrt(3.0) * std::pow(4.0, -1.0 / 3.0)).epsilon(1e-14));
    const Barrier p1 = explicit_solution(BarrierKind::ExplicitP1, 2);
    CHECK(p1.constant() == doctest::Approx(3.0 * std::pow(2.0, -2.0 / 3.0)).epsilon(1e-14));
    for (const Vec& x : sample_barrier_interior(p1, 2000, 4)) {
        CHECK(std::abs(residual_ratio(p1, RhsSpec::power_singular(1.0), x) - 1.0) < 1e-10);
    }
    CHECK_THROWS_AS(explicit_solution(BarrierKind::ExplicitUJL, 3), std::invalid_argument);
    CHECK_THROWS_AS(explicit_solution(BarrierKind::SuperW, 2), std::invalid_argument);
}

TEST_CASE("singular set evaluation is an error") {
    const Barrier w = super_w(2, 1.0);
    CHECK_THROWS_AS(w.eval_jet(pt({0.2, 0.0})), std::domain_error);
    CHECK_THROWS_AS(w.det_hessian(pt({1.0, 0.2})), std::domain_error);
    CHECK_THROWS_AS(w.value(pt({0.2, -0.1})), std::domain_error);
    const Barrier vk = super_wk(2, 1.0, 0.5);
    CHECK_THROWS_AS(vk.eval_jet(pt({0.0, -0.5})), std::domain_error);
}

TEST_CASE("closed-form jets agree with finite differences") {
    for (const Barrier& b : {sub_valpha_for(2, 1.0, 2.0), super_w(3, 2.0), super_w2(2, 4.0), super_wt(2, 1.0, 2.0),
                             super_wk(2, 1.0, 0.5), explicit_solution(BarrierKind::ExplicitUJL, 2)}) {
        VerifyOptions opt;
        opt.samples = 200;
        CHECK(check_fd_jet(b, opt).pass);
        CHECK(check_fd_det(b, opt).pass);
    }
    // fd_jet is exact (to rounding) on quadratics
    const Jet2 q = fd_jet([](const Vec& x) { return x(0) * x(0) + 3.0 * x(0) * x(1) - x(1); }, pt({0.3, -0.2}), 1e-3);
    CHECK(q.hessian(0, 0) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(q.hessian(0, 1) == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(q.gradient(1) == doctest::Approx(3.0 * 0.3 - 1.0).epsilon(1e-8));
}

TEST_CASE("record round trip") {
    for (const Barrier& b : {sub_valpha_for(3, 2.0, 2.0), super_wt(2, 1.0, 0.5), sub_valpha_k(2, 1.0, 0.5, 0.5, 2.0),
                             super_wk(3, 5.0, 0.25), explicit_solution(BarrierKind::ExplicitP1, 4)}) {
        const Barrier c = barrier_from_record(b.to_record());
        CHECK(c.kind() == b.kind());
        for (const Vec& x : sample_barrier_interior(b, 50, 2)) CHECK(c.value(x) == b.value(x));
    }
}

TEST_CASE("verification families pass") {
    VerifyOptions opt;
    opt.samples = 1000;
    for (const CheckRow& r : verify_power_family(2, 1.0, opt)) {
        INFO(r.barrier << " " << r.check << " " << r.worst_margin);
        CHECK(r.pass);
    }
    for (const CheckRow& r : verify_power_family(3, 5.0, opt)) {
        INFO(r.barrier << " " << r.check << " " << r.worst_margin);
        CHECK(r.pass);
    }
    for (const CheckRow& r : verify_affine_family(2, 1.0, 0.5, opt)) {
        INFO(r.barrier << " " << r.check << " " << r.worst_margin);
        CHECK(r.pass);
    }
}
