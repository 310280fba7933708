#include <doctest.h>

#include <cmath>
#include <random>

#include "singma/solver.hpp"

using namespace singma;

namespace {
Vec nodal(const GridSpec& g, double (*f)(double, double)) {
    Vec v(g.size());
    for (int i = 0; i < g.size(); ++i) {
        const Vec x = g.point(i);
        v[i] = f(x(0), x(1));
    }
    return v;
}

bool full_stencil(const GridSpec& g, int node) {
    for (int d = 0; d < g.num_directions(); ++d) {
        if (g.arm(node, d, 0).neighbor < 0 || g.arm(node, d, 1).neighbor < 0) return false;
    }
    return true;
}
}  // namespace

TEST_CASE("grid masks") {
    const GridSpec g = build_grid(Domain::ball(2), 0.25);
    int count = 0;
    for (int i = -4; i <= 4; ++i) {
        for (int j = -4; j <= 4; ++j) count += (i * i + j * j) * 0.0625 < 1.0 ? 1 : 0;
    }
    CHECK(count == 45);
    CHECK(g.size() == 45);

    const GridSpec c = build_grid(Domain::parabola_cap(2, 1.0, 0.0), 0.5);
    int expected = 0;
    for (int i = -2; i <= 2; ++i) {
        for (int j = 0; j <= 2; ++j) {
            const double x = 0.5 * i, y = 0.5 * j;
            if (std::abs(x) < 1.0 && y > 0.0 && y < 1.0 - x * x) {
                ++expected;
                CHECK(c.index(i, j) >= 0);
            } else {
                CHECK(c.index(i, j) < 0);
            }
        }
    }
    CHECK(c.size() == expected);

    CHECK_THROWS(build_grid(Domain::ball(3), 0.25));
    CHECK_THROWS(build_grid(Domain::parabola_cap(2, 0.2, 0.0), 0.25));
}

TEST_CASE("boundary intersections lie on the boundary") {
    const GridSpec g = build_grid(Domain::parabola_cap(2, 1.0, 0.0), 1.0 / 16.0);
    const Domain cap = Domain::parabola_cap(2, 1.0, 0.0);
    REQUIRE(!g.boundary_points.empty());
    for (const auto& p : g.boundary_points) {
        Vec x(2);
        x << p[0], p[1];
        CHECK_FALSE(cap.contains(x));
        const double to_face = std::min(std::abs(p[1]), std::abs(p[1] - (1.0 - p[0] * p[0])));
        CHECK(to_face <= 1e-8);
    }
    const GridSpec b = build_grid(Domain::ball(2), 1.0 / 16.0);
    for (const auto& p : b.boundary_points) CHECK(std::abs(std::hypot(p[0], p[1]) - 1.0) <= 1e-8);
    // every arm reaches a neighbour or the boundary within the lattice step
    for (int i = 0; i < b.size(); ++i) {
        for (int d = 0; d < b.num_directions(); ++d) {
            for (int s = 0; s < 2; ++s) CHECK(b.arm(i, d, s).length <= b.h * b.directions[d].norm() * (1 + 1e-12));
        }
    }
}

TEST_CASE("stencil directions come in orthogonal couples") {
    for (int count : {2, 4, 8, 16}) {
        const auto dirs = stencil_directions(count);
        REQUIRE(static_cast<int>(dirs.size()) == count);
        for (int c = 0; c < count; c += 2) {
            CHECK(dirs[c].dx * dirs[c + 1].dx + dirs[c].dy * dirs[c + 1].dy == 0);
            CHECK(dirs[c].norm() == doctest::Approx(dirs[c + 1].norm()));
        }
    }
    CHECK_THROWS(stencil_directions(6));
}

TEST_CASE("ma_operator on polynomials") {
    const GridSpec g = build_grid(Domain::ball(2), 1.0 / 16.0);
    const Vec q = nodal(g, [](double x, double y) { return 0.5 * (x * x + y * y); });
    const Vec a = nodal(g, [](double x, double y) { return 2.0 * x - y + 0.3; });
    const Vec d = nodal(g, [](double x, double) { return 0.5 * x * x; });
    int full = 0;
    for (int i = 0; i < g.size(); ++i) {
        if (!full_stencil(g, i)) continue;
        ++full;
        CHECK(ma_operator(g, q, i) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(ma_operator(g, a, i)) <= 1e-10);
        CHECK(std::abs(ma_operator(g, d, i)) <= 1e-10);
    }
    CHECK(full > 100);
    // unequal arms with the exact boundary value are exact for quadratics, up to the
    // 1e-10 placement of the boundary points
    const Vec qb = nodal(g, [](double x, double y) { return 0.5 * (x * x + y * y - 1.0); });
    for (int i = 0; i < g.size(); ++i) CHECK(std::abs(ma_operator(g, qb, i) - 1.0) <= 1e-6);
}

TEST_CASE("scheme monotonicity under random perturbation") {
    const GridSpec g = build_grid(Domain::parabola_cap(2, 1.0, 0.0), 1.0 / 16.0);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(0.0, 1e-3);
    Vec u = nodal(g, [](double x, double y) { return 0.8 * (x * x + y * y) + 0.3 * x * y - y - 0.5; });
    for (int trial = 0; trial < 200; ++trial) {
        const int node = static_cast<int>(rng() % g.size());
        const double before = ma_operator(g, u, node);
        Vec v = u;
        for (int i = 0; i < g.size(); ++i) {
            if (i != node) v[i] += U(rng);
        }
        CHECK(ma_operator(g, v, node) >= before - 1e-12);
    }
}

TEST_CASE("epsilon_zero") {
    auto lhs = [](double e, int n, double p, double area) {
        return std::pow(e, n) * std::pow(2.0 * e, p) * ball_ratio_constant(n) / (area * area);
    };
    CHECK(ball_ratio_constant(2) == doctest::Approx(16.0 * 16.0 * M_PI * M_PI));
    double prev = 0.0;
    for (double area : {0.1, 0.5, 1.0, 2.0, 10.0}) {
        const double e = epsilon_zero(2, 1.0, area);
        CHECK(e > prev);
        prev = e;
        CHECK(lhs(e, 2, 1.0, area) < 0.5);
        CHECK(lhs(e / 0.999, 2, 1.0, area) >= 0.5);
    }
    // independent bisection oracle
    double lo = 0.0, hi = 10.0;
    for (int i = 0; i < 300; ++i) {
        const double m = 0.5 * (lo + hi);
        (lhs(m, 2, 1.0, 1.0) < 0.5 ? lo : hi) = m;
    }
    CHECK(std::abs(epsilon_zero(2, 1.0, 1.0) - lo) < 1e-10);
    CHECK(std::abs(epsilon_zero(2, 1.0, 1.0) - std::pow(0.5 / (2.0 * ball_ratio_constant(2)), 1.0 / 3.0)) < 1e-12);
}

TEST_CASE("solve det D2u = 1 on the disc") {
    SolveConfig cfg;
    cfg.h = 1.0 / 16.0;
    const DiscreteSolution s = solve(Domain::ball(2), RhsSpec::degenerate(0.0), cfg);
    double err = 0.0;
    for (int i = 0; i < s.grid.size(); ++i) {
        const Vec x = s.grid.point(i);
        err = std::max(err, std::abs(s.values[i] - 0.5 * (x.squaredNorm() - 1.0)));
        CHECK(s.values[i] <= 0.0);
    }
    CHECK(err < 1e-5);
    CHECK(s.min_second_difference() >= -1e-8);
    CHECK(s.residual_norm < 1e-4);
    for (int i = 0; i < s.grid.size(); i += 7) CHECK(s.interpolate(s.grid.point(i)) == doctest::Approx(s.values[i]));
}

TEST_CASE("Gauss-Seidel and Newton inner solvers agree") {
    const Domain cap = Domain::parabola_cap(2, 1.0, 0.0);
    SolveConfig cfg;
    cfg.h = 1.0 / 16.0;
    const DiscreteSolution a = solve(cap, RhsSpec::power_singular(1.0), cfg);
    cfg.inner = InnerSolver::GaussSeidel;
    const DiscreteSolution b = solve(cap, RhsSpec::power_singular(1.0), cfg);
    REQUIRE(a.grid.size() == b.grid.size());
    CHECK(b.sweeps > 0);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("discrete comparison") {
    SolveConfig cfg;
    cfg.h = 1.0 / 16.0;
    const Domain cap = Domain::parabola_cap(2, 1.0, 0.0);
    const DiscreteSolution u1 = solve(cap, RhsSpec::power_singular(1.0, 2.0), cfg);
    const DiscreteSolution u2 = solve(cap, RhsSpec::power_singular(1.0, 1.0), cfg);
    REQUIRE(u1.grid.size() == u2.grid.size());
    for (int i = 0; i < u1.grid.size(); ++i) CHECK(u1.values[i] <= u2.values[i] + 1e-6);
    CHECK(u1.min_second_difference() >= -1e-6);
}

TEST_CASE("grid refinement is Cauchy on the p = 1 cap") {
    const Domain cap = Domain::parabola_cap(2, 1.0, 0.0);
    std::vector<DiscreteSolution> s;
    for (double h : {1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0}) {
        SolveConfig cfg;
        cfg.h = h;
        s.push_back(solve(cap, RhsSpec::power_singular(1.0), cfg));
    }
    auto gap = [](const DiscreteSolution& c, const DiscreteSolution& f) {
        double m = 0.0;
        for (int i = 0; i < c.grid.size(); ++i) m = std::max(m, std::abs(c.values[i] - f.interpolate(c.grid.point(i))));
        return m;
    };
    CHECK(gap(s[1], s[2]) < gap(s[0], s[1]));
}

TEST_CASE("solver input validation") {
    SolveConfig bad;
    bad.damping = 0.0;
    CHECK_THROWS(bad.validate());
    SolveConfig ok;
    CHECK_THROWS(solve(Domain::parabola_cap(2, 1.0, 0.0), RhsSpec::affine_sphere(1.0), ok));
    CHECK_THROWS(solve(Domain::ball(3), RhsSpec::power_singular(1.0), ok));
}
