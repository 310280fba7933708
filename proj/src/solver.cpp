#include "singma/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <Eigen/IterativeLinearSolvers>

namespace singma {

double Direction::norm() const { return std::hypot(static_cast<double>(dx), static_cast<double>(dy)); }

std::vector<Direction> stencil_directions(int count) {
    static const Direction all[16] = {{1, 0},  {0, 1},  {1, 1},  {1, -1}, {2, 1},  {-1, 2}, {1, 2},  {-2, 1},
                                      {3, 1},  {-1, 3}, {1, 3},  {-3, 1}, {3, 2},  {-2, 3}, {2, 3},  {-3, 2}};
    if (count != 2 && count != 4 && count != 8 && count != 16) {
        throw std::invalid_argument("stencil width must be 2, 4, 8 or 16 directions");
    }
    return {all, all + count};
}

Vec GridSpec::point(int node) const {
    Vec x(2);
    x << nodes[node][0] * h, nodes[node][1] * h;
    return x;
}

int GridSpec::index(int i, int j) const {
    const int a = i - i_min, b = j - j_min;
    if (a < 0 || b < 0 || a >= nx || b >= ny) return -1;
    return lattice[static_cast<size_t>(b) * nx + a];
}

GridSpec build_grid(const Domain& domain, double h, int stencil_width) {
    if (domain.dim() != 2) throw std::invalid_argument("build_grid: domain must be two-dimensional");
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("build_grid: h must be positive");
    GridSpec g;
    g.h = h;
    g.box = domain.bounding_box();
    g.directions = stencil_directions(stencil_width);
    g.i_min = static_cast<int>(std::ceil(g.box.lower(0) / h));
    g.j_min = static_cast<int>(std::ceil(g.box.lower(1) / h));
    const int i_max = static_cast<int>(std::floor(g.box.upper(0) / h));
    const int j_max = static_cast<int>(std::floor(g.box.upper(1) / h));
    g.nx = std::max(0, i_max - g.i_min + 1);
    g.ny = std::max(0, j_max - g.j_min + 1);
    g.lattice.assign(static_cast<size_t>(g.nx) * g.ny, -1);
    Vec x(2);
    for (int b = 0; b < g.ny; ++b) {
        for (int a = 0; a < g.nx; ++a) {
            x << (g.i_min + a) * h, (g.j_min + b) * h;
            if (domain.contains(x)) {
                g.lattice[static_cast<size_t>(b) * g.nx + a] = static_cast<int>(g.nodes.size());
                g.nodes.push_back({g.i_min + a, g.j_min + b});
            }
        }
    }
    if (g.nodes.empty()) throw std::invalid_argument("build_grid: no lattice node inside the domain at this h");

    const int D = g.num_directions();
    g.arms.resize(g.nodes.size() * D * 2);
    for (int node = 0; node < g.size(); ++node) {
        const Vec x0 = g.point(node);
        for (int d = 0; d < D; ++d) {
            for (int side = 0; side < 2; ++side) {
                const int sx = side == 0 ? g.directions[d].dx : -g.directions[d].dx;
                const int sy = side == 0 ? g.directions[d].dy : -g.directions[d].dy;
                Arm& arm = g.arms[(node * D + d) * 2 + side];
                const double full = h * g.directions[d].norm();
                const int nb = g.index(g.nodes[node][0] + sx, g.nodes[node][1] + sy);
                if (nb >= 0) {
                    arm.neighbor = nb;
                    arm.length = full;
                    continue;
                }
                Vec step(2);
                step << sx * h, sy * h;
                double lo = 0.0, hi = 1.0;
                while ((hi - lo) * full > 1e-10) {
                    const double mid = 0.5 * (lo + hi);
                    if (domain.contains(x0 + mid * step)) lo = mid; else hi = mid;
                }
                arm.neighbor = -1;
                arm.length = hi * full;
                const Vec p = x0 + hi * step;
                g.boundary_points.push_back({p(0), p(1)});
            }
        }
    }
    return g;
}

namespace {

inline double node_value(const Vec& u, int idx) { return idx >= 0 ? u[idx] : 0.0; }

}  // namespace

double second_difference(const GridSpec& g, const Vec& u, int node, int dir) {
    const Arm& p = g.arm(node, dir, 0);
    const Arm& m = g.arm(node, dir, 1);
    const double up = node_value(u, p.neighbor), um = node_value(u, m.neighbor);
    return 2.0 / (p.length + m.length) * ((up - u[node]) / p.length + (um - u[node]) / m.length);
}

double ma_operator(const GridSpec& g, const Vec& u, int node) {
    double best = std::numeric_limits<double>::infinity();
    for (int d = 0; d + 1 < g.num_directions(); d += 2) {
        const double a = std::max(0.0, second_difference(g, u, node, d));
        const double b = std::max(0.0, second_difference(g, u, node, d + 1));
        best = std::min(best, a * b);
    }
    return best;
}

void SolveConfig::validate() const {
    if (!(h > 0.0)) throw std::invalid_argument("solver.h must be > 0");
    stencil_directions(stencil_width);
    if (!(eps_ratio > 0.0 && eps_ratio < 1.0)) throw std::invalid_argument("solver.eps_ratio must lie in (0,1)");
    if (!(eps_floor >= 0.0)) throw std::invalid_argument("solver.eps_floor must be >= 0");
    if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("solver.damping must lie in (0,1]");
    if (!(tol > 0.0)) throw std::invalid_argument("solver.tol must be > 0");
    if (max_outer < 1) throw std::invalid_argument("solver.max_outer must be >= 1");
    if (max_sweeps < 1) throw std::invalid_argument("solver.max_sweeps must be >= 1");
    if (!(omega > 0.0 && omega < 2.0)) throw std::invalid_argument("solver.omega must lie in (0,2)");
    if (max_newton < 1) throw std::invalid_argument("solver.max_newton must be >= 1");
    if (!(gap_floor > 0.0)) throw std::invalid_argument("solver.gap_floor must be > 0");
}

double ball_ratio_constant(int n) {
    const double vb = unit_ball_volume(n);
    return std::pow(4.0, n) * std::pow(static_cast<double>(n), 2.0 * n) * vb * vb;
}

double epsilon_zero(int n, double p, double area) {
    if (n < 1) throw std::invalid_argument("epsilon_zero: n must be >= 1");
    if (!(p >= 0.0)) throw std::invalid_argument("epsilon_zero: p must be >= 0");
    if (!(area > 0.0)) throw std::invalid_argument("epsilon_zero: area must be > 0");
    const double Cn = ball_ratio_constant(n);
    auto lhs = [&](double e) { return std::pow(e, n) * std::pow(2.0 * e, p) * Cn / (area * area); };
    double lo = 0.0, hi = 1.0;
    while (lhs(hi) < 0.5) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (lhs(mid) < 0.5) lo = mid; else hi = mid;
    }
    return lo;
}

// ---- DiscreteSolution ------------------------------------------------------------

double DiscreteSolution::interpolate(const Vec& x) const {
    const double h = grid.h;
    const double fx = x(0) / h, fy = x(1) / h;
    const int i = static_cast<int>(std::floor(fx)), j = static_cast<int>(std::floor(fy));
    const double tx = fx - i, ty = fy - j;
    auto at = [&](int a, int b) { return node_value(values, grid.index(a, b)); };
    return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) + (1 - tx) * ty * at(i, j + 1) +
           tx * ty * at(i + 1, j + 1);
}

std::array<double, 2> DiscreteSolution::gradient(int node) const {
    std::array<double, 2> g{};
    const double u0 = values[node];
    // directions 0 and 1 are the axes
    for (int d = 0; d < 2; ++d) {
        const Arm& p = grid.arm(node, d, 0);
        const Arm& m = grid.arm(node, d, 1);
        const double hp = p.length, hm = m.length;
        const double up = node_value(values, p.neighbor), um = node_value(values, m.neighbor);
        g[d] = (hm * hm * (up - u0) - hp * hp * (um - u0)) / (hp * hm * (hp + hm));
    }
    return g;
}

double DiscreteSolution::min_second_difference() const {
    double worst = std::numeric_limits<double>::infinity();
    for (int node = 0; node < grid.size(); ++node) {
        for (int d = 0; d < grid.num_directions(); ++d) worst = std::min(worst, second_difference(grid, values, node, d));
    }
    return worst;
}

// ---- solve ------------------------------------------------------------------------

Vec initial_guess(const Domain& domain, const RhsSpec& rhs, const GridSpec& grid) {
    Vec u(grid.size());
    std::optional<Barrier> sub;
    const auto& kind = domain.kind();
    if (rhs.kind == RhsSpec::Kind::PowerSingular) {
        const auto* cap = std::get_if<ParabolaCap>(&kind);
        if ((cap && cap->gamma == 0.0) || std::holds_alternative<SphereCap>(kind)) {
            sub = sub_valpha_for(2, rhs.parameter, domain.diameter());
        }
    } else if (rhs.kind == RhsSpec::Kind::AffineSphere) {
        const auto* cap = std::get_if<ParabolaCap>(&kind);
        const OriginInfo origin = domain.contains_origin_interior();
        if (cap && cap->t == 1.0 && origin.interior) {
            sub = sub_valpha_k(2, rhs.parameter, cap->gamma, origin.gamma0, domain.diameter());
        }
    }
    for (int node = 0; node < grid.size(); ++node) {
        const Vec x = grid.point(node);
        u[node] = sub ? sub->value(x) : -domain.dist_to_boundary(x);
    }
    return u;
}

namespace {

// Flattened stencil for the sweeps.
struct Stencil {
    int pairs = 0;
    std::vector<int> nbr;     // (node * D + d) * 2 + side
    std::vector<double> wgt;  // matching weights of the convex combination c_d
    std::vector<double> B;    // node * D + d
    std::vector<int> order;   // checkerboard order

    explicit Stencil(const GridSpec& g) {
        const int D = g.num_directions();
        pairs = D / 2;
        nbr.resize(g.arms.size());
        wgt.resize(g.arms.size());
        B.resize(static_cast<size_t>(g.size()) * D);
        for (int node = 0; node < g.size(); ++node) {
            for (int d = 0; d < D; ++d) {
                const Arm& p = g.arm(node, d, 0);
                const Arm& m = g.arm(node, d, 1);
                const size_t k = (static_cast<size_t>(node) * D + d) * 2;
                nbr[k] = p.neighbor;
                nbr[k + 1] = m.neighbor;
                wgt[k] = m.length / (p.length + m.length);
                wgt[k + 1] = p.length / (p.length + m.length);
                B[static_cast<size_t>(node) * D + d] = 2.0 / (p.length * m.length);
            }
        }
        for (int color = 0; color < 2; ++color) {
            for (int node = 0; node < g.size(); ++node) {
                if (((g.nodes[node][0] + g.nodes[node][1]) & 1) == color) order.push_back(node);
            }
        }
    }

    double local_solve(const Vec& u, int node, double f) const {
        const int D = 2 * pairs;
        const size_t base = static_cast<size_t>(node) * D;
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < pairs; ++j) {
            const size_t ka = (base + 2 * j) * 2, kb = (base + 2 * j + 1) * 2;
            const double ca = wgt[ka] * node_value(u, nbr[ka]) + wgt[ka + 1] * node_value(u, nbr[ka + 1]);
            const double cb = wgt[kb] * node_value(u, nbr[kb]) + wgt[kb + 1] * node_value(u, nbr[kb + 1]);
            const double gg = f / (B[base + 2 * j] * B[base + 2 * j + 1]);
            const double delta = std::abs(ca - cb);
            const double y = gg > 0.0 ? 2.0 * gg / (delta + std::sqrt(delta * delta + 4.0 * gg)) : 0.0;
            best = std::min(best, std::min(ca, cb) - y);
        }
        return best;
    }
};

struct LevelResult {
    Vec u;
    double eps = 0.0;
    int outer = 0;
    long sweeps = 0;
    int newton_steps = 0;
    double last_update = 0.0;
    bool converged = false;
    bool gap_floor_active = false;
};

double legendre_gap_at(const DiscreteSolution& s, int node) {
    const auto g = s.gradient(node);
    const Vec x = s.grid.point(node);
    return x(0) * g[0] + x(1) * g[1] - s.values[node];
}

long gauss_seidel(const Stencil& st, const Vec& f, Vec& v, double omega, double tol, long budget) {
    long sweeps = 0;
    for (;;) {
        if (sweeps >= budget) return -1;
        double change = 0.0;
        for (int i : st.order) {
            const double delta = omega * (st.local_solve(v, i, f[i]) - v[i]);
            v[i] += delta;
            change = std::max(change, std::abs(delta));
        }
        ++sweeps;
        if (!std::isfinite(change)) return -1;
        if (change < tol) return sweeps;
    }
}

// Newton on u - T(u) = 0, T the map of the local solves. T is concave and monotone with
// row sums of dT/du at most 1, so the Jacobian I - dT/du is an M-matrix and Newton
// iterates decrease monotonically after the first step.
// Returns the number of steps, or -1 without convergence.
int newton(const Stencil& st, const Vec& f, Vec& v, double step_tol, int max_steps) {
    const int N = static_cast<int>(v.size());
    const int D = 2 * st.pairs;
    std::vector<Eigen::Triplet<double>> trip;
    Vec G(N);
    for (int step = 1; step <= max_steps; ++step) {
        trip.clear();
        trip.reserve(static_cast<size_t>(N) * 5);
        for (int i = 0; i < N; ++i) {
            const size_t base = static_cast<size_t>(i) * D;
            double best = std::numeric_limits<double>::infinity();
            size_t k_lo = 0, k_hi = 0;
            double d_lo = 1.0, d_hi = 0.0;
            for (int j = 0; j < st.pairs; ++j) {
                const size_t ka = (base + 2 * j) * 2, kb = (base + 2 * j + 1) * 2;
                const double ca = st.wgt[ka] * node_value(v, st.nbr[ka]) + st.wgt[ka + 1] * node_value(v, st.nbr[ka + 1]);
                const double cb = st.wgt[kb] * node_value(v, st.nbr[kb]) + st.wgt[kb + 1] * node_value(v, st.nbr[kb + 1]);
                const double g = f[i] / (st.B[base + 2 * j] * st.B[base + 2 * j + 1]);
                const double delta = std::abs(ca - cb);
                const double root = std::sqrt(delta * delta + 4.0 * g);
                const double y = g > 0.0 ? 2.0 * g / (delta + root) : 0.0;
                const double uj = std::min(ca, cb) - y;
                if (uj < best) {
                    best = uj;
                    // dy/d(delta) lies in (-1/2, 0]
                    const double dy = root > 0.0 ? 0.5 * (delta / root - 1.0) : -0.5;
                    const bool a_low = ca <= cb;
                    k_lo = a_low ? ka : kb;
                    k_hi = a_low ? kb : ka;
                    d_lo = 1.0 + dy;
                    d_hi = -dy;
                }
            }
            G[i] = v[i] - best;
            trip.emplace_back(i, i, 1.0);
            for (int side = 0; side < 2; ++side) {
                if (st.nbr[k_lo + side] >= 0) trip.emplace_back(i, st.nbr[k_lo + side], -d_lo * st.wgt[k_lo + side]);
                if (st.nbr[k_hi + side] >= 0) trip.emplace_back(i, st.nbr[k_hi + side], -d_hi * st.wgt[k_hi + side]);
            }
        }
        Eigen::SparseMatrix<double> J(N, N);
        J.setFromTriplets(trip.begin(), trip.end());
        J.makeCompressed();
        // BiCGSTAB with incomplete LU; sparse LU if that stalls
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> krylov;
        krylov.preconditioner().setDroptol(1e-4);
        krylov.setTolerance(1e-12);
        krylov.compute(J);
        Vec delta = krylov.solve(G);
        if (krylov.info() != Eigen::Success || !delta.allFinite()) {
            Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
            lu.compute(J);
            if (lu.info() != Eigen::Success) return -1;
            delta = lu.solve(G);
        }
        if (!delta.allFinite()) return -1;
        v -= delta;
        const double moved = delta.cwiseAbs().maxCoeff();
        if (moved < step_tol) return step;
    }
    return -1;
}

LevelResult solve_level(const Domain& domain, const RhsSpec& rhs, const SolveConfig& cfg, const GridSpec& grid,
                        Vec u, double eps, long sweep_budget) {
    const Stencil st(grid);
    const int N = grid.size();
    const bool singular = rhs.kind != RhsSpec::Kind::Degenerate;
    if (!singular) eps = 0.0;
    (void)domain;

    LevelResult res;
    Vec f(N);
    DiscreteSolution view;
    view.grid = grid;
    for (int outer = 1; outer <= cfg.max_outer; ++outer) {
        res.gap_floor_active = false;
        if (rhs.kind == RhsSpec::Kind::AffineSphere) view.values = u;
        for (int i = 0; i < N; ++i) {
            double gap = 1.0;
            if (rhs.kind == RhsSpec::Kind::AffineSphere) {
                gap = legendre_gap_at(view, i);
                if (gap < cfg.gap_floor) {
                    gap = cfg.gap_floor;
                    res.gap_floor_active = true;
                }
            }
            f[i] = rhs.evaluate_regularized(u[i], gap, 2, eps);
        }

        // loose inner solves while the outer iteration is still moving
        const double inner_tol = outer == 1 ? 0.1 * cfg.tol : std::max(0.1 * cfg.tol, 0.1 * res.last_update);
        Vec v = u;
        bool done = false;
        if (cfg.inner == InnerSolver::Newton) {
            const int steps = newton(st, f, v, inner_tol, cfg.max_newton);
            if (steps >= 0) {
                res.newton_steps += steps;
                done = true;
            } else {
                v = u;  // fall back to sweeps from the last accepted iterate
            }
        }
        if (!done) {
            const long used = gauss_seidel(st, f, v, cfg.omega, inner_tol, sweep_budget - res.sweeps);
            if (used < 0) throw SolveError("solver: Gauss-Seidel sweeps did not converge", res.last_update);
            res.sweeps += used;
        }
        const Vec next = cfg.damping * v + (1.0 - cfg.damping) * u;
        res.last_update = (next - u).cwiseAbs().maxCoeff();
        u = next;
        res.outer = outer;
        const bool at_floor = !singular || eps <= cfg.eps_floor;
        if (at_floor && res.last_update < cfg.tol) {
            res.converged = true;
            break;
        }
        if (singular && eps > cfg.eps_floor) eps = std::max(cfg.eps_floor, eps * cfg.eps_ratio);
    }
    res.u = std::move(u);
    res.eps = eps;
    return res;
}

DiscreteSolution finish(const RhsSpec& rhs, GridSpec grid, LevelResult&& lr, long sweeps, int newton_steps) {
    DiscreteSolution s;
    s.grid = std::move(grid);
    s.values = std::move(lr.u);
    s.rhs = rhs;
    s.eps_final = lr.eps;
    s.iterations = lr.outer;
    s.sweeps = sweeps;
    s.newton_steps = newton_steps;
    s.last_update = lr.last_update;
    s.gap_floor_active = lr.gap_floor_active;
    double worst = 0.0;
    for (int i = 0; i < s.grid.size(); ++i) {
        double gap = 1.0;
        if (rhs.kind == RhsSpec::Kind::AffineSphere) gap = std::max(legendre_gap_at(s, i), 1e-300);
        const double f = rhs.evaluate_regularized(s.values[i], gap, 2, s.eps_final);
        worst = std::max(worst, std::abs(ma_operator(s.grid, s.values, i) / f - 1.0));
    }
    s.residual_norm = worst;
    return s;
}

double initial_eps(const Domain& domain, const RhsSpec& rhs, const SolveConfig& cfg) {
    if (rhs.kind == RhsSpec::Kind::Degenerate) return 0.0;
    if (cfg.eps0 > 0.0) return cfg.eps0;
    // the affine-sphere equation is regularised like |u|^{-(n+2+k)}
    const double p = rhs.kind == RhsSpec::Kind::PowerSingular ? rhs.parameter : 4.0 + rhs.parameter;
    return std::max(cfg.eps_floor, epsilon_zero(2, p, domain.volume()));
}

void check_inputs(const Domain& domain, const RhsSpec& rhs, const SolveConfig& cfg) {
    cfg.validate();
    if (domain.dim() != 2) throw std::invalid_argument("solve: only two-dimensional domains are supported");
    if (rhs.kind == RhsSpec::Kind::AffineSphere && !domain.contains_origin_interior().interior) {
        throw std::invalid_argument("solve: the affine-sphere equation needs the origin inside the domain");
    }
}

}  // namespace

DiscreteSolution solve_from(const Domain& domain, const RhsSpec& rhs, const SolveConfig& cfg, const Vec& initial) {
    check_inputs(domain, rhs, cfg);
    const auto t0 = std::chrono::steady_clock::now();
    GridSpec grid = build_grid(domain, cfg.h, cfg.stencil_width);
    if (initial.size() != grid.size()) throw std::invalid_argument("solve: initial guess has the wrong size");
    LevelResult lr = solve_level(domain, rhs, cfg, grid, initial, initial_eps(domain, rhs, cfg), cfg.max_sweeps);
    if (!lr.converged) throw SolveError("solver: no convergence within max_outer iterations", lr.last_update);
    const long sweeps = lr.sweeps;
    const int steps = lr.newton_steps;
    DiscreteSolution s = finish(rhs, std::move(grid), std::move(lr), sweeps, steps);
    s.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return s;
}

DiscreteSolution solve(const Domain& domain, const RhsSpec& rhs, const SolveConfig& cfg) {
    check_inputs(domain, rhs, cfg);
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> hs{cfg.h};
    if (cfg.nested) {
        while (2.0 * hs.back() <= cfg.coarsest_h * (1.0 + 1e-12)) hs.push_back(2.0 * hs.back());
    }
    std::reverse(hs.begin(), hs.end());

    double eps = initial_eps(domain, rhs, cfg);
    long sweeps = 0;
    int steps = 0;
    std::optional<DiscreteSolution> coarse;
    for (size_t level = 0; level < hs.size(); ++level) {
        const bool finest = level + 1 == hs.size();
        GridSpec grid;
        try {
            grid = build_grid(domain, hs[level], cfg.stencil_width);
        } catch (const std::invalid_argument&) {
            if (finest) throw;
            continue;  // too coarse to hold a node
        }
        Vec u0(grid.size());
        if (coarse) {
            for (int i = 0; i < grid.size(); ++i) u0[i] = coarse->interpolate(grid.point(i));
        } else {
            u0 = initial_guess(domain, rhs, grid);
        }
        LevelResult lr = solve_level(domain, rhs, cfg, grid, std::move(u0), eps, cfg.max_sweeps - sweeps);
        sweeps += lr.sweeps;
        steps += lr.newton_steps;
        if (!lr.converged) throw SolveError("solver: no convergence within max_outer iterations", lr.last_update);
        eps = lr.eps;
        coarse = finish(rhs, std::move(grid), std::move(lr), sweeps, steps);
    }
    coarse->runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::move(*coarse);
}

}  // namespace singma
