#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "singma/barriers.hpp"
#include "singma/domain.hpp"
#include "singma/rhs.hpp"

namespace singma {

struct Direction {
    int dx = 0;
    int dy = 0;
    double norm() const;
};

/// First `count` lattice directions (one per +-v line), grouped in orthogonal couples
/// (0,1), (2,3), ... of equal length. count is one of 2, 4, 8, 16.
std::vector<Direction> stencil_directions(int count);

/// One side of a second difference: either an interior neighbour or a boundary point
/// where the Dirichlet value 0 is imposed.
struct Arm {
    int neighbor = -1;    // interior node index, -1 for a boundary point
    double length = 0.0;  // physical distance from the node
};

struct GridSpec {
    double h = 0.0;
    Box box;
    int i_min = 0, j_min = 0;  // lattice index of the box corner; node (i, j) sits at (i h, j h)
    int nx = 0, ny = 0;
    std::vector<int> lattice;                // nx*ny entries: interior index or -1
    std::vector<std::array<int, 2>> nodes;   // lattice coordinates of interior nodes
    std::vector<Direction> directions;
    /// arms[(node * D + d) * 2 + 0] is the +v arm, [... + 1] the -v arm.
    std::vector<Arm> arms;
    /// Boundary intersection points, one per cut arm, in arm order.
    std::vector<std::array<double, 2>> boundary_points;

    int size() const { return static_cast<int>(nodes.size()); }
    int num_directions() const { return static_cast<int>(directions.size()); }
    const Arm& arm(int node, int dir, int side) const { return arms[(node * num_directions() + dir) * 2 + side]; }
    Vec point(int node) const;
    /// Interior index of lattice node (i, j) or -1.
    int index(int i, int j) const;
};

/// Lattice nodes of Z^2 h strictly inside the domain, with boundary intersections located
/// by bisection along each cut stencil ray to 1e-10. Throws for non-planar domains or an
/// empty mask.
GridSpec build_grid(const Domain& domain, double h, int stencil_width = 8);

/// Second difference along direction d (arm lengths may differ): A - B u(node).
double second_difference(const GridSpec& g, const Vec& values, int node, int dir);

/// min over orthogonal couples of the product of positive parts of the second differences.
double ma_operator(const GridSpec& g, const Vec& values, int node);

enum class InnerSolver { Newton, GaussSeidel };

struct SolveConfig {
    double h = 1.0 / 64.0;
    int stencil_width = 8;
    double eps0 = -1.0;        // <= 0 selects epsilon_zero(n, p, |Omega|)
    double eps_ratio = 0.5;
    double eps_floor = 1e-8;
    double damping = 0.5;
    double tol = 1e-7;         // sup-norm change of one outer iteration
    int max_outer = 2000;
    int max_sweeps = 200000;   // total Gauss-Seidel sweeps over all outer iterations
    InnerSolver inner = InnerSolver::Newton;
    double omega = 1.0;        // relaxation of the Gauss-Seidel sweeps
    int max_newton = 50;
    bool nested = true;        // start from interpolated coarser solves
    double coarsest_h = 1.0 / 16.0;
    double gap_floor = 1e-8;   // positivity floor for x.Du - u

    void validate() const;
};

class SolveError : public std::runtime_error {
public:
    SolveError(const std::string& what, double last_update) : std::runtime_error(what), last_update_(last_update) {}
    double last_update() const { return last_update_; }

private:
    double last_update_;
};

struct DiscreteSolution {
    GridSpec grid;
    Vec values;  // one per interior node
    RhsSpec rhs;
    double eps_final = 0.0;
    int iterations = 0;    // outer iterations on the finest grid
    long sweeps = 0;       // Gauss-Seidel sweeps, all levels
    int newton_steps = 0;  // Newton steps, all levels
    double last_update = 0.0;
    double residual_norm = 0.0;  // max |MA(u)/f(u) - 1|
    bool gap_floor_active = false;
    double runtime_seconds = 0.0;

    /// Bilinear interpolation of the nodal values; lattice nodes outside the domain count as 0.
    double interpolate(const Vec& x) const;
    /// Gradient at an interior node: three-point differences along the axes, using the
    /// actual arm lengths where an axis arm is cut by the boundary.
    std::array<double, 2> gradient(int node) const;
    /// Smallest second difference over all nodes and stencil directions.
    double min_second_difference() const;
    double sup_norm() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
};

/// Largest eps0 with eps0^n (2 eps0)^p C(n) |Omega|^{-2} < 1/2, C(n) = 4^n n^{2n} |B_1|^2.
double epsilon_zero(int n, double p, double area);
/// C(n) above.
double ball_ratio_constant(int n);

/// Solve det D^2 u = f(u, Du, x) in a planar convex domain with u = 0 on the boundary.
DiscreteSolution solve(const Domain& domain, const RhsSpec& rhs, const SolveConfig& cfg);

/// Solve with a caller-supplied initial guess on the finest grid (no nesting).
DiscreteSolution solve_from(const Domain& domain, const RhsSpec& rhs, const SolveConfig& cfg, const Vec& initial);

/// Default initial guess: the matched subsolution where one is available, else -dist.
Vec initial_guess(const Domain& domain, const RhsSpec& rhs, const GridSpec& grid);

}  // namespace singma
