#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "singma/barriers.hpp"

namespace singma {

using ScalarField = std::function<double(const Vec&)>;

/// Central-difference jet of f at x with step h (value is f(x)).
Jet2 fd_jet(const ScalarField& f, const Vec& x, double h);

/// One line of a verification report. margin >= 0 means the check holds at every
/// sample; worst_margin is the smallest margin seen.
struct CheckRow {
    std::string barrier;
    std::string check;
    int samples = 0;
    double worst_margin = 0.0;
    bool pass = false;
};

struct VerifyOptions {
    int samples = 10000;
    std::uint64_t seed = 1;
    double margin = 1e-3;      // distance of samples from the singular set
    double tolerance = 1e-12;  // allowed negative margin for sign checks
};

/// Short label such as "super_w(n=2,p=1)".
std::string barrier_label(const Barrier& b);

/// Sign of det D^2 u / f - 1 with respect to the barrier's natural right-hand side:
/// >= 1 for subsolutions, <= 1 for supersolutions, = 1 (to 1e-10) for explicit solutions.
CheckRow check_pde_inequality(const Barrier& b, const VerifyOptions& opt);
/// Smallest Hessian eigenvalue relative to the largest, >= -1e-10.
CheckRow check_convexity(const Barrier& b, const VerifyOptions& opt);
/// Supersolutions and explicit solutions vanish on the boundary (1e-12); subsolutions are <= 0.
CheckRow check_boundary(const Barrier& b, const VerifyOptions& opt);
/// Closed-form jet against fd_jet at h = 1e-4, with a Richardson check at h/2.
/// Points stay at least 0.05 away from singular sets. Margin = rel_tol - rel_error.
CheckRow check_fd_jet(const Barrier& b, const VerifyOptions& opt, double rel_tol = 1e-4);
/// Closed-form determinant against the determinant of the finite-difference Hessian.
CheckRow check_fd_det(const Barrier& b, const VerifyOptions& opt, double rel_tol = 1e-4);
/// Value and determinant scaling identities between super_wt(n,p,t) and super_w(n,p).
CheckRow check_scaling(int n, double p, double t, const VerifyOptions& opt, double rel_tol = 1e-10);
/// For the k-family subsolution: x.Dv - v >= (x_n+gamma)^{a-1} a gamma0 (C - r^2).
CheckRow check_legendre_lower_bound(const Barrier& b, const VerifyOptions& opt);
/// |w| <= |w - lambda s| for the supersolution family.
CheckRow check_linear_part_monotone(const Barrier& b, const VerifyOptions& opt);

/// Barriers built for the (n, p) singular equation on the unit parabola cap: the
/// subsolution, and for p >= 1 the supersolutions w and w^t (t = 0.5, 1, 2), plus w~ for p >= n+2.
std::vector<Barrier> power_family_barriers(int n, double p);
/// Subsolution and supersolution of the affine-sphere equation on ParabolaCap(1, gamma).
std::vector<Barrier> affine_family_barriers(int n, double k, double gamma);

/// All checks for the (n, p) singular equation: subsolution, supersolutions and, for
/// p = 1 / (n, p) = (2, 4), the explicit solution.
std::vector<CheckRow> verify_power_family(int n, double p, const VerifyOptions& opt);
/// All checks for the affine-sphere equation on ParabolaCap(1, gamma).
std::vector<CheckRow> verify_affine_family(int n, double k, double gamma, const VerifyOptions& opt);

}  // namespace singma
