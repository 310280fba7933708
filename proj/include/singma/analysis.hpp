#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "singma/barriers.hpp"
#include "singma/domain.hpp"
#include "singma/solver.hpp"

namespace singma {

/// (dist, |u|) pairs along a ray.
using RaySamples = std::vector<std::pair<double, double>>;

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double dist_min = 0.0;
    double dist_max = 0.0;
    int n_points = 0;
};

/// Least-squares line through (log dist, log |u|) for the samples with dist in
/// [dist_min, dist_max]. Needs at least 5 such samples with |u| > 0.
FitResult fit_exponent(const RaySamples& samples, double dist_min, double dist_max);

/// `count` log-spaced points (0, d - shift), d in [dist_min, dist_max], of the
/// interpolated solution. shift = gamma puts d at distance from {x_2 = -gamma}.
RaySamples axis_samples(const DiscreteSolution& u, double shift, double dist_min, double dist_max, int count = 40);
/// Same along the x_n axis of a barrier.
RaySamples axis_samples(const Barrier& b, double dist_min, double dist_max, int count = 40);

struct BootstrapTrace {
    int n = 0;
    double q = 0.0;
    std::vector<double> beta;   // beta_0 .. beta_steps
    std::vector<double> error;  // 2/(n-q) - beta_k from the recurrence
    double limit = 0.0;
};

/// beta_0 = 2/n, beta_{k+1} = (beta_k q + 2)/n. Requires n >= 3, 0 < q <= n - 2.
BootstrapTrace bootstrap(int n, double q, int steps);
/// (2q/(n(n-q))) (q/n)^k.
double bootstrap_error_closed_form(int n, double q, int k);
/// Smallest positive k with (2q/(n(n-q))) (q/n)^k < 2/(n-q) - target. Requires target < 2/(n-q).
int bootstrap_minimal_steps(int n, double q, double target);
/// Smallest positive k with beta_k > target, found by running the recurrence.
int bootstrap_minimal_steps_by_iteration(int n, double q, double target);

struct ComparisonResult {
    bool pass = false;
    double worst_gap = 0.0;  // min of upper - lower
    Vec worst_point;
    int samples = 0;
};

using Field = std::function<double(const Vec&)>;

/// upper >= lower - tolerance at seeded interior samples of the domain.
ComparisonResult check_comparison(const Field& lower, const Field& upper, const Domain& domain, int n_samples,
                                  std::uint64_t seed = 1, double tolerance = 0.0, double margin = 1e-3);
/// Same at every interior node of a solution's grid, with the solution as one side.
ComparisonResult check_comparison_nodes(const Field& lower, const Field& upper, const GridSpec& grid,
                                        double tolerance = 0.0);

/// trace(AB) >= n (det A)^{1/n} (det B)^{1/n} within 1e-12 relative slack.
/// Throws for non-symmetric input or eigenvalues below -1e-10.
bool trace_inequality_check(const Mat& A, const Mat& B);

/// ((n-4)k - (2n+4)) / (2n+2k+2).
double mixc_exponent(int n, double k);
/// |-a(n+2+k) - k(a-1) - mixc_exponent(n,k)| with a = (2+k)/(2n+2k+2).
double mixc_identity_residual(int n, double k);

struct MixcReport {
    FitResult fit;         // slope of f against dist to {x_2 = -gamma}
    double exponent = 0.0; // analytic e
    double constant = 0.0; // smallest C with f <= C dist^e at the samples
    double identity_residual = 0.0;
    double gap_at_origin = 0.0;   // discrete x.Du - u at the origin
    double gap_lower_bound = 0.0; // C0 gamma^a - C0 gamma
    int samples = 0;
};

/// f = |u|^{-n-2-k} (x.Du - u)^{-k} at the axis nodes with dist in the window.
/// Throws std::domain_error when the discrete x.Du - u is not above the solver's floor.
MixcReport mixc_probe(const DiscreteSolution& u, double k, double gamma, double dist_min, double dist_max,
                      double gap_floor = 1e-8);

struct SupNormReport {
    bool lower_pass = false;
    bool upper_pass = false;
    double sup_norm = 0.0;
    double lower_bound = 0.0;  // c(n,p) |Omega|^{2/(n+p)}
    double lower_ratio = 0.0;  // sup_norm / lower_bound
    double upper_ratio = 0.0;  // max_x |u(x)| / (C_alpha dist^alpha)
    bool pass() const { return lower_pass && upper_pass; }
};

/// C(n)^{-1/(n+p)}.
double sup_norm_lower_constant(int n, double p);
SupNormReport sup_norm_bound_check(const DiscreteSolution& u, const Domain& domain, int n, double p);

}  // namespace singma
