#pragma once

#include <map>
#include <string>

#include "singma/domain.hpp"
#include "singma/jet.hpp"
#include "singma/rhs.hpp"

namespace singma {

enum class BarrierKind {
    SubVAlpha,    // x_n^a (|x'|^2 - C)
    SuperW,       // C x_n - C x_n^a (1 - |x'|^2)^{1-a}
    SuperW2,      // C x_n - C x_n^a (1 - |x'|^2)^{(1-a)/2}
    SuperWt,      // C t^{2(1-p)/(n+p)} [x_n - x_n^a (t^2 - |x'|^2)^{1-a}]
    SubVAlphaK,   // (x_n + g)^a (|x'|^2 - C)
    SuperWK,      // C0 (x_n + g) - C0 (x_n + g)^a (1 - |x'|^2)^{1-a}
    ExplicitP1,   // -C(n,1) x_n^{2/(n+1)} (1 - |x'|^2)^{(n-1)/(n+1)}
    ExplicitUJL,  // -sqrt(3) (x_2/2)^{1/3} (1 - x_1^2)^{1/3}
};

std::string to_string(BarrierKind kind);
BarrierKind barrier_kind_from_string(const std::string& name);

using Record = std::map<std::string, std::string>;

/// Parameters of the cylindrical ansatz
///
///     u(x) = lambda * s + kappa * s^a * phi(|x'|^2),   s = x_n + gamma,
///
/// with phi(rho) = rho - C for the subsolution family and phi(rho) = (T - rho)^b
/// (kappa < 0) for the supersolution family. Every barrier in this library is an
/// instance of this form; the factories below fix the parameters.
struct BarrierParams {
    BarrierKind kind = BarrierKind::SubVAlpha;
    int n = 2;
    double a = 0.5;
    double b = 0.5;
    double c = 0.0;       // subsolution constant C
    double kappa = 1.0;   // amplitude (negative for the super family)
    double lambda = 0.0;  // coefficient of the linear term s
    double gamma = 0.0;
    double T = 1.0;
    // Equation data the barrier was built for.
    double p = 0.0;
    double k = 0.0;
    double t = 1.0;
    double diam = 0.0;
    double gamma0 = 0.0;
};

class Barrier {
public:
    explicit Barrier(const BarrierParams& params);

    const BarrierParams& params() const { return prm_; }
    BarrierKind kind() const { return prm_.kind; }
    int dim() const { return prm_.n; }
    bool is_subsolution() const {
        return prm_.kind == BarrierKind::SubVAlpha || prm_.kind == BarrierKind::SubVAlphaK;
    }
    bool is_explicit() const {
        return prm_.kind == BarrierKind::ExplicitP1 || prm_.kind == BarrierKind::ExplicitUJL;
    }
    double exponent_a() const { return prm_.a; }
    double exponent_b() const { return prm_.b; }
    /// C for the subsolution family; the amplitude multiplying s^a phi otherwise.
    double constant() const { return is_subsolution() ? prm_.c : -prm_.kappa; }

    /// The right-hand side the barrier is a sub/super/exact solution of.
    RhsSpec natural_rhs() const;
    /// Region of the matching construction. Explicit solutions live on the half-cylinder
    /// {|x'| < 1, x_n > 0}, truncated here at x_n < 1.
    bool natural_contains(const Vec& x) const;
    Box natural_box() const;

    /// Distance-like margin to the singular set {s = 0} (and {|x'| = sqrt(T)}).
    double singular_margin(const Vec& x) const;

    /// Value on the closure of the natural region (s >= 0, |x'|^2 <= T).
    double value(const Vec& x) const;

    /// Exact jet. Throws std::domain_error on the singular set.
    Jet2 eval_jet(const Vec& x) const;

    /// Closed-form Monge-Ampere determinant. Throws std::domain_error on the singular set.
    double det_hessian(const Vec& x) const;

    Record to_record() const;

private:
    void check_point(const Vec& x) const;
    void require_regular(double s, double rho) const;

    BarrierParams prm_;
};

// ---- constants -----------------------------------------------------------------

/// (1 + 2 diam^2) / (alpha (1 - alpha)).
double c_alpha(double diam, double alpha);

/// 2/(n+p).
double singular_exponent(int n, double p);
/// (2+k)/(2n+2k+2).
double affine_exponent(int n, double k);

/// Largest C with C^{n+p} (2b)^{n-1} a (1-a) <= 1 for a = 2/(n+p), b = 1-a. Requires p >= 1.
double sharp_constant_suplem(int n, double p);
/// Same with b = (1-a)/2. Requires p >= n+2.
double sharp_constant_suplem2(int n, double p);
/// [3^k (2b)^{n-1} a (1-a)]^{-1/(2n+2k+2)} with a = (2+k)/(2n+2k+2), b = 1-a.
double sharp_constant_suplemk(int n, double k, double gamma);
/// Smallest C >= 1 + diam^2 with
/// 2^{n-1} (a gamma0)^k [(a - a^2) C - a (1+a) diam^2] [C - diam^2]^{n+2k+2} >= 1.
double subsolution_constant_k(int n, double k, double gamma0, double diam);

// ---- factories -----------------------------------------------------------------

/// Subsolution with a = alpha and C = C_alpha(diam).
Barrier sub_valpha(int n, double alpha, double diam);
/// Subsolution with an explicit constant C (no admissibility check on C).
Barrier sub_valpha_with_constant(int n, double alpha, double constant);
/// Subsolution for det D^2 u = |u|^{-p}: alpha = 2/(n+p).
Barrier sub_valpha_for(int n, double p, double diam);
Barrier super_w(int n, double p);
Barrier super_w2(int n, double p);
Barrier super_wt(int n, double p, double t);
/// Requires gamma >= gamma0 > 0.
Barrier sub_valpha_k(int n, double k, double gamma, double gamma0, double diam);
Barrier super_wk(int n, double k, double gamma);
/// kind is ExplicitP1 (any n >= 2) or ExplicitUJL (n = 2 only).
Barrier explicit_solution(BarrierKind kind, int n);

Barrier barrier_from_record(const Record& record);

// ---- residuals -----------------------------------------------------------------

/// det D^2 u - f(u, Du, x) from a jet. Negative: locally a supersolution.
double residual(const Jet2& jet, const RhsSpec& rhs, const Vec& x);
/// Same using the barrier's closed-form determinant.
double residual(const Barrier& barrier, const RhsSpec& rhs, const Vec& x);
/// det D^2 u / f(u, Du, x); sub- and supersolution checks compare this ratio with 1.
double residual_ratio(const Barrier& barrier, const RhsSpec& rhs, const Vec& x);

}  // namespace singma
