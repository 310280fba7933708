#pragma once

#include <string>

#include "singma/jet.hpp"

namespace singma {

/// Right-hand side f(u, Du, x) of det D^2 u = f.
///
///   PowerSingular(p):  scale * |u|^{-p}
///   Degenerate(q):     scale * |u|^{q}        (q = 0 gives the constant scale)
///   AffineSphere(k):   scale * |u|^{-n-2-k} (x . Du - u)^{-k}
///
/// The scale factor defaults to 1; values other than 1 are used for comparison tests.
struct RhsSpec {
    enum class Kind { PowerSingular, Degenerate, AffineSphere };

    Kind kind = Kind::PowerSingular;
    double parameter = 1.0;  // p, q or k
    double scale = 1.0;

    static RhsSpec power_singular(double p, double scale = 1.0);
    static RhsSpec degenerate(double q, double scale = 1.0);
    static RhsSpec affine_sphere(double k, double scale = 1.0);

    bool needs_gradient() const { return kind == Kind::AffineSphere; }

    /// Evaluate at a point of dimension n. Throws std::domain_error when u >= 0 for the
    /// singular kinds, or when x . Du - u <= 0 for AffineSphere.
    double evaluate(double u, const Vec& gradient, const Vec& x) const;

    /// Same formula with |u| replaced by |u| + eps and the Legendre gap supplied
    /// directly; used by the regularised solver iteration.
    double evaluate_regularized(double u, double legendre_gap, int n, double eps) const;

    std::string name() const;
};

}  // namespace singma
