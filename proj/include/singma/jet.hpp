#pragma once

#include <algorithm>

#include "singma/domain.hpp"

namespace singma {

/// Second-order data (u, Du, D^2u) of a function at a point.
struct Jet2 {
    double value = 0.0;
    Vec gradient;
    Mat hessian;

    int dim() const { return static_cast<int>(gradient.size()); }

    /// x . Du - u, the quantity appearing in the affine-sphere right-hand side.
    double legendre_gap(const Vec& x) const { return x.dot(gradient) - value; }

    bool hessian_symmetric(double rel_tol = 1e-12) const {
        const double scale = std::max(hessian.norm(), 1e-300);
        return (hessian - hessian.transpose()).norm() <= rel_tol * scale;
    }
};

}  // namespace singma
