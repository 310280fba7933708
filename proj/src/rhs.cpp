#include "singma/rhs.hpp"

#include <cmath>
#include <stdexcept>

namespace singma {

RhsSpec RhsSpec::power_singular(double p, double scale) {
    if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("power-singular rhs: p must be > 0");
    if (!(scale > 0.0)) throw std::invalid_argument("rhs: scale must be > 0");
    return {Kind::PowerSingular, p, scale};
}

RhsSpec RhsSpec::degenerate(double q, double scale) {
    if (!(q >= 0.0) || !std::isfinite(q)) throw std::invalid_argument("degenerate rhs: q must be >= 0");
    if (!(scale > 0.0)) throw std::invalid_argument("rhs: scale must be > 0");
    return {Kind::Degenerate, q, scale};
}

RhsSpec RhsSpec::affine_sphere(double k, double scale) {
    if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("affine-sphere rhs: k must be > 0");
    if (!(scale > 0.0)) throw std::invalid_argument("rhs: scale must be > 0");
    return {Kind::AffineSphere, k, scale};
}

double RhsSpec::evaluate(double u, const Vec& gradient, const Vec& x) const {
    const double a = std::abs(u);
    switch (kind) {
        case Kind::PowerSingular:
            if (!(a > 0.0)) throw std::domain_error("rhs: |u|^{-p} is singular at u = 0");
            return scale * std::exp(-parameter * std::log(a));
        case Kind::Degenerate:
            if (parameter == 0.0) return scale;
            return scale * std::pow(a, parameter);
        case Kind::AffineSphere: {
            if (!(a > 0.0)) throw std::domain_error("rhs: affine-sphere rhs is singular at u = 0");
            const double gap = x.dot(gradient) - u;
            if (!(gap > 0.0)) throw std::domain_error("rhs: affine-sphere rhs requires x.Du - u > 0");
            const double n = static_cast<double>(x.size());
            return scale * std::exp(-(n + 2.0 + parameter) * std::log(a) - parameter * std::log(gap));
        }
    }
    return 0.0;
}

double RhsSpec::evaluate_regularized(double u, double legendre_gap, int n, double eps) const {
    const double a = std::abs(u) + eps;
    switch (kind) {
        case Kind::PowerSingular:
            return scale * std::exp(-parameter * std::log(a));
        case Kind::Degenerate:
            if (parameter == 0.0) return scale;
            return scale * std::pow(std::abs(u), parameter);
        case Kind::AffineSphere:
            return scale * std::exp(-(n + 2.0 + parameter) * std::log(a) - parameter * std::log(legendre_gap));
    }
    return 0.0;
}

std::string RhsSpec::name() const {
    switch (kind) {
        case Kind::PowerSingular: return "power";
        case Kind::Degenerate: return "degenerate";
        case Kind::AffineSphere: return "affine";
    }
    return "?";
}

}  // namespace singma
