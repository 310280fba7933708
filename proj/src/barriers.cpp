#include "singma/barriers.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace singma {

namespace {

// Powers of strictly positive bases only.
double pos_pow(double base, double e) {
    if (!(base > 0.0)) throw std::domain_error("barrier: non-positive base in fractional power");
    return std::exp(e * std::log(base));
}

double closed_pow(double base, double e) { return base == 0.0 ? 0.0 : pos_pow(base, e); }

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void require_n(int n) {
    if (n < 2) throw std::invalid_argument("barrier: dimension n must be >= 2");
}

double get(const Record& r, const std::string& key) {
    auto it = r.find(key);
    if (it == r.end()) throw std::invalid_argument("barrier record: missing field '" + key + "'");
    try {
        size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("barrier record: field '" + key + "' is not a number");
    }
}

}  // namespace

std::string to_string(BarrierKind kind) {
    switch (kind) {
        case BarrierKind::SubVAlpha: return "sub_valpha";
        case BarrierKind::SuperW: return "super_w";
        case BarrierKind::SuperW2: return "super_w2";
        case BarrierKind::SuperWt: return "super_wt";
        case BarrierKind::SubVAlphaK: return "sub_valpha_k";
        case BarrierKind::SuperWK: return "super_wk";
        case BarrierKind::ExplicitP1: return "explicit_p1";
        case BarrierKind::ExplicitUJL: return "explicit_ujl";
    }
    return "?";
}

BarrierKind barrier_kind_from_string(const std::string& name) {
    for (auto k : {BarrierKind::SubVAlpha, BarrierKind::SuperW, BarrierKind::SuperW2, BarrierKind::SuperWt,
                   BarrierKind::SubVAlphaK, BarrierKind::SuperWK, BarrierKind::ExplicitP1,
                   BarrierKind::ExplicitUJL}) {
        if (to_string(k) == name) return k;
    }
    throw std::invalid_argument("unknown barrier kind '" + name + "'");
}

// ---- constants -----------------------------------------------------------------

double c_alpha(double diam, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("c_alpha: alpha must lie in (0,1)");
    if (!(diam > 0.0)) throw std::invalid_argument("c_alpha: diam must be positive");
    return (1.0 + 2.0 * diam * diam) / (alpha * (1.0 - alpha));
}

double singular_exponent(int n, double p) { return 2.0 / (n + p); }

double affine_exponent(int n, double k) { return (2.0 + k) / (2.0 * n + 2.0 * k + 2.0); }

double sharp_constant_suplem(int n, double p) {
    require_n(n);
    if (!(p >= 1.0)) throw std::invalid_argument("sharp_constant_suplem: requires p >= 1");
    const double a = singular_exponent(n, p);
    const double b = 1.0 - a;
    return pos_pow(pos_pow(2.0 * b, n - 1) * a * (1.0 - a), -1.0 / (n + p));
}

double sharp_constant_suplem2(int n, double p) {
    require_n(n);
    if (!(p >= n + 2.0)) throw std::invalid_argument("sharp_constant_suplem2: requires p >= n + 2");
    const double a = singular_exponent(n, p);
    const double b = 0.5 * (1.0 - a);
    return pos_pow(pos_pow(2.0 * b, n - 1) * a * (1.0 - a), -1.0 / (n + p));
}

double sharp_constant_suplemk(int n, double k, double gamma) {
    require_n(n);
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("sharp_constant_suplemk: gamma must lie in (0,1)");
    if (!(k >= 0.0)) throw std::invalid_argument("sharp_constant_suplemk: k must be >= 0");
    const double a = affine_exponent(n, k);
    const double b = 1.0 - a;
    const double m = 2.0 * n + 2.0 * k + 2.0;
    return pos_pow(pos_pow(3.0, k) * pos_pow(2.0 * b, n - 1) * a * (1.0 - a), -1.0 / m);
}

double subsolution_constant_k(int n, double k, double gamma0, double diam) {
    require_n(n);
    if (!(gamma0 > 0.0)) throw std::invalid_argument("sub_valpha_k: gamma0 must be > 0");
    if (!(diam > 0.0)) throw std::invalid_argument("sub_valpha_k: diam must be > 0");
    const double a = affine_exponent(n, k);
    const double d2 = diam * diam;
    // log of the left-hand side; -inf where a bracket is non-positive
    auto log_lhs = [&](double C) {
        const double first = (a - a * a) * C - a * (1.0 + a) * d2;
        const double second = C - d2;
        if (first <= 0.0 || second <= 0.0) return -std::numeric_limits<double>::infinity();
        return (n - 1) * std::log(2.0) + k * std::log(a * gamma0) + std::log(first) +
               (n + 2.0 * k + 2.0) * std::log(second);
    };
    double lo = 1.0 + d2;
    if (log_lhs(lo) >= 0.0) return lo;
    double hi = 2.0 * lo;
    while (log_lhs(hi) < 0.0) hi *= 2.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (log_lhs(mid) >= 0.0) hi = mid; else lo = mid;
    }
    return hi;
}

// ---- Barrier -------------------------------------------------------------------

Barrier::Barrier(const BarrierParams& params) : prm_(params) {
    require_n(prm_.n);
    if (!(prm_.a > 0.0 && prm_.a < 1.0)) throw std::invalid_argument("barrier: exponent a must lie in (0,1)");
    if (!is_subsolution()) {
        if (!(prm_.b > 0.0 && prm_.b < 1.0)) throw std::invalid_argument("barrier: exponent b must lie in (0,1)");
        if (prm_.a + prm_.b > 1.0 + 1e-15) throw std::invalid_argument("barrier: convexity needs a + b <= 1");
        if (!(prm_.kappa < 0.0)) throw std::invalid_argument("barrier: supersolution amplitude must be positive");
        if (!(prm_.T > 0.0)) throw std::invalid_argument("barrier: T must be positive");
    } else if (!(prm_.kappa > 0.0)) {
        throw std::invalid_argument("barrier: subsolution amplitude must be positive");
    }
}

RhsSpec Barrier::natural_rhs() const {
    switch (prm_.kind) {
        case BarrierKind::SubVAlphaK:
        case BarrierKind::SuperWK:
            return RhsSpec::affine_sphere(prm_.k);
        case BarrierKind::SubVAlpha:
            // v_alpha is a subsolution for p = 2/alpha - n; negative p means |u|^{q}, q = -p
            if (prm_.p > 0.0) return RhsSpec::power_singular(prm_.p);
            return RhsSpec::degenerate(-prm_.p);
        default:
            return RhsSpec::power_singular(prm_.p);
    }
}

bool Barrier::natural_contains(const Vec& x) const {
    check_point(x);
    const int n = prm_.n;
    const double rho = x.head(n - 1).squaredNorm();
    const double s = x(n - 1) + prm_.gamma;
    switch (prm_.kind) {
        case BarrierKind::SuperW2:
            return s > 0.0 && x.squaredNorm() < 1.0;
        case BarrierKind::ExplicitP1:
        case BarrierKind::ExplicitUJL:
            return s > 0.0 && s < 1.0 && rho < 1.0;
        case BarrierKind::SuperWt:
            return s > 0.0 && s < prm_.T - rho;
        default:
            return s > 0.0 && s < 1.0 - rho;
    }
}

Box Barrier::natural_box() const {
    const int n = prm_.n;
    const double half = prm_.kind == BarrierKind::SuperWt ? prm_.t : 1.0;
    Box box{Vec::Constant(n, -half), Vec::Constant(n, half)};
    box.lower(n - 1) = -prm_.gamma;
    box.upper(n - 1) = (prm_.kind == BarrierKind::SuperWt ? prm_.T : 1.0) - prm_.gamma;
    return box;
}

void Barrier::check_point(const Vec& x) const {
    if (x.size() != prm_.n) throw std::invalid_argument("barrier: dimension mismatch");
    if (!x.allFinite()) throw std::invalid_argument("barrier: point is not finite");
}

void Barrier::require_regular(double s, double rho) const {
    if (!(s > 0.0)) throw std::domain_error("barrier: evaluation on the singular set x_n + gamma = 0");
    if (!is_subsolution() && !(prm_.T - rho > 0.0)) {
        throw std::domain_error("barrier: evaluation on the singular set |x'| = t");
    }
}

double Barrier::singular_margin(const Vec& x) const {
    check_point(x);
    const int n = prm_.n;
    const double s = x(n - 1) + prm_.gamma;
    if (is_subsolution()) return s;
    return std::min(s, std::sqrt(prm_.T) - x.head(n - 1).norm());
}

double Barrier::value(const Vec& x) const {
    check_point(x);
    const int n = prm_.n;
    const double rho = x.head(n - 1).squaredNorm();
    const double s = x(n - 1) + prm_.gamma;
    if (s < 0.0) throw std::domain_error("barrier: x_n + gamma < 0 is outside the barrier's domain");
    const double sa = closed_pow(s, prm_.a);
    if (is_subsolution()) return prm_.lambda * s + prm_.kappa * sa * (rho - prm_.c);
    double gap = prm_.T - rho;
    // points on |x'| = sqrt(T) up to rounding
    if (gap < 0.0 && gap > -8.0 * std::numeric_limits<double>::epsilon() * prm_.T) gap = 0.0;
    if (gap < 0.0) throw std::domain_error("barrier: |x'| exceeds the barrier's radius");
    return prm_.lambda * s + prm_.kappa * sa * closed_pow(gap, prm_.b);
}

Jet2 Barrier::eval_jet(const Vec& x) const {
    check_point(x);
    const int n = prm_.n;
    const int m = n - 1;
    const double rho = x.head(m).squaredNorm();
    const double s = x(m) + prm_.gamma;
    require_regular(s, rho);

    // phi and its rho-derivatives
    double phi, dphi, ddphi;
    if (is_subsolution()) {
        phi = rho - prm_.c;
        dphi = 1.0;
        ddphi = 0.0;
    } else {
        const double gap = prm_.T - rho;
        const double gb = pos_pow(gap, prm_.b);
        phi = gb;
        dphi = -prm_.b * gb / gap;
        ddphi = prm_.b * (prm_.b - 1.0) * gb / (gap * gap);
    }
    const double a = prm_.a;
    const double k = prm_.kappa;
    const double sa = pos_pow(s, a);

    Jet2 jet;
    jet.value = prm_.lambda * s + k * sa * phi;
    jet.gradient.resize(n);
    jet.hessian.resize(n, n);
    for (int i = 0; i < m; ++i) {
        jet.gradient(i) = 2.0 * k * sa * dphi * x(i);
        for (int j = 0; j < m; ++j) {
            jet.hessian(i, j) = k * sa * ((i == j ? 2.0 * dphi : 0.0) + 4.0 * ddphi * x(i) * x(j));
        }
        const double mixed = 2.0 * k * a * (sa / s) * dphi * x(i);
        jet.hessian(i, m) = mixed;
        jet.hessian(m, i) = mixed;
    }
    jet.gradient(m) = prm_.lambda + k * a * (sa / s) * phi;
    jet.hessian(m, m) = k * a * (a - 1.0) * (sa / (s * s)) * phi;
    return jet;
}

double Barrier::det_hessian(const Vec& x) const {
    check_point(x);
    const int n = prm_.n;
    const double rho = x.head(n - 1).squaredNorm();
    const double s = x(n - 1) + prm_.gamma;
    require_regular(s, rho);
    const double a = prm_.a;
    if (is_subsolution()) {
        // 2^{n-1} s^{na-2} [a(1-a) C - (a^2 + a) r^2], scaled by kappa^n
        return pos_pow(prm_.kappa, n) * pos_pow(2.0, n - 1) * pos_pow(s, n * a - 2.0) *
               (a * (1.0 - a) * prm_.c - (a * a + a) * rho);
    }
    // K^n (2b)^{n-1} a s^{na-2} (T - r^2)^{n(b-1)} [(1-a) T + (1-a-2b) r^2]
    const double b = prm_.b;
    const double K = -prm_.kappa;
    return pos_pow(K, n) * pos_pow(2.0 * b, n - 1) * a * pos_pow(s, n * a - 2.0) *
           pos_pow(prm_.T - rho, n * (b - 1.0)) * ((1.0 - a) * prm_.T + (1.0 - a - 2.0 * b) * rho);
}

Record Barrier::to_record() const {
    Record r;
    r["kind"] = to_string(prm_.kind);
    r["n"] = std::to_string(prm_.n);
    switch (prm_.kind) {
        case BarrierKind::SubVAlpha:
            r["alpha"] = fmt17(prm_.a);
            r["C"] = fmt17(prm_.c);
            break;
        case BarrierKind::SuperW:
        case BarrierKind::SuperW2:
            r["p"] = fmt17(prm_.p);
            break;
        case BarrierKind::SuperWt:
            r["p"] = fmt17(prm_.p);
            r["t"] = fmt17(prm_.t);
            break;
        case BarrierKind::SubVAlphaK:
            r["k"] = fmt17(prm_.k);
            r["gamma"] = fmt17(prm_.gamma);
            r["gamma0"] = fmt17(prm_.gamma0);
            r["diam"] = fmt17(prm_.diam);
            break;
        case BarrierKind::SuperWK:
            r["k"] = fmt17(prm_.k);
            r["gamma"] = fmt17(prm_.gamma);
            break;
        case BarrierKind::ExplicitP1:
        case BarrierKind::ExplicitUJL:
            break;
    }
    return r;
}

// ---- factories -----------------------------------------------------------------

Barrier sub_valpha_with_constant(int n, double alpha, double constant) {
    require_n(n);
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("sub_valpha: alpha must lie in (0,1)");
    if (!(constant > 0.0)) throw std::invalid_argument("sub_valpha: C must be positive");
    BarrierParams p;
    p.kind = BarrierKind::SubVAlpha;
    p.n = n;
    p.a = alpha;
    p.b = 1.0 - alpha;
    p.c = constant;
    p.kappa = 1.0;
    p.p = 2.0 / alpha - n;
    return Barrier(p);
}

Barrier sub_valpha(int n, double alpha, double diam) {
    Barrier b = sub_valpha_with_constant(n, alpha, c_alpha(diam, alpha));
    BarrierParams p = b.params();
    p.diam = diam;
    return Barrier(p);
}

Barrier sub_valpha_for(int n, double p, double diam) {
    if (!(p > 0.0)) throw std::invalid_argument("sub_valpha: p must be > 0");
    return sub_valpha(n, singular_exponent(n, p), diam);
}

namespace {
Barrier super_family(BarrierKind kind, int n, double a, double b, double amplitude, double T, double p) {
    BarrierParams prm;
    prm.kind = kind;
    prm.n = n;
    prm.a = a;
    prm.b = b;
    prm.kappa = -amplitude;
    prm.lambda = amplitude;
    prm.T = T;
    prm.p = p;
    return Barrier(prm);
}
}  // namespace

Barrier super_w(int n, double p) {
    const double C = sharp_constant_suplem(n, p);
    const double a = singular_exponent(n, p);
    return super_family(BarrierKind::SuperW, n, a, 1.0 - a, C, 1.0, p);
}

Barrier super_w2(int n, double p) {
    const double C = sharp_constant_suplem2(n, p);
    const double a = singular_exponent(n, p);
    return super_family(BarrierKind::SuperW2, n, a, 0.5 * (1.0 - a), C, 1.0, p);
}

Barrier super_wt(int n, double p, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("super_wt: t must be > 0");
    const double C = sharp_constant_suplem(n, p);
    const double a = singular_exponent(n, p);
    const double amplitude = C * pos_pow(t, 2.0 * (1.0 - p) / (n + p));
    Barrier w = super_family(BarrierKind::SuperWt, n, a, 1.0 - a, amplitude, t * t, p);
    BarrierParams prm = w.params();
    prm.t = t;
    return Barrier(prm);
}

Barrier sub_valpha_k(int n, double k, double gamma, double gamma0, double diam) {
    require_n(n);
    if (!(k > 0.0)) throw std::invalid_argument("sub_valpha_k: k must be > 0");
    if (!(gamma0 > 0.0)) throw std::invalid_argument("sub_valpha_k: gamma0 must be > 0");
    if (!(gamma >= gamma0)) throw std::invalid_argument("sub_valpha_k: requires gamma >= gamma0");
    BarrierParams p;
    p.kind = BarrierKind::SubVAlphaK;
    p.n = n;
    p.a = affine_exponent(n, k);
    p.b = 1.0 - p.a;
    p.c = subsolution_constant_k(n, k, gamma0, diam);
    p.kappa = 1.0;
    p.gamma = gamma;
    p.k = k;
    p.diam = diam;
    p.gamma0 = gamma0;
    return Barrier(p);
}

Barrier super_wk(int n, double k, double gamma) {
    if (!(k > 0.0)) throw std::invalid_argument("super_wk: k must be > 0");
    const double C0 = sharp_constant_suplemk(n, k, gamma);
    const double a = affine_exponent(n, k);
    Barrier w = super_family(BarrierKind::SuperWK, n, a, 1.0 - a, C0, 1.0, 0.0);
    BarrierParams prm = w.params();
    prm.gamma = gamma;
    prm.k = k;
    return Barrier(prm);
}

Barrier explicit_solution(BarrierKind kind, int n) {
    require_n(n);
    BarrierParams prm;
    prm.kind = kind;
    prm.n = n;
    prm.lambda = 0.0;
    if (kind == BarrierKind::ExplicitP1) {
        prm.a = 2.0 / (n + 1.0);
        prm.b = (n - 1.0) / (n + 1.0);
        prm.kappa = -(n + 1.0) * pos_pow(2.0 * (n - 1.0), -static_cast<double>(n) / (n + 1.0));
        prm.p = 1.0;
    } else if (kind == BarrierKind::ExplicitUJL) {
        if (n != 2) throw std::invalid_argument("explicit_solution: the UJL solution exists for n = 2 only");
        prm.a = 1.0 / 3.0;
        prm.b = 1.0 / 3.0;
        prm.kappa = -std::sqrt(3.0) * std::cbrt(0.5);
        prm.p = 4.0;
    } else {
        throw std::invalid_argument("explicit_solution: kind must be explicit_p1 or explicit_ujl");
    }
    return Barrier(prm);
}

Barrier barrier_from_record(const Record& r) {
    auto it = r.find("kind");
    if (it == r.end()) throw std::invalid_argument("barrier record: missing field 'kind'");
    const BarrierKind kind = barrier_kind_from_string(it->second);
    const int n = static_cast<int>(get(r, "n"));
    switch (kind) {
        case BarrierKind::SubVAlpha:
            if (r.count("C")) return sub_valpha_with_constant(n, get(r, "alpha"), get(r, "C"));
            if (r.count("alpha")) return sub_valpha(n, get(r, "alpha"), get(r, "diam"));
            return sub_valpha_for(n, get(r, "p"), get(r, "diam"));
        case BarrierKind::SuperW: return super_w(n, get(r, "p"));
        case BarrierKind::SuperW2: return super_w2(n, get(r, "p"));
        case BarrierKind::SuperWt: return super_wt(n, get(r, "p"), get(r, "t"));
        case BarrierKind::SubVAlphaK:
            return sub_valpha_k(n, get(r, "k"), get(r, "gamma"), get(r, "gamma0"), get(r, "diam"));
        case BarrierKind::SuperWK: return super_wk(n, get(r, "k"), get(r, "gamma"));
        case BarrierKind::ExplicitP1:
        case BarrierKind::ExplicitUJL:
            return explicit_solution(kind, n);
    }
    throw std::invalid_argument("barrier record: unsupported kind");
}

// ---- residuals -----------------------------------------------------------------

double residual(const Jet2& jet, const RhsSpec& rhs, const Vec& x) {
    return jet.hessian.determinant() - rhs.evaluate(jet.value, jet.gradient, x);
}

double residual(const Barrier& barrier, const RhsSpec& rhs, const Vec& x) {
    const Jet2 jet = barrier.eval_jet(x);
    return barrier.det_hessian(x) - rhs.evaluate(jet.value, jet.gradient, x);
}

double residual_ratio(const Barrier& barrier, const RhsSpec& rhs, const Vec& x) {
    const Jet2 jet = barrier.eval_jet(x);
    return barrier.det_hessian(x) / rhs.evaluate(jet.value, jet.gradient, x);
}

}  // namespace singma
