#include "singma/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace singma {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_dim(int dim) {
    if (dim < 2) throw std::invalid_argument("domain dimension must be >= 2");
}

// Squared distance in the (r, s) half-plane from (r, s) to the graph point (rho, T - rho^2).
double graph_gap_sq(double rho, double r, double s, double T) {
    const double dr = rho - r;
    const double ds = T - rho * rho - s;
    return dr * dr + ds * ds;
}

// Distance from (r, s) to the curve {(rho, T - rho^2) : 0 <= rho <= t}.
// Stationary points solve 2 rho^3 + c rho - r = 0 with c = 1 - 2 (T - s); the cubic
// has at most one root on its increasing branch, which is the only candidate besides
// the endpoints.
double parabola_graph_distance(double r, double s, double t) {
    const double T = t * t;
    const double c = 1.0 - 2.0 * (T - s);
    auto f = [&](double rho) { return 2.0 * rho * rho * rho + c * rho - r; };
    auto df = [&](double rho) { return 6.0 * rho * rho + c; };

    double best = std::min(graph_gap_sq(0.0, r, s, T), graph_gap_sq(t, r, s, T));

    double lo = c < 0.0 ? std::sqrt(-c / 6.0) : 0.0;
    double hi = t;
    if (lo < hi && f(lo) <= 0.0 && f(hi) >= 0.0) {
        double rho = 0.5 * (lo + hi);
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double fr = f(rho);
            if (fr > 0.0) hi = rho; else lo = rho;
            const double d = df(rho);
            double next = d > 0.0 ? rho - fr / d : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - rho) < 1e-13) {
                rho = next;
                break;
            }
            rho = next;
        }
        best = std::min(best, graph_gap_sq(rho, r, s, T));
    }
    return std::sqrt(best);
}

// Calls fn(indices) for every k-subset of {0..m-1}.
template <class Fn>
void for_each_subset(int m, int k, Fn&& fn) {
    if (k > m || k <= 0) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

double unit_ball_volume(int n) {
    return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

Domain Domain::parabola_cap(int dim, double t, double gamma) {
    require_dim(dim);
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("parabola cap: t must be positive");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("parabola cap: gamma must be >= 0");
    }
    return Domain(dim, ParabolaCap{t, gamma});
}

Domain Domain::sphere_cap(int dim) {
    require_dim(dim);
    return Domain(dim, SphereCap{});
}

Domain Domain::ball(int dim, double radius) {
    require_dim(dim);
    if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball: radius must be positive");
    return Domain(dim, Ball{radius});
}

Domain Domain::polytope(int dim, std::vector<Halfspace> faces) {
    require_dim(dim);
    const int m = static_cast<int>(faces.size());
    if (m < dim + 1) throw std::invalid_argument("polytope: need at least n+1 half-spaces");
    Mat N(m, dim);
    Vec c(m);
    for (int i = 0; i < m; ++i) {
        auto& f = faces[static_cast<size_t>(i)];
        if (f.normal.size() != dim) throw std::invalid_argument("polytope: normal has wrong dimension");
        const double len = f.normal.norm();
        if (!(len > 0.0) || !std::isfinite(len)) throw std::invalid_argument("polytope: zero normal");
        f.normal /= len;
        f.offset /= len;
        N.row(i) = f.normal.transpose();
        c(i) = f.offset;
    }

    Eigen::FullPivLU<Mat> rank_lu(N);
    if (rank_lu.rank() < dim) throw std::invalid_argument("polytope: region is unbounded");

    // A pointed recession cone {d : N d <= 0} is trivial iff none of its candidate
    // extreme rays (kernels of n-1 active rows) is feasible.
    bool unbounded = false;
    for_each_subset(m, dim - 1, [&](const std::vector<int>& rows) {
        if (unbounded) return;
        Mat S(dim - 1, dim);
        for (int i = 0; i < dim - 1; ++i) S.row(i) = N.row(rows[static_cast<size_t>(i)]);
        Eigen::FullPivLU<Mat> lu(S);
        if (lu.dimensionOfKernel() != 1) return;
        Vec d = lu.kernel().col(0);
        d.normalize();
        for (double sign : {1.0, -1.0}) {
            if (((N * (sign * d)).array() <= 1e-12).all()) unbounded = true;
        }
    });
    if (unbounded) throw std::invalid_argument("polytope: region is unbounded");

    std::vector<Vec> vertices;
    for_each_subset(m, dim, [&](const std::vector<int>& rows) {
        Mat S(dim, dim);
        Vec rhs(dim);
        for (int i = 0; i < dim; ++i) {
            S.row(i) = N.row(rows[static_cast<size_t>(i)]);
            rhs(i) = c(rows[static_cast<size_t>(i)]);
        }
        Eigen::FullPivLU<Mat> lu(S);
        if (!lu.isInvertible()) return;
        Vec v = lu.solve(rhs);
        if (((N * v - c).array() > 1e-9).any()) return;
        for (const auto& w : vertices) {
            if ((w - v).norm() < 1e-10) return;
        }
        vertices.push_back(v);
    });
    if (vertices.size() < static_cast<size_t>(dim + 1)) {
        throw std::invalid_argument("polytope: region has empty interior");
    }
    Vec centroid = Vec::Zero(dim);
    for (const auto& v : vertices) centroid += v;
    centroid /= static_cast<double>(vertices.size());
    if (((N * centroid - c).array() >= -1e-12).any()) {
        throw std::invalid_argument("polytope: region has empty interior");
    }
    return Domain(dim, HalfspaceIntersection{std::move(faces), std::move(vertices)});
}

std::string Domain::name() const {
    return std::visit(overloaded{
                          [](const ParabolaCap&) { return std::string("parabola_cap"); },
                          [](const SphereCap&) { return std::string("sphere_cap"); },
                          [](const Ball&) { return std::string("ball"); },
                          [](const HalfspaceIntersection&) { return std::string("polytope"); },
                      },
                      kind_);
}

void Domain::check_dim(const Vec& x) const {
    if (x.size() != dim_) {
        throw std::invalid_argument("dimension mismatch: domain is " + std::to_string(dim_) +
                                    "-dimensional, point has " + std::to_string(x.size()) +
                                    " coordinates");
    }
}

bool Domain::contains(const Vec& x) const {
    check_dim(x);
    if (!x.allFinite()) throw std::invalid_argument("contains: point is not finite");
    const int n = dim_;
    return std::visit(overloaded{
                          [&](const ParabolaCap& p) {
                              const double rho = x.head(n - 1).squaredNorm();
                              const double s = x(n - 1) + p.gamma;
                              return s > 0.0 && s < p.t * p.t - rho;
                          },
                          [&](const SphereCap&) { return x(n - 1) > 0.0 && x.squaredNorm() < 1.0; },
                          [&](const Ball& b) { return x.norm() < b.radius; },
                          [&](const HalfspaceIntersection& h) {
                              return std::all_of(h.faces.begin(), h.faces.end(), [&](const Halfspace& f) {
                                  return f.normal.dot(x) < f.offset;
                              });
                          },
                      },
                      kind_);
}

double Domain::dist_to_boundary(const Vec& x) const {
    if (!contains(x)) throw std::invalid_argument("dist_to_boundary: point outside domain");
    const int n = dim_;
    return std::visit(overloaded{
                          [&](const ParabolaCap& p) {
                              const double r = x.head(n - 1).norm();
                              const double s = x(n - 1) + p.gamma;
                              return std::min(s, parabola_graph_distance(r, s, p.t));
                          },
                          [&](const SphereCap&) { return std::min(x(n - 1), 1.0 - x.norm()); },
                          [&](const Ball& b) { return b.radius - x.norm(); },
                          [&](const HalfspaceIntersection& h) {
                              double d = std::numeric_limits<double>::infinity();
                              for (const auto& f : h.faces) d = std::min(d, f.offset - f.normal.dot(x));
                              return d;
                          },
                      },
                      kind_);
}

double Domain::diameter() const {
    return std::visit(overloaded{
                          [](const ParabolaCap& p) {
                              // Farthest pairs lie on opposite rims of an axial section:
                              // maximise (2t - d)^2 (1 + d^2) over d = rho1 - rho2 in [0, t].
                              const double t = p.t;
                              auto h = [t](double d) { return (2 * t - d) * (2 * t - d) * (1 + d * d); };
                              double best = std::max(h(0.0), h(t));
                              if (t * t >= 2.0) {
                                  const double disc = std::sqrt(t * t - 2.0);
                                  for (double d : {(t - disc) / 2, (t + disc) / 2}) {
                                      if (d >= 0.0 && d <= t) best = std::max(best, h(d));
                                  }
                              }
                              return std::sqrt(best);
                          },
                          [](const SphereCap&) { return 2.0; },
                          [](const Ball& b) { return 2.0 * b.radius; },
                          [](const HalfspaceIntersection& h) {
                              double best = 0.0;
                              for (size_t i = 0; i < h.vertices.size(); ++i) {
                                  for (size_t j = i + 1; j < h.vertices.size(); ++j) {
                                      best = std::max(best, (h.vertices[i] - h.vertices[j]).norm());
                                  }
                              }
                              return best;
                          },
                      },
                      kind_);
}

OriginInfo Domain::contains_origin_interior() const {
    const Vec origin = Vec::Zero(dim_);
    if (!contains(origin)) return {false, 0.0};
    return {true, dist_to_boundary(origin)};
}

double Domain::volume() const {
    const int n = dim_;
    return std::visit(overloaded{
                          [n](const ParabolaCap& p) {
                              const int m = n - 1;
                              return unit_ball_volume(m) * std::pow(p.t, m + 2) * 2.0 / (m + 2);
                          },
                          [n](const SphereCap&) { return 0.5 * unit_ball_volume(n); },
                          [n](const Ball& b) { return unit_ball_volume(n) * std::pow(b.radius, n); },
                          [n](const HalfspaceIntersection& h) {
                              if (n != 2) throw std::invalid_argument("volume: polytopes supported in 2-D only");
                              Vec centre = Vec::Zero(2);
                              for (const auto& v : h.vertices) centre += v;
                              centre /= static_cast<double>(h.vertices.size());
                              std::vector<Vec> vs = h.vertices;
                              std::sort(vs.begin(), vs.end(), [&](const Vec& a, const Vec& b) {
                                  return std::atan2(a(1) - centre(1), a(0) - centre(0)) <
                                         std::atan2(b(1) - centre(1), b(0) - centre(0));
                              });
                              double area = 0.0;
                              for (size_t i = 0; i < vs.size(); ++i) {
                                  const Vec& a = vs[i];
                                  const Vec& b = vs[(i + 1) % vs.size()];
                                  area += a(0) * b(1) - a(1) * b(0);
                              }
                              return 0.5 * std::abs(area);
                          },
                      },
                      kind_);
}

Box Domain::bounding_box() const {
    const int n = dim_;
    Box box{Vec(n), Vec(n)};
    std::visit(overloaded{
                   [&](const ParabolaCap& p) {
                       box.lower.setConstant(-p.t);
                       box.upper.setConstant(p.t);
                       box.lower(n - 1) = -p.gamma;
                       box.upper(n - 1) = p.t * p.t - p.gamma;
                   },
                   [&](const SphereCap&) {
                       box.lower.setConstant(-1.0);
                       box.upper.setConstant(1.0);
                       box.lower(n - 1) = 0.0;
                   },
                   [&](const Ball& b) {
                       box.lower.setConstant(-b.radius);
                       box.upper.setConstant(b.radius);
                   },
                   [&](const HalfspaceIntersection& h) {
                       box.lower = h.vertices.front();
                       box.upper = h.vertices.front();
                       for (const auto& v : h.vertices) {
                           box.lower = box.lower.cwiseMin(v);
                           box.upper = box.upper.cwiseMax(v);
                       }
                   },
               },
               kind_);
    return box;
}

}  // namespace singma
