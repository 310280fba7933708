#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace singma {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// {|x'| < t, 0 < x_n + gamma < t^2 - |x'|^2}
struct ParabolaCap {
    double t = 1.0;
    double gamma = 0.0;
};

/// Upper half of the unit ball: {|x'| < 1, 0 < x_n < sqrt(1 - |x'|^2)}.
struct SphereCap {};

/// Open ball of the given radius centred at the origin.
struct Ball {
    double radius = 1.0;
};

/// {x : normal . x < offset}; normal has unit length after construction.
struct Halfspace {
    Vec normal;
    double offset = 0.0;
};

struct HalfspaceIntersection {
    std::vector<Halfspace> faces;
    std::vector<Vec> vertices;  // filled in by Domain::polytope
};

struct Box {
    Vec lower;
    Vec upper;
};

struct OriginInfo {
    bool interior = false;
    double gamma0 = 0.0;  // dist(0, boundary) when interior
};

/// Bounded open convex region in R^n, n >= 2. Immutable once built.
class Domain {
public:
    using Kind = std::variant<ParabolaCap, SphereCap, Ball, HalfspaceIntersection>;

    static Domain parabola_cap(int dim, double t = 1.0, double gamma = 0.0);
    static Domain sphere_cap(int dim);
    static Domain ball(int dim, double radius = 1.0);
    /// Throws if the half-spaces do not cut out a bounded region with interior.
    static Domain polytope(int dim, std::vector<Halfspace> faces);

    int dim() const { return dim_; }
    const Kind& kind() const { return kind_; }
    std::string name() const;

    bool contains(const Vec& x) const;

    /// Euclidean distance to the boundary. Throws for points not in the open region.
    double dist_to_boundary(const Vec& x) const;

    double diameter() const;
    OriginInfo contains_origin_interior() const;

    /// Lebesgue measure |Omega|. Polytopes are supported in the plane only.
    double volume() const;

    Box bounding_box() const;

private:
    Domain(int dim, Kind kind) : dim_(dim), kind_(std::move(kind)) {}
    void check_dim(const Vec& x) const;

    int dim_;
    Kind kind_;
};

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

}  // namespace singma
