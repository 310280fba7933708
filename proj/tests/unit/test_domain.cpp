#include <doctest.h>

#include <cmath>
#include <random>

#include "singma/domain.hpp"
#include "singma/sampling.hpp"

using namespace singma;

namespace {
Vec v2(double a, double b) {
    Vec x(2);
    x << a, b;
    return x;
}

// Dense samples of the boundary of ParabolaCap(t, 0) in the plane: the flat face and the arc.
std::vector<Vec> cap_boundary(double t, int per_face) {
    std::vector<Vec> pts;
    for (int i = 0; i <= per_face; ++i) {
        const double x = -t + 2.0 * t * i / per_face;
        pts.push_back(v2(x, 0.0));
        pts.push_back(v2(x, t * t - x * x));
    }
    return pts;
}
}  // namespace

TEST_CASE("contains on the reference examples") {
    const Domain cap = Domain::parabola_cap(2, 1.0, 0.0);
    CHECK(cap.contains(v2(0, 0.5)));
    CHECK_FALSE(cap.contains(v2(0, 0)));
    CHECK_FALSE(Domain::ball(2).contains(v2(0.6, 0.8)));
    CHECK_THROWS_AS(cap.contains(Vec::Zero(3)), std::invalid_argument);
}

TEST_CASE("distance to the boundary") {
    const Domain cap = Domain::parabola_cap(2, 1.0, 0.0);
    CHECK(Domain::ball(2).dist_to_boundary(Vec::Zero(2)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cap.dist_to_boundary(v2(0, 0.1)) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK_THROWS(cap.dist_to_boundary(v2(0, 2)));

    // brute-force minimum over 10^6 boundary samples
    const Vec x = v2(0, 0.9);
    double best = 1e300;
    for (const Vec& b : cap_boundary(1.0, 500000)) best = std::min(best, (b - x).norm());
    CHECK(std::abs(cap.dist_to_boundary(x) - best) < 1e-6);
}

TEST_CASE("distance is 1-Lipschitz and vanishes at the boundary") {
    for (const Domain& d : {Domain::parabola_cap(2, 1.0, 0.0), Domain::sphere_cap(2), Domain::parabola_cap(2, 1.0, 0.5)}) {
        const auto pts = sample_domain_interior(d, 400, 7);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            CHECK(std::abs(d.dist_to_boundary(pts[i]) - d.dist_to_boundary(pts[i + 1])) <= (pts[i] - pts[i + 1]).norm() + 1e-9);
        }
    }
    const Domain cap = Domain::parabola_cap(2, 1.0, 0.0);
    for (double e : {1e-2, 1e-4, 1e-6}) {
        const Vec x = v2(0.3, 0.91 - e);
        CHECK(cap.dist_to_boundary(x) <= e + 1e-12);
    }
}

TEST_CASE("diameter against boundary-pair brute force") {
    CHECK(Domain::ball(2).diameter() == doctest::Approx(2.0));
    for (double t : {0.5, 1.0}) {
        const auto pts = cap_boundary(t, 1000);
        double best = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, (pts[i] - pts[j]).norm());
        }
        const double d = Domain::parabola_cap(2, t, 0.0).diameter();
        CHECK(std::abs(d - best) < 1e-6);
        CHECK(std::abs(d - 2.0 * t) < 1e-12);
    }
}

TEST_CASE("origin interiority") {
    const OriginInfo a = Domain::parabola_cap(2, 1.0, 0.5).contains_origin_interior();
    CHECK(a.interior);
    CHECK(a.gamma0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_FALSE(Domain::parabola_cap(2, 1.0, 0.0).contains_origin_interior().interior);
    const OriginInfo b = Domain::ball(2).contains_origin_interior();
    CHECK(b.interior);
    CHECK(b.gamma0 == doctest::Approx(1.0));
}

TEST_CASE("convexity witness on sampled member pairs") {
    std::vector<Halfspace> tri(3);
    tri[0].normal = v2(0, -1);
    tri[0].offset = 0.0;
    tri[1].normal = v2(1, 1);
    tri[1].offset = 1.0;
    tri[2].normal = v2(-1, 1);
    tri[2].offset = 1.0;
    const std::vector<Domain> domains{Domain::parabola_cap(2, 1.0, 0.0), Domain::parabola_cap(3, 0.7, 0.2),
                                      Domain::sphere_cap(2), Domain::ball(3, 2.0), Domain::polytope(2, tri)};
    for (const Domain& d : domains) {
        const auto pts = sample_domain_interior(d, 10000, 3);
        int bad = 0;
        for (std::size_t i = 0; i + 1 < pts.size(); i += 2) bad += d.contains(0.5 * (pts[i] + pts[i + 1])) ? 0 : 1;
        CHECK(bad == 0);
    }
}

TEST_CASE("volumes") {
    CHECK(unit_ball_volume(2) == doctest::Approx(M_PI));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
    CHECK(Domain::parabola_cap(2, 1.0, 0.0).volume() == doctest::Approx(4.0 / 3.0));
    CHECK(Domain::sphere_cap(2).volume() == doctest::Approx(M_PI / 2.0));
}
