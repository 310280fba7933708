#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "singma/barriers.hpp"
#include "singma/domain.hpp"

namespace singma {

/// Seeded point generator shared by every verification routine.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    Vec in_box(const Box& box);
    /// Uniform point of the (dim)-ball of the given radius.
    Vec in_ball(int dim, double radius);
    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// `count` interior points of a barrier's natural region with singular_margin >= margin.
/// Half are uniform in the bounding box, half have x_n + gamma log-uniform in
/// [margin, height] so that the boundary layer is well represented.
std::vector<Vec> sample_barrier_interior(const Barrier& barrier, int count, std::uint64_t seed,
                                         double margin = 1e-3);

/// Points on the closed boundary of the barrier's natural region.
std::vector<Vec> sample_barrier_boundary(const Barrier& barrier, int count, std::uint64_t seed);

/// Rejection sampling of interior points of a domain with dist_to_boundary >= margin.
std::vector<Vec> sample_domain_interior(const Domain& domain, int count, std::uint64_t seed,
                                        double margin = 0.0);

}  // namespace singma
