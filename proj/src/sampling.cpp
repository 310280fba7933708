#include "singma/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace singma {

Vec Sampler::in_box(const Box& box) {
    Vec x(box.lower.size());
    for (int i = 0; i < x.size(); ++i) x(i) = uniform(box.lower(i), box.upper(i));
    return x;
}

Vec Sampler::in_ball(int dim, double radius) {
    if (dim == 0) return Vec(0);
    std::normal_distribution<double> normal;
    Vec d(dim);
    for (int i = 0; i < dim; ++i) d(i) = normal(rng_);
    const double r = radius * std::pow(uniform(0.0, 1.0), 1.0 / dim);
    return d * (r / d.norm());
}

namespace {
constexpr int kMaxTries = 1000;
}

std::vector<Vec> sample_barrier_interior(const Barrier& barrier, int count, std::uint64_t seed, double margin) {
    if (count < 0) throw std::invalid_argument("sample count must be >= 0");
    Sampler rng(seed);
    const Box box = barrier.natural_box();
    const int n = barrier.dim();
    const double floor = box.lower(n - 1);
    const double height = box.upper(n - 1) - floor;
    std::vector<Vec> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const bool layered = i % 2 == 1 && margin > 0.0 && margin < height;
        int tries = 0;
        for (;;) {
            if (++tries > kMaxTries) throw std::runtime_error("sampler: acceptance rate too low");
            Vec x = rng.in_box(box);
            if (layered) x(n - 1) = floor + std::exp(rng.uniform(std::log(margin), std::log(height)));
            if (barrier.natural_contains(x) && barrier.singular_margin(x) >= margin) {
                out.push_back(std::move(x));
                break;
            }
        }
    }
    return out;
}

std::vector<Vec> sample_barrier_boundary(const Barrier& barrier, int count, std::uint64_t seed) {
    Sampler rng(seed);
    const auto& prm = barrier.params();
    const int n = prm.n;
    const double R = std::sqrt(prm.T);
    std::vector<Vec> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        Vec x(n);
        const int face = i % 2;
        if (barrier.is_explicit()) {
            if (face == 0) {
                x.head(n - 1) = rng.in_ball(n - 1, 1.0);
                x(n - 1) = 0.0;
            } else {
                // keep only directions whose rounded squared norm is exactly 1
                int tries = 0;
                do {
                    if (++tries > kMaxTries) throw std::runtime_error("sampler: no exact unit vector found");
                    Vec d = rng.in_ball(n - 1, 1.0);
                    while (d.norm() == 0.0) d = rng.in_ball(n - 1, 1.0);
                    x.head(n - 1) = d / d.norm();
                } while (x.head(n - 1).squaredNorm() != 1.0);
                x(n - 1) = rng.uniform(0.0, 1.0);
            }
        } else {
            do {
                x.head(n - 1) = rng.in_ball(n - 1, R);
            } while (x.head(n - 1).squaredNorm() > prm.T);
            const double rho = x.head(n - 1).squaredNorm();
            double s = 0.0;
            if (face == 1) {
                if (barrier.kind() == BarrierKind::SuperW2) s = std::sqrt(std::max(0.0, 1.0 - rho));
                else s = std::max(0.0, prm.T - rho);
            }
            x(n - 1) = s - prm.gamma;
        }
        out.push_back(std::move(x));
    }
    return out;
}

std::vector<Vec> sample_domain_interior(const Domain& domain, int count, std::uint64_t seed, double margin) {
    Sampler rng(seed);
    const Box box = domain.bounding_box();
    std::vector<Vec> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        int tries = 0;
        for (;;) {
            if (++tries > 100 * kMaxTries) throw std::runtime_error("sampler: acceptance rate too low");
            Vec x = rng.in_box(box);
            if (domain.contains(x) && (margin <= 0.0 || domain.dist_to_boundary(x) >= margin)) {
                out.push_back(std::move(x));
                break;
            }
        }
    }
    return out;
}

}  // namespace singma
