#pragma once
// seeded generators for property tests

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dnls/grid.hpp"

namespace gen {

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng); }
};

// sum of `bumps` Gaussians with random centre, width, carrier and phase,
// well inside the box so the boundary stays quiet
inline dnls::Field bumps(Rng& r, const dnls::Grid& g, double amp, int bumps = 2, double spread = 2.0) {
    struct B {
        double a, x0, w, k, ph;
    };
    std::vector<B> bs;
    for (int i = 0; i < bumps; ++i)
        bs.push_back({amp * r.uniform(0.3, 1.0), r.uniform(-spread, spread), r.uniform(0.7, 1.4), r.uniform(-1.0, 1.0),
                      r.uniform(0.0, 2.0 * dnls::kPi)});
    return dnls::sample(g, [&](double x) {
        dnls::cplx acc = 0.0;
        for (const B& b : bs) {
            const double y = (x - b.x0) / b.w;
            acc += b.a * std::exp(-y * y) * std::exp(dnls::cplx(0.0, b.k * x + b.ph));
        }
        return acc;
    });
}

inline dnls::Field gaussian(const dnls::Grid& g, double amp = 0.5, double carrier = 0.5) {
    return dnls::sample(g, [=](double x) { return amp * std::exp(-x * x) * std::exp(dnls::cplx(0.0, carrier * x)); });
}

inline double rel(const dnls::Field& a, const dnls::Field& b) {
    return dnls::l2_norm(dnls::Field(a.grid, a.v - b.v)) / std::max(1e-300, dnls::l2_norm(b));
}

inline double dist(const dnls::Field& a, const dnls::Field& b) { return dnls::l2_norm(dnls::Field(a.grid, a.v - b.v)); }

}  // namespace gen
