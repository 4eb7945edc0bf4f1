#pragma once

#include <cstdint>

#include "rsa/field.hpp"

namespace rsa::test {

// Small deterministic generator for property-style tests.
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}

    std::uint64_t next() {
        s += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

inline ScalarField random_field(Rng& rng, std::size_t rows, std::size_t cols, double dx,
                                double lo = 0.0, double hi = 1.0) {
    ScalarField f(rows, cols, dx);
    for (double& v : f.values()) v = rng.uniform(lo, hi);
    return f;
}

}  // namespace rsa::test
