#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "rsa/field.hpp"
#include "rsa/fits.hpp"

namespace rsa {

/// One Gaussian source; coordinates and radius in pixel units.
struct PhantomSource {
    double cx = 0.0;
    double cy = 0.0;
    double amplitude = 1.0;
    double radius = 1.0;
};

enum class NoiseKind { none, gaussian, poisson };

struct PhantomSpec {
    std::size_t rows = 300;
    std::size_t cols = 300;
    std::vector<PhantomSource> sources;
    double background = 0.05;
    NoiseKind noise = NoiseKind::none;
    double noise_param = 0.0;   // sigma for gaussian, scale for poisson
    std::uint64_t seed = 0;
    void validate() const;
};

struct Phantom {
    RawImage image;
    std::vector<Mask> truth_masks;  // 2-sigma isophote per source
};

/// Deterministic synthetic scene: background + Gaussian profiles + noise.
/// Noise uses a per-pixel SplitMix64 stream so bytes are identical for a
/// given seed regardless of traversal order or platform.
Phantom generate(const PhantomSpec& spec);

double iou(const Mask& a, const Mask& b);

/// Flat key=value spec file; "source = cx cy amplitude radius" repeats.
PhantomSpec parse_phantom_spec(const std::filesystem::path& path);

}  // namespace rsa
