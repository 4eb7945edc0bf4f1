#pragma once

#include <cstddef>
#include <vector>

#include "rsa/field.hpp"
#include "rsa/fits.hpp"
#include "rsa/levelset.hpp"

namespace rsa {

struct SegmentRecord {
    int label = 0;
    std::size_t area = 0;
    double centroid_x = 0.0;          // grid coordinates (j*dx, i*dx)
    double centroid_y = 0.0;
    std::size_t imin = 0, imax = 0, jmin = 0, jmax = 0;
    double mean_intensity = 0.0;      // over the ORIGINAL physical values
};

struct SegmentCatalog {
    std::vector<SegmentRecord> objects;
};

/// Catalog plus the per-pixel label map (0 = background/discarded).
struct Labeling {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<int> labels;
    SegmentCatalog catalog;

    int label_at(std::size_t i, std::size_t j) const { return labels[i * cols + j]; }
};

/// Pixels still enclosed by the contracted front: {v >= 0}.
Mask object_mask(const FrontState& final_state);
Mask object_mask(const ScalarField& v);

/// 4-connected flood labeling; components below min_area are discarded.
/// Labels are dense 1..K in raster order of each component's first pixel.
Labeling label_components(const Mask& mask, std::size_t min_area, double dx);

/// Fills mean_intensity from the original image (same geometry).
void compute_mean_intensities(Labeling& lab, const RawImage& original);

/// Background 0; each object's pixels carry its mean original intensity.
ScalarField render_segmented(const Labeling& lab, double dx);

}  // namespace rsa
