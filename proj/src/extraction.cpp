#include "rsa/extraction.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "rsa/errors.hpp"

namespace rsa {

Mask object_mask(const ScalarField& v) {
    Mask mask(v.rows(), v.cols());
    for (std::size_t k = 0; k < v.size(); ++k) mask.m[k] = v.values()[k] >= 0.0 ? 1 : 0;
    return mask;
}

Mask object_mask(const FrontState& final_state) { return object_mask(final_state.v); }

Labeling label_components(const Mask& mask, std::size_t min_area, double dx) {
    Labeling lab;
    lab.rows = mask.rows;
    lab.cols = mask.cols;
    lab.labels.assign(mask.rows * mask.cols, 0);

    std::vector<std::size_t> component;  // flat indices of the current component
    int next_label = 1;
    for (std::size_t start = 0; start < lab.labels.size(); ++start) {
        if (mask.m[start] == 0 || lab.labels[start] != 0) continue;

        component.clear();
        std::queue<std::size_t> frontier;
        frontier.push(start);
        lab.labels[start] = -1;  // visited marker, finalized below
        while (!frontier.empty()) {
            const std::size_t k = frontier.front();
            frontier.pop();
            component.push_back(k);
            const std::size_t i = k / mask.cols;
            const std::size_t j = k % mask.cols;
            const std::size_t nbs[4] = {
                i > 0 ? k - mask.cols : k, i + 1 < mask.rows ? k + mask.cols : k,
                j > 0 ? k - 1 : k, j + 1 < mask.cols ? k + 1 : k};
            for (std::size_t nb : nbs) {
                if (nb != k && mask.m[nb] != 0 && lab.labels[nb] == 0) {
                    lab.labels[nb] = -1;
                    frontier.push(nb);
                }
            }
        }

        if (component.size() < min_area) {
            for (std::size_t k : component) lab.labels[k] = -2;  // discarded
            continue;
        }

        SegmentRecord rec;
        rec.label = next_label;
        rec.area = component.size();
        rec.imin = rec.jmin = std::numeric_limits<std::size_t>::max();
        rec.imax = rec.jmax = 0;
        double sx = 0.0, sy = 0.0;
        for (std::size_t k : component) {
            lab.labels[k] = next_label;
            const std::size_t i = k / mask.cols;
            const std::size_t j = k % mask.cols;
            rec.imin = std::min(rec.imin, i);
            rec.imax = std::max(rec.imax, i);
            rec.jmin = std::min(rec.jmin, j);
            rec.jmax = std::max(rec.jmax, j);
            sx += static_cast<double>(j) * dx;
            sy += static_cast<double>(i) * dx;
        }
        rec.centroid_x = sx / static_cast<double>(rec.area);
        rec.centroid_y = sy / static_cast<double>(rec.area);
        lab.catalog.objects.push_back(rec);
        ++next_label;
    }

    // Clear the discard markers.
    for (int& l : lab.labels)
        if (l < 0) l = 0;
    return lab;
}

void compute_mean_intensities(Labeling& lab, const RawImage& original) {
    if (original.rows != lab.rows || original.cols != lab.cols)
        throw DomainError("compute_mean_intensities: geometry mismatch");
    std::vector<double> sums(lab.catalog.objects.size() + 1, 0.0);
    for (std::size_t k = 0; k < lab.labels.size(); ++k)
        if (lab.labels[k] > 0) sums[static_cast<std::size_t>(lab.labels[k])] += original.values[k];
    for (auto& rec : lab.catalog.objects)
        rec.mean_intensity = sums[static_cast<std::size_t>(rec.label)] /
                             static_cast<double>(rec.area);
}

ScalarField render_segmented(const Labeling& lab, double dx) {
    ScalarField out(lab.rows, lab.cols, dx, 0.0);
    std::vector<double> level(lab.catalog.objects.size() + 1, 0.0);
    for (const auto& rec : lab.catalog.objects)
        level[static_cast<std::size_t>(rec.label)] = rec.mean_intensity;
    for (std::size_t k = 0; k < lab.labels.size(); ++k)
        if (lab.labels[k] > 0) out.values()[k] = level[static_cast<std::size_t>(lab.labels[k])];
    return out;
}

}  // namespace rsa
