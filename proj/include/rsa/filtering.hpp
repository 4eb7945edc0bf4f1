#pragma once

#include <functional>

#include "rsa/field.hpp"

namespace rsa {

enum class FilterKind { none, gaussian, perona_malik };
enum class PmDiffusivity { f1, f2 };

struct FilterSpec {
    FilterKind kind = FilterKind::gaussian;
    int iterations = 5;
    double dt = 1e-4;
    double mu = 30.0;                            // Perona-Malik contrast parameter
    PmDiffusivity diffusivity = PmDiffusivity::f2;
    void validate(double dx) const;
};

double diffusivity_f1(double z, double mu);      // 1 / (1 + (z/mu)^2)
double diffusivity_f2(double z, double mu);      // exp(-(z/mu)^2)

/// One explicit heat-equation step with Neumann ghosts. Requires
/// dt <= dx^2/4; conserves the pixel sum and respects min/max bounds.
ScalarField heat_step(const ScalarField& f, double dt);

/// One explicit Perona-Malik step: link conductances from the one-sided
/// gradient magnitude |f_d - f|/dx per 4-neighbor link.
ScalarField pm_step(const ScalarField& f, double dt, double mu, PmDiffusivity diffusivity);

/// Same update with an arbitrary conductance of the link gradient
/// magnitude; conductance == 1 reproduces heat_step bit-for-bit.
ScalarField pm_step(const ScalarField& f, double dt,
                    const std::function<double(double)>& conductance);

ScalarField run_filter(const ScalarField& f, const FilterSpec& spec);

}  // namespace rsa
