#pragma once

#include <optional>

#include "rsa/field.hpp"
#include "rsa/fits.hpp"

namespace rsa {

enum class RescaleKind { none, r1, r2, r3 };

struct RescaleSpec {
    RescaleKind kind = RescaleKind::r3;    // the pipeline's default transform
    double alpha = 0.25;            // r1/r2, in (0, 1]
    int beta = 8;                   // r3, >= 1
    std::optional<double> tau;      // r3; Otsu-derived when absent
    void validate() const;
};

/// (I0 - min) / (max - min); throws ConstantImage when max == min.
ScalarField minmax_normalize(const RawImage& img, double dx);

double r1(double x, double alpha);
double r2(double x, double alpha);
double r3(double x, int beta, double tau);

/// Otsu threshold over a 256-bin histogram on [0, 1]. Returns the lower
/// edge of the first background-excluded bin; ties break toward the
/// smallest threshold.
double otsu_threshold(const ScalarField& f);

/// Applies the selected transform elementwise. For r3 without an explicit
/// tau, the threshold comes from otsu_threshold; the value used is written
/// to tau_used when given.
ScalarField apply_rescale(const ScalarField& f, const RescaleSpec& spec,
                          double* tau_used = nullptr);

}  // namespace rsa
