#include "rsa/filtering.hpp"

#include <cmath>
#include <string>

#include "rsa/errors.hpp"

namespace rsa {

namespace {

void check_cfl(double dt, double dx) {
    if (dt > dx * dx / 4.0 * (1.0 + 1e-12))
        throw CflViolation("dt = " + std::to_string(dt) + " exceeds dx^2/4 = " +
                           std::to_string(dx * dx / 4.0));
}

// Synchronous Jacobi sweep: f' = f + (dt/dx^2) * sum_d c_d * (f_d - f),
// with c_d evaluated from the one-sided link gradient |f_d - f|/dx.
ScalarField diffusion_sweep(const ScalarField& f, double dt,
                            const std::function<double(double)>& conductance) {
    check_cfl(dt, f.dx());
    const double dx = f.dx();
    const double lambda = dt / (dx * dx);
    ScalarField out(f.rows(), f.cols(), dx);
    for (std::size_t i = 0; i < f.rows(); ++i) {
        for (std::size_t j = 0; j < f.cols(); ++j) {
            const StencilSample s = neumann_sample(f, i, j);
            double flux = 0.0;
            for (double nb : {s.xp, s.yp, s.xm, s.ym}) {
                const double d = nb - s.c;
                flux += conductance(std::abs(d) / dx) * d;
            }
            out(i, j) = s.c + lambda * flux;
        }
    }
    return out;
}

}  // namespace

void FilterSpec::validate(double dx) const {
    if (iterations < 0) throw DomainError("filter iterations must be >= 0");
    if (kind == FilterKind::none || iterations == 0) return;
    check_cfl(dt, dx);
    if (kind == FilterKind::perona_malik && !(mu > 0.0))
        throw DomainError("mu must be positive for the Perona-Malik filter");
}

double diffusivity_f1(double z, double mu) {
    const double r = z / mu;
    return 1.0 / (1.0 + r * r);
}

double diffusivity_f2(double z, double mu) {
    const double r = z / mu;
    return std::exp(-r * r);
}

ScalarField heat_step(const ScalarField& f, double dt) {
    return diffusion_sweep(f, dt, [](double) { return 1.0; });
}

ScalarField pm_step(const ScalarField& f, double dt, double mu, PmDiffusivity diffusivity) {
    if (diffusivity == PmDiffusivity::f1)
        return diffusion_sweep(f, dt, [mu](double z) { return diffusivity_f1(z, mu); });
    return diffusion_sweep(f, dt, [mu](double z) { return diffusivity_f2(z, mu); });
}

ScalarField pm_step(const ScalarField& f, double dt,
                    const std::function<double(double)>& conductance) {
    return diffusion_sweep(f, dt, conductance);
}

ScalarField run_filter(const ScalarField& f, const FilterSpec& spec) {
    spec.validate(f.dx());
    ScalarField out = f;
    for (int it = 0; it < spec.iterations; ++it) {
        switch (spec.kind) {
            case FilterKind::none: return out;
            case FilterKind::gaussian: out = heat_step(out, spec.dt); break;
            case FilterKind::perona_malik:
                out = pm_step(out, spec.dt, spec.mu, spec.diffusivity);
                break;
        }
    }
    return out;
}

}  // namespace rsa
