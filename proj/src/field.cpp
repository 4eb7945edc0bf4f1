#include "rsa/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rsa/errors.hpp"

namespace rsa {

ScalarField::ScalarField(std::size_t rows, std::size_t cols, double dx, double fill)
    : rows_(rows), cols_(cols), dx_(dx), v_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw DomainError("ScalarField: empty dimensions");
    if (!(dx > 0.0)) throw DomainError("ScalarField: dx must be positive");
}

double ScalarField::min_value() const { return *std::min_element(v_.begin(), v_.end()); }
double ScalarField::max_value() const { return *std::max_element(v_.begin(), v_.end()); }
double ScalarField::sum() const { return std::accumulate(v_.begin(), v_.end(), 0.0); }

bool ScalarField::all_finite() const {
    return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

std::size_t Mask::count() const {
    return static_cast<std::size_t>(std::count(m.begin(), m.end(), std::uint8_t{1}));
}

namespace {

// Mirror reflection: -1 -> 0, n -> n-1. Indices never stray further than one.
inline std::size_t reflect(long k, std::size_t n) {
    if (k < 0) return static_cast<std::size_t>(-k - 1);
    if (k >= static_cast<long>(n)) return 2 * n - 1 - static_cast<std::size_t>(k);
    return static_cast<std::size_t>(k);
}

}  // namespace

StencilSample neumann_sample(const ScalarField& f, std::size_t i, std::size_t j) {
    const long li = static_cast<long>(i);
    const long lj = static_cast<long>(j);
    const std::size_t im = reflect(li - 1, f.rows());
    const std::size_t ip = reflect(li + 1, f.rows());
    const std::size_t jm = reflect(lj - 1, f.cols());
    const std::size_t jp = reflect(lj + 1, f.cols());
    StencilSample s;
    s.c = f(i, j);
    s.xp = f(i, jp);
    s.xm = f(i, jm);
    s.yp = f(ip, j);
    s.ym = f(im, j);
    s.xpyp = f(ip, jp);
    s.xpym = f(im, jp);
    s.xmyp = f(ip, jm);
    s.xmym = f(im, jm);
    return s;
}

DiffOps diff_ops(const ScalarField& f, std::size_t i, std::size_t j) {
    const StencilSample s = neumann_sample(f, i, j);
    const double dx = f.dx();
    DiffOps d;
    d.dpx = (s.xp - s.c) / dx;
    d.dmx = (s.c - s.xm) / dx;
    d.dpy = (s.yp - s.c) / dx;
    d.dmy = (s.c - s.ym) / dx;
    d.dcx = (s.xp - s.xm) / (2.0 * dx);
    d.dcy = (s.yp - s.ym) / (2.0 * dx);
    d.d2x = (s.xp - 2.0 * s.c + s.xm) / (dx * dx);
    d.d2y = (s.yp - 2.0 * s.c + s.ym) / (dx * dx);
    d.dxy = (s.xpyp - s.xmyp - s.xpym + s.xmym) / (4.0 * dx * dx);
    return d;
}

double bilinear_interp(const ScalarField& f, double x, double y) {
    x = std::clamp(x, 0.0, f.x_max());
    y = std::clamp(y, 0.0, f.y_max());
    const double dx = f.dx();
    // Snap near-integer index coordinates so queries at node positions
    // reproduce the stored values exactly despite x/dx rounding.
    auto index_coord = [](double c, double h) {
        double u = c / h;
        const double r = std::nearbyint(u);
        if (std::abs(u - r) < 1e-9 * std::max(1.0, std::abs(u))) u = r;
        return u;
    };
    const double ux = index_coord(x, dx);
    const double uy = index_coord(y, dx);
    std::size_t j0 = static_cast<std::size_t>(std::floor(ux));
    std::size_t i0 = static_cast<std::size_t>(std::floor(uy));
    if (j0 + 1 >= f.cols()) j0 = f.cols() >= 2 ? f.cols() - 2 : 0;
    if (i0 + 1 >= f.rows()) i0 = f.rows() >= 2 ? f.rows() - 2 : 0;
    const std::size_t j1 = std::min(j0 + 1, f.cols() - 1);
    const std::size_t i1 = std::min(i0 + 1, f.rows() - 1);
    const double tx = std::clamp(ux - static_cast<double>(j0), 0.0, 1.0);
    const double ty = std::clamp(uy - static_cast<double>(i0), 0.0, 1.0);
    const double a = f(i0, j0) * (1.0 - tx) + f(i0, j1) * tx;
    const double b = f(i1, j0) * (1.0 - tx) + f(i1, j1) * tx;
    return a * (1.0 - ty) + b * ty;
}

}  // namespace rsa
