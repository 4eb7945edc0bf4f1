#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rsa {

/// 2-D scalar field on a uniform grid with spacing dx. Row-major storage;
/// node (i,j) sits at coordinates (j*dx, i*dx).
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(std::size_t rows, std::size_t cols, double dx, double fill = 0.0);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double dx() const { return dx_; }

    double operator()(std::size_t i, std::size_t j) const { return v_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return v_[i * cols_ + j]; }

    double x_of(std::size_t j) const { return static_cast<double>(j) * dx_; }
    double y_of(std::size_t i) const { return static_cast<double>(i) * dx_; }

    double x_max() const { return static_cast<double>(cols_ - 1) * dx_; }
    double y_max() const { return static_cast<double>(rows_ - 1) * dx_; }

    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }
    std::size_t size() const { return v_.size(); }

    double min_value() const;
    double max_value() const;
    double sum() const;
    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    double dx_ = 1.0;
    std::vector<double> v_;
};

/// Boolean pixel mask with the same layout as ScalarField.
struct Mask {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> m;

    Mask() = default;
    Mask(std::size_t r, std::size_t c, bool fill = false)
        : rows(r), cols(c), m(r * c, fill ? 1 : 0) {}

    bool operator()(std::size_t i, std::size_t j) const { return m[i * cols + j] != 0; }
    void set(std::size_t i, std::size_t j, bool b) { m[i * cols + j] = b ? 1 : 0; }
    std::size_t count() const;
};

/// Nine neighbor values of a node after mirror (Neumann) ghost extension.
/// x refers to columns, y to rows; p/m are the +1/-1 offsets.
struct StencilSample {
    double c;                     // (i, j)
    double xp, xm;                // (i, j+1), (i, j-1)
    double yp, ym;                // (i+1, j), (i-1, j)
    double xpyp, xpym, xmyp, xmym;
};

struct DiffOps {
    double dpx, dmx, dpy, dmy;    // one-sided first differences
    double dcx, dcy;              // centered first differences
    double d2x, d2y;              // second differences
    double dxy;                   // mixed derivative
};

StencilSample neumann_sample(const ScalarField& f, std::size_t i, std::size_t j);
DiffOps diff_ops(const ScalarField& f, std::size_t i, std::size_t j);

/// Bilinear interpolation at (x, y); queries outside the node hull are
/// clamped to it, consistent with the Neumann extension.
double bilinear_interp(const ScalarField& f, double x, double y);

}  // namespace rsa
