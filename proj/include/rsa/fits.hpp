#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rsa/field.hpp"

namespace rsa {

/// Primary-HDU header of the minimal FITS subset handled here.
struct FitsHeader {
    int bitpix = -32;             // one of 8, 16, 32, -32, -64
    long naxis1 = 0;              // cols
    long naxis2 = 0;              // rows
    double bscale = 1.0;
    double bzero = 0.0;
    std::vector<std::string> extra_cards;  // opaque 80-char records, order preserved
};

/// Image in physical units: physical = bzero + bscale * stored.
struct RawImage {
    FitsHeader header;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;       // row-major
    std::size_t nan_replaced = 0;     // stored NaNs replaced by the image minimum
    bool extensions_ignored = false;  // trailing bytes beyond the primary HDU

    double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
    double min_value() const;
    double max_value() const;
};

RawImage read_fits(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> write_fits(const RawImage& img);

RawImage read_fits_file(const std::filesystem::path& path);
void write_fits_file(const RawImage& img, const std::filesystem::path& path);

/// Binary P5 graymap, maxval 255, [min, max] mapped linearly onto [0, 255].
/// Constant fields map to 0.
void write_pgm(const ScalarField& f, const std::filesystem::path& path);

RawImage raw_from_field(const ScalarField& f);
ScalarField field_from_raw(const RawImage& img, double dx);

}  // namespace rsa
