#include "rsa/fits.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "rsa/errors.hpp"

namespace rsa {

namespace {

constexpr std::size_t kBlock = 2880;
constexpr std::size_t kCard = 80;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(' ');
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(' ');
    return s.substr(a, b - a + 1);
}

struct Card {
    std::string keyword;
    std::string raw;       // full 80 characters
    std::size_t offset;    // byte offset in the stream
};

std::string card_value_text(const Card& c) {
    if (c.raw.size() < 10 || c.raw[8] != '=')
        throw MalformedCard("FITS card '" + c.keyword + "' at offset " +
                            std::to_string(c.offset) + ": missing value indicator");
    std::string v = c.raw.substr(10);
    // strip an inline comment
    const auto slash = v.find('/');
    if (slash != std::string::npos) v = v.substr(0, slash);
    return trim(v);
}

long card_long(const Card& c) {
    const std::string v = card_value_text(c);
    try {
        std::size_t pos = 0;
        const long out = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw MalformedCard("FITS card '" + c.keyword + "' at offset " +
                            std::to_string(c.offset) + ": bad integer value '" + v + "'");
    }
}

double card_double(const Card& c) {
    std::string v = card_value_text(c);
    std::replace(v.begin(), v.end(), 'D', 'E');  // Fortran exponent marker
    try {
        std::size_t pos = 0;
        const double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw MalformedCard("FITS card '" + c.keyword + "' at offset " +
                            std::to_string(c.offset) + ": bad real value '" + v + "'");
    }
}

std::uint16_t load_be16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
}

std::uint32_t load_be32(const std::uint8_t* p) {
    return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
           (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}

std::uint64_t load_be64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v = (v << 8) | p[k];
    return v;
}

std::string pad_card(std::string s) {
    s.resize(kCard, ' ');
    return s;
}

std::string int_card(const std::string& keyword, long value) {
    std::string kw = keyword;
    kw.resize(8, ' ');
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%20ld", value);
    return pad_card(kw + "= " + buf);
}

std::string real_card(const std::string& keyword, double value) {
    std::string kw = keyword;
    kw.resize(8, ' ');
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%20.1f", value);
    return pad_card(kw + "= " + buf);
}

}  // namespace

double RawImage::min_value() const { return *std::min_element(values.begin(), values.end()); }
double RawImage::max_value() const { return *std::max_element(values.begin(), values.end()); }

RawImage read_fits(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < kBlock)
        throw TruncatedData("FITS stream shorter than one 2880-byte block (" +
                            std::to_string(bytes.size()) + " bytes)");
    if (std::memcmp(bytes.data(), "SIMPLE  ", 8) != 0)
        throw MissingSimple("first FITS card is not SIMPLE (offset 0)");

    FitsHeader h;
    bool seen_bitpix = false, seen_naxis = false, seen_n1 = false, seen_n2 = false;
    bool end_found = false;
    long naxis = 0;
    std::size_t pos = 0;
    while (!end_found) {
        if (pos + kBlock > bytes.size())
            throw TruncatedData("FITS header not terminated by END before end of stream (offset " +
                                std::to_string(pos) + ")");
        for (std::size_t c = 0; c < kBlock / kCard; ++c, pos += kCard) {
            Card card;
            card.offset = pos;
            card.raw.assign(reinterpret_cast<const char*>(bytes.data()) + pos, kCard);
            card.keyword = trim(card.raw.substr(0, 8));
            if (card.keyword == "END") {
                end_found = true;
                pos += kCard * (kBlock / kCard - c);  // skip the rest of this block
                break;
            }
            if (card.keyword == "SIMPLE") continue;
            if (card.keyword == "BITPIX") { h.bitpix = static_cast<int>(card_long(card)); seen_bitpix = true; }
            else if (card.keyword == "NAXIS") { naxis = card_long(card); seen_naxis = true; }
            else if (card.keyword == "NAXIS1") { h.naxis1 = card_long(card); seen_n1 = true; }
            else if (card.keyword == "NAXIS2") { h.naxis2 = card_long(card); seen_n2 = true; }
            else if (card.keyword == "BSCALE") h.bscale = card_double(card);
            else if (card.keyword == "BZERO") h.bzero = card_double(card);
            else if (!trim(card.raw).empty()) h.extra_cards.push_back(card.raw);
        }
        // round pos up to the block boundary the END card lives in
        pos = ((pos + kBlock - 1) / kBlock) * kBlock;
    }

    if (!seen_bitpix) throw MalformedCard("FITS header has no BITPIX card");
    if (h.bitpix != 8 && h.bitpix != 16 && h.bitpix != 32 && h.bitpix != -32 && h.bitpix != -64)
        throw UnsupportedBitpix("BITPIX=" + std::to_string(h.bitpix) +
                                " (supported: 8, 16, 32, -32, -64)");
    if (!seen_naxis || naxis != 2)
        throw UnsupportedNaxis("NAXIS=" + std::to_string(naxis) + " (only NAXIS=2 supported)");
    if (!seen_n1 || !seen_n2 || h.naxis1 <= 0 || h.naxis2 <= 0)
        throw MalformedCard("NAXIS1/NAXIS2 missing or non-positive");

    RawImage img;
    img.header = h;
    img.cols = static_cast<std::size_t>(h.naxis1);
    img.rows = static_cast<std::size_t>(h.naxis2);
    const std::size_t n = img.rows * img.cols;
    const std::size_t elem = static_cast<std::size_t>(std::abs(h.bitpix)) / 8;
    if (pos + n * elem > bytes.size())
        throw TruncatedData("FITS data area truncated: need " + std::to_string(n * elem) +
                            " bytes at offset " + std::to_string(pos) + ", have " +
                            std::to_string(bytes.size() - pos));

    img.values.resize(n);
    const std::uint8_t* p = bytes.data() + pos;
    for (std::size_t k = 0; k < n; ++k, p += elem) {
        double stored;
        switch (h.bitpix) {
            case 8: stored = static_cast<double>(*p); break;
            case 16: stored = static_cast<double>(static_cast<std::int16_t>(load_be16(p))); break;
            case 32: stored = static_cast<double>(static_cast<std::int32_t>(load_be32(p))); break;
            case -32: stored = static_cast<double>(std::bit_cast<float>(load_be32(p))); break;
            default: stored = std::bit_cast<double>(load_be64(p)); break;
        }
        img.values[k] = h.bzero + h.bscale * stored;
    }

    // Stored NaNs (possible for BITPIX < 0) become the finite minimum.
    double finite_min = std::numeric_limits<double>::infinity();
    std::size_t nans = 0;
    for (double v : img.values) {
        if (std::isnan(v)) ++nans;
        else finite_min = std::min(finite_min, v);
    }
    if (nans > 0) {
        if (nans == n) throw TruncatedData("FITS data area contains no finite value");
        for (double& v : img.values)
            if (std::isnan(v)) v = finite_min;
        img.nan_replaced = nans;
    }

    const std::size_t data_end = pos + ((n * elem + kBlock - 1) / kBlock) * kBlock;
    img.extensions_ignored = bytes.size() > data_end;
    return img;
}

std::vector<std::uint8_t> write_fits(const RawImage& img) {
    std::string header;
    header += pad_card("SIMPLE  =                    T");
    header += int_card("BITPIX", -32);
    header += int_card("NAXIS", 2);
    header += int_card("NAXIS1", static_cast<long>(img.cols));
    header += int_card("NAXIS2", static_cast<long>(img.rows));
    header += real_card("BSCALE", 1.0);
    header += real_card("BZERO", 0.0);
    for (const auto& c : img.header.extra_cards) header += pad_card(c);
    header += pad_card("END");
    while (header.size() % kBlock != 0) header += pad_card("");

    std::vector<std::uint8_t> out(header.begin(), header.end());
    const std::size_t n = img.rows * img.cols;
    out.reserve(out.size() + ((n * 4 + kBlock - 1) / kBlock) * kBlock);
    for (std::size_t k = 0; k < n; ++k) {
        const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(img.values[k]));
        out.push_back(static_cast<std::uint8_t>(bits >> 24));
        out.push_back(static_cast<std::uint8_t>(bits >> 16));
        out.push_back(static_cast<std::uint8_t>(bits >> 8));
        out.push_back(static_cast<std::uint8_t>(bits));
    }
    while (out.size() % kBlock != 0) out.push_back(0);
    return out;
}

RawImage read_fits_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open FITS file: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return read_fits(bytes);
}

void write_fits_file(const RawImage& img, const std::filesystem::path& path) {
    const auto bytes = write_fits(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write FITS file: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

void write_pgm(const ScalarField& f, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write PGM file: " + path.string());
    out << "P5\n" << f.cols() << " " << f.rows() << "\n255\n";
    const double lo = f.min_value();
    const double hi = f.max_value();
    const double span = hi - lo;
    std::vector<std::uint8_t> row(f.cols());
    for (std::size_t i = 0; i < f.rows(); ++i) {
        for (std::size_t j = 0; j < f.cols(); ++j) {
            double b = 0.0;
            if (span > 0.0) b = std::nearbyint((f(i, j) - lo) / span * 255.0);
            row[j] = static_cast<std::uint8_t>(std::clamp(b, 0.0, 255.0));
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size()));
    }
}

RawImage raw_from_field(const ScalarField& f) {
    RawImage img;
    img.rows = f.rows();
    img.cols = f.cols();
    img.header.naxis1 = static_cast<long>(f.cols());
    img.header.naxis2 = static_cast<long>(f.rows());
    img.values = f.values();
    return img;
}

ScalarField field_from_raw(const RawImage& img, double dx) {
    ScalarField f(img.rows, img.cols, dx);
    f.values() = img.values;
    return f;
}

}  // namespace rsa
