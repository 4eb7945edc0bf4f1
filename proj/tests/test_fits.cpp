#include <cstring>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "rsa/errors.hpp"
#include "rsa/fits.hpp"
#include "test_util.hpp"

using namespace rsa;

namespace {

std::string pad80(std::string s) {
    s.resize(80, ' ');
    return s;
}

// Hand-built minimal FITS stream for parser tests.
std::vector<std::uint8_t> make_fits(int bitpix, long n1, long n2,
                                    const std::vector<std::uint8_t>& data,
                                    const std::vector<std::string>& extra = {}) {
    std::string h;
    h += pad80("SIMPLE  =                    T");
    h += pad80("BITPIX  =                  " + std::to_string(bitpix));
    h += pad80("NAXIS   =                    2");
    h += pad80("NAXIS1  =                    " + std::to_string(n1));
    h += pad80("NAXIS2  =                    " + std::to_string(n2));
    for (const auto& c : extra) h += pad80(c);
    h += pad80("END");
    while (h.size() % 2880 != 0) h += pad80("");
    std::vector<std::uint8_t> out(h.begin(), h.end());
    out.insert(out.end(), data.begin(), data.end());
    while (out.size() % 2880 != 0) out.push_back(0);
    return out;
}

std::vector<std::uint8_t> be_float(std::initializer_list<float> vals) {
    std::vector<std::uint8_t> out;
    for (float v : vals) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, 4);
        out.push_back(static_cast<std::uint8_t>(bits >> 24));
        out.push_back(static_cast<std::uint8_t>(bits >> 16));
        out.push_back(static_cast<std::uint8_t>(bits >> 8));
        out.push_back(static_cast<std::uint8_t>(bits));
    }
    return out;
}

}  // namespace

TEST_CASE("read_fits BITPIX=-32 identity scaling") {
    const auto bytes = make_fits(-32, 2, 1, be_float({1.0f, 2.0f}));
    const RawImage img = read_fits(bytes);
    CHECK(img.rows == 1);
    CHECK(img.cols == 2);
    CHECK(img(0, 0) == 1.0);
    CHECK(img(0, 1) == 2.0);
}

TEST_CASE("read_fits applies BSCALE and BZERO") {
    const auto bytes = make_fits(-32, 2, 1, be_float({1.0f, 2.0f}),
                                 {"BSCALE  =                  2.0",
                                  "BZERO   =                 10.0"});
    const RawImage img = read_fits(bytes);
    CHECK(img(0, 0) == 12.0);
    CHECK(img(0, 1) == 14.0);
}

TEST_CASE("read_fits BITPIX=16 with BZERO=32768") {
    // stored value -3, big-endian two's complement
    const std::vector<std::uint8_t> data{0xFF, 0xFD};
    const auto bytes = make_fits(16, 1, 1, data, {"BZERO   =              32768.0"});
    const RawImage img = read_fits(bytes);
    CHECK(img(0, 0) == 32765.0);
}

TEST_CASE("read_fits error paths") {
    const auto good = make_fits(-32, 2, 1, be_float({1.0f, 2.0f}));

    SUBCASE("not SIMPLE") {
        auto bad = good;
        bad[0] = 'X';
        CHECK_THROWS_AS(read_fits(bad), MissingSimple);
    }
    SUBCASE("short stream") {
        std::vector<std::uint8_t> bad(good.begin(), good.begin() + 100);
        CHECK_THROWS_AS(read_fits(bad), TruncatedData);
    }
    SUBCASE("unsupported BITPIX") {
        CHECK_THROWS_AS(read_fits(make_fits(24, 1, 1, {0, 0, 0})), UnsupportedBitpix);
    }
    SUBCASE("NAXIS != 2") {
        std::string h;
        h += pad80("SIMPLE  =                    T");
        h += pad80("BITPIX  =                    8");
        h += pad80("NAXIS   =                    3");
        h += pad80("END");
        while (h.size() % 2880 != 0) h += pad80("");
        std::vector<std::uint8_t> bad(h.begin(), h.end());
        CHECK_THROWS_AS(read_fits(bad), UnsupportedNaxis);
    }
    SUBCASE("truncated data area") {
        std::vector<std::uint8_t> bad(good.begin(), good.begin() + 2880);
        CHECK_THROWS_AS(read_fits(bad), TruncatedData);
    }
    SUBCASE("malformed numeric card") {
        const auto bad = make_fits(-32, 2, 1, be_float({1.0f, 2.0f}),
                                   {"BSCALE  =            not_a_num"});
        CHECK_THROWS_AS(read_fits(bad), MalformedCard);
    }
}

TEST_CASE("read_fits replaces stored NaNs with the minimum") {
    const float nanf = std::numeric_limits<float>::quiet_NaN();
    const auto bytes = make_fits(-32, 3, 1, be_float({5.0f, nanf, 2.0f}));
    const RawImage img = read_fits(bytes);
    CHECK(img(0, 1) == 2.0);
    CHECK(img.nan_replaced == 1);
}

TEST_CASE("write_fits round-trips values and emits block-multiple sizes") {
    RawImage img;
    img.rows = 1;
    img.cols = 2;
    img.values = {1.5, -2.25};
    const auto bytes = write_fits(img);
    CHECK(bytes.size() % 2880 == 0);
    const RawImage back = read_fits(bytes);
    CHECK(back(0, 0) == 1.5);
    CHECK(back(0, 1) == -2.25);
}

TEST_CASE("write_fits 1x1 file is exactly two blocks") {
    RawImage img;
    img.rows = 1;
    img.cols = 1;
    img.values = {0.0};
    CHECK(write_fits(img).size() == 5760);
}

TEST_CASE("fits round-trip is exact under 32-bit quantization") {
    test::Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        RawImage img;
        img.rows = 4;
        img.cols = 5;
        img.values.resize(20);
        for (double& v : img.values) v = rng.uniform(-100.0, 100.0);
        const RawImage back = read_fits(write_fits(img));
        for (std::size_t k = 0; k < img.values.size(); ++k)
            CHECK(back.values[k] == static_cast<double>(static_cast<float>(img.values[k])));
    }
}

TEST_CASE("write_pgm mapping") {
    const auto tmp = std::filesystem::temp_directory_path() / "rsa_test.pgm";
    auto read_all = [&tmp]() {
        std::ifstream in(tmp, std::ios::binary);
        return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
    };

    SUBCASE("endpoints and midpoint") {
        ScalarField f(1, 3, 1.0);
        f(0, 0) = -1.0;
        f(0, 1) = 0.0;
        f(0, 2) = 1.0;
        write_pgm(f, tmp);
        const auto bytes = read_all();
        const std::size_t off = bytes.size() - 3;
        CHECK(bytes[off] == 0);
        CHECK(bytes[off + 1] == 128);  // 127.5 rounds half-to-even
        CHECK(bytes[off + 2] == 255);
    }
    SUBCASE("constant field maps to 0") {
        ScalarField f(2, 2, 1.0, 3.0);
        write_pgm(f, tmp);
        const auto bytes = read_all();
        for (std::size_t k = bytes.size() - 4; k < bytes.size(); ++k) CHECK(bytes[k] == 0);
    }
    std::filesystem::remove(tmp);
}
