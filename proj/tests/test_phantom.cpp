#include <cmath>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "rsa/errors.hpp"
#include "rsa/phantom.hpp"

using namespace rsa;

TEST_CASE("noiseless phantom is background plus Gaussian profiles") {
    PhantomSpec spec;
    spec.rows = 21;
    spec.cols = 21;
    spec.background = 0.05;
    spec.sources.push_back({10.0, 10.0, 0.6, 2.0});
    const Phantom ph = generate(spec);
    CHECK(ph.image.values[10 * 21 + 10] == doctest::Approx(0.65));
    // one radius out: background + A*exp(-1/2)
    CHECK(ph.image.values[10 * 21 + 12] ==
          doctest::Approx(0.05 + 0.6 * std::exp(-0.5)).epsilon(1e-12));
    // far corner is essentially background
    CHECK(ph.image.values[0] == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("truth mask is the 2-sigma isophote disc") {
    PhantomSpec spec;
    spec.rows = 31;
    spec.cols = 31;
    spec.sources.push_back({15.0, 15.0, 1.0, 3.0});
    const Phantom ph = generate(spec);
    REQUIRE(ph.truth_masks.size() == 1);
    const Mask& m = ph.truth_masks[0];
    for (std::size_t i = 0; i < 31; ++i) {
        for (std::size_t j = 0; j < 31; ++j) {
            const double d = std::hypot(static_cast<double>(j) - 15.0,
                                        static_cast<double>(i) - 15.0);
            CHECK(m(i, j) == (d <= 2.0 * 3.0 + 1e-12));
        }
    }
}

TEST_CASE("gaussian noise is deterministic for a fixed seed") {
    PhantomSpec spec;
    spec.rows = 16;
    spec.cols = 16;
    spec.noise = NoiseKind::gaussian;
    spec.noise_param = 0.01;
    spec.seed = 42;
    spec.sources.push_back({8.0, 8.0, 0.5, 2.0});
    const Phantom a = generate(spec);
    const Phantom b = generate(spec);
    for (std::size_t k = 0; k < a.image.values.size(); ++k)
        CHECK(a.image.values[k] == b.image.values[k]);
    spec.seed = 43;
    const Phantom c = generate(spec);
    std::size_t differing = 0;
    for (std::size_t k = 0; k < a.image.values.size(); ++k)
        if (a.image.values[k] != c.image.values[k]) ++differing;
    CHECK(differing > 200);
}

TEST_CASE("gaussian noise has roughly the requested scale") {
    PhantomSpec spec;
    spec.rows = 100;
    spec.cols = 100;
    spec.background = 0.0;
    spec.noise = NoiseKind::gaussian;
    spec.noise_param = 0.01;
    spec.seed = 7;
    const Phantom ph = generate(spec);
    double sum = 0.0, sum2 = 0.0;
    for (double v : ph.image.values) {
        sum += v;
        sum2 += v * v;
    }
    const double n = static_cast<double>(ph.image.values.size());
    const double mean = sum / n;
    const double sd = std::sqrt(sum2 / n - mean * mean);
    CHECK(std::abs(mean) < 5e-4);
    CHECK(sd == doctest::Approx(0.01).epsilon(0.05));
}

TEST_CASE("poisson noise keeps the expected level") {
    PhantomSpec spec;
    spec.rows = 80;
    spec.cols = 80;
    spec.background = 0.05;
    spec.noise = NoiseKind::poisson;
    spec.noise_param = 1000.0;  // counts per unit intensity
    spec.seed = 19;
    const Phantom ph = generate(spec);
    double sum = 0.0;
    for (double v : ph.image.values) {
        CHECK(v >= 0.0);
        sum += v;
    }
    const double mean = sum / static_cast<double>(ph.image.values.size());
    CHECK(mean == doctest::Approx(0.05).epsilon(0.02));
}

TEST_CASE("iou basics") {
    Mask a(4, 4), b(4, 4);
    CHECK(iou(a, b) == 1.0);  // both empty by convention
    a.set(0, 0, true);
    a.set(0, 1, true);
    b.set(0, 1, true);
    b.set(0, 2, true);
    CHECK(iou(a, b) == doctest::Approx(1.0 / 3.0));
    CHECK(iou(a, a) == 1.0);
    Mask c(3, 3);
    CHECK_THROWS_AS(iou(a, c), DomainError);
}

TEST_CASE("spec validation") {
    PhantomSpec spec;
    spec.rows = 2;
    CHECK_THROWS_AS(generate(spec), DomainError);
    spec.rows = 10;
    spec.cols = 10;
    spec.sources.push_back({5.0, 5.0, 1.0, 0.0});
    CHECK_THROWS_AS(generate(spec), DomainError);
    spec.sources[0].radius = 2.0;
    spec.noise = NoiseKind::gaussian;
    spec.noise_param = 0.0;
    CHECK_THROWS_AS(generate(spec), DomainError);
}

TEST_CASE("parse_phantom_spec reads the flat key=value format") {
    const auto tmp = std::filesystem::temp_directory_path() / "rsa_phantom_spec.txt";
    {
        std::ofstream out(tmp);
        out << "# demo scene\n"
            << "rows = 64\n"
            << "cols = 48\n"
            << "background = 0.05\n"
            << "seed = 1234\n"
            << "noise = gaussian 0.01\n"
            << "source = 20 30 0.6 3\n"
            << "source = 40 10 0.4 2.5\n";
    }
    const PhantomSpec spec = parse_phantom_spec(tmp);
    CHECK(spec.rows == 64);
    CHECK(spec.cols == 48);
    CHECK(spec.background == 0.05);
    CHECK(spec.seed == 1234);
    CHECK(spec.noise == NoiseKind::gaussian);
    CHECK(spec.noise_param == 0.01);
    REQUIRE(spec.sources.size() == 2);
    CHECK(spec.sources[0].cx == 20.0);
    CHECK(spec.sources[0].cy == 30.0);
    CHECK(spec.sources[1].amplitude == 0.4);
    CHECK(spec.sources[1].radius == 2.5);

    {
        std::ofstream out(tmp);
        out << "bogus = 1\n";
    }
    CHECK_THROWS_AS(parse_phantom_spec(tmp), ConfigError);
    {
        std::ofstream out(tmp);
        out << "source = 1 2\n";
    }
    CHECK_THROWS_AS(parse_phantom_spec(tmp), ConfigError);
    std::filesystem::remove(tmp);
}
