#include <doctest.h>

#include "rsa/extraction.hpp"

using namespace rsa;

namespace {

Mask mask_from(const char* const* rows, std::size_t r, std::size_t c) {
    Mask m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.set(i, j, rows[i][j] == '#');
    return m;
}

}  // namespace

TEST_CASE("object_mask keeps v >= 0") {
    ScalarField v(2, 3, 0.1);
    v(0, 0) = -0.5;
    v(0, 1) = 0.0;
    v(0, 2) = 0.2;
    v(1, 0) = -1e-12;
    v(1, 1) = 1.0;
    v(1, 2) = -3.0;
    const Mask m = object_mask(v);
    CHECK_FALSE(m(0, 0));
    CHECK(m(0, 1));  // boundary value belongs to the object
    CHECK(m(0, 2));
    CHECK_FALSE(m(1, 0));
    CHECK(m(1, 1));
    CHECK(m.count() == 3);
}

TEST_CASE("label_components separates diagonal blobs (4-connectivity)") {
    const char* rows[] = {
        "##...",
        "##...",
        "...##",
        "...##",
    };
    const Labeling lab = label_components(mask_from(rows, 4, 5), 1, 1.0);
    REQUIRE(lab.catalog.objects.size() == 2);
    CHECK(lab.label_at(0, 0) == 1);
    CHECK(lab.label_at(3, 4) == 2);
    CHECK(lab.label_at(0, 4) == 0);
    const SegmentRecord& a = lab.catalog.objects[0];
    CHECK(a.label == 1);
    CHECK(a.area == 4);
    CHECK(a.centroid_x == doctest::Approx(0.5));
    CHECK(a.centroid_y == doctest::Approx(0.5));
    CHECK(a.imin == 0);
    CHECK(a.imax == 1);
    CHECK(a.jmin == 0);
    CHECK(a.jmax == 1);
}

TEST_CASE("label_components merges an L-shaped 4-connected run") {
    const char* rows[] = {
        "#....",
        "#....",
        "###..",
    };
    const Labeling lab = label_components(mask_from(rows, 3, 5), 1, 0.5);
    REQUIRE(lab.catalog.objects.size() == 1);
    const SegmentRecord& r = lab.catalog.objects[0];
    CHECK(r.area == 5);
    // centroid in grid coordinates: mean j = (0+0+0+1+2)/5 = 0.6 -> x = 0.3
    CHECK(r.centroid_x == doctest::Approx(0.3));
    CHECK(r.centroid_y == doctest::Approx(0.5 * (0 + 1 + 2 + 2 + 2) / 5.0));
    CHECK(r.jmax == 2);
    CHECK(r.imax == 2);
}

TEST_CASE("label_components drops blobs under min_area and relabels densely") {
    const char* rows[] = {
        "#.#..",
        "....#",
        "###.#",
    };
    // areas: 1 (drop), 1 (drop), 3 (keep), 2 (drop) at min_area = 3
    const Labeling lab = label_components(mask_from(rows, 3, 5), 3, 1.0);
    REQUIRE(lab.catalog.objects.size() == 1);
    CHECK(lab.catalog.objects[0].label == 1);
    CHECK(lab.catalog.objects[0].area == 3);
    CHECK(lab.label_at(0, 0) == 0);
    CHECK(lab.label_at(2, 0) == 1);
    CHECK(lab.label_at(1, 4) == 0);
}

TEST_CASE("labels are assigned in raster order of first pixels") {
    const char* rows[] = {
        "..#",
        "#.#",
        "#..",
    };
    const Labeling lab = label_components(mask_from(rows, 3, 3), 1, 1.0);
    REQUIRE(lab.catalog.objects.size() == 2);
    // (0,2) comes before (1,0) in raster order
    CHECK(lab.label_at(0, 2) == 1);
    CHECK(lab.label_at(1, 0) == 2);
}

TEST_CASE("label_components of an empty mask yields no objects") {
    const Labeling lab = label_components(Mask(4, 4), 1, 1.0);
    CHECK(lab.catalog.objects.empty());
    for (int l : lab.labels) CHECK(l == 0);
}

TEST_CASE("mean intensities come from the original image") {
    const char* rows[] = {
        "##..",
        "..##",
    };
    Labeling lab = label_components(mask_from(rows, 2, 4), 1, 1.0);
    RawImage orig;
    orig.rows = 2;
    orig.cols = 4;
    orig.values = {10.0, 20.0, 0.0, 0.0, 0.0, 0.0, 5.0, 7.0};
    compute_mean_intensities(lab, orig);
    REQUIRE(lab.catalog.objects.size() == 2);
    CHECK(lab.catalog.objects[0].mean_intensity == doctest::Approx(15.0));
    CHECK(lab.catalog.objects[1].mean_intensity == doctest::Approx(6.0));

    const ScalarField seg = render_segmented(lab, 1.0);
    CHECK(seg(0, 0) == doctest::Approx(15.0));
    CHECK(seg(0, 1) == doctest::Approx(15.0));
    CHECK(seg(1, 2) == doctest::Approx(6.0));
    CHECK(seg(0, 2) == 0.0);
    CHECK(seg(1, 0) == 0.0);
}

TEST_CASE("object_mask + labeling round-trip from a FrontState") {
    FrontState st;
    st.v = ScalarField(5, 5, 0.1, -1.0);
    for (std::size_t i = 1; i <= 3; ++i)
        for (std::size_t j = 1; j <= 3; ++j) st.v(i, j) = 0.5;
    const Labeling lab = label_components(object_mask(st), 3, 0.1);
    REQUIRE(lab.catalog.objects.size() == 1);
    CHECK(lab.catalog.objects[0].area == 9);
    CHECK(lab.catalog.objects[0].centroid_x == doctest::Approx(0.2));
    CHECK(lab.catalog.objects[0].centroid_y == doctest::Approx(0.2));
}
