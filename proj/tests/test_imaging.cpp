#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "segface/clahe.hpp"
#include "segface/image.hpp"
#include "segface/pgm.hpp"
#include "segface/rng.hpp"

using namespace segface;

namespace {

GrayImage random_image(int w, int h, std::uint64_t seed) {
    GrayImage img(w, h);
    Rng rng(seed);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    return img;
}

// Independent oracle: plain global histogram equalization.
GrayImage global_hist_eq(const GrayImage& img) {
    std::array<std::uint64_t, 256> hist{};
    for (std::uint8_t v : img.data) ++hist[v];
    std::array<std::uint8_t, 256> lut{};
    std::uint64_t cdf = 0;
    for (int v = 0; v < 256; ++v) {
        cdf += hist[v];
        lut[v] = static_cast<std::uint8_t>(
            std::llround(255.0 * static_cast<double>(cdf) / static_cast<double>(img.data.size())));
    }
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) out.data[i] = lut[img.data[i]];
    return out;
}

// Independent oracle: brute-force pixel sum.
std::uint64_t rect_sum_oracle(const GrayImage& img, int x1, int y1, int x2, int y2) {
    std::uint64_t s = 0;
    for (int y = y1; y < y2; ++y)
        for (int x = x1; x < x2; ++x) s += img.at(x, y);
    return s;
}

}  // namespace

TEST_CASE("downsample dimensions and identity") {
    GrayImage img(1280, 720, 100);
    const GrayImage out = downsample(img, 4);
    CHECK(out.width == 320);
    CHECK(out.height == 180);

    const GrayImage rnd = random_image(37, 23, 7);
    const GrayImage same = downsample(rnd, 1);
    CHECK(same.data == rnd.data);
}

TEST_CASE("downsample block mean") {
    GrayImage img(2, 2);
    img.at(0, 0) = 0;
    img.at(1, 0) = 255;
    img.at(0, 1) = 255;
    img.at(1, 1) = 0;
    const GrayImage out = downsample(img, 2);
    CHECK(out.width == 1);
    CHECK(out.height == 1);
    CHECK(static_cast<int>(out.at(0, 0)) == 128);
}

TEST_CASE("downsample truncates partial blocks and rejects factor 0") {
    const GrayImage img = random_image(11, 7, 3);
    const GrayImage out = downsample(img, 3);
    CHECK(out.width == 3);
    CHECK(out.height == 2);
    CHECK_THROWS_AS(downsample(img, 0), std::invalid_argument);
}

TEST_CASE("downsample chain matches combined factor within rounding") {
    const GrayImage img = random_image(64, 48, 11);
    const GrayImage chained = downsample(downsample(img, 2), 3);
    const GrayImage direct = downsample(img, 6);
    REQUIRE(chained.width == direct.width);
    REQUIRE(chained.height == direct.height);
    for (std::size_t i = 0; i < direct.data.size(); ++i)
        CHECK(std::abs(static_cast<int>(chained.data[i]) - static_cast<int>(direct.data[i])) <= 1);
}

TEST_CASE("integral image trivial sums") {
    const GrayImage ones(3, 3, 1);
    const IntegralImage ii(ones);
    CHECK(ii.rect_sum(0, 0, 3, 3) == 9);

    GrayImage one(1, 1);
    one.at(0, 0) = 173;
    CHECK(IntegralImage(one).rect_sum(0, 0, 1, 1) == 173);
}

TEST_CASE("integral image matches brute-force sums on random rectangles") {
    const GrayImage img = random_image(40, 30, 17);
    const IntegralImage ii(img);
    Rng rng(99);
    for (int i = 0; i < 100; ++i) {
        int x1 = static_cast<int>(rng.uniform_int(0, img.width));
        int x2 = static_cast<int>(rng.uniform_int(0, img.width));
        int y1 = static_cast<int>(rng.uniform_int(0, img.height));
        int y2 = static_cast<int>(rng.uniform_int(0, img.height));
        if (x1 > x2) std::swap(x1, x2);
        if (y1 > y2) std::swap(y1, y2);
        CHECK(ii.rect_sum(x1, y1, x2, y2) == rect_sum_oracle(img, x1, y1, x2, y2));
    }
}

TEST_CASE("integral image zero borders and monotone entries") {
    const GrayImage img = random_image(15, 9, 23);
    const IntegralImage ii(img);
    for (int x = 0; x <= img.width; ++x) CHECK(ii.at(x, 0) == 0);
    for (int y = 0; y <= img.height; ++y) CHECK(ii.at(0, y) == 0);
    for (int y = 0; y <= img.height; ++y)
        for (int x = 1; x <= img.width; ++x) CHECK(ii.at(x, y) >= ii.at(x - 1, y));
    for (int x = 0; x <= img.width; ++x)
        for (int y = 1; y <= img.height; ++y) CHECK(ii.at(x, y) >= ii.at(x, y - 1));
}

TEST_CASE("clahe preserves constant images") {
    const GrayImage img(64, 48, 97);
    const GrayImage out = clahe(img, 8, 8, 2.0);
    CHECK(out.data == img.data);
    const GrayImage twice = clahe(out, 8, 8, 2.0);
    CHECK(twice.data == out.data);
}

TEST_CASE("clahe degenerate parameters equal global histogram equalization") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const GrayImage img = random_image(96, 64, seed);
        const GrayImage eq = clahe(img, 1, 1, std::numeric_limits<double>::infinity());
        const GrayImage ref = global_hist_eq(img);
        for (std::size_t i = 0; i < img.data.size(); ++i)
            CHECK(std::abs(static_cast<int>(eq.data[i]) - static_cast<int>(ref.data[i])) <= 1);
    }
}

TEST_CASE("clahe validates arguments") {
    CHECK_THROWS_AS(clahe(GrayImage(), 8, 8, 2.0), std::invalid_argument);
    const GrayImage img = random_image(16, 16, 1);
    CHECK_THROWS_AS(clahe(img, 0, 8, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(clahe(img, 8, 32, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(clahe(img, 8, 8, 0.0), std::invalid_argument);
}

TEST_CASE("clahe raises local contrast on a low-contrast ramp") {
    GrayImage img(64, 64);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) img.at(x, y) = static_cast<std::uint8_t>(100 + (x + y) / 8);
    // A permissive clip limit: the per-tile spikes must survive clipping
    // for equalization to stretch them.
    const GrayImage out = clahe(img, 4, 4, 100.0);

    // Mapping is range-preserving, so compare mean neighbor differences
    // rather than the span.
    const auto local_contrast = [](const GrayImage& g) {
        double sum = 0.0;
        for (int y = 0; y < g.height; ++y)
            for (int x = 1; x < g.width; ++x)
                sum += std::abs(static_cast<int>(g.at(x, y)) - static_cast<int>(g.at(x - 1, y)));
        return sum / (static_cast<double>(g.width - 1) * g.height);
    };
    CHECK(local_contrast(out) > local_contrast(img));

    int out_min = 255, out_max = 0;
    for (std::uint8_t v : out.data) {
        out_min = std::min<int>(out_min, v);
        out_max = std::max<int>(out_max, v);
    }
    CHECK(out_min >= 100);  // range preserved
    CHECK(out_max <= 115);
}

TEST_CASE("pgm round trip and validation") {
    const auto dir = std::filesystem::temp_directory_path() / "segface_pgm_test";
    std::filesystem::create_directories(dir);
    const GrayImage img = random_image(33, 21, 5);
    write_pgm(img, dir / "a.pgm");
    const GrayImage back = read_pgm(dir / "a.pgm");
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
    CHECK(back.data == img.data);

    {
        std::ofstream bad(dir / "bad.pgm", std::ios::binary);
        bad << "P5\n# comment\n2 2\n65535\n";
        bad << "abcd";
    }
    CHECK_THROWS(read_pgm(dir / "bad.pgm"));
    CHECK_THROWS(read_pgm(dir / "missing.pgm"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("luma conversion") {
    CHECK(luma_from_rgb(255, 255, 255) == 255);
    CHECK(luma_from_rgb(0, 0, 0) == 0);
    CHECK(luma_from_rgb(255, 0, 0) == 76);  // round(0.299 * 255)
}
