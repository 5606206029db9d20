#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/oracles.hpp"
#include "orchard/errors.hpp"
#include "orchard/imgproc.hpp"

using namespace orchard;

TEST_CASE("hsv conversion of primaries") {
  const Hsv red = rgb_to_hsv(Rgb8{255, 0, 0});
  CHECK(red.h == doctest::Approx(0));
  CHECK(red.s == doctest::Approx(1));
  CHECK(red.v == doctest::Approx(1));
  CHECK(rgb_to_hsv(Rgb8{0, 255, 0}).h == doctest::Approx(120));
  CHECK(rgb_to_hsv(Rgb8{0, 0, 255}).h == doctest::Approx(240));
  const Hsv grey = rgb_to_hsv(Rgb8{128, 128, 128});
  CHECK(grey.s == doctest::Approx(0));
  CHECK(grey.v == doctest::Approx(128 / 255.0));
}

TEST_CASE("hue range wraps through zero") {
  HsvRange red{350, 10, 0.4f, 1, 0.3f, 1};
  CHECK(red.contains({355, 0.9f, 0.9f}));
  CHECK(red.contains({5, 0.9f, 0.9f}));
  CHECK_FALSE(red.contains({180, 0.9f, 0.9f}));
  CHECK_FALSE(red.contains({0, 0.2f, 0.9f}));
}

TEST_CASE("morphology matches the sliding-window oracle") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> dim(5, 60), k(1, 7);
  for (int i = 0; i < 40; ++i) {
    const int w = dim(rng), h = dim(rng);
    const Mask m = oracle::random_mask(rng, w, h, 0.4);
    const int kh = std::min(k(rng), h), kw = std::min(k(rng), w);
    CHECK(dilate(m, {kh, kw}) == oracle::morph(m, kh, kw, true));
    CHECK(erode(m, {kh, kw}) == oracle::morph(m, kh, kw, false));
  }
}

TEST_CASE("morphology edge cases") {
  Mask m(4, 4, 1);
  CHECK(erode(m, {3, 3})(0, 0) == 0);  // outside is background
  CHECK(erode(m, {3, 3})(1, 1) == 1);
  CHECK(dilate(Mask(4, 4), {3, 3}) == Mask(4, 4));
  CHECK(dilate(m, {1, 1}) == m);
  CHECK_THROWS_AS(dilate(m, {0, 3}), DomainError);
  CHECK_THROWS_AS(dilate(m, {5, 1}), DomainError);
}

TEST_CASE("median filter matches the vote oracle") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 30; ++i) {
    const Mask m = oracle::random_mask(rng, 3 + i, 40 - i, 0.5);
    CHECK(median3x3(m) == oracle::median3x3(m));
  }
}

TEST_CASE("labelling matches union-find") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 30; ++i) {
    const Mask m = i % 2 ? oracle::random_mask(rng, 50, 37, 0.45) : oracle::random_blobs(rng, 64, 64, 8);
    const LabeledRegions cc = connected_components(m);
    const auto want = oracle::label(m);
    CHECK(cc.labels == want);
    const auto areas = oracle::areas(want);
    REQUIRE(cc.count() == static_cast<int>(areas.size()));
    for (int l = 0; l < cc.count(); ++l) CHECK(cc.regions[l].area == areas[l]);
  }
}

TEST_CASE("diagonal neighbours join one component") {
  Mask m(3, 3);
  m(0, 0) = m(1, 1) = m(2, 2) = 1;
  CHECK(connected_components(m).count() == 1);
}

TEST_CASE("distance transform matches brute force") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const Mask m = i % 2 ? oracle::random_mask(rng, 30, 25, 0.8) : oracle::random_blobs(rng, 48, 40, 5);
    const RealImage got = distance_transform(m);
    const RealImage want = oracle::edt(m);
    for (std::size_t p = 0; p < m.size(); ++p) CHECK(std::abs(got.pixels()[p] - want.pixels()[p]) <= 1e-6);
  }
}

TEST_CASE("distance transform basics") {
  Mask m(7, 7, 1);
  const RealImage d = distance_transform(m);
  CHECK(d(0, 0) == doctest::Approx(1));
  CHECK(d(3, 3) == doctest::Approx(4));
  CHECK(distance_transform(Mask(5, 5))(2, 2) == 0);
}

TEST_CASE("normalized transform peaks at one per component") {
  std::mt19937_64 rng(5);
  const Mask m = oracle::random_blobs(rng, 80, 60, 6);
  const RealImage got = distance_transform_normalized(m);
  const RealImage want = oracle::edt_normalized(m);
  for (std::size_t p = 0; p < m.size(); ++p) CHECK(std::abs(got.pixels()[p] - want.pixels()[p]) <= 1e-6);
  const LabeledRegions cc = connected_components(m);
  std::vector<double> peak(cc.count() + 1, 0.0);
  for (std::size_t p = 0; p < m.size(); ++p)
    peak[cc.labels.pixels()[p]] = std::max(peak[cc.labels.pixels()[p]], got.pixels()[p]);
  for (int l = 1; l <= cc.count(); ++l) CHECK(peak[l] == doctest::Approx(1.0));
}

TEST_CASE("threshold and crop") {
  RealImage img(3, 2, 0.5);
  img(1, 2) = 0.7;
  const Mask t = threshold(img, 0.7);
  CHECK(popcount(t) == 1);
  CHECK(t(1, 2) == 1);
  const auto c = crop(img, PixelBox{1, 1, 1, 2});
  CHECK(c.width() == 2);
  CHECK(c(0, 1) == doctest::Approx(0.7));
  CHECK_THROWS_AS(crop(img, PixelBox{0, 0, 2, 2}), DomainError);
}
