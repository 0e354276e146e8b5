#include <doctest.h>

#include <cmath>
#include <fstream>

#include "oracles.hpp"
#include "strkit/color.hpp"
#include "strkit/imageio.hpp"
#include "synth.hpp"
#include "tempdir.hpp"
#include "tiny_jpeg.hpp"

using namespace strkit;

TEST_CASE("png round-trip is pixel identical") {
  synth::TempDir dir("png");
  synth::Rng rng(11);

  RgbImage img = synth::random_rgb(2, 2, rng);
  const auto path = dir / "tiny.png";
  save_png(path, img);
  const RgbImage back = load_rgb(path);
  CHECK(back == img);

  // and again through a second save/load cycle
  const auto path2 = dir / "tiny2.png";
  save_png(path2, back);
  CHECK(load_rgb(path2) == img);

  RgbImage big = synth::random_rgb(37, 23, rng);
  save_png(dir / "big.png", big);
  CHECK(load_rgb(dir / "big.png") == big);
}

TEST_CASE("load_rgb error cases") {
  synth::TempDir dir("pngerr");
  CHECK_THROWS_AS(load_rgb(dir / "absent.png"), Error);
  try {
    load_rgb(dir / "absent.png");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotFound);
  }

  const auto fake = dir / "fake.png";
  std::ofstream(fake) << "this is not an image";
  try {
    load_rgb(fake);
    FAIL("expected DecodeError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DecodeError);
  }

  // a PNG signature followed by garbage must fail too, not crash
  const auto corrupt = dir / "corrupt.png";
  std::ofstream(corrupt, std::ios::binary).write("\x89PNG\r\n\x1a\ngarbage", 16);
  CHECK_THROWS_AS(load_rgb(corrupt), Error);
}

TEST_CASE("jpeg decode") {
  synth::TempDir dir("jpeg");
  const auto path = dir / "tiny.jpg";
  std::ofstream(path, std::ios::binary)
      .write(reinterpret_cast<const char*>(kTinyJpeg), sizeof(kTinyJpeg));
  const RgbImage img = load_rgb(path);
  CHECK(img.width == 8);
  CHECK(img.height == 8);
  // lossy codec: stay near the encoded solid color
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    CHECK(std::abs(img.data[3 * i] - 200) <= 8);
    CHECK(std::abs(img.data[3 * i + 1] - 60) <= 8);
    CHECK(std::abs(img.data[3 * i + 2] - 30) <= 8);
  }
}

TEST_CASE("mask png uses 0/255 and reloads exactly") {
  synth::TempDir dir("mask");
  synth::Rng rng(5);
  const BinaryMask mask = synth::random_mask(19, 7, 0.4, rng);
  save_png(dir / "m.png", mask);
  const GrayImage raw = load_gray(dir / "m.png");
  for (std::size_t i = 0; i < raw.data.size(); ++i)
    CHECK((raw.data[i] == 0 || raw.data[i] == 255));
  CHECK(load_mask(dir / "m.png") == mask);
}

TEST_CASE("label map 16-bit png is decodable with right dimensions") {
  synth::TempDir dir("label");
  LabelMap lm(9, 4);
  lm.labels = {0, 0, 1, 1, 1, 2, 2, 2, 2, 0, 0, 1, 1, 1, 2, 2, 2, 2,
               3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3};
  lm.n_segments = 4;
  save_label_png16(dir / "labels.png", lm);
  const RgbImage img = load_rgb(dir / "labels.png");
  CHECK(img.width == 9);
  CHECK(img.height == 4);
}

TEST_CASE("rgb_to_gray anchors and oracle") {
  RgbImage img(3, 1);
  std::uint8_t* p = img.pixel(0, 0);
  p[0] = p[1] = p[2] = 255;  // white
  p = img.pixel(1, 0);
  p[0] = p[1] = p[2] = 0;  // black
  p = img.pixel(2, 0);
  p[0] = 255;  // pure red
  const GrayImage g = rgb_to_gray(img);
  CHECK(g.at(0, 0) == 255);
  CHECK(g.at(1, 0) == 0);
  CHECK(g.at(2, 0) == oracle::gray_of(255, 0, 0));
  CHECK(g.at(2, 0) == 76);

  synth::Rng rng(17);
  const RgbImage rnd = synth::random_rgb(16, 16, rng);
  const GrayImage gr = rgb_to_gray(rnd);
  const auto expect = oracle::gray_image(rnd);
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(gr.data[i] == expect[i]);
}

TEST_CASE("rgb_to_gray monotone per channel") {
  synth::Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int r = static_cast<int>(rng.below(256));
    const int g = static_cast<int>(rng.below(256));
    const int b = static_cast<int>(rng.below(256));
    const int ch = static_cast<int>(rng.below(3));
    RgbImage a(1, 1), bimg(1, 1);
    a.data = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
              static_cast<std::uint8_t>(b)};
    bimg.data = a.data;
    if (bimg.data[ch] < 255) bimg.data[ch]++;
    CHECK(rgb_to_gray(bimg).data[0] >= rgb_to_gray(a).data[0]);
  }
}

TEST_CASE("rgb_to_lab anchors") {
  RgbImage img(3, 1);
  std::uint8_t* p = img.pixel(0, 0);
  p[0] = p[1] = p[2] = 255;
  p = img.pixel(1, 0);
  p[0] = p[1] = p[2] = 0;
  p = img.pixel(2, 0);
  p[0] = p[1] = p[2] = 128;
  const LabImage lab = rgb_to_lab(img);

  CHECK(lab.pixel(0, 0)[0] == doctest::Approx(100.0).epsilon(1e-4));
  CHECK(std::abs(lab.pixel(0, 0)[1]) < 0.01);
  CHECK(std::abs(lab.pixel(0, 0)[2]) < 0.01);

  CHECK(lab.pixel(1, 0)[0] == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(std::abs(lab.pixel(1, 0)[1]) < 1e-4);
  CHECK(std::abs(lab.pixel(1, 0)[2]) < 1e-4);

  CHECK(lab.pixel(2, 0)[0] == doctest::Approx(53.585).epsilon(1e-3));
  CHECK(std::abs(lab.pixel(2, 0)[1]) < 0.01);
  CHECK(std::abs(lab.pixel(2, 0)[2]) < 0.01);

  // scalar oracle agreement on random colors
  synth::Rng rng(3);
  const RgbImage rnd = synth::random_rgb(8, 8, rng);
  const LabImage got = rgb_to_lab(rnd);
  for (std::size_t i = 0; i < rnd.pixel_count(); ++i) {
    const auto want =
        oracle::srgb_to_lab(rnd.data[3 * i], rnd.data[3 * i + 1], rnd.data[3 * i + 2]);
    for (int c = 0; c < 3; ++c)
      CHECK(got.data[3 * i + c] == doctest::Approx(want[c]).epsilon(1e-4));
  }
}

TEST_CASE("lab inverse recovers srgb within one step on a sampled grid") {
  for (int r = 0; r < 256; r += 17)
    for (int g = 0; g < 256; g += 17)
      for (int b = 0; b < 256; b += 17) {
        RgbImage img(1, 1);
        img.data = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                    static_cast<std::uint8_t>(b)};
        const LabImage lab = rgb_to_lab(img);
        const auto back =
            oracle::lab_to_srgb(lab.data[0], lab.data[1], lab.data[2]);
        CHECK(std::abs(back[0] - r) <= 1);
        CHECK(std::abs(back[1] - g) <= 1);
        CHECK(std::abs(back[2] - b) <= 1);
      }
}

TEST_CASE("threshold") {
  GrayImage img(4, 3, 128);
  CHECK(threshold(img, 128).popcount() == img.pixel_count());  // inclusive
  CHECK(threshold(img, 129).popcount() == 0);
  CHECK(threshold(img, 0).popcount() == img.pixel_count());

  synth::Rng rng(9);
  GrayImage rnd(16, 16);
  for (auto& v : rnd.data) v = static_cast<std::uint8_t>(rng.below(256));
  const BinaryMask got = threshold(rnd, 97);
  for (std::size_t i = 0; i < rnd.data.size(); ++i)
    CHECK(got.data[i] == (rnd.data[i] >= 97 ? 1 : 0));
}

TEST_CASE("overlay") {
  synth::Rng rng(31);
  const RgbImage img = synth::random_rgb(10, 10, rng);

  const BinaryMask empty(10, 10, false);
  CHECK(overlay(img, empty, {255, 0, 0}, 0.7) == img);

  const BinaryMask full(10, 10, true);
  const RgbImage red = overlay(img, full, {200, 10, 40}, 1.0);
  for (std::size_t i = 0; i < red.pixel_count(); ++i) {
    CHECK(red.data[3 * i] == 200);
    CHECK(red.data[3 * i + 1] == 10);
    CHECK(red.data[3 * i + 2] == 40);
  }

  RgbImage one(1, 1);
  one.data = {100, 50, 201};
  BinaryMask m(1, 1, true);
  const RgbImage blended = overlay(one, m, {0, 255, 100}, 0.5);
  CHECK(blended.data[0] == 50);   // 50.0 rounds half-up
  CHECK(blended.data[1] == 153);  // 152.5 -> 153
  CHECK(blended.data[2] == 151);  // 150.5 -> 151

  const BinaryMask wrong(3, 3);
  CHECK_THROWS_AS(overlay(img, wrong, {1, 2, 3}, 0.5), Error);
}

TEST_CASE("resize_bilinear basics") {
  synth::Rng rng(41);
  const RgbImage img = synth::random_rgb(13, 9, rng);
  CHECK(resize_bilinear(img, 13, 9) == img);

  RgbImage flat(6, 6);
  for (auto& v : flat.data) v = 77;
  const RgbImage up = resize_bilinear(flat, 17, 5);
  for (auto v : up.data) CHECK(v == 77);
}
