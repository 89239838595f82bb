#include "sbgp/image_io.hpp"

#include "test_support.hpp"

#include <doctest.h>
#include <png.h>

#include <cstdio>
#include <fstream>
#include <vector>

using namespace sbgp;

namespace {

void write_bytes(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out << bytes;
}

void write_png(const std::filesystem::path& path, int width, int height, int color_type,
               int bit_depth, const std::vector<unsigned char>& data) {
  FILE* fp = std::fopen(path.string().c_str(), "wb");
  REQUIRE(fp != nullptr);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, fp);
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = data.size() / static_cast<std::size_t>(height);
  for (int r = 0; r < height; ++r) {
    png_write_row(png, const_cast<png_bytep>(data.data() + r * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace

TEST_CASE("binary PGM round trip") {
  const auto dir = test::scratch_dir("pgm");
  const Image img = test::random_image(3, 17, 23);
  write_pgm(dir / "a.pgm", img);
  const Image back = load_image(dir / "a.pgm");
  CHECK(back.rows() == 17);
  CHECK(back.cols() == 23);
  CHECK(back == img);
}

TEST_CASE("hand-written 2x2 PGM with a comment") {
  const auto dir = test::scratch_dir("pgm2");
  write_bytes(dir / "b.pgm", std::string("P5\n# note\n2 2\n255\n") + '\x00' + '\x7f' + '\x80' + '\xff');
  const Image img = load_image(dir / "b.pgm");
  Image expected(2, 2);
  expected << 0, 127, 128, 255;
  CHECK(img == expected);
}

TEST_CASE("malformed PGM inputs are rejected") {
  const auto dir = test::scratch_dir("pgm_bad");
  write_bytes(dir / "short.pgm", "P5\n4 4\n255\nabc");
  write_bytes(dir / "color.ppm", "P6\n1 1\n255\nabc");
  write_bytes(dir / "deep.pgm", "P5\n1 1\n65535\nab");
  write_bytes(dir / "text.txt", "hello world");
  CHECK_THROWS_AS(load_image(dir / "short.pgm"), InputError);
  CHECK_THROWS_AS(load_image(dir / "color.ppm"), InputError);
  CHECK_THROWS_AS(load_image(dir / "deep.pgm"), InputError);
  CHECK_THROWS_AS(load_image(dir / "text.txt"), InputError);
}

TEST_CASE("missing file names the path") {
  const auto path = std::filesystem::path(SBGP_TEST_TMP) / "does_not_exist.pgm";
  try {
    load_image(path);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("does_not_exist.pgm") != std::string::npos);
  }
}

TEST_CASE("grayscale PNG decodes, colour and 16-bit PNG are rejected") {
  const auto dir = test::scratch_dir("png");
  write_png(dir / "gray.png", 3, 2, PNG_COLOR_TYPE_GRAY, 8, {0, 10, 20, 200, 210, 255});
  const Image gray = load_image(dir / "gray.png");
  Image expected(2, 3);
  expected << 0, 10, 20, 200, 210, 255;
  CHECK(gray == expected);

  // 1-bit samples expand to the full 8-bit range.
  write_png(dir / "bits.png", 8, 1, PNG_COLOR_TYPE_GRAY, 1, {0b10100000});
  const Image bits = load_image(dir / "bits.png");
  CHECK(bits(0, 0) == 255);
  CHECK(bits(0, 1) == 0);
  CHECK(bits(0, 2) == 255);

  write_png(dir / "rgb.png", 1, 1, PNG_COLOR_TYPE_RGB, 8, {1, 2, 3});
  CHECK_THROWS_AS(load_image(dir / "rgb.png"), InputError);
  write_png(dir / "deep.png", 1, 1, PNG_COLOR_TYPE_GRAY, 16, {1, 2});
  CHECK_THROWS_AS(load_image(dir / "deep.png"), InputError);
}

TEST_CASE("quantisation rounds and clamps") {
  Image img(1, 5);
  img << -3.0, 0.49, 0.5, 254.6, 400.0;
  Image expected(1, 5);
  expected << 0, 0, 1, 255, 255;
  CHECK(quantize_8bit(img) == expected);
}
