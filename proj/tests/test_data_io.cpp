#include <doctest.h>

#include <png.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "xplain/data_io.hpp"
#include "xplain/error.hpp"

using namespace xplain;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an xplain::Error");
  return ErrorCode::InvalidArgument;
}

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

std::vector<unsigned char> bytes(const std::string& s) { return {s.begin(), s.end()}; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "xplain_data_io_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_png(const fs::path& path, int w, int h, int color_type, int depth,
               const std::vector<unsigned char>& raw) {
  FILE* f = std::fopen(path.c_str(), "wb");
  REQUIRE(f != nullptr);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, f);
  png_set_IHDR(png, info, w, h, depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
  const std::size_t row_bytes = static_cast<std::size_t>(w) * channels * (depth / 8);
  for (int r = 0; r < h; ++r) png_write_row(png, const_cast<unsigned char*>(raw.data() + r * row_bytes));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(f);
}

}  // namespace

TEST_CASE("samples CSV parsing") {
  const SampleSet s = parse_samples_csv("x1,x2,yhat,u\n1,2,3,4\n5,6.5,-7e-1,8\n");
  CHECK(s.m() == 2);
  CHECK(s.n() == 2);
  CHECK(s.features()(1, 1) == 6.5);
  CHECK(s.predictions()[1] == -0.7);
  CHECK(s.summaries()[0] == 4.0);

  CHECK(parse_samples_csv("x1,yhat,u\r\n1,2,3\r\n").m() == 1);

  CHECK(code_of([] { parse_samples_csv("x1,yhat\n1,2\n"); }) == ErrorCode::MalformedHeader);
  CHECK(code_of([] { parse_samples_csv("x2,yhat,u\n1,2,3\n"); }) == ErrorCode::MalformedHeader);
  CHECK(code_of([] { parse_samples_csv("yhat,u\n1,2\n"); }) == ErrorCode::MalformedHeader);
  CHECK(code_of([] { parse_samples_csv(""); }) == ErrorCode::MalformedHeader);
  CHECK(code_of([] { parse_samples_csv("x1,yhat,u\n1,2\n"); }) == ErrorCode::RaggedRow);
  CHECK(code_of([] { parse_samples_csv("x1,yhat,u\n1,2,3\n1,NaN,3\n"); }) == ErrorCode::NonNumericCell);
  CHECK(code_of([] { parse_samples_csv("x1,yhat,u\n1,abc,3\n"); }) == ErrorCode::NonNumericCell);
  CHECK(code_of([] { parse_samples_csv("x1,yhat,u\n1,,3\n"); }) == ErrorCode::NonNumericCell);
  const std::string msg = message_of([] { parse_samples_csv("x1,yhat,u\n1,2,3\n1,NaN,3\n", "f.csv"); });
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK(msg.find("column 2") != std::string::npos);
  CHECK(msg.find("yhat") != std::string::npos);
  CHECK(msg.find("f.csv") != std::string::npos);
}

TEST_CASE("samples CSV round trip") {
  const auto model = fixture::random_model(6, 4);
  const SampleSet s = sample(model, 100, 12);
  const fs::path p = scratch("round.csv");
  write_samples_csv(s, p);
  const SampleSet back = load_samples_csv(p);
  CHECK(back.features() == s.features());
  CHECK(back.predictions() == s.predictions());
  CHECK(back.summaries() == s.summaries());

  const SampleSet one(Matrix::Constant(1, 2, 0.1), Vector::Constant(1, 1.0 / 3.0), Vector::Zero(1));
  const std::string text = format_samples_csv(one);
  CHECK(text == "x1,x2,yhat,u\n0.10000000000000001,0.10000000000000001,0.33333333333333331,0\n");

  CHECK(code_of([] { load_samples_csv("/nonexistent/dir/file.csv"); }) == ErrorCode::IoFailure);
  CHECK(message_of([] { load_samples_csv("/nonexistent/dir/file.csv"); }).find("/nonexistent/dir/file.csv") !=
        std::string::npos);
}

TEST_CASE("PGM decoding") {
  const ImageGrid g = decode_grayscale_image(bytes("P2\n# comment\n2 2\n255\n0 255\n128 64\n"), "t.pgm");
  REQUIRE(g.width == 2);
  REQUIRE(g.height == 2);
  CHECK(g.pixels[0] == 0.0);
  CHECK(g.pixels[1] == 1.0);
  CHECK(g.pixels[2] == doctest::Approx(128.0 / 255.0));
  CHECK(g.at(1, 1) == doctest::Approx(64.0 / 255.0));

  std::string p5 = "P5 3 1 255\n";
  p5 += std::string{'\x00', '\x80', '\xff'};
  const ImageGrid b = decode_grayscale_image(bytes(p5), "b.pgm");
  CHECK(b.pixels[1] == doctest::Approx(128.0 / 255.0));
  CHECK(b.pixels[2] == 1.0);

  std::string wide = "P5\n2 1\n65535\n";
  wide += std::string{'\x01', '\x00', '\xff', '\xff'};
  const ImageGrid w = decode_grayscale_image(bytes(wide), "w.pgm");
  CHECK(w.pixels[0] == doctest::Approx(256.0 / 65535.0));
  CHECK(w.pixels[1] == 1.0);

  CHECK(code_of([] { decode_grayscale_image(bytes("P5\n2 2\n255\n\x01\x02"), "x"); }) == ErrorCode::CorruptFile);
  CHECK(code_of([] { decode_grayscale_image(bytes("P2\n2 2\n255\n1 2 3\n"), "x"); }) == ErrorCode::CorruptFile);
  CHECK(code_of([] { decode_grayscale_image(bytes("P2\n2 2\n255\n1 2 3 300\n"), "x"); }) == ErrorCode::CorruptFile);
  CHECK(code_of([] { decode_grayscale_image(bytes("P6\n1 1\n255\nabc"), "x"); }) == ErrorCode::UnsupportedFormat);
  CHECK(code_of([] { decode_grayscale_image(bytes("GIF89a"), "x"); }) == ErrorCode::UnsupportedFormat);
}

TEST_CASE("PGM writing round trips") {
  const std::vector<std::uint16_t> levels{0, 100, 200, 300, 65535, 7};
  for (bool binary : {true, false}) {
    const fs::path p = scratch(binary ? "w5.pgm" : "w2.pgm");
    write_pgm(p, 3, 2, levels, 65535, binary);
    const ImageGrid g = load_grayscale_image(p);
    REQUIRE(g.pixels.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) CHECK(g.pixels[i] == doctest::Approx(levels[i] / 65535.0));
  }
}

TEST_CASE("PNG decoding") {
  const fs::path gray = scratch("g.png");
  write_png(gray, 2, 1, PNG_COLOR_TYPE_GRAY, 8, {0, 255});
  const ImageGrid g = load_grayscale_image(gray);
  CHECK(g.width == 2);
  CHECK(g.pixels[1] == 1.0);

  const fs::path g16 = scratch("g16.png");
  write_png(g16, 1, 1, PNG_COLOR_TYPE_GRAY, 16, {0x80, 0x00});
  CHECK(load_grayscale_image(g16).pixels[0] == doctest::Approx(32768.0 / 65535.0));

  const fs::path rgb = scratch("c.png");
  write_png(rgb, 1, 1, PNG_COLOR_TYPE_RGB, 8, {10, 20, 30});
  CHECK(code_of([&] { load_grayscale_image(rgb); }) == ErrorCode::UnsupportedFormat);
  CHECK(message_of([&] { load_grayscale_image(rgb); }).find("convert") != std::string::npos);

  std::string truncated = read_file(gray);
  truncated.resize(truncated.size() / 2);
  CHECK(code_of([&] { decode_grayscale_image(bytes(truncated), "t.png"); }) == ErrorCode::CorruptFile);
}
