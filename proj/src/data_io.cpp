#include "xplain/data_io.hpp"

#include <png.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string_view>

#include "xplain/error.hpp"

namespace xplain {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoFailure, "failed reading '" + path.string() + "'");
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "failed writing '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// CSV

SampleSet parse_samples_csv(const std::string& text, const std::string& source) {
  std::vector<std::string_view> lines;
  {
    std::string_view rest(text);
    while (!rest.empty()) {
      const std::size_t nl = rest.find('\n');
      lines.push_back(rest.substr(0, nl));
      if (nl == std::string_view::npos) break;
      rest.remove_prefix(nl + 1);
    }
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorCode::MalformedHeader, source + ": file is empty");

  const auto header = split(lines[0], ',');
  const int cols = static_cast<int>(header.size());
  const int n = cols - 2;
  bool ok = n >= 1 && header[cols - 2] == "yhat" && header[cols - 1] == "u";
  for (int j = 0; ok && j < n; ++j) ok = header[j] == "x" + std::to_string(j + 1);
  if (!ok)
    throw Error(ErrorCode::MalformedHeader,
                source + ": header must be x1,...,xn,yhat,u with n >= 1, got '" +
                    std::string(trim(lines[0])) + "'");

  const int m = static_cast<int>(lines.size()) - 1;
  Matrix features(m, n);
  Vector predictions(m);
  Vector summaries(m);
  for (int i = 0; i < m; ++i) {
    const int line_no = i + 2;
    const auto cells = split(lines[i + 1], ',');
    if (static_cast<int>(cells.size()) != cols)
      throw Error(ErrorCode::RaggedRow, source + ": line " + std::to_string(line_no) + " has " +
                                            std::to_string(cells.size()) + " cells, expected " +
                                            std::to_string(cols));
    for (int j = 0; j < cols; ++j) {
      const std::string_view cell = cells[j];
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value))
        throw Error(ErrorCode::NonNumericCell,
                    source + ": line " + std::to_string(line_no) + ", column " + std::to_string(j + 1) +
                        " (" + std::string(header[j]) + "): '" + std::string(cell) + "'");
      if (j < n)
        features(i, j) = value;
      else if (j == n)
        predictions[i] = value;
      else
        summaries[i] = value;
    }
  }
  return SampleSet(std::move(features), std::move(predictions), std::move(summaries));
}

SampleSet load_samples_csv(const std::filesystem::path& path) {
  return parse_samples_csv(read_file(path), path.string());
}

std::string format_samples_csv(const SampleSet& samples) {
  const int n = samples.n();
  std::string out;
  for (int j = 0; j < n; ++j) out += "x" + std::to_string(j + 1) + ",";
  out += "yhat,u\n";
  char buf[32];
  auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
    out += sep;
  };
  for (int i = 0; i < samples.m(); ++i) {
    for (int j = 0; j < n; ++j) put(samples.features()(i, j), ',');
    put(samples.predictions()[i], ',');
    put(samples.summaries()[i], '\n');
  }
  return out;
}

void write_samples_csv(const SampleSet& samples, const std::filesystem::path& path) {
  write_file(path, format_samples_csv(samples));
}

// ---------------------------------------------------------------------------
// Images

namespace {

class PgmReader {
 public:
  PgmReader(std::span<const unsigned char> bytes, const std::string& source)
      : bytes_(bytes), source_(source) {}

  ImageGrid read() {
    const bool binary = bytes_[1] == '5';
    pos_ = 2;
    ImageGrid img;
    img.width = header_int("width");
    img.height = header_int("height");
    const long maxval = header_int("maxval");
    if (img.width <= 0 || img.height <= 0) corrupt("non-positive dimensions");
    if (maxval < 1 || maxval > 65535) corrupt("maxval must lie in [1, 65535]");
    const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
    img.pixels.resize(count);

    if (binary) {
      if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) corrupt("missing raster separator");
      ++pos_;
      const std::size_t width = maxval < 256 ? 1 : 2;
      if (bytes_.size() - pos_ < count * width) corrupt("raster truncated");
      for (std::size_t i = 0; i < count; ++i) {
        // Netpbm stores 16-bit samples most significant byte first.
        const unsigned level = width == 1 ? bytes_[pos_ + i]
                                          : (unsigned(bytes_[pos_ + 2 * i]) << 8) | bytes_[pos_ + 2 * i + 1];
        if (level > static_cast<unsigned>(maxval)) corrupt("sample exceeds maxval");
        img.pixels[i] = static_cast<double>(level) / maxval;
      }
    } else {
      for (std::size_t i = 0; i < count; ++i) {
        const long level = header_int("sample");
        if (level < 0 || level > maxval) corrupt("sample exceeds maxval");
        img.pixels[i] = static_cast<double>(level) / maxval;
      }
    }
    return img;
  }

 private:
  [[noreturn]] void corrupt(const std::string& what) const {
    throw Error(ErrorCode::CorruptFile, source_ + ": " + what);
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long header_int(const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_]))
      corrupt(std::string("truncated or invalid ") + what);
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L) corrupt(std::string(what) + " out of range");
      ++pos_;
    }
    return value;
  }

  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 0;
  std::string source_;
};

struct PngSource {
  std::span<const unsigned char> bytes;
  std::size_t pos = 0;
};

void png_read_span(png_structp png, png_bytep out, png_size_t len) {
  auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
  if (src->bytes.size() - src->pos < len) png_error(png, "unexpected end of data");
  std::memcpy(out, src->bytes.data() + src->pos, len);
  src->pos += len;
}

void png_quiet_warning(png_structp, png_const_charp) {}

ImageGrid decode_png(std::span<const unsigned char> bytes, const std::string& source) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_quiet_warning);
  if (png == nullptr) throw Error(ErrorCode::CorruptFile, source + ": libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorCode::CorruptFile, source + ": libpng init failed");
  }

  PngSource src{bytes, 0};
  ImageGrid img;
  std::vector<unsigned char> raster;
  std::vector<png_bytep> rows;
  int color_type = 0;
  int depth = 0;
  bool colour = false;
  // Only trivially destructible locals are touched between setjmp and longjmp.
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::CorruptFile, source + ": malformed or truncated PNG");
  }
  png_set_read_fn(png, &src, png_read_span);
  png_read_info(png, info);
  color_type = png_get_color_type(png, info);
  depth = png_get_bit_depth(png, info);
  if (color_type != PNG_COLOR_TYPE_GRAY) {
    colour = true;
  } else {
    if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);
    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    const std::size_t stride = png_get_rowbytes(png, info);
    raster.resize(stride * img.height);
    rows.resize(img.height);
    for (int r = 0; r < img.height; ++r) rows[r] = raster.data() + stride * r;
    png_read_image(png, rows.data());
    depth = png_get_bit_depth(png, info);
  }
  png_destroy_read_struct(&png, &info, nullptr);

  if (colour)
    throw Error(ErrorCode::UnsupportedFormat,
                source + ": PNG is not single-channel grayscale; convert it first "
                         "(e.g. `convert in.png -colorspace Gray -alpha off out.png`)");

  const double maxval = depth == 16 ? 65535.0 : 255.0;
  const std::size_t stride = raster.size() / img.height;
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  for (int r = 0; r < img.height; ++r) {
    const unsigned char* row = raster.data() + stride * r;
    for (int c = 0; c < img.width; ++c) {
      const unsigned level = depth == 16 ? (unsigned(row[2 * c]) << 8) | row[2 * c + 1] : row[c];
      img.at(r, c) = level / maxval;
    }
  }
  return img;
}

}  // namespace

ImageGrid decode_grayscale_image(std::span<const unsigned char> bytes, const std::string& source) {
  if (bytes.size() >= 2 && bytes[0] == 'P') {
    if (bytes[1] == '2' || bytes[1] == '5') return PgmReader(bytes, source).read();
    throw Error(ErrorCode::UnsupportedFormat,
                source + ": only grayscale PGM (P2/P5) is supported among Netpbm formats");
  }
  static constexpr unsigned char kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngMagic, 8) == 0) return decode_png(bytes, source);
  throw Error(ErrorCode::UnsupportedFormat, source + ": not a PGM or PNG file");
}

ImageGrid load_grayscale_image(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  return decode_grayscale_image(
      std::span<const unsigned char>(reinterpret_cast<const unsigned char*>(data.data()), data.size()),
      path.string());
}

void write_pgm(const std::filesystem::path& path, int width, int height,
               std::span<const std::uint16_t> levels, int maxval, bool binary) {
  if (width <= 0 || height <= 0 || levels.size() != static_cast<std::size_t>(width) * height)
    throw Error(ErrorCode::InvalidArgument, "PGM dimensions do not match the level count");
  if (maxval < 1 || maxval > 65535) throw Error(ErrorCode::InvalidArgument, "PGM maxval out of range");
  std::string out = std::string(binary ? "P5" : "P2") + "\n" + std::to_string(width) + " " +
                    std::to_string(height) + "\n" + std::to_string(maxval) + "\n";
  if (binary) {
    for (std::uint16_t level : levels) {
      if (maxval >= 256) out += static_cast<char>(level >> 8);
      out += static_cast<char>(level & 0xff);
    }
  } else {
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        if (c > 0) out += ' ';
        out += std::to_string(levels[static_cast<std::size_t>(r) * width + c]);
      }
      out += '\n';
    }
  }
  write_file(path, out);
}

}  // namespace xplain
