#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "xplain/core_model.hpp"

namespace xplain {

/// Row-major grayscale raster with intensities in [0, 1].
struct ImageGrid {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  double at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
  double& at(int row, int col) { return pixels[static_cast<std::size_t>(row) * width + col]; }
};

/// Parses `x1,...,xn,yhat,u` CSV text. `source` is only used in messages.
SampleSet parse_samples_csv(const std::string& text, const std::string& source = "<memory>");
SampleSet load_samples_csv(const std::filesystem::path& path);

/// 17 significant digits per value, so a reload reproduces every entry.
std::string format_samples_csv(const SampleSet& samples);
void write_samples_csv(const SampleSet& samples, const std::filesystem::path& path);

/// PGM (P2 or P5, maxval <= 65535) or single-channel 8/16-bit PNG.
/// Throws UnsupportedFormat (including colour images) or CorruptFile.
ImageGrid load_grayscale_image(const std::filesystem::path& path);
ImageGrid decode_grayscale_image(std::span<const unsigned char> bytes, const std::string& source);

/// Writes raw integer levels as PGM; binary P5 by default, text P2 otherwise.
void write_pgm(const std::filesystem::path& path, int width, int height,
               std::span<const std::uint16_t> levels, int maxval, bool binary = true);

/// Reads a whole file; throws IoFailure with the path on failure.
std::string read_file(const std::filesystem::path& path);
/// Writes a whole file; throws IoFailure with the path on failure.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace xplain
