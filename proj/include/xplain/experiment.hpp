#pragma once
// Image-patch pipeline: predict a pixel from two neighbouring rectangles,
// summarize each patch by its mean intensity, then pick the few neighbourhood
// pixels that best explain the prediction beyond that mean.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xplain/data_io.hpp"
#include "xplain/json_io.hpp"
#include "xplain/xml.hpp"

namespace xplain {

/// Axis-aligned rectangle; offsets locate its top-left pixel relative to the
/// target pixel.
struct Rect {
  int row_offset = 0;
  int col_offset = 0;
  int height = 0;
  int width = 0;

  bool contains(int dr, int dc) const {
    return dr >= row_offset && dr < row_offset + height && dc >= col_offset && dc < col_offset + width;
  }
};

struct PixelOffset {
  int row = 0;
  int col = 0;
  /// 1 or 2
  int rect = 0;
};

struct NeighborhoodGeometry {
  Rect first;
  Rect second;

  /// Two 5x5 rectangles centred on the target row, centred 3 columns left and
  /// right of the target (n = 50).
  static NeighborhoodGeometry standard();

  /// Throws InvalidArgument for empty rectangles, rectangles covering the
  /// target, or overlapping rectangles.
  void validate() const;
  int feature_count() const { return first.height * first.width + second.height * second.width; }
  /// Chebyshev radius of the footprint; every patch is the square of side
  /// 2 * radius + 1 centred on its target.
  int radius() const;
  /// Feature order: raster order inside the first rectangle, then the second.
  std::vector<PixelOffset> offsets() const;
};

struct PatchSet {
  Matrix features;
  Vector labels;
  /// (row, col) of each target pixel, in row order.
  std::vector<std::pair<int, int>> targets;
  double image_mean = 0.0;
};

/// One row per target on the stride grid whose square patch fits inside the
/// image. Features and labels are centred by the global image mean.
/// Throws GeometryTooLarge when no target fits.
PatchSet extract_patches(const ImageGrid& image, const NeighborhoodGeometry& geometry, int stride);

/// Ridge regression: minimizes ||labels - X w||^2 + ridge ||w||^2.
/// Throws SingularSystem for ridge = 0 with rank-deficient X.
Vector train_predictor(const Matrix& features, const Vector& labels, double ridge);

/// Row means of the features.
Vector compute_user_summary(const Matrix& features, const NeighborhoodGeometry& geometry);

struct ExperimentConfig {
  std::filesystem::path image;
  NeighborhoodGeometry geometry = NeighborhoodGeometry::standard();
  int stride = 7;
  int s = 2;
  /// Empty selects default_xml_method(n).
  std::optional<XmlMethod> method;
  double ridge = 1e-6;
  std::uint64_t seed = 0;
  SolverConfig solver;

  /// Throws InvalidArgument (stride < 1, s outside [0, n], negative ridge).
  void validate() const;
};

struct ExperimentReport {
  Json document;
  ExplanationSupport support;
  std::vector<PixelOffset> selected_offsets;
  /// Empty when the table was not emitted.
  std::string mi_table_csv;
  int mask_side = 0;
  std::vector<std::uint16_t> mask;
};

/// load image -> extract patches -> train predictor -> user summary -> explain.
/// Errors are rethrown with the failing stage named in the message.
ExperimentReport run_experiment(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config, const ImageGrid& image);

/// report.json, mask.pgm and (if present) mi_table.csv inside `dir`.
void write_experiment_outputs(const ExperimentReport& report, const std::filesystem::path& dir);

/// Synthetic image whose patch targets are an exact linear function of two
/// neighbourhood pixels: target = (3 * x_first + x_second) / 4 in 16-bit
/// integer levels, plus optional Gaussian noise (sigma in intensity units).
/// Tiles are 2 * radius + 1 wide, so use that as the stride.
struct PlantedImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> levels;
  int stride = 0;

  ImageGrid grid() const;
};

PlantedImage make_planted_image(const NeighborhoodGeometry& geometry, int tiles_per_side,
                                int first_feature, int second_feature, std::uint64_t seed,
                                double noise_sigma = 0.0);

}  // namespace xplain
