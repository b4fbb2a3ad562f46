#include "xplain/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "xplain/error.hpp"
#include "xplain/gaussian_mi.hpp"
#include "xplain/kernels/kernels.hpp"
#include "xplain/rng.hpp"
#include "xplain/version.hpp"

namespace xplain {
namespace {

// Largest MI table the report will carry.
constexpr std::size_t kMaxTableRows = 200000;

template <class Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage '") + name + "': " + e.what());
  }
}

Json rect_json(const Rect& r) { return Json::array({r.row_offset, r.col_offset, r.height, r.width}); }

std::size_t subset_count(int n, int s) {
  std::size_t total = 0;
  double c = 1.0;
  for (int k = 0; k <= s; ++k) {
    total += static_cast<std::size_t>(std::llround(c));
    c = c * (n - k) / (k + 1);
  }
  return total;
}

}  // namespace

NeighborhoodGeometry NeighborhoodGeometry::standard() {
  return NeighborhoodGeometry{Rect{-2, -5, 5, 5}, Rect{-2, 1, 5, 5}};
}

void NeighborhoodGeometry::validate() const {
  for (const Rect* r : {&first, &second}) {
    if (r->height <= 0 || r->width <= 0)
      throw Error(ErrorCode::InvalidArgument, "neighbourhood rectangles must be non-empty");
    if (r->contains(0, 0))
      throw Error(ErrorCode::InvalidArgument, "neighbourhood rectangle covers the target pixel");
  }
  const bool disjoint = first.row_offset + first.height <= second.row_offset ||
                        second.row_offset + second.height <= first.row_offset ||
                        first.col_offset + first.width <= second.col_offset ||
                        second.col_offset + second.width <= first.col_offset;
  if (!disjoint) throw Error(ErrorCode::InvalidArgument, "neighbourhood rectangles overlap");
}

int NeighborhoodGeometry::radius() const {
  int r = 0;
  for (const Rect* rect : {&first, &second}) {
    r = std::max({r, std::abs(rect->row_offset), std::abs(rect->row_offset + rect->height - 1),
                  std::abs(rect->col_offset), std::abs(rect->col_offset + rect->width - 1)});
  }
  return r;
}

std::vector<PixelOffset> NeighborhoodGeometry::offsets() const {
  std::vector<PixelOffset> out;
  out.reserve(feature_count());
  int id = 1;
  for (const Rect* rect : {&first, &second}) {
    for (int r = 0; r < rect->height; ++r)
      for (int c = 0; c < rect->width; ++c)
        out.push_back({rect->row_offset + r, rect->col_offset + c, id});
    ++id;
  }
  return out;
}

PatchSet extract_patches(const ImageGrid& image, const NeighborhoodGeometry& geometry, int stride) {
  geometry.validate();
  if (stride < 1) throw Error(ErrorCode::InvalidArgument, "stride must be >= 1");
  const int radius = geometry.radius();
  if (image.height < 2 * radius + 1 || image.width < 2 * radius + 1)
    throw Error(ErrorCode::GeometryTooLarge,
                "image " + std::to_string(image.width) + "x" + std::to_string(image.height) +
                    " cannot hold a patch of side " + std::to_string(2 * radius + 1));

  PatchSet out;
  for (int r = radius; r + radius < image.height; r += stride)
    for (int c = radius; c + radius < image.width; c += stride) out.targets.emplace_back(r, c);

  // Mean taken about the first pixel, so a constant image centres to exact zeros.
  const double origin = image.pixels.front();
  std::vector<double> shifted(image.pixels.size());
  std::transform(image.pixels.begin(), image.pixels.end(), shifted.begin(), [&](double p) { return p - origin; });
  out.image_mean = origin + kernels::sum(shifted) / static_cast<double>(shifted.size());
  const auto offsets = geometry.offsets();
  const int m = static_cast<int>(out.targets.size());
  const int n = static_cast<int>(offsets.size());
  out.features.resize(m, n);
  out.labels.resize(m);
  for (int i = 0; i < m; ++i) {
    const auto [r, c] = out.targets[i];
    out.labels[i] = image.at(r, c) - out.image_mean;
    for (int j = 0; j < n; ++j)
      out.features(i, j) = image.at(r + offsets[j].row, c + offsets[j].col) - out.image_mean;
  }
  return out;
}

Vector train_predictor(const Matrix& features, const Vector& labels, double ridge) {
  if (!(ridge >= 0.0)) throw Error(ErrorCode::InvalidArgument, "ridge weight must be >= 0");
  if (features.rows() < 2) throw Error(ErrorCode::TooFewSamples, "predictor training needs m >= 2");
  if (labels.size() != features.rows())
    throw Error(ErrorCode::DimensionMismatch, "label count does not match feature rows");

  Matrix gram = features.transpose() * features;
  gram.diagonal().array() += ridge;
  const Vector rhs = features.transpose() * labels;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() == Eigen::Success && llt.rcond() > 1e-13) return llt.solve(rhs);
  if (ridge == 0.0)
    throw Error(ErrorCode::SingularSystem,
                "features are rank deficient; use a positive ridge weight");
  return gram.ldlt().solve(rhs);
}

Vector compute_user_summary(const Matrix& features, const NeighborhoodGeometry& geometry) {
  if (features.cols() != geometry.feature_count())
    throw Error(ErrorCode::DimensionMismatch, "feature columns do not match the neighbourhood size");
  return features.rowwise().mean();
}

void ExperimentConfig::validate() const {
  geometry.validate();
  if (stride < 1) throw Error(ErrorCode::InvalidArgument, "stride must be >= 1");
  const int n = geometry.feature_count();
  if (s < 0 || s > n)
    throw Error(ErrorCode::InvalidArgument,
                "s = " + std::to_string(s) + " outside [0, n] with n = " + std::to_string(n));
  if (!(ridge >= 0.0)) throw Error(ErrorCode::InvalidArgument, "ridge weight must be >= 0");
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const ImageGrid image = stage("load_image", [&] { return load_grayscale_image(config.image); });
  return run_experiment(config, image);
}

ExperimentReport run_experiment(const ExperimentConfig& config, const ImageGrid& image) {
  config.validate();
  const NeighborhoodGeometry& geometry = config.geometry;
  const int n = geometry.feature_count();
  const XmlMethod method = config.method.value_or(default_xml_method(n));

  PatchSet patches =
      stage("extract_patches", [&] { return extract_patches(image, geometry, config.stride); });
  const Vector w =
      stage("train_predictor", [&] { return train_predictor(patches.features, patches.labels, config.ridge); });
  const Vector yhat = patches.features * w;
  const Vector u = stage("compute_user_summary",
                         [&] { return compute_user_summary(patches.features, geometry); });
  const int m = static_cast<int>(yhat.size());
  const double training_mse = (patches.labels - yhat).squaredNorm() / m;

  const SampleSet samples(patches.features, yhat, u);
  const XmlResult result = stage("xml_explain", [&] { return xml_fit(samples, config.s, method, config.solver); });
  const JointMoments moments = stage("mi_estimate", [&] { return empirical_moments(samples); });
  const MiValue mi = conditional_mi(moments, result.support);
  const bool degenerate = !(moments.prediction_variance() > std::numeric_limits<double>::min());

  ExperimentReport report;
  report.support = result.support;
  const auto offsets = geometry.offsets();
  for (int j : result.support.indices()) report.selected_offsets.push_back(offsets[j]);

  Json& doc = report.document;
  doc["schema_version"] = 1;
  doc["tool"] = kToolName;
  doc["version"] = kVersion;

  Json cfg;
  cfg["image"] = config.image.string();
  cfg["geometry"] = {{"rect1", rect_json(geometry.first)}, {"rect2", rect_json(geometry.second)}};
  cfg["stride"] = config.stride;
  cfg["s"] = config.s;
  cfg["method"] = to_string(method);
  cfg["ridge"] = config.ridge;
  cfg["seed"] = config.seed;
  cfg["solver"] = {{"tol", config.solver.tol},
                   {"max_sweeps", config.solver.max_sweeps},
                   {"path_points", config.solver.path_points},
                   {"path_ratio", config.solver.path_ratio},
                   {"standardize", config.solver.standardize}};
  doc["config"] = std::move(cfg);

  doc["data"] = {{"image_width", image.width},
                 {"image_height", image.height},
                 {"image_mean", patches.image_mean},
                 {"m", m},
                 {"n", n}};
  doc["predictor"] = {{"training_mse", training_mse},
                      {"prediction_variance", moments.prediction_variance()}};
  doc["degenerate"] = degenerate;

  Json expl;
  expl["support"] = json_value(result.support);
  Json offs = Json::array();
  for (std::size_t i = 0; i < report.selected_offsets.size(); ++i) {
    const PixelOffset& o = report.selected_offsets[i];
    offs.push_back({{"feature", result.support.indices()[i] + 1}, {"rect", o.rect}, {"row", o.row}, {"col", o.col}});
  }
  expl["offsets"] = std::move(offs);
  expl["mi_nats"] = json_value(mi);
  expl["cond_var_summary_only"] = mi.numerator_var;
  expl["cond_var_with_explanation"] = mi.denominator_var;
  expl["fit"] = json_value(result.fit);
  doc["explanation"] = std::move(expl);

  if (method == XmlMethod::LassoPath) {
    Json path = Json::array();
    for (const PathPoint& p : result.path) path.push_back(json_value(p));
    doc["lasso_path"] = std::move(path);
  }

  Json table_info;
  if (n <= kMaxEnumerationDim && subset_count(n, config.s) <= kMaxTableRows) {
    report.mi_table_csv = mi_table_csv(mi_table(moments, config.s));
    table_info = {{"emitted", true}, {"file", "mi_table.csv"}};
  } else {
    table_info = {{"emitted", false}, {"reason", "too many subsets to enumerate"}};
  }
  doc["mi_table"] = std::move(table_info);

  const int radius = geometry.radius();
  report.mask_side = 2 * radius + 1;
  report.mask.assign(static_cast<std::size_t>(report.mask_side) * report.mask_side, 0);
  for (const PixelOffset& o : report.selected_offsets)
    report.mask[static_cast<std::size_t>(o.row + radius) * report.mask_side + (o.col + radius)] = 255;
  return report;
}

void write_experiment_outputs(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create '" + dir.string() + "': " + ec.message());
  write_file(dir / "report.json", report.document.dump(2) + "\n");
  if (!report.mi_table_csv.empty()) write_file(dir / "mi_table.csv", report.mi_table_csv);
  write_pgm(dir / "mask.pgm", report.mask_side, report.mask_side, report.mask, 255);
}

ImageGrid PlantedImage::grid() const {
  ImageGrid img;
  img.width = width;
  img.height = height;
  img.pixels.resize(levels.size());
  std::transform(levels.begin(), levels.end(), img.pixels.begin(),
                 [](std::uint16_t l) { return l / 65535.0; });
  return img;
}

PlantedImage make_planted_image(const NeighborhoodGeometry& geometry, int tiles_per_side,
                                int first_feature, int second_feature, std::uint64_t seed,
                                double noise_sigma) {
  geometry.validate();
  const int n = geometry.feature_count();
  if (tiles_per_side < 1 || first_feature < 0 || first_feature >= n || second_feature < 0 ||
      second_feature >= n || first_feature == second_feature)
    throw Error(ErrorCode::InvalidArgument, "invalid planted image parameters");

  const int radius = geometry.radius();
  PlantedImage img;
  img.stride = 2 * radius + 1;
  img.width = img.height = tiles_per_side * img.stride;
  img.levels.resize(static_cast<std::size_t>(img.width) * img.height);

  NormalStream rng(seed);
  for (auto& level : img.levels) level = static_cast<std::uint16_t>(rng.engine()() & 0xffffu);

  const auto offsets = geometry.offsets();
  const PixelOffset p = offsets[first_feature];
  const PixelOffset q = offsets[second_feature];
  auto at = [&](int r, int c) -> std::uint16_t& {
    return img.levels[static_cast<std::size_t>(r) * img.width + c];
  };
  for (int tr = 0; tr < tiles_per_side; ++tr) {
    for (int tc = 0; tc < tiles_per_side; ++tc) {
      const int r = radius + tr * img.stride;
      const int c = radius + tc * img.stride;
      const long lp = at(r + p.row, c + p.col);
      long lq = at(r + q.row, c + q.col);
      // make 3 * lp + lq divisible by 4 so the target is an exact level
      lq -= (3 * lp + lq) % 4;
      if (lq < 0) lq += 4;
      at(r + q.row, c + q.col) = static_cast<std::uint16_t>(lq);
      double target = static_cast<double>((3 * lp + lq) / 4);
      if (noise_sigma > 0.0) target = std::round(target + noise_sigma * 65535.0 * rng.next());
      at(r, c) = static_cast<std::uint16_t>(std::clamp(target, 0.0, 65535.0));
    }
  }
  return img;
}

}  // namespace xplain
