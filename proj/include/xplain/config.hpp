#pragma once
// TOML inputs: Gaussian model specs for `synth`, solver settings, and
// experiment configs. All errors are ConfigError with file:line context.
//
// Model spec:
//
//   n = 3                      # optional when cov_x is a dense matrix
//   cov_x = "identity"         # "identity", "diag" (with diag = [...]) or [[...], ...]
//   w = [1.0, 1.0, 0.0]
//   v = [0.0, 0.0, 1.0]
//   s = 1                      # optional explanation budget
//
// Experiment config:
//
//   image = "scene.pgm"        # relative paths resolve against the config file
//   s = 2
//   method = "auto"            # auto | l0_exhaustive | omp | lasso_path
//   ridge = 1e-6
//   stride = 7
//   seed = 0
//   [geometry]
//   rect1 = [-2, -5, 5, 5]     # row offset, col offset, height, width
//   rect2 = [-2, 1, 5, 5]
//   [solver]
//   tol = 1e-8
//   max_sweeps = 100000
//   path_points = 100
//   path_ratio = 1e-4
//   standardize = false

#include <filesystem>
#include <optional>
#include <string>

#include "xplain/core_model.hpp"
#include "xplain/experiment.hpp"
#include "xplain/sparse_regression.hpp"

namespace xplain {

struct ModelSpec {
  GaussianModel model;
  std::optional<int> s;
};

/// `n_hint` supplies n for identity/diag shorthands that omit it.
ModelSpec parse_model_spec(const std::string& text, const std::string& source,
                           std::optional<int> n_hint = std::nullopt);
ModelSpec load_model_spec(const std::filesystem::path& path, std::optional<int> n_hint = std::nullopt);

/// Reads an optional [solver] table on top of `base`.
SolverConfig parse_solver_config(const std::string& text, const std::string& source,
                                 SolverConfig base = {});

/// Relative image paths are resolved against `base_dir`.
ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source,
                                         const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

}  // namespace xplain
