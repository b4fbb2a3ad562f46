// xplain command-line tool.
//
//   xplain synth      --model spec.toml --m 1000 --seed 1 --out dir/
//   xplain explain    --samples dir/samples.csv --s 2 [--method auto|l0_exhaustive|omp|lasso_path]
//   xplain mi-table   (--samples file.csv | --model spec.toml) --s 2
//   xplain experiment --config experiment.toml --out dir/
//
// Exit status: 0 success, 1 usage/validation, 2 data (I/O, parsing), 3 solver.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "xplain/config.hpp"
#include "xplain/data_io.hpp"
#include "xplain/error.hpp"
#include "xplain/experiment.hpp"
#include "xplain/gaussian_mi.hpp"
#include "xplain/json_io.hpp"
#include "xplain/parallel.hpp"
#include "xplain/subset_search.hpp"
#include "xplain/version.hpp"
#include "xplain/xml.hpp"

namespace fs = std::filesystem;
using namespace xplain;

namespace {

struct GlobalOptions {
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
};

struct SolverFlags {
  std::string config;
  std::optional<double> tol;
  std::optional<long> max_sweeps;
  std::optional<int> path_points;
  std::optional<double> path_ratio;
  bool standardize = false;
  std::optional<double> fixed_alpha;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config, "TOML file with a [solver] table");
    cmd->add_option("--tol", tol, "coordinate-descent tolerance (default 1e-8)");
    cmd->add_option("--max-sweeps", max_sweeps, "coordinate-descent sweep cap (default 100000)");
    cmd->add_option("--path-points", path_points, "lambda grid size (default 100)");
    cmd->add_option("--path-ratio", path_ratio, "lambda_min / lambda_max (default 1e-4)");
    cmd->add_flag("--standardize", standardize, "scale feature columns inside the Lasso solver");
    cmd->add_option("--fixed-alpha", fixed_alpha, "hold the summary coefficient fixed");
  }

  SolverConfig resolve() const {
    SolverConfig cfg;
    if (!config.empty()) cfg = parse_solver_config(read_file(config), config, cfg);
    if (tol) cfg.tol = *tol;
    if (max_sweeps) cfg.max_sweeps = *max_sweeps;
    if (path_points) cfg.path_points = *path_points;
    if (path_ratio) cfg.path_ratio = *path_ratio;
    if (standardize) cfg.standardize = true;
    if (fixed_alpha) cfg.fixed_alpha = fixed_alpha;
    if (!(cfg.tol > 0.0) || cfg.max_sweeps < 1 || cfg.path_points < 1 ||
        !(cfg.path_ratio > 0.0 && cfg.path_ratio < 1.0))
      throw Error(ErrorCode::InvalidArgument, "invalid solver settings");
    return cfg;
  }
};

Json header(const char* command) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  j["command"] = command;
  return j;
}

Json matrix_json(const Matrix& a) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json table_json(const std::vector<MiTableEntry>& table) {
  Json out = Json::array();
  for (const auto& e : table)
    out.push_back({{"support", json_value(e.support)}, {"mi_nats", json_value(e.mi)},
                   {"cond_var", e.mi.denominator_var}});
  return out;
}

void emit(const std::string& text, const std::string& out_file) {
  if (out_file.empty()) {
    std::cout << text;
  } else {
    const fs::path p(out_file);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    write_file(p, text);
  }
}

void check_sparsity(int s, int n) {
  if (s < 0 || s > n)
    throw Error(ErrorCode::InvalidArgument,
                "--s " + std::to_string(s) + " outside [0, n] with n = " + std::to_string(n));
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string model;
  std::optional<int> n;
  std::optional<int> s;
  int m = 1000;
  bool table = true;
};

int run_synth(const SynthArgs& a, const GlobalOptions& g) {
  const ModelSpec spec = load_model_spec(a.model, a.n);
  const GaussianModel& model = spec.model;
  const int n = model.n();
  const int s = a.s ? *a.s : spec.s.value_or(std::min(2, n));
  check_sparsity(s, n);

  const fs::path dir = g.out.empty() ? fs::path(".") : fs::path(g.out);
  fs::create_directories(dir);
  const SampleSet samples = sample(model, a.m, g.seed);
  write_samples_csv(samples, dir / "samples.csv");

  const JointMoments moments = analytic_moments(model);
  Json truth = header("synth");
  truth["rng"] = kRngName;
  truth["seed"] = g.seed;
  truth["m"] = a.m;
  truth["n"] = n;
  truth["s"] = s;
  truth["model"] = {{"cov_x", matrix_json(model.cov_x())}, {"w", vector_json(model.w())},
                    {"v", vector_json(model.v())}};
  Json warnings = Json::array();
  if (n <= kMaxEnumerationDim) {
    truth["population"] = json_value(optimal_support_exhaustive(moments, s));
  } else {
    truth["population"] = json_value(optimal_support_greedy(moments, s));
    warnings.push_back("DimensionTooLarge: n > 25, population support from greedy search");
  }
  if (a.table) {
    if (n <= kMaxEnumerationDim) {
      truth["mi_table"] = table_json(mi_table(moments, s));
    } else {
      warnings.push_back("DimensionTooLarge: MI table omitted for n > 25");
      std::cerr << "warning: DimensionTooLarge: MI table omitted for n = " << n << " > 25\n";
    }
  }
  truth["warnings"] = std::move(warnings);
  write_file(dir / "truth.json", truth.dump(2) + "\n");
  return 0;
}

struct ExplainArgs {
  std::string samples;
  int s = 0;
  std::string method = "auto";
  SolverFlags solver;
};

int run_explain(const ExplainArgs& a, const GlobalOptions& g) {
  const SolverConfig cfg = a.solver.resolve();
  std::optional<XmlMethod> requested;
  if (a.method != "auto") requested = parse_xml_method(a.method);
  const SampleSet samples = load_samples_csv(a.samples);
  const int n = samples.n();
  check_sparsity(a.s, n);
  const XmlMethod method = requested.value_or(default_xml_method(n));

  const XmlResult result = xml_fit(samples, a.s, method, cfg);
  const JointMoments moments = empirical_moments(samples);
  const MiValue mi = conditional_mi(moments, result.support);

  Json report = header("explain");
  report["samples"] = a.samples;
  report["m"] = samples.m();
  report["n"] = n;
  report["s"] = a.s;
  report["method"] = to_string(method);
  report["support"] = json_value(result.support);
  report["fit"] = json_value(result.fit);
  report["mi_nats"] = json_value(mi);
  report["cond_var_summary_only"] = mi.numerator_var;
  report["cond_var_with_explanation"] = mi.denominator_var;
  if (method == XmlMethod::LassoPath) {
    Json path = Json::array();
    for (const PathPoint& p : result.path) path.push_back(json_value(p));
    report["lasso_path"] = std::move(path);
  }
  emit(report.dump(2) + "\n", g.out);
  return 0;
}

struct MiTableArgs {
  std::string samples;
  std::string model;
  std::optional<int> n;
  int s = 1;
};

int run_mi_table(const MiTableArgs& a, const GlobalOptions& g) {
  if (a.samples.empty() == a.model.empty())
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --samples or --model");
  const JointMoments moments = a.model.empty() ? empirical_moments(load_samples_csv(a.samples))
                                               : analytic_moments(load_model_spec(a.model, a.n).model);
  check_sparsity(a.s, moments.n());
  emit(mi_table_csv(mi_table(moments, a.s)), g.out);
  return 0;
}

struct ExperimentArgs {
  std::string config;
};

int run_experiment_cmd(const ExperimentArgs& a, const GlobalOptions& g) {
  const ExperimentConfig cfg = load_experiment_config(a.config);
  cfg.validate();
  const ExperimentReport report = run_experiment(cfg);
  write_experiment_outputs(report, g.out.empty() ? fs::path("experiment_out") : fs::path(g.out));
  return 0;
}

int exit_code(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::Usage: return 1;
    case ErrorCategory::Data: return 2;
    case ErrorCategory::Solver: return 3;
  }
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information-theoretic personalized explanations for linear predictions"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "random seed (default 0)");
  app.add_option("--threads", g.threads, "worker threads, 0 = all cores (results do not depend on it)");
  app.add_option("--out", g.out, "output directory (synth, experiment) or file (explain, mi-table)");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "sample a Gaussian model and write samples.csv + truth.json");
  synth_cmd->add_option("--model", synth.model, "model spec (TOML)")->required();
  synth_cmd->add_option("--n", synth.n, "feature dimension for identity/diag shorthands");
  synth_cmd->add_option("--s", synth.s, "explanation budget for the truth sidecar");
  synth_cmd->add_option("--m", synth.m, "number of samples")->check(CLI::PositiveNumber);
  synth_cmd->add_flag("--mi-table,!--no-mi-table", synth.table, "include the MI table in truth.json");

  ExplainArgs explain;
  auto* explain_cmd = app.add_subcommand("explain", "select an explanation support from samples");
  explain_cmd->add_option("--samples", explain.samples, "samples CSV (x1..xn,yhat,u)")->required();
  explain_cmd->add_option("--s", explain.s, "explanation budget")->required();
  explain_cmd->add_option("--method", explain.method, "auto, l0_exhaustive, omp or lasso_path");
  explain.solver.attach(explain_cmd);

  MiTableArgs table;
  auto* table_cmd = app.add_subcommand("mi-table", "conditional MI of every support of size <= s");
  table_cmd->add_option("--samples", table.samples, "samples CSV (empirical moments)");
  table_cmd->add_option("--model", table.model, "model spec TOML (analytic moments)");
  table_cmd->add_option("--n", table.n, "feature dimension for identity/diag shorthands");
  table_cmd->add_option("--s", table.s, "maximum support size");

  ExperimentArgs experiment;
  auto* experiment_cmd = app.add_subcommand("experiment", "run the image-patch explanation experiment");
  experiment_cmd->add_option("--config", experiment.config, "experiment config (TOML)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  parallel::set_thread_count(g.threads);
  try {
    if (*synth_cmd) return run_synth(synth, g);
    if (*explain_cmd) return run_explain(explain, g);
    if (*table_cmd) return run_mi_table(table, g);
    if (*experiment_cmd) return run_experiment_cmd(experiment, g);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
