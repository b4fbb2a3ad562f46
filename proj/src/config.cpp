#include "xplain/config.hpp"

#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "xplain/data_io.hpp"
#include "xplain/error.hpp"

namespace xplain {
namespace {

class Context {
 public:
  explicit Context(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const toml::node* node, const std::string& what) const {
    std::ostringstream os;
    os << source_;
    if (node != nullptr && node->source().begin.line > 0)
      os << ":" << node->source().begin.line << ":" << node->source().begin.column;
    os << ": " << what;
    throw Error(ErrorCode::ConfigError, os.str());
  }

  void check_keys(const toml::table& table, std::initializer_list<std::string_view> allowed,
                  const std::string& where) const {
    const std::set<std::string_view> ok(allowed);
    for (const auto& [key, node] : table) {
      if (!ok.count(key.str()))
        fail(&node, "unknown key '" + std::string(key.str()) + "'" + (where.empty() ? "" : " in " + where));
    }
  }

  double number(const toml::node& node, const std::string& key) const {
    if (auto i = node.as_integer()) return static_cast<double>(i->get());
    if (auto f = node.as_floating_point()) return f->get();
    fail(&node, "'" + key + "' must be a number");
  }

  long long integer(const toml::node& node, const std::string& key) const {
    if (auto i = node.as_integer()) return i->get();
    fail(&node, "'" + key + "' must be an integer");
  }

  bool boolean(const toml::node& node, const std::string& key) const {
    if (auto b = node.as_boolean()) return b->get();
    fail(&node, "'" + key + "' must be true or false");
  }

  std::string string(const toml::node& node, const std::string& key) const {
    if (auto s = node.as_string()) return s->get();
    fail(&node, "'" + key + "' must be a string");
  }

  Vector vector(const toml::node& node, const std::string& key) const {
    const toml::array* arr = node.as_array();
    if (arr == nullptr) fail(&node, "'" + key + "' must be an array of numbers");
    Vector out(static_cast<Eigen::Index>(arr->size()));
    for (std::size_t i = 0; i < arr->size(); ++i) out[i] = number((*arr)[i], key);
    return out;
  }

  toml::table parse(const std::string& text) const {
    try {
      return toml::parse(text, source_);
    } catch (const toml::parse_error& e) {
      std::ostringstream os;
      os << source_ << ":" << e.source().begin.line << ":" << e.source().begin.column << ": "
         << e.description();
      throw Error(ErrorCode::ConfigError, os.str());
    }
  }

 private:
  std::string source_;
};

const toml::node* find(const toml::table& t, std::string_view key) { return t.get(key); }

void read_solver(const Context& ctx, const toml::table& t, SolverConfig& cfg) {
  ctx.check_keys(t, {"tol", "max_sweeps", "path_points", "path_ratio", "standardize", "fixed_alpha"},
                 "[solver]");
  if (auto n = find(t, "tol")) {
    cfg.tol = ctx.number(*n, "tol");
    if (!(cfg.tol > 0.0)) ctx.fail(n, "'tol' must be positive");
  }
  if (auto n = find(t, "max_sweeps")) {
    cfg.max_sweeps = static_cast<long>(ctx.integer(*n, "max_sweeps"));
    if (cfg.max_sweeps < 1) ctx.fail(n, "'max_sweeps' must be >= 1");
  }
  if (auto n = find(t, "path_points")) {
    cfg.path_points = static_cast<int>(ctx.integer(*n, "path_points"));
    if (cfg.path_points < 1) ctx.fail(n, "'path_points' must be >= 1");
  }
  if (auto n = find(t, "path_ratio")) {
    cfg.path_ratio = ctx.number(*n, "path_ratio");
    if (!(cfg.path_ratio > 0.0 && cfg.path_ratio < 1.0)) ctx.fail(n, "'path_ratio' must lie in (0, 1)");
  }
  if (auto n = find(t, "standardize")) cfg.standardize = ctx.boolean(*n, "standardize");
  if (auto n = find(t, "fixed_alpha")) cfg.fixed_alpha = ctx.number(*n, "fixed_alpha");
}

Rect read_rect(const Context& ctx, const toml::node& node, const std::string& key) {
  const toml::array* arr = node.as_array();
  if (arr == nullptr || arr->size() != 4)
    ctx.fail(&node, "'" + key + "' must be [row_offset, col_offset, height, width]");
  Rect r;
  r.row_offset = static_cast<int>(ctx.integer((*arr)[0], key));
  r.col_offset = static_cast<int>(ctx.integer((*arr)[1], key));
  r.height = static_cast<int>(ctx.integer((*arr)[2], key));
  r.width = static_cast<int>(ctx.integer((*arr)[3], key));
  return r;
}

}  // namespace

ModelSpec parse_model_spec(const std::string& text, const std::string& source, std::optional<int> n_hint) {
  const Context ctx(source);
  const toml::table t = ctx.parse(text);
  ctx.check_keys(t, {"n", "cov_x", "diag", "w", "v", "s"}, "");

  std::optional<int> n = n_hint;
  if (auto node = find(t, "n")) {
    const long long value = ctx.integer(*node, "n");
    if (value < 1) ctx.fail(node, "'n' must be >= 1");
    n = static_cast<int>(value);
  }

  const toml::node* cov = find(t, "cov_x");
  if (cov == nullptr) ctx.fail(nullptr, "missing 'cov_x'");
  Matrix cov_x;
  if (cov->is_string()) {
    const std::string kind = ctx.string(*cov, "cov_x");
    if (kind == "identity") {
      if (!n) ctx.fail(cov, "cov_x = \"identity\" needs 'n' (or the --n flag)");
      cov_x = Matrix::Identity(*n, *n);
    } else if (kind == "diag") {
      const toml::node* d = find(t, "diag");
      if (d == nullptr) ctx.fail(cov, "cov_x = \"diag\" needs a 'diag' array");
      const Vector diag = ctx.vector(*d, "diag");
      if (n && diag.size() != *n) ctx.fail(d, "'diag' length does not match n");
      cov_x = diag.asDiagonal();
    } else {
      ctx.fail(cov, "cov_x must be \"identity\", \"diag\" or a matrix");
    }
  } else if (const toml::array* rows = cov->as_array()) {
    const int k = static_cast<int>(rows->size());
    cov_x.resize(k, k);
    for (int i = 0; i < k; ++i) {
      const Vector row = ctx.vector((*rows)[i], "cov_x");
      if (row.size() != k) ctx.fail(&(*rows)[i], "cov_x must be square");
      cov_x.row(i) = row.transpose();
    }
    if (n && *n != k && find(t, "n")) ctx.fail(find(t, "n"), "'n' does not match cov_x");
  } else {
    ctx.fail(cov, "cov_x must be \"identity\", \"diag\" or a matrix");
  }

  const toml::node* w = find(t, "w");
  const toml::node* v = find(t, "v");
  if (w == nullptr) ctx.fail(nullptr, "missing 'w'");
  if (v == nullptr) ctx.fail(nullptr, "missing 'v'");

  std::optional<int> s;
  if (auto node = find(t, "s")) {
    const long long value = ctx.integer(*node, "s");
    if (value < 0) ctx.fail(node, "'s' must be >= 0");
    s = static_cast<int>(value);
  }
  return ModelSpec{build_gaussian_model(std::move(cov_x), ctx.vector(*w, "w"), ctx.vector(*v, "v")), s};
}

ModelSpec load_model_spec(const std::filesystem::path& path, std::optional<int> n_hint) {
  return parse_model_spec(read_file(path), path.string(), n_hint);
}

SolverConfig parse_solver_config(const std::string& text, const std::string& source, SolverConfig base) {
  const Context ctx(source);
  const toml::table t = ctx.parse(text);
  if (auto node = find(t, "solver")) {
    const toml::table* st = node->as_table();
    if (st == nullptr) ctx.fail(node, "[solver] must be a table");
    read_solver(ctx, *st, base);
  }
  return base;
}

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source,
                                         const std::filesystem::path& base_dir) {
  const Context ctx(source);
  const toml::table t = ctx.parse(text);
  ctx.check_keys(t, {"image", "s", "method", "ridge", "stride", "seed", "geometry", "solver"}, "");

  ExperimentConfig cfg;
  const toml::node* image = find(t, "image");
  if (image == nullptr) ctx.fail(nullptr, "missing 'image'");
  std::filesystem::path img = ctx.string(*image, "image");
  cfg.image = img.is_absolute() ? img : base_dir / img;

  if (auto n = find(t, "s")) cfg.s = static_cast<int>(ctx.integer(*n, "s"));
  if (auto n = find(t, "method")) {
    const std::string name = ctx.string(*n, "method");
    if (name != "auto") {
      try {
        cfg.method = parse_xml_method(name);
      } catch (const Error& e) {
        ctx.fail(n, e.what());
      }
    }
  }
  if (auto n = find(t, "ridge")) cfg.ridge = ctx.number(*n, "ridge");
  if (auto n = find(t, "stride")) cfg.stride = static_cast<int>(ctx.integer(*n, "stride"));
  if (auto n = find(t, "seed")) {
    const long long seed = ctx.integer(*n, "seed");
    if (seed < 0) ctx.fail(n, "'seed' must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(seed);
  }
  if (auto n = find(t, "geometry")) {
    const toml::table* g = n->as_table();
    if (g == nullptr) ctx.fail(n, "[geometry] must be a table");
    ctx.check_keys(*g, {"rect1", "rect2"}, "[geometry]");
    if (auto r = find(*g, "rect1")) cfg.geometry.first = read_rect(ctx, *r, "rect1");
    if (auto r = find(*g, "rect2")) cfg.geometry.second = read_rect(ctx, *r, "rect2");
  }
  if (auto n = find(t, "solver")) {
    const toml::table* st = n->as_table();
    if (st == nullptr) ctx.fail(n, "[solver] must be a table");
    read_solver(ctx, *st, cfg.solver);
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(read_file(path), path.string(), path.parent_path());
}

}  // namespace xplain
