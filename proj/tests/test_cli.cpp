#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "xplain/data_io.hpp"
#include "xplain/experiment.hpp"
#include "xplain/json_io.hpp"

namespace fs = std::filesystem;
using xplain::Json;
using xplain::read_file;
using xplain::write_file;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "xplain_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

Run run(const std::string& args) {
  const fs::path out = workdir() / "stdout.txt";
  const fs::path err = workdir() / "stderr.txt";
  const std::string cmd = "cd '" + workdir().string() + "' && '" XPLAIN_CLI_PATH "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int raw = std::system(cmd.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

void model_file(const std::string& name, const std::string& body) { write_file(workdir() / name, body); }

}  // namespace

TEST_CASE("help and version on every subcommand") {
  for (const char* sub : {"", "synth ", "explain ", "mi-table ", "experiment "}) {
    const Run h = run(std::string(sub) + "--help");
    CHECK(h.status == 0);
    CHECK(h.out.find("Usage") != std::string::npos);
    const Run v = run(std::string(sub) + "--version");
    CHECK(v.status == 0);
    CHECK(v.out.find("xplain 0.1.0") != std::string::npos);
  }
}

TEST_CASE("usage errors exit 1") {
  CHECK(run("").status == 1);
  CHECK(run("frobnicate").status == 1);
  CHECK(run("explain --s 1").status == 1);
  CHECK(run("synth --model m.toml --m -4").status == 1);
}

TEST_CASE("synth, explain and mi-table") {
  model_file("four.toml", "n = 4\ncov_x = \"identity\"\nw = [2, 1, 0, 0]\nv = [0, 0, 1, 0]\ns = 2\n");
  const Run s = run("synth --model four.toml --m 20000 --seed 4 --out d4");
  REQUIRE(s.status == 0);
  const std::string samples = read_file(workdir() / "d4/samples.csv");
  CHECK(samples.rfind("x1,x2,x3,x4,yhat,u\n", 0) == 0);
  const Json truth = Json::parse(read_file(workdir() / "d4/truth.json"));
  CHECK(truth["population"]["support"] == Json::array({1, 2}));
  CHECK(truth["seed"] == 4);
  CHECK(truth["rng"] == xplain::kRngName);
  CHECK(truth["version"] == "0.1.0");
  CHECK(truth["mi_table"].size() == 11);

  CHECK(run("synth --model four.toml --m 20000 --seed 4 --out d4b").status == 0);
  CHECK(read_file(workdir() / "d4b/samples.csv") == samples);
  CHECK(read_file(workdir() / "d4b/truth.json") == read_file(workdir() / "d4/truth.json"));

  for (const char* method : {"auto", "l0_exhaustive", "omp", "lasso_path"}) {
    const Run e = run(std::string("explain --samples d4/samples.csv --s 2 --method ") + method);
    REQUIRE(e.status == 0);
    const Json report = Json::parse(e.out);
    CHECK(report["support"] == truth["population"]["support"]);
    CHECK(report["fit"].contains("rss"));
    // yhat = 2 x1 + x2, so the two-feature explanation determines it
    CHECK(report["mi_nats"] == "inf");
    CHECK(report["version"] == "0.1.0");
  }

  const Run zero = run("explain --samples d4/samples.csv --s 0 --out e0/report.json");
  CHECK(zero.status == 0);
  CHECK(Json::parse(read_file(workdir() / "e0/report.json"))["support"] == Json::array());

  const Run missing = run("explain --samples nowhere.csv --s 1");
  CHECK(missing.status == 2);
  CHECK(missing.err.find("nowhere.csv") != std::string::npos);
  CHECK(run("explain --samples d4/samples.csv --s 5").status == 1);
  CHECK(run("explain --samples d4/samples.csv --s 1 --method simplex").status == 1);
  CHECK(run("explain --samples d4/samples.csv --s 1 --path-ratio 2").status == 1);

  write_file(workdir() / "ragged.csv", "x1,yhat,u\n1,2,3\n1,2\n");
  CHECK(run("explain --samples ragged.csv --s 1").status == 2);

  model_file("solver.toml", "[solver]\npath_points = 30\n");
  CHECK(run("explain --samples d4/samples.csv --s 2 --method lasso_path --config solver.toml").status == 0);
  model_file("badsolver.toml", "[solver]\npath_points = 0\n");
  CHECK(run("explain --samples d4/samples.csv --s 2 --config badsolver.toml").status == 1);

  const Run table = run("mi-table --model four.toml --s 1");
  CHECK(table.status == 0);
  CHECK(table.out.rfind("support,mi_nats,cond_var\n1,", 0) == 0);
  const Run etable = run("mi-table --samples d4/samples.csv --s 2 --out t.csv");
  CHECK(etable.status == 0);
  CHECK(read_file(workdir() / "t.csv").rfind("support,mi_nats,cond_var\n1;2,", 0) == 0);
  CHECK(run("mi-table --s 1").status == 1);
}

TEST_CASE("synth beyond the enumeration limit") {
  std::string w, v;
  for (int i = 0; i < 26; ++i) {
    w += (i ? ", " : "") + std::to_string(26 - i);
    v += i ? ", 0" : "0";
  }
  model_file("wide.toml", "n = 26\ncov_x = \"identity\"\nw = [" + w + "]\nv = [" + v + "]\n");
  const Run r = run("synth --model wide.toml --m 50 --s 2 --out wide");
  CHECK(r.status == 0);
  CHECK(r.err.find("DimensionTooLarge") != std::string::npos);
  const Json truth = Json::parse(read_file(workdir() / "wide/truth.json"));
  CHECK_FALSE(truth.contains("mi_table"));
  CHECK(truth["population"]["method"] == "greedy");
  CHECK(truth["population"]["support"] == Json::array({1, 2}));
  CHECK(truth["warnings"].size() == 2);
}

TEST_CASE("config errors exit 1 with a location") {
  model_file("broken.toml", "n = 2\ncov_x = \"identity\"\nw = [1, 0]\nv = [0, 0]\nextra = true\n");
  const Run r = run("synth --model broken.toml --out x");
  CHECK(r.status == 1);
  CHECK(r.err.find("broken.toml:5") != std::string::npos);
  model_file("notpsd.toml", "cov_x = [[1, 2], [2, 1]]\nw = [1, 0]\nv = [0, 0]\n");
  CHECK(run("synth --model notpsd.toml --out x").status == 2);
}

TEST_CASE("experiment command") {
  const xplain::NeighborhoodGeometry g{xplain::Rect{-1, -3, 3, 3}, xplain::Rect{-1, 1, 3, 3}};
  const xplain::PlantedImage img = xplain::make_planted_image(g, 20, 4, 11, 5);
  xplain::write_pgm(workdir() / "planted.pgm", img.width, img.height, img.levels, 65535);
  const std::string geometry = "[geometry]\nrect1 = [-1, -3, 3, 3]\nrect2 = [-1, 1, 3, 3]\n";
  model_file("exp.toml", "image = \"planted.pgm\"\ns = 2\nstride = 7\nmethod = \"omp\"\n" + geometry);
  const Run r = run("experiment --config exp.toml --out exp_out");
  REQUIRE(r.status == 0);
  const Json report = Json::parse(read_file(workdir() / "exp_out/report.json"));
  CHECK(report["explanation"]["support"] == Json::array({5, 12}));
  CHECK(report["schema_version"] == 1);
  CHECK(fs::exists(workdir() / "exp_out/mi_table.csv"));
  CHECK(fs::exists(workdir() / "exp_out/mask.pgm"));

  std::vector<std::uint16_t> flat(40 * 40, 300);
  xplain::write_pgm(workdir() / "flat.pgm", 40, 40, flat, 65535, false);
  model_file("flat.toml", "image = \"flat.pgm\"\n" + geometry);
  CHECK(run("experiment --config flat.toml --out flat_out").status == 0);
  CHECK(Json::parse(read_file(workdir() / "flat_out/report.json"))["degenerate"] == true);

  model_file("toomany.toml", "image = \"planted.pgm\"\ns = 19\n" + geometry);
  const Run bad = run("experiment --config toomany.toml --out bad_out");
  CHECK(bad.status == 1);
  CHECK(bad.err.find("s = 19") != std::string::npos);

  model_file("noimage.toml", "image = \"absent.pgm\"\n" + geometry);
  const Run missing = run("experiment --config noimage.toml --out none");
  CHECK(missing.status == 2);
  CHECK(missing.err.find("load_image") != std::string::npos);

  xplain::write_pgm(workdir() / "tiny.pgm", 4, 4, std::vector<std::uint16_t>(16, 9), 255);
  model_file("tiny.toml", "image = \"tiny.pgm\"\n" + geometry);
  CHECK(run("experiment --config tiny.toml --out tiny_out").status == 2);
}
