#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "shelab/cli.hpp"
#include "shelab/config.hpp"
#include "shelab/errors.hpp"
#include "shelab/report.hpp"

using namespace shelab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("shelab_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string write(const std::string& name, const json& doc) const {
    const auto p = dir / name;
    std::ofstream(p) << doc.dump();
    return p.string();
  }
};

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "shelab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("defaults and resolved round trip") {
  const auto cfg = parse_config(json::object());
  CHECK(cfg.command == "simulate");
  CHECK(cfg.solver.grid_points == 128);
  CHECK(cfg.solver.steps == 256);
  CHECK(cfg.solver.horizon == 0.5);
  CHECK(cfg.run.paths == 1000);
  CHECK(cfg.constants.assumption_check == "warn");
  CHECK(cfg.decay.cutoffs.size() == 4);

  json doc = {{"command", "decay"},
              {"grid", {{"points", 64}, {"steps", 100}, {"horizon", 0.25}}},
              {"initial", {{"preset", "indicator"}, {"lower", 0.1}, {"upper", 0.6}, {"amplitude", 2.0}}},
              {"drift", {{"kind", "llogl"}, {"theta1", 0.5}, {"theta2", 1.0}, {"truncation", {{"N", std::exp(3.0)}}}}},
              {"sigma", {{"kind", "tanh"}, {"offset", 1.0}, {"amplitude", 0.3}}},
              {"noise", {{"seed", 77}, {"scheme", "left_point"}}},
              {"picard", {{"beta", 12.5}}},
              {"decay", {{"t0", 0.01}}}};
  const auto a = parse_config(doc);
  CHECK(a.solver.master_seed == 77);
  CHECK(a.solver.noise_scheme == NoiseScheme::left_point);
  CHECK(a.solver.truncation->alpha == 0.5);
  CHECK(a.solver.initial == InitialCondition::indicator(0.1, 0.6, 2.0));
  const json once = to_json(a);
  const json twice = to_json(parse_config(once));
  CHECK(once == twice);
  CHECK(parse_config(once).solver.digest() == a.solver.digest());
}

TEST_CASE("config errors name the offending field") {
  auto message = [](const json& doc) {
    try {
      parse_config(doc);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message({{"grid", {{"pionts", 3}}}}).find("grid.pionts") != std::string::npos);
  CHECK(message({{"grid", {{"points", "x"}}}}).find("grid.points") != std::string::npos);
  CHECK(message({{"drift", {{"kind", "cubic"}}}}).find("drift.kind") != std::string::npos);
  CHECK(message({{"drift", {{"kind", "llogl"}, {"theta2", -1.0}}}}).find("drift") != std::string::npos);
  CHECK(message({{"constants", {{"assumption_check", "maybe"}}}}).find("constants.assumption_check") != std::string::npos);
  CHECK(message({{"command", "fly"}}).find("command") != std::string::npos);
  CHECK(message({{"grid", {{"points", 1}}}}).find("n_x") != std::string::npos);
  CHECK(message({{"decay", {{"alpha", 0.2}}}}).find("decay.alpha") != std::string::npos);
}

TEST_CASE("assumption check on the truncated drift") {
  json ok = {{"drift", {{"kind", "llogl"}, {"theta1", 0.5}, {"theta2", 1.0}, {"truncation", {{"N", std::exp(3.0)}}}}},
             {"sigma", {{"kind", "sine"}, {"offset", 1.0}, {"amplitude", 0.5}}}};
  CHECK_FALSE(assumption_violation(parse_config(ok)).has_value());
  json bad = ok;
  bad["drift"]["truncation"]["N"] = 3.0;
  CHECK(assumption_violation(parse_config(bad)).has_value());
  CHECK_FALSE(assumption_violation(parse_config(json::object())).has_value());

  Scratch s;
  bad["grid"] = {{"points", 16}, {"steps", 16}};
  const auto warn = cli({"simulate", "-c", s.write("bad.json", bad), "-o", (s.dir / "w").string()});
  CHECK(warn.code == 0);
  CHECK(warn.err.find("warning") != std::string::npos);
  const auto manifest = json::parse(slurp(s.dir / "w" / "manifest.json"));
  CHECK(manifest["warnings"].size() == 1);

  bad["constants"] = {{"assumption_check", "reject"}};
  const auto reject = cli({"simulate", "-c", s.write("bad2.json", bad), "-o", (s.dir / "r").string()});
  CHECK(reject.code == 2);
}

TEST_CASE("exit codes") {
  Scratch s;
  CHECK(cli({"simulate", "-c", (s.dir / "missing.json").string()}).code == 2);
  std::ofstream(s.dir / "broken.json") << "{ not json";
  CHECK(cli({"simulate", "-c", (s.dir / "broken.json").string()}).code == 2);
  CHECK(cli({"no-such-command"}).code == 2);
  CHECK(cli({"verify-stochastic", "--checks", "bogus", "-o", (s.dir / "x").string()}).code == 2);
  CHECK(cli({"picard", "--iters", "2", "-o", (s.dir / "y").string()}).code == 2);
}

TEST_CASE("simulate: heat flow matches the closed form and reruns reproduce bit for bit") {
  Scratch s;
  const json doc = {{"grid", {{"points", 32}, {"steps", 64}, {"horizon", 0.5}}},
                    {"sigma", {{"kind", "constant"}, {"offset", 0.0}}},
                    {"initial", {{"preset", "sine"}, {"mode", 1}}}};
  const auto out1 = s.dir / "a";
  REQUIRE(cli({"simulate", "-c", s.write("heat.json", doc), "-o", out1.string()}).code == 0);
  std::ifstream in(out1 / "path_0.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "n_x,n_t,T,seed,path_index");
  std::getline(in, line);
  int rows = 0;
  double worst = 0.0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    const double t = std::stod(cell);
    for (int i = 0; std::getline(ss, cell, ','); ++i) {
      const double x = i / 32.0;
      const double exact = std::exp(-std::numbers::pi * std::numbers::pi * t / 2) * std::sin(std::numbers::pi * x);
      worst = std::max(worst, std::abs(std::stod(cell) - exact));
    }
    ++rows;
  }
  CHECK(rows == 64);
  CHECK(worst < 1e-12);

  const auto out2 = s.dir / "b";
  REQUIRE(cli({"run", (out1 / "manifest.json").string(), "-o", out2.string()}).code == 0);
  CHECK(slurp(out1 / "path_0.csv") == slurp(out2 / "path_0.csv"));

  // nothing is written outside the output directories
  std::vector<std::string> top;
  for (const auto& e : fs::directory_iterator(s.dir)) top.push_back(e.path().filename().string());
  std::sort(top.begin(), top.end());
  CHECK(top == std::vector<std::string>{"a", "b", "heat.json"});
}

TEST_CASE("verify-lemmas subset and picard table") {
  Scratch s;
  const auto out = s.dir / "l";
  const auto r = cli({"verify-lemmas", "--lemmas", "kernel_mass_and_peak_bound,temporal_l1_log_bound", "-o", out.string(), "--plots"});
  REQUIRE(r.code == 0);
  const auto summary = json::parse(slurp(out / "summary.json"));
  REQUIRE(summary["reports"].size() == 2);
  for (const auto& rep : summary["reports"]) CHECK(rep["pass"] == true);
  CHECK(fs::exists(out / "summary.csv"));
  CHECK(fs::exists(out / "manifest.json"));
  bool svg = false;
  for (const auto& e : fs::directory_iterator(out)) svg = svg || e.path().extension() == ".svg";
  CHECK(svg);

  const json pic = {{"grid", {{"points", 32}, {"steps", 64}}},
                    {"drift", {{"kind", "llogl"}, {"theta1", 0.5}, {"theta2", 1.0}, {"truncation", {{"N", std::exp(3.0)}}}}},
                    {"sigma", {{"kind", "sine"}, {"offset", 1.0}, {"amplitude", 0.5}}},
                    {"initial", {{"preset", "sine"}}}};
  const auto po = s.dir / "p";
  REQUIRE(cli({"picard", "-c", s.write("pic.json", pic), "--paths", "40", "--no-refine", "-o", po.string()}).code == 0);
  const std::string table = slurp(po / "detail_picard_contraction.csv");
  CHECK(table.rfind("n_x,n,norm,stderr,ratio", 0) == 0);
  const auto ps = json::parse(slurp(po / "summary.json"));
  CHECK(ps["reports"][0]["statistic"].get<double>() <= 0.75);
}

TEST_CASE("report helpers") {
  CHECK(file_stem("Walsh scaling/0.3") == "walsh_scaling_0_3");
  CheckReport r;
  r.name = "x";
  r.statistic = NAN;
  const auto j = report_to_json(r);
  CHECK(j["statistic"].is_null());
  CHECK(j["verdict"] == "FAIL");
}
