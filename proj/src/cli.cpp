#include "shelab/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>

#include "shelab/config.hpp"
#include "shelab/errors.hpp"
#include "shelab/report.hpp"
#include "shelab/stats.hpp"
#include "shelab/suite.hpp"

namespace shelab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Overrides {
  std::string config;
  std::string out;
  std::optional<int> paths, workers, iters;
  std::optional<std::uint64_t> seed;
  bool no_refine = false;
  bool plots = false;
  std::vector<std::string> checks, lemmas;
};

MonteCarloOptions mc_options(const ExperimentConfig& cfg) {
  MonteCarloOptions mc;
  mc.paths = cfg.run.paths;
  mc.workers = cfg.run.workers;
  mc.refine = cfg.run.refine;
  return mc;
}

/// Accepts either a config document or a manifest written by an earlier run.
ExperimentConfig load_any(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (doc.is_object() && doc.contains("config") && doc.contains("solver_digest")) return parse_config(doc["config"]);
  return parse_config(doc);
}

void apply(const Overrides& o, ExperimentConfig& cfg) {
  if (!o.out.empty()) cfg.run.output_dir = o.out;
  if (o.paths) {
    if (*o.paths < 2) throw ConfigError("--paths must be >= 2");
    cfg.run.paths = *o.paths;
  }
  if (o.workers) cfg.run.workers = *o.workers;
  if (o.iters) {
    if (*o.iters < 3) throw ConfigError("--iters must be >= 3");
    cfg.picard.iterations = *o.iters;
  }
  if (o.seed) cfg.solver.master_seed = *o.seed;
  if (o.no_refine) cfg.run.refine = false;
  if (o.plots) cfg.run.plots = true;
  if (!o.checks.empty()) cfg.verify.checks = o.checks;
  if (!o.lemmas.empty()) cfg.verify.lemmas = o.lemmas;
}

std::vector<CheckReport> run_simulate(const ExperimentConfig& cfg, const fs::path& dir, std::vector<std::string>& outputs) {
  const Solver solver(cfg.solver);
  std::ofstream table(dir / "paths.csv");
  table << "path,max_abs,blowup_row\n";
  for (int p = 0; p < cfg.simulate.paths; ++p) {
    const auto traj = solver.simulate(static_cast<std::uint32_t>(p));
    const bool csv = cfg.simulate.format == "csv";
    const std::string name = "path_" + std::to_string(p) + (csv ? ".csv" : ".bin");
    if (csv) write_trajectory_csv((dir / name).string(), traj);
    else write_trajectory_binary((dir / name).string(), traj);
    outputs.push_back(name);
    double m = 0.0;
    for (double v : traj.values)
      if (std::isfinite(v)) m = std::max(m, std::abs(v));
    table << p << ',' << std::setprecision(17) << m << ',' << (traj.blowup_row ? *traj.blowup_row : -1) << '\n';
  }
  outputs.push_back("paths.csv");
  return {};
}

double picard_beta(const ExperimentConfig& cfg) {
  if (cfg.picard.beta) return *cfg.picard.beta;
  const auto& s = cfg.solver;
  if (s.drift.kind == DriftKind::zero) return 4.0 * cfg.constants.C;
  if (!s.truncation) throw ConfigError("picard.beta is required unless the drift is truncated");
  return resolve_envelope(s.drift, s.truncation->N, s.truncation->alpha, cfg.constants.C).beta;
}

std::vector<CheckReport> dispatch(const ExperimentConfig& cfg, const fs::path& dir, std::vector<std::string>& outputs) {
  const auto mc = mc_options(cfg);
  const std::string& c = cfg.command;
  if (c == "simulate") return run_simulate(cfg, dir, outputs);
  if (c == "picard") return {check_picard_contraction(cfg.solver, cfg.picard.iterations, picard_beta(cfg), cfg.picard.k, mc)};
  if (c == "verify-lemmas") {
    std::vector<LemmaId> ids;
    for (const auto& n : cfg.verify.lemmas) ids.push_back(parse_lemma(n));
    if (ids.empty()) ids = all_lemmas();
    return verify_lemmas(ids, cfg.run.workers);
  }
  if (c == "verify-stochastic") {
    std::vector<StochasticCheck> ids;
    for (const auto& n : cfg.verify.checks) ids.push_back(parse_stochastic_check(n));
    if (ids.empty()) ids = all_stochastic_checks();
    SuiteSettings s;
    s.grid_points = cfg.solver.grid_points;
    s.steps = cfg.solver.steps;
    s.horizon = cfg.solver.horizon;
    s.seed = cfg.solver.master_seed;
    s.mc = mc;
    s.isometry_paths = cfg.verify.isometry_paths;
    s.C = cfg.constants.C;
    s.A = cfg.constants.A;
    s.kernel = cfg.solver.kernel;
    s.noise_variance_scale = cfg.solver.noise_variance_scale;
    std::vector<CheckReport> all;
    for (auto id : ids)
      for (auto& r : run_stochastic_check(id, s)) all.push_back(std::move(r));
    return all;
  }
  if (c == "compare") {
    SolverConfig upper = cfg.solver;
    upper.initial = cfg.compare_upper;
    return {check_comparison(cfg.solver, upper, mc)};
  }
  if (c == "stability") return {check_stability(cfg.solver, cfg.stability.perturbation, cfg.stability.eps, mc)};
  if (c == "decay") {
    SolverConfig s = cfg.solver;
    s.truncation.reset();
    s.horizon = cfg.decay.t0 ? *cfg.decay.t0 : default_t0(cfg.constants.A, s.drift.theta2);
    s.validate();
    return {check_decay_statistic(s, cfg.decay.cutoffs, cfg.decay.cutoff_alpha, cfg.decay.alpha, s.horizon, mc)};
  }
  if (c == "l2-continuity") return {check_l2_continuity(cfg.solver, mc)};
  throw ConfigError("unknown command '" + c + "'");
}

int execute(ExperimentConfig cfg, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  if (auto v = assumption_violation(cfg)) {
    if (cfg.constants.assumption_check == "reject") throw ConfigError("assumption check: " + *v);
    warnings.push_back(*v);
    err << "warning: " << *v << '\n';
  }
  const fs::path dir(cfg.run.output_dir);
  fs::create_directories(dir);
  std::vector<std::string> outputs;
  const auto reports = dispatch(cfg, dir, outputs);

  if (!reports.empty()) {
    write_summary_csv((dir / "summary.csv").string(), reports);
    outputs.push_back("summary.csv");
  }
  for (const auto& r : reports) {
    if (r.detail.rows.empty()) continue;
    const std::string stem = "detail_" + file_stem(r.name);
    write_detail_csv((dir / (stem + ".csv")).string(), r.detail);
    outputs.push_back(stem + ".csv");
    if (cfg.run.plots) {
      write_detail_svg((dir / (stem + ".svg")).string(), r);
      outputs.push_back(stem + ".svg");
    }
  }
  const json cfg_json = to_json(cfg);
  json extra = {{"command", cfg.command}, {"warnings", warnings}, {"assumption_ok", warnings.empty()}};
  write_summary_json((dir / "summary.json").string(), reports, extra);
  outputs.push_back("summary.json");
  write_json((dir / "manifest.json").string(), {{"config", cfg_json},
                                                {"solver_digest", cfg.solver.digest()},
                                                {"master_seed", cfg.solver.master_seed},
                                                {"warnings", warnings},
                                                {"outputs", outputs}});
  print_reports(out, reports);
  out << "wrote " << outputs.size() + 1 << " files to " << dir.string() << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic heat equation lab: simulation and verification experiments"};
  app.require_subcommand(1);
  Overrides o;
  std::string run_file;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", o.config, "JSON config file (defaults apply to missing fields)");
    sub->add_option("-o,--out", o.out, "output directory");
    sub->add_option("--paths", o.paths, "Monte Carlo paths");
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--workers", o.workers, "worker threads (0: all cores)");
    sub->add_flag("--no-refine", o.no_refine, "skip the 2 n_x refinement run");
    sub->add_flag("--plots", o.plots, "write SVG plots of detail tables");
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : known_commands()) {
    auto* sub = app.add_subcommand(name);
    common(sub);
    subs[name] = sub;
  }
  subs["verify-stochastic"]->add_option("--checks", o.checks, "subset of checks")->delimiter(',');
  subs["verify-lemmas"]->add_option("--lemmas", o.lemmas, "subset of lemmas")->delimiter(',');
  subs["picard"]->add_option("--iters", o.iters, "Picard iterations");
  auto* run = app.add_subcommand("run", "run the command named in a config or manifest file");
  run->add_option("file", run_file, "config or manifest")->required();
  common(run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    ExperimentConfig cfg;
    const std::string file = run->parsed() ? run_file : o.config;
    if (!file.empty()) cfg = load_any(file);
    else cfg = parse_config(json::object());
    if (!run->parsed())
      for (const auto& [name, sub] : subs)
        if (sub->parsed()) cfg.command = name;
    apply(o, cfg);
    cfg.solver.validate();
    return execute(std::move(cfg), out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical fault: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "internal fault: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace shelab
