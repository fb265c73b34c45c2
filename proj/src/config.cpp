#include "shelab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "shelab/errors.hpp"

namespace shelab {
namespace {

using nlohmann::json;

/// Walks one JSON object, type-checks the fields it is asked for and rejects the rest.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config field '" + (path.empty() ? std::string("<root>") : path) + "': " + what);
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void get(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(at(key), "expected a number");
      out = v->get<double>();
    }
  }
  void get(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(at(key), "expected an integer");
      out = v->get<int>();
    }
  }
  void get(const std::string& key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() && v->get<std::int64_t>() < 0))
        fail(at(key), "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void get(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(at(key), "expected true or false");
      out = v->get<bool>();
    }
  }
  void get(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(at(key), "expected a string");
      out = v->get<std::string>();
    }
  }
  void get(const std::string& key, std::vector<double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(at(key), "expected an array of numbers");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number()) fail(at(key), "expected an array of numbers");
        out.push_back(e.get<double>());
      }
    }
  }
  void get(const std::string& key, std::vector<std::string>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(at(key), "expected an array of strings");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_string()) fail(at(key), "expected an array of strings");
        out.push_back(e.get<std::string>());
      }
    }
  }
  void get(const std::string& key, std::optional<double>& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) out.reset();
      else if (v->is_number()) out = v->get<double>();
      else fail(at(key), "expected a number or null");
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(at(it.key()), "unknown field");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F>
void section(Reader& parent, const std::string& key, F&& body) {
  if (const json* v = parent.find(key)) {
    Reader r(*v, parent.at(key));
    try {
      body(r);
    } catch (const ConfigError& e) {
      if (std::string(e.what()).rfind("config field", 0) == 0) throw;
      Reader::fail(parent.at(key), e.what());
    }
    r.finish();
  }
}

template <class Fn>
auto guarded(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    Reader::fail(path, e.what());
  }
}

void read_initial(Reader& r, InitialCondition& ic) {
  std::string preset = preset_name(ic.preset);
  r.get("preset", preset);
  ic.preset = guarded(r.at("preset"), [&] { return parse_preset(preset); });
  r.get("amplitude", ic.amplitude);
  r.get("mode", ic.mode);
  r.get("lower", ic.lower);
  r.get("upper", ic.upper);
  r.get("samples", ic.samples);
}

json write_initial(const InitialCondition& ic) {
  return {{"preset", preset_name(ic.preset)}, {"amplitude", ic.amplitude}, {"mode", ic.mode},
          {"lower", ic.lower},                {"upper", ic.upper},         {"samples", ic.samples}};
}

const char* drift_kind_name(DriftKind k) {
  switch (k) {
    case DriftKind::llogl: return "llogl";
    case DriftKind::linear: return "linear";
    case DriftKind::zero: return "zero";
    case DriftKind::custom: return "custom";
  }
  return "?";
}

const char* sigma_kind_name(SigmaKind k) {
  switch (k) {
    case SigmaKind::constant: return "constant";
    case SigmaKind::sine: return "sine";
    case SigmaKind::tanh: return "tanh";
    case SigmaKind::custom: return "custom";
  }
  return "?";
}

void read_drift(Reader& r, SolverConfig& s) {
  std::string kind = drift_kind_name(s.drift.kind);
  double theta1 = s.drift.theta1, theta2 = s.drift.theta2, rate = s.drift.rate;
  r.get("kind", kind);
  r.get("theta1", theta1);
  r.get("theta2", theta2);
  r.get("rate", rate);
  if (kind == "llogl") s.drift = DriftSpec::llogl(theta1, theta2);
  else if (kind == "linear") s.drift = DriftSpec::linear(rate);
  else if (kind == "zero") s.drift = DriftSpec::zero();
  else Reader::fail(r.at("kind"), "expected llogl, linear or zero");
  if (const json* t = r.find("truncation")) {
    if (t->is_null()) {
      s.truncation.reset();
    } else {
      Reader tr(*t, r.at("truncation"));
      Truncation trunc = s.truncation.value_or(Truncation{});
      tr.get("N", trunc.N);
      tr.get("alpha", trunc.alpha);
      tr.finish();
      s.truncation = trunc;
    }
  }
}

void read_sigma(Reader& r, SigmaSpec& sigma) {
  std::string kind = sigma_kind_name(sigma.kind);
  double offset = sigma.offset, amplitude = sigma.amplitude;
  r.get("kind", kind);
  r.get("offset", offset);
  r.get("amplitude", amplitude);
  if (kind == "constant") sigma = SigmaSpec::constant(offset);
  else if (kind == "sine") sigma = SigmaSpec::sine(offset, amplitude);
  else if (kind == "tanh") sigma = SigmaSpec::tanh(offset, amplitude);
  else Reader::fail(r.at("kind"), "expected constant, sine or tanh");
}

std::vector<double> default_cutoffs() { return {std::exp(2.0), std::exp(3.0), std::exp(4.0), std::exp(6.0)}; }

}  // namespace

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> names{"simulate",  "picard",  "verify-lemmas", "verify-stochastic",
                                              "compare",   "stability", "decay",       "l2-continuity"};
  return names;
}

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig cfg;
  cfg.decay.cutoffs = default_cutoffs();
  Reader root(doc, "");
  root.get("command", cfg.command);
  if (std::find(known_commands().begin(), known_commands().end(), cfg.command) == known_commands().end())
    Reader::fail("command", "unknown command '" + cfg.command + "'");
  SolverConfig& s = cfg.solver;
  section(root, "grid", [&](Reader& r) {
    r.get("points", s.grid_points);
    r.get("steps", s.steps);
    r.get("horizon", s.horizon);
    r.get("allow_long_horizon", s.allow_long_horizon);
  });
  section(root, "initial", [&](Reader& r) { read_initial(r, s.initial); });
  section(root, "perturbation", [&](Reader& r) {
    r.get("scale", s.perturbation_scale);
    section(r, "profile", [&](Reader& p) { read_initial(p, s.perturbation); });
  });
  section(root, "drift", [&](Reader& r) { read_drift(r, s); });
  section(root, "sigma", [&](Reader& r) { read_sigma(r, s.sigma); });
  section(root, "kernel", [&](Reader& r) {
    r.get("switch_time", s.kernel.switch_time);
    r.get("series_tolerance", s.kernel.series_tolerance);
    r.get("eigenvalue_scale", s.kernel.eigenvalue_scale);
  });
  section(root, "noise", [&](Reader& r) {
    std::string scheme = noise_scheme_name(s.noise_scheme);
    r.get("scheme", scheme);
    s.noise_scheme = guarded(r.at("scheme"), [&] { return parse_noise_scheme(scheme); });
    r.get("variance_scale", s.noise_variance_scale);
    r.get("seed", s.master_seed);
  });
  section(root, "constants", [&](Reader& r) {
    r.get("C", cfg.constants.C);
    r.get("A", cfg.constants.A);
    r.get("assumption_check", cfg.constants.assumption_check);
    if (cfg.constants.assumption_check != "warn" && cfg.constants.assumption_check != "reject")
      Reader::fail(r.at("assumption_check"), "expected warn or reject");
    if (!(cfg.constants.C > 0.0)) Reader::fail(r.at("C"), "must be > 0");
    if (!(cfg.constants.A > 0.0)) Reader::fail(r.at("A"), "must be > 0");
  });
  section(root, "run", [&](Reader& r) {
    r.get("paths", cfg.run.paths);
    r.get("workers", cfg.run.workers);
    r.get("refine", cfg.run.refine);
    r.get("output_dir", cfg.run.output_dir);
    r.get("plots", cfg.run.plots);
    if (cfg.run.paths < 2) Reader::fail(r.at("paths"), "must be >= 2");
    if (cfg.run.workers < 0) Reader::fail(r.at("workers"), "must be >= 0");
  });
  section(root, "simulate", [&](Reader& r) {
    r.get("paths", cfg.simulate.paths);
    r.get("format", cfg.simulate.format);
    if (cfg.simulate.paths < 1) Reader::fail(r.at("paths"), "must be >= 1");
    if (cfg.simulate.format != "csv" && cfg.simulate.format != "binary")
      Reader::fail(r.at("format"), "expected csv or binary");
  });
  section(root, "picard", [&](Reader& r) {
    r.get("iterations", cfg.picard.iterations);
    r.get("beta", cfg.picard.beta);
    r.get("k", cfg.picard.k);
    if (cfg.picard.iterations < 3) Reader::fail(r.at("iterations"), "must be >= 3");
  });
  section(root, "verify", [&](Reader& r) {
    r.get("lemmas", cfg.verify.lemmas);
    r.get("checks", cfg.verify.checks);
    r.get("isometry_paths", cfg.verify.isometry_paths);
  });
  section(root, "compare", [&](Reader& r) { section(r, "upper_initial", [&](Reader& p) { read_initial(p, cfg.compare_upper); }); });
  section(root, "stability", [&](Reader& r) {
    r.get("eps", cfg.stability.eps);
    section(r, "perturbation", [&](Reader& p) { read_initial(p, cfg.stability.perturbation); });
  });
  section(root, "decay", [&](Reader& r) {
    r.get("cutoffs", cfg.decay.cutoffs);
    r.get("cutoff_alpha", cfg.decay.cutoff_alpha);
    r.get("alpha", cfg.decay.alpha);
    r.get("t0", cfg.decay.t0);
    if (!(cfg.decay.alpha > 0.25)) Reader::fail(r.at("alpha"), "must be > 1/4");
  });
  root.finish();
  guarded("", [&] {
    s.validate();
    return 0;
  });
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
  const SolverConfig& s = cfg.solver;
  json drift = {{"kind", drift_kind_name(s.drift.kind)},
                {"theta1", s.drift.theta1},
                {"theta2", s.drift.theta2},
                {"rate", s.drift.rate}};
  drift["truncation"] = s.truncation ? json{{"N", s.truncation->N}, {"alpha", s.truncation->alpha}} : json(nullptr);
  return {
      {"command", cfg.command},
      {"grid",
       {{"points", s.grid_points}, {"steps", s.steps}, {"horizon", s.horizon}, {"allow_long_horizon", s.allow_long_horizon}}},
      {"initial", write_initial(s.initial)},
      {"perturbation", {{"scale", s.perturbation_scale}, {"profile", write_initial(s.perturbation)}}},
      {"drift", drift},
      {"sigma", {{"kind", sigma_kind_name(s.sigma.kind)}, {"offset", s.sigma.offset}, {"amplitude", s.sigma.amplitude}}},
      {"kernel",
       {{"switch_time", s.kernel.switch_time},
        {"series_tolerance", s.kernel.series_tolerance},
        {"eigenvalue_scale", s.kernel.eigenvalue_scale}}},
      {"noise",
       {{"scheme", noise_scheme_name(s.noise_scheme)}, {"variance_scale", s.noise_variance_scale}, {"seed", s.master_seed}}},
      {"constants", {{"C", cfg.constants.C}, {"A", cfg.constants.A}, {"assumption_check", cfg.constants.assumption_check}}},
      {"run",
       {{"paths", cfg.run.paths},
        {"workers", cfg.run.workers},
        {"refine", cfg.run.refine},
        {"output_dir", cfg.run.output_dir},
        {"plots", cfg.run.plots}}},
      {"simulate", {{"paths", cfg.simulate.paths}, {"format", cfg.simulate.format}}},
      {"picard",
       {{"iterations", cfg.picard.iterations},
        {"beta", cfg.picard.beta ? json(*cfg.picard.beta) : json(nullptr)},
        {"k", cfg.picard.k}}},
      {"verify",
       {{"lemmas", cfg.verify.lemmas}, {"checks", cfg.verify.checks}, {"isometry_paths", cfg.verify.isometry_paths}}},
      {"compare", {{"upper_initial", write_initial(cfg.compare_upper)}}},
      {"stability", {{"eps", cfg.stability.eps}, {"perturbation", write_initial(cfg.stability.perturbation)}}},
      {"decay",
       {{"cutoffs", cfg.decay.cutoffs},
        {"cutoff_alpha", cfg.decay.cutoff_alpha},
        {"alpha", cfg.decay.alpha},
        {"t0", cfg.decay.t0 ? json(*cfg.decay.t0) : json(nullptr)}}},
  };
}

std::optional<std::string> assumption_violation(const ExperimentConfig& cfg) {
  const SolverConfig& s = cfg.solver;
  if (s.drift.kind != DriftKind::llogl || !s.truncation) return std::nullopt;
  const Envelope env = resolve_envelope(s.drift, s.truncation->N, s.truncation->alpha, cfg.constants.C);
  std::string msg;
  if (!satisfies_envelope_condition(env, s.sigma.bound()))
    msg = "envelope condition K_b > L_b log(8 K_b) + M_sigma^2 + M_b^4 fails (K_b = " + std::to_string(env.K_b) + ")";
  else if (!satisfies_growth_condition(env, cfg.constants.A))
    msg = "growth condition L_b log(8 A K_b) / K_b < 1 fails";
  if (msg.empty()) return std::nullopt;
  return msg;
}

}  // namespace shelab
