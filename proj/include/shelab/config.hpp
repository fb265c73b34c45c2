#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "shelab/solver.hpp"

namespace shelab {

/// Everything one CLI run needs; JSON with full defaulting. Unknown keys are rejected.
struct ExperimentConfig {
  std::string command = "simulate";
  SolverConfig solver;

  struct Constants {
    double C = 1.0;
    double A = 2.0;
    /// "warn" or "reject" when the envelope condition on the truncated drift fails.
    std::string assumption_check = "warn";
    bool operator==(const Constants&) const = default;
  } constants;

  struct Run {
    int paths = 1000;
    int workers = 0;
    bool refine = true;
    std::string output_dir = "shelab-out";
    bool plots = false;
    bool operator==(const Run&) const = default;
  } run;

  struct Simulate {
    int paths = 1;
    std::string format = "csv";  ///< csv or binary
    bool operator==(const Simulate&) const = default;
  } simulate;

  struct Picard {
    int iterations = 6;
    std::optional<double> beta;  ///< default 4 C K_b
    double k = 2.0;
    bool operator==(const Picard&) const = default;
  } picard;

  struct Verify {
    std::vector<std::string> lemmas;  ///< empty: all
    std::vector<std::string> checks;  ///< empty: all
    int isometry_paths = 10000;
    bool operator==(const Verify&) const = default;
  } verify;

  InitialCondition compare_upper = InitialCondition::sine(1, 1.0);

  struct Stability {
    std::vector<double> eps{1e-1, 1e-2, 1e-3};
    InitialCondition perturbation = InitialCondition::constant(1.0);
    bool operator==(const Stability&) const = default;
  } stability;

  struct Decay {
    std::vector<double> cutoffs;  ///< default e^2, e^3, e^4, e^6
    double cutoff_alpha = 0.5;
    double alpha = 0.3;
    std::optional<double> t0;  ///< default 1/(32 A (theta2 + 1))
    bool operator==(const Decay&) const = default;
  } decay;
};

const std::vector<std::string>& known_commands();

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Envelope condition on the truncated drift. Returns a message when it fails, nothing when it
/// holds or does not apply.
std::optional<std::string> assumption_violation(const ExperimentConfig& cfg);

}  // namespace shelab
