#pragma once

// Experiment configuration: JSON schema, defaults and validation.

#include "ustatboot/distributions.hpp"
#include "ustatboot/kernels.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ustatboot::harness {

/// Invalid or unknown configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment {
  PpPlot,
  NaiveVsHajek,
  Coverage,
  ThresholdEval,
  TestSize,
  ClimeEval,
  LinfunEval,
  MaximalIneqScaling,
};

std::string experiment_name(Experiment e);
Experiment parse_experiment(const std::string& name);
const std::vector<Experiment>& all_experiments();

struct ModelConfig {
  /// "contaminated_normal", "elliptic_t" or "gaussian".
  std::string family = "contaminated_normal";
  double epsilon = 0.2;
  double nu = 1.5;
  /// "d1", "d2", "d3", "ar1", "equicorrelation" or "identity".
  std::string v_kind = "d1";
  double rho = 0.0;
  /// Keep |m - k| <= band; negative means no truncation.
  long band = -1;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::PpPlot;
  ModelConfig model;
  ModelConfig kendall_model{"gaussian", 0.0, 1.0, "identity", 0.0, -1};
  /// "covariance", "kendall" or "constant".
  std::string kernel = "covariance";
  long n = 200;
  long p = 40;
  long replications = 1000;
  long bootstrap_b = 200;
  std::vector<double> alpha_grid;
  double alpha = 0.05;
  double beta = 1.0;
  std::uint64_t seed = 20240917;
  std::string output;
  std::vector<long> n_grid;
  std::vector<std::string> tests{"covariance", "kendall"};
  double tau_delta_c = 1.0;
  long z_draws = 5000;
  bool gaussian_reference = false;
  /// "raw" (signed, n^{-1/2}) or "applications" (absolute, 2/n).
  std::string scaling = "raw";
  /// "signed" or "abs".
  std::string sidedness = "signed";
  long workers = 1;
  long theta_support = 1;
  long plugin_reps = 5;
  long grid_points = 200;
  long gamma_dim_limit = 60;
};

ExperimentConfig default_config(Experiment e);

/// Starts from default_config(experiment) and overrides with the JSON
/// fields. `experiment` must match the JSON "experiment" key when present.
ExperimentConfig parse_config(const nlohmann::json& j, std::optional<Experiment> experiment);

nlohmann::json to_json(const ExperimentConfig& c);
nlohmann::json to_json(const ModelConfig& m);

/// Throws ConfigError on out-of-range values.
void validate(const ExperimentConfig& c);

/// Elliptical model with V built from the dependence spec at dimension p.
EllipticalModel build_model(const ModelConfig& m, long p);

Kernel build_kernel(const std::string& name, long p);

}  // namespace ustatboot::harness
