#include "ustatboot/harness/config.hpp"

#include "ustatboot/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ustatboot::harness {

namespace {

using nlohmann::json;

struct NamedExperiment {
  Experiment e;
  const char* name;
};

constexpr NamedExperiment kExperiments[] = {
    {Experiment::PpPlot, "pp_plot"},
    {Experiment::NaiveVsHajek, "naive_vs_hajek"},
    {Experiment::Coverage, "coverage"},
    {Experiment::ThresholdEval, "threshold_eval"},
    {Experiment::TestSize, "test_size"},
    {Experiment::ClimeEval, "clime_eval"},
    {Experiment::LinfunEval, "linfun_eval"},
    {Experiment::MaximalIneqScaling, "maximal_ineq_scaling"},
};

std::vector<double> level_grid(double from, double to, double step) {
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((to - from) / step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) {
    out.push_back(std::round((from + static_cast<double>(i) * step) * 1e6) / 1e6);
  }
  return out;
}

template <class T>
T get_as(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: field '" + key + "' has the wrong type");
  }
}

void require_choice(const std::string& value, std::initializer_list<const char*> choices,
                    const std::string& key) {
  for (const char* c : choices) {
    if (value == c) return;
  }
  throw ConfigError("config: field '" + key + "' has unsupported value '" + value + "'");
}

ModelConfig parse_model(const json& j, ModelConfig m, const std::string& where) {
  if (!j.is_object()) throw ConfigError("config: '" + where + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    const std::string path = where + "." + key;
    if (key == "family") {
      m.family = get_as<std::string>(value, path);
    } else if (key == "epsilon") {
      m.epsilon = get_as<double>(value, path);
    } else if (key == "nu") {
      m.nu = get_as<double>(value, path);
    } else if (key == "v_kind") {
      m.v_kind = get_as<std::string>(value, path);
    } else if (key == "rho") {
      m.rho = get_as<double>(value, path);
    } else if (key == "band") {
      m.band = get_as<long>(value, path);
    } else {
      throw ConfigError("config: unknown key '" + path + "'");
    }
  }
  return m;
}

}  // namespace

std::string experiment_name(Experiment e) {
  for (const auto& ne : kExperiments) {
    if (ne.e == e) return ne.name;
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (const auto& ne : kExperiments) {
    if (name == ne.name) return ne.e;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

const std::vector<Experiment>& all_experiments() {
  static const std::vector<Experiment> all = [] {
    std::vector<Experiment> v;
    for (const auto& ne : kExperiments) v.push_back(ne.e);
    return v;
  }();
  return all;
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  c.alpha_grid = level_grid(0.05, 0.95, 0.05);
  switch (e) {
    case Experiment::PpPlot:
      c.alpha_grid = level_grid(0.01, 0.99, 0.01);
      break;
    case Experiment::NaiveVsHajek:
      c.model = {"elliptic_t", 0.0, 8.0, "d1", 0.0, -1};
      break;
    case Experiment::Coverage:
      c.n = 500;
      c.scaling = "applications";
      c.sidedness = "abs";
      break;
    case Experiment::ThresholdEval:
      c.model = {"contaminated_normal", 0.2, 1.5, "ar1", 0.3, 2};
      c.replications = 500;
      c.scaling = "applications";
      c.sidedness = "abs";
      break;
    case Experiment::TestSize:
      c.alpha_grid = {0.01, 0.05, 0.1};
      c.scaling = "applications";
      c.sidedness = "abs";
      break;
    case Experiment::ClimeEval:
      c.model = {"contaminated_normal", 0.2, 1.5, "ar1", 0.5, -1};
      c.p = 20;
      c.replications = 100;
      c.scaling = "applications";
      c.sidedness = "abs";
      break;
    case Experiment::LinfunEval:
      c.model = {"contaminated_normal", 0.2, 1.5, "d2", 0.0, -1};
      c.p = 20;
      c.replications = 100;
      c.scaling = "applications";
      c.sidedness = "abs";
      break;
    case Experiment::MaximalIneqScaling:
      c.model = {"contaminated_normal", 0.2, 1.5, "d3", 0.0, -1};
      c.p = 10;
      c.replications = 200;
      c.n_grid = {50, 100, 200, 400, 800};
      c.sidedness = "abs";
      break;
  }
  return c;
}

ExperimentConfig parse_config(const json& j, std::optional<Experiment> experiment) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  if (j.contains("experiment")) {
    const Experiment named = parse_experiment(get_as<std::string>(j.at("experiment"), "experiment"));
    if (experiment && *experiment != named) {
      throw ConfigError("config: experiment '" + experiment_name(named) +
                        "' does not match the requested '" + experiment_name(*experiment) + "'");
    }
    experiment = named;
  }
  if (!experiment) throw ConfigError("config: no experiment given");
  ExperimentConfig c = default_config(*experiment);

  for (const auto& [key, value] : j.items()) {
    if (key == "experiment") {
      continue;
    } else if (key == "model") {
      c.model = parse_model(value, c.model, key);
    } else if (key == "kendall_model") {
      c.kendall_model = parse_model(value, c.kendall_model, key);
    } else if (key == "kernel") {
      c.kernel = get_as<std::string>(value, key);
    } else if (key == "n") {
      c.n = get_as<long>(value, key);
    } else if (key == "p") {
      c.p = get_as<long>(value, key);
    } else if (key == "replications") {
      c.replications = get_as<long>(value, key);
    } else if (key == "bootstrap_b") {
      c.bootstrap_b = get_as<long>(value, key);
    } else if (key == "alpha_grid") {
      c.alpha_grid = get_as<std::vector<double>>(value, key);
    } else if (key == "alpha") {
      c.alpha = get_as<double>(value, key);
    } else if (key == "beta") {
      c.beta = get_as<double>(value, key);
    } else if (key == "seed") {
      c.seed = get_as<std::uint64_t>(value, key);
    } else if (key == "output") {
      c.output = get_as<std::string>(value, key);
    } else if (key == "n_grid") {
      c.n_grid = get_as<std::vector<long>>(value, key);
    } else if (key == "tests") {
      c.tests = get_as<std::vector<std::string>>(value, key);
    } else if (key == "tau_delta_c") {
      c.tau_delta_c = get_as<double>(value, key);
    } else if (key == "z_draws") {
      c.z_draws = get_as<long>(value, key);
    } else if (key == "gaussian_reference") {
      c.gaussian_reference = get_as<bool>(value, key);
    } else if (key == "scaling") {
      c.scaling = get_as<std::string>(value, key);
    } else if (key == "sidedness") {
      c.sidedness = get_as<std::string>(value, key);
    } else if (key == "workers") {
      c.workers = get_as<long>(value, key);
    } else if (key == "theta_support") {
      c.theta_support = get_as<long>(value, key);
    } else if (key == "plugin_reps") {
      c.plugin_reps = get_as<long>(value, key);
    } else if (key == "grid_points") {
      c.grid_points = get_as<long>(value, key);
    } else if (key == "gamma_dim_limit") {
      c.gamma_dim_limit = get_as<long>(value, key);
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  validate(c);
  return c;
}

nlohmann::json to_json(const ModelConfig& m) {
  return {{"family", m.family}, {"epsilon", m.epsilon}, {"nu", m.nu},
          {"v_kind", m.v_kind}, {"rho", m.rho},         {"band", m.band}};
}

nlohmann::json to_json(const ExperimentConfig& c) {
  return {
      {"experiment", experiment_name(c.experiment)},
      {"model", to_json(c.model)},
      {"kendall_model", to_json(c.kendall_model)},
      {"kernel", c.kernel},
      {"n", c.n},
      {"p", c.p},
      {"replications", c.replications},
      {"bootstrap_b", c.bootstrap_b},
      {"alpha_grid", c.alpha_grid},
      {"alpha", c.alpha},
      {"beta", c.beta},
      {"seed", c.seed},
      {"output", c.output},
      {"n_grid", c.n_grid},
      {"tests", c.tests},
      {"tau_delta_c", c.tau_delta_c},
      {"z_draws", c.z_draws},
      {"gaussian_reference", c.gaussian_reference},
      {"scaling", c.scaling},
      {"sidedness", c.sidedness},
      {"workers", c.workers},
      {"theta_support", c.theta_support},
      {"plugin_reps", c.plugin_reps},
      {"grid_points", c.grid_points},
      {"gamma_dim_limit", c.gamma_dim_limit},
  };
}

void validate(const ExperimentConfig& c) {
  auto positive = [](long v, const char* key) {
    if (v < 1) throw ConfigError(std::string("config: '") + key + "' must be >= 1");
  };
  positive(c.p, "p");
  positive(c.replications, "replications");
  positive(c.bootstrap_b, "bootstrap_b");
  positive(c.z_draws, "z_draws");
  positive(c.workers, "workers");
  positive(c.theta_support, "theta_support");
  positive(c.grid_points, "grid_points");
  positive(c.gamma_dim_limit, "gamma_dim_limit");
  if (c.plugin_reps < 0) throw ConfigError("config: 'plugin_reps' must be >= 0");
  if (c.n < 2) throw ConfigError("config: 'n' must be >= 2");
  if (c.alpha_grid.empty()) throw ConfigError("config: 'alpha_grid' must not be empty");
  for (double a : c.alpha_grid) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("config: 'alpha_grid' entries must lie in (0, 1)");
  }
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("config: 'alpha' must lie in (0, 1)");
  if (!(c.beta > 0.0 && c.beta <= 1.0)) throw ConfigError("config: 'beta' must lie in (0, 1]");
  if (!(c.tau_delta_c >= 0.0)) throw ConfigError("config: 'tau_delta_c' must be >= 0");
  for (long n : c.n_grid) {
    if (n < 2) throw ConfigError("config: 'n_grid' entries must be >= 2");
  }
  if (c.experiment == Experiment::MaximalIneqScaling && c.n_grid.size() < 2) {
    throw ConfigError("config: 'n_grid' needs at least two sizes");
  }
  if (c.theta_support > c.p) throw ConfigError("config: 'theta_support' exceeds p");
  require_choice(c.kernel, {"covariance", "kendall", "constant"}, "kernel");
  require_choice(c.scaling, {"raw", "applications"}, "scaling");
  require_choice(c.sidedness, {"signed", "abs"}, "sidedness");
  for (const auto& t : c.tests) require_choice(t, {"covariance", "kendall"}, "tests");
  if (c.experiment == Experiment::TestSize && c.tests.empty()) {
    throw ConfigError("config: 'tests' must not be empty");
  }
  (void)build_model(c.model, c.p);
  if (c.experiment == Experiment::TestSize) (void)build_model(c.kendall_model, c.p);
}

EllipticalModel build_model(const ModelConfig& m, long p) {
  require_choice(m.family, {"contaminated_normal", "elliptic_t", "gaussian"}, "model.family");
  require_choice(m.v_kind, {"d1", "d2", "d3", "ar1", "equicorrelation", "identity"},
                 "model.v_kind");
  const auto dim = static_cast<Index>(p);
  SymMatrix v;
  try {
    if (m.v_kind == "d1") {
      v = build_v(DependenceSpec::d1(dim));
    } else if (m.v_kind == "d2") {
      v = build_v(DependenceSpec::d2(dim));
    } else if (m.v_kind == "d3") {
      v = build_v(DependenceSpec::d3(dim));
    } else if (m.v_kind == "ar1") {
      v = build_v(DependenceSpec::ar1(dim, m.rho));
    } else if (m.v_kind == "equicorrelation") {
      v = build_v(DependenceSpec::equicorrelation(dim, m.rho));
    } else {
      v = SymMatrix::identity(dim);
    }
    if (m.band >= 0) v = band_truncate(v, static_cast<Index>(m.band));
    EllipticalModel model;
    if (m.family == "gaussian") {
      model = model_gaussian(std::move(v));
    } else if (m.family == "elliptic_t") {
      model = model_m2(std::move(v), m.nu);
    } else {
      model = EllipticalModel{Family::ContaminatedNormal, m.epsilon, m.nu, std::move(v)};
    }
    model.validate();
    return model;
  } catch (const ustatboot::Error& e) {
    throw ConfigError(std::string("config: invalid model: ") + e.what());
  }
}

Kernel build_kernel(const std::string& name, long p) {
  const auto dim = static_cast<Index>(p);
  if (name == "covariance") return Kernel::covariance(dim);
  if (name == "kendall") return Kernel::kendall_tau(dim);
  if (name == "constant") return Kernel::constant(dim, 1.0);
  throw ConfigError("config: unsupported kernel '" + name + "'");
}

}  // namespace ustatboot::harness
