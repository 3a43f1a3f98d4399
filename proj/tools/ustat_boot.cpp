// ustat-boot: command-line driver for the Monte Carlo experiments.

#include "ustatboot/error.hpp"
#include "ustatboot/harness/config.hpp"
#include "ustatboot/harness/experiments.hpp"
#include "ustatboot/harness/output.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

using namespace ustatboot::harness;

nlohmann::json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Gaussian wild bootstrap experiments for matrix U-statistics"};
  std::string experiment;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::optional<long> workers;
  std::string dump;
  app.add_option("experiment", experiment, "Experiment name");
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--out", out_path, "Output CSV path; stdout when omitted");
  app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--dump-defaults", dump, "Print the default config of an experiment");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (!dump.empty()) {
    std::cout << to_json(default_config(parse_experiment(dump))).dump(2) << '\n';
    return 0;
  }
  if (experiment.empty()) throw ConfigError("no experiment given; see --help");

  const Experiment which = parse_experiment(experiment);
  ExperimentConfig config = config_path.empty()
                                ? default_config(which)
                                : parse_config(read_json(config_path), which);
  if (seed) config.seed = *seed;
  if (workers) config.workers = *workers;
  if (!out_path.empty()) config.output = out_path;
  validate(config);

  const auto start = std::chrono::steady_clock::now();
  const ExperimentOutput result = run_experiment(config);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const nlohmann::json meta = build_meta(config, result.summary, wall);
  if (config.output.empty()) {
    write_csv(std::cout, result.table);
  } else {
    write_csv_file(config.output, result.table);
    std::ofstream m(meta_path(config.output));
    m << meta.dump(2) << '\n';
  }
  std::cerr << result.summary.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "ustat-boot: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ustatboot::Error& e) {
    std::cerr << "ustat-boot: numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "ustat-boot: " << e.what() << '\n';
    return 1;
  }
}
