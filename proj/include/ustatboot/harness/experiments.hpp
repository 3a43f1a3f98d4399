#pragma once

// Monte Carlo experiment runners. Every runner is a pure function of its
// configuration: replication r draws from substream r of the config seed.

#include "ustatboot/harness/config.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace ustatboot::harness {

inline constexpr int kCsvSchemaVersion = 1;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Column index by name; throws std::out_of_range.
  std::size_t column(const std::string& name) const;
  std::vector<double> values(const std::string& name) const;
};

struct ExperimentOutput {
  CsvTable table;
  nlohmann::json summary;
};

ExperimentOutput run_pp_plot(const ExperimentConfig& c);
ExperimentOutput run_naive_vs_hajek(const ExperimentConfig& c);
ExperimentOutput run_coverage(const ExperimentConfig& c);
ExperimentOutput run_threshold_eval(const ExperimentConfig& c);
ExperimentOutput run_test_size(const ExperimentConfig& c);
ExperimentOutput run_clime_eval(const ExperimentConfig& c);
ExperimentOutput run_linfun_eval(const ExperimentConfig& c);
ExperimentOutput run_maximal_ineq_scaling(const ExperimentConfig& c);

/// Dispatches on c.experiment.
ExperimentOutput run_experiment(const ExperimentConfig& c);

/// Ordinary least-squares slope of log(y) on log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Fraction of sorted values <= t.
double empirical_cdf(const std::vector<double>& sorted, double t);

}  // namespace ustatboot::harness
