#pragma once

#include "ustatboot/harness/config.hpp"
#include "ustatboot/harness/experiments.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace ustatboot::harness {

/// Header row, then one line per row; numbers at 17 significant digits.
void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);

std::string format_number(double v);

nlohmann::json build_meta(const ExperimentConfig& c, const nlohmann::json& summary,
                          double wall_seconds);

/// Sidecar path for a CSV: "<path>.meta.json".
std::string meta_path(const std::string& csv_path);

}  // namespace ustatboot::harness
