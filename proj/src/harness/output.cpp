#include "ustatboot/harness/output.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#ifndef USTATBOOT_VERSION
#define USTATBOOT_VERSION "0.0.0"
#endif

namespace ustatboot::harness {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << table.header[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

void write_csv_file(const std::string& path, const CsvTable& table) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(f, table);
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

nlohmann::json build_meta(const ExperimentConfig& c, const nlohmann::json& summary,
                          double wall_seconds) {
  return {{"config", to_json(c)},
          {"seed", c.seed},
          {"csv_schema", kCsvSchemaVersion},
          {"versions",
           {{"ustatboot", USTATBOOT_VERSION},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                          std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"compiler", __VERSION__}}},
          {"wall_time_seconds", wall_seconds},
          {"summary", summary}};
}

std::string meta_path(const std::string& csv_path) { return csv_path + ".meta.json"; }

}  // namespace ustatboot::harness
