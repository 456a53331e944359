#pragma once

// CSV tables, 2D field dumps and run metadata.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "cadweno/problems.hpp"

namespace cadweno {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Header plus rows of numbers, written with 17 significant digits.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

void write_csv(const CsvTable& table, const std::filesystem::path& path);
CsvTable read_csv(const std::filesystem::path& path);

/// Columns x, conserved components, primitive components (Euler only), and
/// reference / error when a reference is given.
CsvTable solution_table(const ProblemSpec& p, const ConservedGrid& grid, const std::vector<double>& reference);

/// One file per component: "# nx ny xmin xmax ymin ymax time" then ny rows of nx values.
void write_field_dump(const ConservedGrid& grid, int component, double time, const std::filesystem::path& path);

struct FieldDump {
  int nx = 0;
  int ny = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  double time = 0.0;
  std::vector<double> values;  // row-major, row j = 0 first
};
FieldDump read_field_dump(const std::filesystem::path& path);

struct RunMetadata {
  std::string problem;
  std::string scheme;
  int nx = 0;
  int ny = 0;
  double t_final = 0.0;
  Diagnostics diagnostics;
  double l1 = -1.0;    // negative when no reference
  double linf = -1.0;
};

void write_run_metadata(const RunMetadata& m, const std::filesystem::path& path);

}  // namespace cadweno
