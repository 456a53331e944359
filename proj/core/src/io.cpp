#include "cadweno/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace cadweno {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  return out;
}

double parse_number(const std::string& token, const std::filesystem::path& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw IoError("bad number '" + token + "' in " + path.string());
  }
}

}  // namespace

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  for (std::size_t k = 0; k < table.header.size(); ++k) out << (k ? "," : "") << table.header[k];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + " is empty");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_number(cell, path));
    if (row.size() != table.header.size()) throw IoError("ragged row in " + path.string());
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable solution_table(const ProblemSpec& p, const ConservedGrid& grid, const std::vector<double>& reference) {
  if (grid.dimension() != 1) throw std::invalid_argument("solution tables are for 1D grids");
  if (!reference.empty() && reference.size() != static_cast<std::size_t>(grid.nx())) {
    throw DimensionError("reference length does not match the grid");
  }
  CsvTable t;
  t.header.emplace_back("x");
  if (p.model == ModelKind::kAdvection) {
    t.header.emplace_back("u");
  } else {
    for (const char* h : {"rho", "rho_u", "E", "density", "velocity", "pressure"}) t.header.emplace_back(h);
  }
  if (!reference.empty()) {
    t.header.emplace_back("reference");
    t.header.emplace_back("error");
  }
  for (int i = 0; i < grid.nx(); ++i) {
    std::vector<double> row{grid.x(i)};
    for (int c = 0; c < grid.ncomp(); ++c) row.push_back(grid.at(c, i));
    if (p.model == ModelKind::kEuler) {
      const auto w = cons_to_prim(std::array<double, 3>{grid.at(0, i), grid.at(1, i), grid.at(2, i)}, p.eos, i);
      row.insert(row.end(), w.begin(), w.end());
    }
    if (!reference.empty()) {
      row.push_back(reference[i]);
      row.push_back(std::abs(grid.at(0, i) - reference[i]));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_field_dump(const ConservedGrid& grid, int component, double time, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << "# " << grid.nx() << ' ' << grid.ny() << ' ' << grid.x_min() << ' ' << grid.x_max() << ' '
      << grid.y_min() << ' ' << grid.y_max() << ' ' << time << '\n';
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) out << (i ? " " : "") << grid.at(component, i, j);
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

FieldDump read_field_dump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  FieldDump d;
  char hash = 0;
  if (!(in >> hash >> d.nx >> d.ny >> d.x_min >> d.x_max >> d.y_min >> d.y_max >> d.time) || hash != '#') {
    throw IoError("bad field dump header in " + path.string());
  }
  d.values.resize(static_cast<std::size_t>(d.nx) * d.ny);
  for (double& v : d.values) {
    if (!(in >> v)) throw IoError("truncated field dump " + path.string());
  }
  return d;
}

void write_run_metadata(const RunMetadata& m, const std::filesystem::path& path) {
  nlohmann::json j;
  j["problem"] = m.problem;
  j["scheme"] = m.scheme;
  j["nx"] = m.nx;
  j["ny"] = m.ny;
  j["t_final"] = m.t_final;
  j["steps"] = m.diagnostics.steps;
  j["wall_seconds"] = m.diagnostics.wall_seconds;
  j["min_density"] = m.diagnostics.min_density;
  j["min_pressure"] = m.diagnostics.min_pressure;
  if (m.l1 >= 0.0) {
    j["l1_error"] = m.l1;
    j["linf_error"] = m.linf;
  }
  std::ofstream out = open_for_write(path);
  out << j.dump(2) << '\n';
}

}  // namespace cadweno
