// Copyright 2026 The twolevel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "twolevel/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace twolevel::io {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::span<const double>>& columns) {
  if (header.size() != columns.size()) throw std::invalid_argument("CSV header and column count differ");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw std::invalid_argument("CSV columns differ in length");

  std::string text;
  for (std::size_t j = 0; j < header.size(); ++j) text += (j ? "," : "") + header[j];
  text += '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) text += ',';
      text += format_double(columns[j][i]);
    }
    text += '\n';
  }
  auto out = open_out(path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split(line);
  table.columns.resize(table.header.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != table.header.size())
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": wrong field count");
    for (std::size_t j = 0; j < fields.size(); ++j) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(fields[j], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != fields[j].size())
        throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": bad number '" + fields[j] + "'");
      table.columns[j].push_back(v);
    }
  }
  return table;
}

void write_envelope_csv(const std::filesystem::path& path, const TimeGrid& grid, std::span<const double> values) {
  const auto t = grid.nodes();
  write_csv(path, {"t", "V"}, {t, values});
}

void write_envelope_csv(const std::filesystem::path& path, const Envelope& env, const TimeGrid& grid) {
  const auto v = sample_values(env, grid);
  write_envelope_csv(path, grid, v);
}

Envelope read_envelope_csv(const std::filesystem::path& path) {
  CsvTable table = read_csv(path);
  if (table.header != std::vector<std::string>{"t", "V"})
    throw std::invalid_argument(path.string() + ": expected header t,V");
  const auto& t = table.columns[0];
  if (t.size() < 2) throw std::invalid_argument(path.string() + ": need at least two samples");
  TimeGrid grid(t.front(), t.back(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    if (std::abs(t[i] - grid.node(i)) > 1e-9 * std::max(1.0, std::abs(grid.length())))
      throw std::invalid_argument(path.string() + ": time column is not uniform");
  return Envelope::sampled(grid, std::move(table.columns[1]));
}

void write_trajectory_csv(const std::filesystem::path& path, const BlochTrajectory& traj) {
  const std::size_t n = traj.states.size();
  std::vector<double> r11(n), r22(n), re(n), im(n);
  for (std::size_t i = 0; i < n; ++i) {
    r11[i] = traj.states[i].rho11;
    r22[i] = traj.states[i].rho22;
    re[i] = traj.states[i].re12;
    im[i] = traj.states[i].im12;
  }
  const auto t = traj.grid.nodes();
  write_csv(path, {"t", "rho11", "rho22", "re12", "im12"}, {t, r11, r22, re, im});
}

void write_curve_csv(const std::filesystem::path& path, const TimeGrid& grid, std::span<const double> int_rho22) {
  const auto t = grid.nodes();
  write_csv(path, {"t", "int_rho22"}, {t, int_rho22});
}

void write_area_csv(const std::filesystem::path& path, const AreaProfile& area) {
  const auto t = area.grid.nodes();
  write_csv(path, {"t", "theta"}, {t, area.theta});
}

void write_wavefunctions_csv(const std::filesystem::path& path, const MorseStates& states) {
  if (states.psi.size() < 2) throw std::invalid_argument("need two wavefunctions");
  write_csv(path, {"r", "psi0", "psi1"}, {states.r, states.psi[0], states.psi[1]});
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::ordered_json provenance(std::string_view config_text) {
  nlohmann::ordered_json p;
  p["config_hash"] = "fnv1a64:" + hex64(fnv1a64(config_text));
  p["version"] = TWOLEVEL_VERSION;
  return p;
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

nlohmann::ordered_json report_json(const OptimizationReport& report) {
  nlohmann::ordered_json j;
  j["final_fitness"] = report.final_fitness;
  j["converged"] = report.converged;
  j["iterations"] = report.iterations;
  j["stop_reason"] = report.stop_reason;
  j["energy_multiplier"] = report.energy_multiplier;
  j["fitness_history"] = report.fitness_history;
  j["grad_norm_history"] = report.grad_norm_history;
  return j;
}

nlohmann::ordered_json audit_json(const AuditTable& table) {
  nlohmann::ordered_json j;
  j["baseline"] = table.baseline;
  j["worst_improvement"] = table.worst_improvement;
  j["passed"] = table.passed;
  j["signed_winner"] = table.signed_winner;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : table.rows)
    rows.push_back({{"trial", r.trial}, {"fitness", r.fitness}, {"delta", r.delta}, {"signed", r.signed_envelope}});
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace twolevel::io
