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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "twolevel/model.hpp"
#include "twolevel/morse.hpp"
#include "twolevel/optimizer.hpp"
#include "twolevel/pulses.hpp"

namespace twolevel::io {

/// Round-trip decimal form ("%.17g"), so CSV files are byte-stable.
std::string format_double(double x);

/// Columns of equal length under a header row.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::span<const double>>& columns);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

/// Throws std::invalid_argument on malformed input.
CsvTable read_csv(const std::filesystem::path& path);

void write_envelope_csv(const std::filesystem::path& path, const TimeGrid& grid, std::span<const double> values);
void write_envelope_csv(const std::filesystem::path& path, const Envelope& env, const TimeGrid& grid);

/// Reads a `t,V` file on a uniform grid as a sampled envelope.
Envelope read_envelope_csv(const std::filesystem::path& path);

void write_trajectory_csv(const std::filesystem::path& path, const BlochTrajectory& traj);
void write_curve_csv(const std::filesystem::path& path, const TimeGrid& grid, std::span<const double> int_rho22);
void write_area_csv(const std::filesystem::path& path, const AreaProfile& area);
void write_wavefunctions_csv(const std::filesystem::path& path, const MorseStates& states);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t h);

/// {"config_hash": ..., "version": ...}
nlohmann::ordered_json provenance(std::string_view config_text);

/// Pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

nlohmann::ordered_json report_json(const OptimizationReport& report);
nlohmann::ordered_json audit_json(const AuditTable& table);

}  // namespace twolevel::io
