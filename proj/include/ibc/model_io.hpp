// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ibc/sector_sim.hpp"

namespace ibc {

inline constexpr const char* kSchemaVersion = "1";

/// Explicit form {hbar, sectors, walls, couplings, initial} or builtin form
/// {builtin, params, initial}. Unknown fields are rejected.
ModelSpec model_from_json(const json& j);
json model_to_json(const ModelSpec& model);

PointSourceParams point_source_params_from_json(const json& j);
LienertNickelParams lienert_nickel_params_from_json(const json& j);

/// {step, t, sectors: [{name, geometry, coordinates, psi}]}
json state_to_json(const ModelSpec& model, const State& s, int step);
State state_from_json(const ModelSpec& model, const json& j);

std::vector<std::string> series_header(const ModelSpec& model);
std::vector<double> series_values(const AuditRow& row);
/// Comma-separated, %.17g.
std::string format_series_row(const std::vector<double>& values);

struct SeriesTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

void write_series_csv(const std::filesystem::path& path, const ModelSpec& model, const AuditReport& report);
SeriesTable read_series_csv(const std::filesystem::path& path);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace ibc
