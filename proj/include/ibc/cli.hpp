// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "ibc/matrix.hpp"

namespace ibc::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFail = 2;

/// Bad command-line arguments; maps to kExitUsage.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Outcome {
  int exit_code = kExitPass;
  json report;
};

/// Top-level file {kind, payload, schema_version}.
struct SpecFile {
  std::string kind;
  json payload;
  std::string schema_version;
};
SpecFile spec_file_from_json(const json& j);
SpecFile read_spec_file(const std::filesystem::path& path);

struct Options {
  std::optional<double> tol;
  std::uint64_t seed = 0;
};

Outcome cmd_check(const std::filesystem::path& path, const Options& opt);
/// from, to in {"t", "l", "c"}.
Outcome cmd_convert(const std::string& from, const std::string& to, const std::filesystem::path& path,
                    const Options& opt);
/// bc is a spec path or "mit".
Outcome cmd_reflect(const std::array<double, 3>& k, double m, const std::string& bc, double hbar,
                    const Options& opt);

struct SimulateArgs {
  std::filesystem::path model;
  std::optional<double> dt;
  int steps = 100;
  std::string method = "cn";
  std::filesystem::path out;
  /// 0 writes snapshots at the first and last step only.
  int snapshot_every = 0;
};
Outcome cmd_simulate(const SimulateArgs& args, const Options& opt);
Outcome cmd_audit(const std::filesystem::path& dir, const Options& opt);

/// Indented key: value lines derived from a report.
std::string render_text(const json& report);

/// Parses argv, dispatches, prints the report and returns the exit code.
int main(int argc, char** argv);

}  // namespace ibc::cli
