// Copyright (c) 2026 the dynbc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "dynbc/config.hpp"

namespace dynbc::cli {

struct CheckResult {
  std::string name;
  std::string status;  // "pass" | "fail" | "skipped"
  std::string reason;  // set when failed or skipped
  json evidence = json::object();
  double wall_ms = 0.0;
};

struct RunReport {
  json config_echo;
  std::vector<CheckResult> checks;
  bool all_pass = true;  // skipped checks never fail a run

  json to_json() const;
};

/// Executes the requested checks in dependency order (assembly first), writes
/// trace CSVs under out_dir, and returns the report. Independent checks run
/// concurrently, capped by DYNBC_THREADS.
RunReport run_checks(const ScenarioConfig& config, const json& config_echo,
                     const std::string& out_dir);

/// Coupling-scale sweep comparison of two configs of the same scenario family.
json compare_configs(const ScenarioConfig& a, const json& echo_a, const ScenarioConfig& b,
                     const json& echo_b);

unsigned worker_cap();

}  // namespace dynbc::cli
