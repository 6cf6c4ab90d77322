// Copyright (c) 2026 the dynbc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "dynbc/discretize.hpp"

namespace dynbc::cli {

using nlohmann::json;

enum class Scenario { interval_plate, network_wave, strongly_damped_interval, custom };

enum class Check {
  spectrum,
  similarity,
  evolve,
  boundedness,
  analyticity,
  wentzell,
  dyson_phillips,
  stability_certificate,
  cosine,
};

const char* to_string(Scenario s);
const char* to_string(Check c);

struct RunSettings {
  double T = 10.0;
  std::size_t steps = 200;
  std::size_t k_max = 12;
  double T_max = 1e3;          // boundedness horizon
  double growth_T_max = 100.0; // envelope certification horizon
  // tolerances, overridable from the config
  double tol_similarity = 1e-7;
  double tol_u_inverse = 1e-9;
  double tol_boundedness_slope = 1e-3;
  double bound_sup = 1e6;
  double analyticity_threshold = 1e3;
  double tol_wentzell = 1e-4;
  double tol_dyson = 1e-3;
  double tol_cosine_scale = 1e-8;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::interval_plate;
  json parameters;  // scenario-specific, validated at build time
  std::optional<Complex> lambda;
  std::vector<Check> checks;
  RunSettings run;

  /// Builds the DiscreteProblem this config describes.
  DiscreteProblem build() const;
};

/// Parses and validates a config document. Throws ConfigInvalid with a
/// human-readable reason.
ScenarioConfig parse_config(const json& doc);
ScenarioConfig load_config(const std::string& path);

/// The JSON schema for config files (draft-07).
std::string config_schema();

Complex parse_complex(const json& v, const std::string& where);
CMat parse_cmat(const json& v, const std::string& where);
json complex_to_json(Complex z);

}  // namespace dynbc::cli
