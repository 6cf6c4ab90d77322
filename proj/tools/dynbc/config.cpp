// Copyright (c) 2026 the dynbc authors
// SPDX-License-Identifier: Apache-2.0

#include "dynbc/config.hpp"

#include <array>
#include <fstream>
#include <sstream>

namespace dynbc::cli {

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::interval_plate: return "interval_plate";
    case Scenario::network_wave: return "network_wave";
    case Scenario::strongly_damped_interval: return "strongly_damped_interval";
    case Scenario::custom: return "custom";
  }
  return "?";
}

const char* to_string(Check c) {
  switch (c) {
    case Check::spectrum: return "spectrum";
    case Check::similarity: return "similarity";
    case Check::evolve: return "evolve";
    case Check::boundedness: return "boundedness";
    case Check::analyticity: return "analyticity";
    case Check::wentzell: return "wentzell";
    case Check::dyson_phillips: return "dyson_phillips";
    case Check::stability_certificate: return "stability_certificate";
    case Check::cosine: return "cosine";
  }
  return "?";
}

Complex parse_complex(const json& v, const std::string& where) {
  if (v.is_number()) return Complex(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return Complex(v[0].get<double>(), v[1].get<double>());
  }
  throw ConfigInvalid(where + ": expected a number or [re, im]");
}

CMat parse_cmat(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ConfigInvalid(where + ": expected a matrix (array of rows)");
  const std::size_t rows = v.size();
  const std::size_t cols = v[0].is_array() && (v[0].empty() || v[0][0].is_array() || v[0][0].is_number())
                               ? v[0].size()
                               : 0;
  CMat M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols) {
      throw ConfigInvalid(where + ": ragged matrix rows");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parse_complex(v[i][j], where);
    }
  }
  return M;
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

namespace {

Scenario parse_scenario(const std::string& s) {
  if (s == "interval_plate") return Scenario::interval_plate;
  if (s == "network_wave") return Scenario::network_wave;
  if (s == "strongly_damped_interval") return Scenario::strongly_damped_interval;
  if (s == "custom") return Scenario::custom;
  throw ConfigInvalid("unknown scenario '" + s + "'");
}

Check parse_check(const std::string& s) {
  static const std::array<Check, 9> all = {
      Check::spectrum,       Check::similarity,  Check::evolve,
      Check::boundedness,    Check::analyticity, Check::wentzell,
      Check::dyson_phillips, Check::stability_certificate, Check::cosine};
  for (Check c : all) {
    if (s == to_string(c)) return c;
  }
  throw ConfigInvalid("unknown check '" + s + "'");
}

CaseTag parse_case_tag(const std::string& s) {
  if (s == "unbounded_trace") return CaseTag::unbounded_trace;
  if (s == "bounded_trace") return CaseTag::bounded_trace;
  if (s == "strong_damping_unbounded") return CaseTag::strong_damping_unbounded;
  if (s == "strong_damping_bounded") return CaseTag::strong_damping_bounded;
  throw ConfigInvalid("unknown case_tag '" + s + "'");
}

Eigen::Index require_n(const json& params) {
  if (!params.contains("n") || !params["n"].is_number_integer()) {
    throw ConfigInvalid("parameters.n: required integer");
  }
  const auto n = params["n"].get<Eigen::Index>();
  if (n < 4 || n > 2048) throw ConfigInvalid("parameters.n: must lie in [4, 2048]");
  return n;
}

}  // namespace

DiscreteProblem ScenarioConfig::build() const {
  try {
    switch (scenario) {
      case Scenario::interval_plate: {
        const Eigen::Index n = require_n(parameters);
        if (n < 8) throw ConfigInvalid("interval_plate: n must be >= 8");
        return build_interval_plate(n);
      }
      case Scenario::strongly_damped_interval: {
        const Eigen::Index n = require_n(parameters);
        const Complex alpha = parameters.contains("alpha")
                                  ? parse_complex(parameters["alpha"], "parameters.alpha")
                                  : Complex(1.0, 0.0);
        std::array<Complex, 4> beta{};
        if (parameters.contains("beta")) {
          const auto& b = parameters["beta"];
          if (!b.is_array() || b.size() != 4) {
            throw ConfigInvalid("parameters.beta: expected 4 complex entries");
          }
          for (int i = 0; i < 4; ++i) beta[i] = parse_complex(b[i], "parameters.beta");
        }
        return build_strongly_damped_interval(alpha, beta, n);
      }
      case Scenario::network_wave: {
        if (!parameters.contains("edges") || !parameters["edges"].is_array()) {
          throw ConfigInvalid("network_wave: parameters.edges required");
        }
        if (!parameters.contains("n_vertices")) {
          throw ConfigInvalid("network_wave: parameters.n_vertices required");
        }
        const Eigen::Index V = parameters["n_vertices"].get<Eigen::Index>();
        std::vector<std::pair<Eigen::Index, Eigen::Index>> edges;
        for (const auto& e : parameters["edges"]) {
          if (!e.is_array() || e.size() != 2) throw ConfigInvalid("network_wave: edge must be [a, b]");
          edges.emplace_back(e[0].get<Eigen::Index>(), e[1].get<Eigen::Index>());
        }
        std::vector<Grid1D> grids;
        if (parameters.contains("edge_points")) {
          for (const auto& np : parameters["edge_points"]) grids.emplace_back(np.get<Eigen::Index>());
        } else {
          const Eigen::Index n = require_n(parameters);
          grids.assign(edges.size(), Grid1D(n));
        }
        NetworkGraph graph(V, std::move(edges), std::move(grids));
        const Eigen::Index E = graph.n_edges;
        auto get_vv = [&](const char* key, const CMat& fallback) {
          return parameters.contains(key) ? parse_cmat(parameters[key], key) : fallback;
        };
        const CMat M = get_vv("M", CMat::Zero(V, V));
        const CMat N = get_vv("N", CMat::Zero(V, V));
        const CMat P = get_vv("P", CMat::Zero(V, V));
        const CMat Phi = parameters.contains("Phi") ? parse_cmat(parameters["Phi"], "Phi")
                                                    : CMat::Ones(V, E);
        return build_network_wave(graph, M, N, P, Phi);
      }
      case Scenario::custom: {
        DiscreteProblem p;
        for (const char* key : {"A", "C", "L", "B1", "B2", "B3", "B4"}) {
          if (!parameters.contains(key)) {
            throw ConfigInvalid(std::string("custom: parameters.") + key + " required");
          }
        }
        p.A = parse_cmat(parameters["A"], "A");
        p.C = parse_cmat(parameters["C"], "C");
        p.L = parse_cmat(parameters["L"], "L");
        p.B1 = parse_cmat(parameters["B1"], "B1");
        p.B2 = parse_cmat(parameters["B2"], "B2");
        p.B3 = parse_cmat(parameters["B3"], "B3");
        p.B4 = parse_cmat(parameters["B4"], "B4");
        p.case_tag = parse_case_tag(parameters.value("case_tag", "bounded_trace"));
        return build_custom(std::move(p));
      }
    }
  } catch (const ConfigInvalid&) {
    throw;
  } catch (const Error& e) {
    throw ConfigInvalid(std::string("scenario build failed: ") + e.what());
  }
  throw ConfigInvalid("unreachable scenario");
}

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigInvalid("config: expected a JSON object");
  if (doc.value("version", 0) != 1) throw ConfigInvalid("config: unsupported or missing version (expected 1)");
  if (!doc.contains("scenario") || !doc["scenario"].is_string()) {
    throw ConfigInvalid("config: scenario (string) required");
  }
  ScenarioConfig c;
  c.scenario = parse_scenario(doc["scenario"].get<std::string>());
  c.parameters = doc.value("parameters", json::object());
  if (doc.contains("lambda")) c.lambda = parse_complex(doc["lambda"], "lambda");
  if (doc.contains("checks")) {
    if (!doc["checks"].is_array()) throw ConfigInvalid("config: checks must be an array");
    for (const auto& s : doc["checks"]) c.checks.push_back(parse_check(s.get<std::string>()));
  } else {
    c.checks = {Check::spectrum};
  }
  if (doc.contains("run")) {
    const auto& r = doc["run"];
    c.run.T = r.value("T", c.run.T);
    c.run.steps = r.value("steps", c.run.steps);
    c.run.k_max = r.value("k_max", c.run.k_max);
    c.run.T_max = r.value("T_max", c.run.T_max);
    c.run.growth_T_max = r.value("growth_T_max", c.run.growth_T_max);
    if (r.contains("tolerances")) {
      const auto& t = r["tolerances"];
      c.run.tol_similarity = t.value("similarity", c.run.tol_similarity);
      c.run.tol_u_inverse = t.value("u_inverse", c.run.tol_u_inverse);
      c.run.tol_boundedness_slope = t.value("boundedness_slope", c.run.tol_boundedness_slope);
      c.run.bound_sup = t.value("bound_sup", c.run.bound_sup);
      c.run.analyticity_threshold = t.value("analyticity_threshold", c.run.analyticity_threshold);
      c.run.tol_wentzell = t.value("wentzell", c.run.tol_wentzell);
      c.run.tol_dyson = t.value("dyson", c.run.tol_dyson);
      c.run.tol_cosine_scale = t.value("cosine_scale", c.run.tol_cosine_scale);
    }
  }
  if (!(c.run.T > 0.0) || c.run.steps < 1) throw ConfigInvalid("run: need T > 0, steps >= 1");
  // scenario parameters are validated when the problem is built
  c.build();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open config file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

std::string config_schema() {
  static const char* schema = R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "dynbc scenario configuration",
  "type": "object",
  "required": ["version", "scenario"],
  "properties": {
    "version": {"const": 1},
    "scenario": {"enum": ["interval_plate", "network_wave", "strongly_damped_interval", "custom"]},
    "parameters": {
      "type": "object",
      "description": "Scenario coefficients. Complex scalars are [re, im]; matrices are arrays of rows of [re, im].",
      "properties": {
        "n": {"type": "integer", "minimum": 4, "maximum": 2048},
        "alpha": {"$ref": "#/definitions/complex"},
        "beta": {"type": "array", "items": {"$ref": "#/definitions/complex"}, "minItems": 4, "maxItems": 4},
        "n_vertices": {"type": "integer", "minimum": 1},
        "edges": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}},
        "edge_points": {"type": "array", "items": {"type": "integer", "minimum": 4}},
        "M": {"$ref": "#/definitions/cmatrix"},
        "N": {"$ref": "#/definitions/cmatrix"},
        "P": {"$ref": "#/definitions/cmatrix"},
        "Phi": {"$ref": "#/definitions/cmatrix"},
        "A": {"$ref": "#/definitions/cmatrix"},
        "C": {"$ref": "#/definitions/cmatrix"},
        "L": {"$ref": "#/definitions/cmatrix"},
        "B1": {"$ref": "#/definitions/cmatrix"},
        "B2": {"$ref": "#/definitions/cmatrix"},
        "B3": {"$ref": "#/definitions/cmatrix"},
        "B4": {"$ref": "#/definitions/cmatrix"},
        "case_tag": {"enum": ["unbounded_trace", "bounded_trace", "strong_damping_unbounded", "strong_damping_bounded"]}
      }
    },
    "lambda": {"$ref": "#/definitions/complex"},
    "checks": {
      "type": "array",
      "items": {"enum": ["spectrum", "similarity", "evolve", "boundedness", "analyticity",
                          "wentzell", "dyson_phillips", "stability_certificate", "cosine"]}
    },
    "run": {
      "type": "object",
      "properties": {
        "T": {"type": "number", "exclusiveMinimum": 0},
        "steps": {"type": "integer", "minimum": 1},
        "k_max": {"type": "integer", "minimum": 0},
        "T_max": {"type": "number", "exclusiveMinimum": 0},
        "growth_T_max": {"type": "number", "exclusiveMinimum": 0},
        "tolerances": {
          "type": "object",
          "properties": {
            "similarity": {"type": "number"},
            "u_inverse": {"type": "number"},
            "boundedness_slope": {"type": "number"},
            "bound_sup": {"type": "number"},
            "analyticity_threshold": {"type": "number"},
            "wentzell": {"type": "number"},
            "dyson": {"type": "number"},
            "cosine_scale": {"type": "number"}
          }
        }
      }
    }
  },
  "definitions": {
    "complex": {
      "oneOf": [
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
      ]
    },
    "cmatrix": {
      "type": "array",
      "items": {"type": "array", "items": {"$ref": "#/definitions/complex"}}
    }
  }
})";
  return schema;
}

}  // namespace dynbc::cli
