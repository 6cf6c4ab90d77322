// Copyright (c) 2026 the dynbc authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "dynbc/pipeline.hpp"

namespace {

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dynbc::ConfigInvalid("cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw dynbc::ConfigInvalid(std::string("invalid JSON: ") + e.what());
  }
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynbc - numerical laboratory for damped second-order problems with dynamic "
               "boundary conditions"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  auto* run = app.add_subcommand("run", "run the checks requested by a scenario config");
  run->add_option("config", config_path, "config JSON file")->required();
  run->add_option("--out", out_dir, "output directory for report and CSV series");

  std::string path_a, path_b;
  auto* cmp = app.add_subcommand("compare", "coupling-scale sweep comparison of two configs");
  cmp->add_option("a", path_a, "first config")->required();
  cmp->add_option("b", path_b, "second config")->required();
  cmp->add_option("--out", out_dir, "output directory for the diff report");

  auto* schema = app.add_subcommand("schema", "print the config JSON schema");

  CLI11_PARSE(app, argc, argv);

  try {
    if (schema->parsed()) {
      std::cout << dynbc::cli::config_schema() << "\n";
      return 0;
    }
    if (run->parsed()) {
      const auto doc = read_json(config_path);
      const auto cfg = dynbc::cli::parse_config(doc);
      const auto report = dynbc::cli::run_checks(cfg, doc, out_dir);
      const auto j = report.to_json();
      std::ofstream(out_dir + "/report.json") << j.dump(2) << "\n";
      std::cout << j.dump(2) << "\n";
      return report.all_pass ? 0 : 1;
    }
    if (cmp->parsed()) {
      const auto doc_a = read_json(path_a);
      const auto doc_b = read_json(path_b);
      const auto cfg_a = dynbc::cli::parse_config(doc_a);
      const auto cfg_b = dynbc::cli::parse_config(doc_b);
      const auto diff = dynbc::cli::compare_configs(cfg_a, doc_a, cfg_b, doc_b);
      std::ofstream(out_dir + "/compare.json") << diff.dump(2) << "\n";
      std::cout << diff.dump(2) << "\n";
      return 0;
    }
  } catch (const dynbc::ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const dynbc::IncompatibleScenarios& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const dynbc::Error& e) {
    std::cerr << "check failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
