// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

// qdomain command-line driver. Talks to the solver only through the C API.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qdomain/qdomain.h"

namespace {

constexpr int kExitConfig = 3;

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  text = buf.str();
  return true;
}

qd_config* load(const std::string& path) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "qdomain: cannot read " << path << '\n';
    return nullptr;
  }
  qd_config* cfg = nullptr;
  if (qd_config_parse(text.c_str(), &cfg) != QD_OK) {
    std::cerr << "qdomain: " << path << ": " << qd_last_error() << '\n';
    return nullptr;
  }
  return cfg;
}

int run(const std::string& path, const std::string& output_dir, const qd_run_flags& flags) {
  qd_config* cfg = load(path);
  if (!cfg) return kExitConfig;
  if (!output_dir.empty()) qd_config_set_output_dir(cfg, output_dir.c_str());

  qd_result* res = nullptr;
  const qd_status st = qd_execute(cfg, &flags, &res);
  qd_config_free(cfg);
  if (st != QD_OK) {
    std::cerr << "qdomain: " << qd_last_error() << '\n';
    return st == QD_ERR_CONFIG || st == QD_ERR_PARAMETER ? kExitConfig : 2;
  }
  const int code = qd_result_exit_code(res);
  char* summary = nullptr;
  if (qd_result_summary_json(res, &summary) == QD_OK) {
    std::cout << summary << '\n';
    qd_string_free(summary);
  }
  if (code != 0) std::cerr << "qdomain: exit " << code << ": " << qd_result_message(res) << '\n';
  qd_result_free(res);
  return code;
}

int oracle(const std::string& path) {
  qd_config* cfg = load(path);
  if (!cfg) return kExitConfig;
  char* table = nullptr;
  const qd_status st = qd_oracle_table(cfg, &table);
  qd_config_free(cfg);
  if (st != QD_OK) {
    std::cerr << "qdomain: " << qd_last_error() << '\n';
    return kExitConfig;
  }
  std::cout << table << '\n';
  qd_string_free(table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadrature domain solver"};
  app.require_subcommand(1);

  std::string config;
  std::string output_dir;
  bool dump_fields = false;
  bool verify = false;
  bool parallel_times = false;
  bool verify_sd = false;

  CLI::App* run_cmd = app.add_subcommand("run", "solve the configured problem and write artifacts");
  run_cmd->add_option("config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("-o,--output-dir", output_dir, "override output_dir from the configuration");
  run_cmd->add_flag("--dump-fields", dump_fields, "write level-set snapshots for every iteration");
  run_cmd->add_flag("--verify", verify, "also run the other method and compare against the radial oracle");
  run_cmd->add_flag("--parallel-times", parallel_times, "solve Hele-Shaw times after the first concurrently");
  run_cmd->add_flag("--verify-shape-derivative", verify_sd, "compare analytic and finite-difference dE");

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "print radius and mass tables for a measure");
  oracle_cmd->add_option("config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);

  app.add_subcommand("version", "print the library version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run_cmd) {
    const qd_run_flags flags{dump_fields, verify, parallel_times, verify_sd};
    return run(config, output_dir, flags);
  }
  if (*oracle_cmd) return oracle(config);
  std::cout << "qdomain " << qd_version() << '\n';
  return 0;
}
