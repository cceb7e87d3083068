// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "qdomain/qdomain.h"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("version and null arguments") {
  CHECK(std::strlen(qd_version()) > 0);
  CHECK(qd_config_parse(nullptr, nullptr) == QD_ERR_NULL_ARGUMENT);
  CHECK(std::strlen(qd_last_error()) > 0);
  CHECK(qd_execute(nullptr, nullptr, nullptr) == QD_ERR_NULL_ARGUMENT);
  CHECK(qd_result_exit_code(nullptr) == 3);
  qd_config_free(nullptr);
  qd_result_free(nullptr);
  qd_string_free(nullptr);
}

TEST_CASE("configuration errors") {
  qd_config* cfg = nullptr;
  CHECK(qd_config_parse("{\"method\": 1}", &cfg) == QD_ERR_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(std::string(qd_last_error()).find("method") != std::string::npos);
}

TEST_CASE("resolved configuration and oracle table") {
  qd_config* cfg = nullptr;
  REQUIRE(qd_config_parse(slurp(std::string(QDOMAIN_CONFIG_DIR) + "/oracle.json").c_str(), &cfg) == QD_OK);
  CHECK(std::strlen(qd_last_error()) == 0);

  char* text = nullptr;
  REQUIRE(qd_config_resolved_json(cfg, &text) == QD_OK);
  CHECK(std::string(text).find("\"zeta\"") != std::string::npos);
  qd_string_free(text);

  REQUIRE(qd_oracle_table(cfg, &text) == QD_OK);
  CHECK(std::string(text).find("\"r_mu\"") != std::string::npos);
  qd_string_free(text);

  REQUIRE(qd_config_set_output_dir(cfg, "capi_oracle_out") == QD_OK);
  qd_result* res = nullptr;
  REQUIRE(qd_execute(cfg, nullptr, &res) == QD_OK);
  CHECK(qd_result_exit_code(res) == 0);
  REQUIRE(qd_result_summary_json(res, &text) == QD_OK);
  CHECK(std::string(text).find("\"oracle\"") != std::string::npos);
  qd_string_free(text);
  qd_result_free(res);
  qd_config_free(cfg);
}

TEST_CASE("closed-form helpers") {
  double v = 0.0;
  REQUIRE(qd_radial_u(0.5, 4.0, 2, 0.0, &v) == QD_OK);
  CHECK(v == doctest::Approx(0.5 * std::log(2.0)));
  CHECK(qd_radial_u(0.5, 0.5, 2, 0.0, &v) == QD_ERR_PARAMETER);

  REQUIRE(qd_point_mass_radius(3.14159265358979323846, 2, &v) == QD_OK);
  CHECK(v == doctest::Approx(1.0));

  const double lo[] = {-0.5};
  const double hi[] = {0.5};
  const double rho[] = {3.0};
  double c = 0.0;
  double d = 0.0;
  REQUIRE(qd_solve_1d(lo, hi, rho, 1, -0.5, 0.5, &c, &d) == QD_OK);
  CHECK(c == doctest::Approx(-1.5));
  CHECK(d == doctest::Approx(1.5));
  CHECK(qd_solve_1d(lo, hi, rho, 1, -0.2, 0.5, &c, &d) == QD_ERR_PARAMETER);
}
