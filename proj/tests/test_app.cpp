// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qdomain/app.hpp"
#include "qdomain/error.hpp"

using namespace qdomain;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "method": "one",
  "measure": [{"kind": "disc", "center": [0, 0], "radius": 0.5, "density": 4}],
  "grid": {"h": 0.05}
})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string expect_config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Configuration);
    return e.what();
  }
  FAIL("configuration was accepted");
  return {};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qdomain_test_app_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("defaults are materialized") {
  const RunConfig cfg = parse_config(kMinimal);
  CHECK(cfg.method == Method::One);
  CHECK(cfg.method_one.zeta == doctest::Approx(2.0 - std::sqrt(2.0)));
  CHECK(cfg.method_one.tol == doctest::Approx(1e-4));
  CHECK(cfg.method_one.tau == doctest::Approx(1.0));
  const auto j = resolved_json(cfg);
  CHECK(j["method_one"]["zeta"].get<double>() == doctest::Approx(2.0 - std::sqrt(2.0)));
  CHECK(j["initial_domain"]["kind"] == "auto");
  CHECK(j["initial_domain"]["offset"].get<double>() == doctest::Approx(0.1));
  CHECK(j["grid"]["nx"].get<int>() == cfg.resolved_grid->nx());

  // The auto grid holds the padded Sakai outer ball (radius 1.5 here).
  CHECK(cfg.resolved_grid->margin({1.5 * 1.1 - 0.05, 0}) >= 0.0);

  // The echo parses back to the same configuration.
  const RunConfig again = parse_config(j.dump());
  CHECK(resolved_json(again) == j);
}

TEST_CASE("theta override is honoured and echoed") {
  const RunConfig cfg = parse_config(R"({
    "method": "one",
    "measure": [{"kind": "disc", "center": [0, 0], "radius": 0.5, "density": 4}],
    "method_one": {"theta": 3.5}
  })");
  CHECK(cfg.method_one.theta0 == doctest::Approx(3.5));
  CHECK(resolved_json(cfg)["method_one"]["theta0"].get<double>() == doctest::Approx(3.5));
}

TEST_CASE("schema errors name the field") {
  CHECK(expect_config_error("{").find("not valid JSON") != std::string::npos);
  CHECK(expect_config_error(R"({"method": "three", "measure": []})").find("'method'") != std::string::npos);
  CHECK(expect_config_error(R"({"method": "one", "measure": [{"kind": "disc", "center": [0], "radius": 1}]})")
            .find("measure[0].center") != std::string::npos);
  CHECK(expect_config_error(R"({"method": "one", "measure": [{"kind": "disc", "center": [0, 0], "radius": 1}],
                               "method_one": {"toll": 1}})")
            .find("method_one.toll") != std::string::npos);
  CHECK(expect_config_error(R"({"method": "one", "measure": [{"kind": "disc", "center": [0, 0], "radius": 1}],
                               "method_one": {"tau": 2}})")
            .find("tau") != std::string::npos);
  CHECK(expect_config_error(R"({"method": "one", "measure": [{"kind": "disc", "center": [0, 0], "radius": 1}],
                               "grid": {"padding_factor": 1.0}})")
            .find("padding_factor") != std::string::npos);
  CHECK(expect_config_error(R"({"method": "heleshaw", "measure": [{"kind": "point", "location": [0, 0], "mass": 1}],
                               "heleshaw": {"times": [2, 1]}})")
            .find("heleshaw.times[1]") != std::string::npos);
}

TEST_CASE("support outside the grid reports the outer radius") {
  const std::string msg = expect_config_error(R"({
    "method": "one",
    "measure": [{"kind": "disc", "center": [0, 0], "radius": 0.5, "density": 4}],
    "grid": {"h": 0.05, "box": [[-0.3, -0.3], [0.3, 0.3]]}
  })");
  CHECK(msg.find("outer radius") != std::string::npos);
  CHECK(msg.find("1.5") != std::string::npos);
}

TEST_CASE("oracle run writes its table") {
  RunConfig cfg = parse_config(slurp(fs::path(QDOMAIN_CONFIG_DIR) / "oracle.json"));
  cfg.output_dir = scratch("oracle").string();
  const RunOutcome out = execute(cfg, {});
  CHECK(out.exit_code == kExitConverged);
  CHECK(fs::exists(fs::path(cfg.output_dir) / "oracle.json"));
  CHECK(fs::exists(fs::path(cfg.output_dir) / "resolved_config.json"));
  CHECK(out.summary["oracle"]["radial"]["r"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("method one run writes artifacts and is deterministic") {
  RunConfig cfg = parse_config(kMinimal);
  cfg.output_dir = scratch("one").string();
  const RunOutcome a = execute(cfg, {});
  CHECK(a.exit_code == kExitConverged);
  for (const char* f : {"u_final.csv", "phi_final.csv", "contour_final.csv", "iterations.jsonl", "summary.json",
                        "resolved_config.json"}) {
    CHECK_MESSAGE(fs::exists(fs::path(cfg.output_dir) / f), f);
  }
  CHECK(a.summary["mass_identity_pass"].get<bool>());
  CHECK(a.summary["sakai"]["outer_pass"].get<bool>());
  CHECK(a.summary["sakai"]["inner_pass"].is_null());  // r(mu) = 1 < 2R
  CHECK(a.summary["iterations"].get<int>() >= 1);

  const RunOutcome b = execute(cfg, {});
  auto strip = [](nlohmann::ordered_json j) {
    j.erase("wall_time_s");
    return j;
  };
  CHECK(strip(a.summary).dump() == strip(b.summary).dump());
}

TEST_CASE("forced non-convergence keeps partial artifacts") {
  RunConfig cfg = parse_config(kMinimal);
  cfg.method_one.max_iters = 0;
  cfg.output_dir = scratch("partial").string();
  const RunOutcome out = execute(cfg, {});
  CHECK(out.exit_code == kExitNotConverged);
  CHECK_FALSE(out.summary["converged"].get<bool>());
  CHECK(fs::exists(fs::path(cfg.output_dir) / "u_final.csv"));
  CHECK(fs::exists(fs::path(cfg.output_dir) / "phi_final.csv"));
}

TEST_CASE("verification flags") {
  RunConfig cfg = parse_config(kMinimal);
  cfg.output_dir = scratch("verify").string();
  RunFlags flags;
  flags.verify = true;
  flags.verify_shape_derivative = true;
  flags.dump_fields = true;
  const RunOutcome out = execute(cfg, flags);
  CHECK(out.exit_code == kExitConverged);
  const auto& v = out.summary["verify"];
  CHECK(v.contains("hausdorff_one_two"));
  CHECK(v["hausdorff_one_oracle"].get<double>() <= 2.0 * cfg.grid.h);
  CHECK(out.summary.contains("shape_derivative"));
  CHECK(fs::exists(fs::path(cfg.output_dir) / "phi_0.csv"));
}

TEST_CASE("Hele-Shaw run writes one contour per time") {
  RunConfig cfg = parse_config(R"({
    "method": "heleshaw",
    "measure": [{"kind": "point", "location": [0, 0], "mass": 1}],
    "grid": {"h": 0.05},
    "heleshaw": {"d0": {"kind": "disc", "center": [0, 0], "radius": 0.5}, "times": [0.5, 1]}
  })");
  cfg.output_dir = scratch("heleshaw").string();
  const RunOutcome out = execute(cfg, {});
  CHECK(out.exit_code == kExitConverged);
  CHECK(fs::exists(fs::path(cfg.output_dir) / "d_t_0.5.csv"));
  CHECK(fs::exists(fs::path(cfg.output_dir) / "d_t_1.csv"));
  CHECK(out.summary["monotone"].get<bool>());
  CHECK(slurp(fs::path(cfg.output_dir) / "iterations.jsonl").find("\"monotonicity\"") != std::string::npos);
}
