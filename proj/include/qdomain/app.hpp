// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDOMAIN_APP_HPP
#define QDOMAIN_APP_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdomain/heleshaw.hpp"
#include "qdomain/levelset.hpp"
#include "qdomain/measure.hpp"
#include "qdomain/method_one.hpp"
#include "qdomain/method_two.hpp"

namespace qdomain {

enum class Method { One, Two, HeleShaw, Oracle };

const char* to_string(Method m);

struct GridSpec {
  double h = 0.02;
  double padding_factor = 1.1;  // applied to the Sakai outer radius
  std::optional<std::pair<Point, Point>> box;  // explicit [lo, hi] overrides auto sizing
};

// "auto" grows supp(mu) by offset (method one) or places a circle around the
// support (method two); otherwise the given shape is used.
struct InitialDomainSpec {
  std::optional<Shape> shape;
  std::optional<double> offset;  // method one, auto only; default 0.1 r(mu)
  std::optional<double> radius;  // method two, auto only; default 1.02 R + 2h
};

struct HeleShawSpec {
  std::optional<Shape> d0;
  std::vector<double> times;
  double initial_offset = 0.0;
};

// Parsed run configuration. The grid and every default are resolved during
// parsing, so the echo in resolved_config.json is complete.
struct RunConfig {
  Method method = Method::One;
  std::optional<Measure> measure;  // the injection measure nu for Hele-Shaw runs
  GridSpec grid;
  InitialDomainSpec initial_domain;
  MethodOneConfig method_one;
  MethodTwoConfig method_two;
  HeleShawSpec heleshaw;
  std::string output_dir = "qdomain_out";

  std::optional<Grid2D> resolved_grid;
  SakaiRadii sakai;
};

struct RunFlags {
  bool dump_fields = false;
  bool verify = false;
  bool parallel_times = false;
  bool verify_shape_derivative = false;
};

enum ExitCode : int { kExitConverged = 0, kExitNotConverged = 2, kExitConfig = 3, kExitInvariant = 4 };

// Throws Error(Configuration) with the offending field path on schema errors.
RunConfig parse_config(const std::string& text);
nlohmann::ordered_json resolved_json(const RunConfig& cfg);

// Measure handed to the solvers: the configured one, or chi_{D0} + t_max nu
// for Hele-Shaw runs.
Measure solver_measure(const RunConfig& cfg);

LevelSetFn initial_level_set(const RunConfig& cfg);
MarkerCurve initial_curve(const RunConfig& cfg);

nlohmann::ordered_json oracle_table(const RunConfig& cfg);

struct RunOutcome {
  int exit_code = kExitConverged;
  std::string message;
  nlohmann::ordered_json summary;
};

// Runs the configured method and writes every artifact into cfg.output_dir.
// Solver failures map to exit codes; only I/O problems throw.
RunOutcome execute(const RunConfig& cfg, const RunFlags& flags);

}  // namespace qdomain

#endif  // QDOMAIN_APP_HPP
