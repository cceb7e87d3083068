// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdomain/qdomain.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "qdomain/app.hpp"
#include "qdomain/error.hpp"
#include "qdomain/method_one.hpp"
#include "qdomain/oracle.hpp"

struct qd_config {
  qdomain::RunConfig cfg;
};

struct qd_result {
  qdomain::RunOutcome outcome;
};

namespace {

thread_local std::string g_last_error;

qd_status status_for(qdomain::ErrorKind kind) {
  using qdomain::ErrorKind;
  switch (kind) {
    case ErrorKind::Configuration: return QD_ERR_CONFIG;
    case ErrorKind::Parameter:
    case ErrorKind::OutOfDomain: return QD_ERR_PARAMETER;
    case ErrorKind::Io: return QD_ERR_IO;
    case ErrorKind::Invariant: return QD_ERR_INTERNAL;
    default: return QD_ERR_SOLVER;
  }
}

template <class F>
qd_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return QD_OK;
  } catch (const qdomain::Error& e) {
    g_last_error = e.what();
    return status_for(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QD_ERR_INTERNAL;
  }
}

qd_status null_argument(const char* name) {
  g_last_error = std::string("argument '") + name + "' is null";
  return QD_ERR_NULL_ARGUMENT;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* qd_version(void) { return QDOMAIN_VERSION; }

const char* qd_last_error(void) { return g_last_error.c_str(); }

void qd_string_free(char* s) { std::free(s); }

qd_status qd_config_parse(const char* json_text, qd_config** out) {
  if (!json_text) return null_argument("json_text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new qd_config{qdomain::parse_config(json_text)}; });
}

void qd_config_free(qd_config* cfg) { delete cfg; }

qd_status qd_config_set_output_dir(qd_config* cfg, const char* dir) {
  if (!cfg) return null_argument("cfg");
  if (!dir) return null_argument("dir");
  return guarded([&] { cfg->cfg.output_dir = dir; });
}

qd_status qd_config_resolved_json(const qd_config* cfg, char** out) {
  if (!cfg) return null_argument("cfg");
  if (!out) return null_argument("out");
  return guarded([&] { *out = duplicate(qdomain::resolved_json(cfg->cfg).dump(2)); });
}

qd_status qd_execute(const qd_config* cfg, const qd_run_flags* flags, qd_result** out) {
  if (!cfg) return null_argument("cfg");
  if (!out) return null_argument("out");
  *out = nullptr;
  qdomain::RunFlags f;
  if (flags) {
    f.dump_fields = flags->dump_fields != 0;
    f.verify = flags->verify != 0;
    f.parallel_times = flags->parallel_times != 0;
    f.verify_shape_derivative = flags->verify_shape_derivative != 0;
  }
  return guarded([&] { *out = new qd_result{qdomain::execute(cfg->cfg, f)}; });
}

int qd_result_exit_code(const qd_result* res) { return res ? res->outcome.exit_code : qdomain::kExitConfig; }

const char* qd_result_message(const qd_result* res) { return res ? res->outcome.message.c_str() : ""; }

qd_status qd_result_summary_json(const qd_result* res, char** out) {
  if (!res) return null_argument("res");
  if (!out) return null_argument("out");
  return guarded([&] { *out = duplicate(res->outcome.summary.dump(2)); });
}

void qd_result_free(qd_result* res) { delete res; }

qd_status qd_oracle_table(const qd_config* cfg, char** out) {
  if (!cfg) return null_argument("cfg");
  if (!out) return null_argument("out");
  return guarded([&] { *out = duplicate(qdomain::oracle_table(cfg->cfg).dump(2)); });
}

qd_status qd_radial_u(double a, double M, int n, double s, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = qdomain::radial_u(qdomain::RadialCase{{0.0, 0.0}, a, M, n}, s); });
}

qd_status qd_point_mass_radius(double alpha, int n, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = qdomain::point_mass_domain(alpha, n); });
}

qd_status qd_solve_1d(const double* lo, const double* hi, const double* density, size_t count, double c, double d,
                      double* c_final, double* d_final) {
  if (!lo || !hi || !density) return null_argument("intervals");
  if (!c_final || !d_final) return null_argument("outputs");
  return guarded([&] {
    std::vector<qdomain::Interval1D> pieces;
    for (size_t k = 0; k < count; ++k) pieces.push_back({lo[k], hi[k], density[k]});
    const auto r = qdomain::run_1d(qdomain::Measure1D(std::move(pieces)), c, d);
    *c_final = r.c_f;
    *d_final = r.d_f;
  });
}

}  // extern "C"
