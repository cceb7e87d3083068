// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDOMAIN_ERROR_HPP
#define QDOMAIN_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace qdomain {

enum class ErrorKind {
  OutOfDomain,      // query point outside the grid rectangle
  Configuration,    // malformed input or a shape/support that does not fit
  Parameter,        // numeric parameter outside its admissible range
  Geometry,         // the evolving domain left the admissible region
  DegenerateState,  // no interface left (domain vanished or filled the box)
  SolverFailure,    // linear solver did not converge
  NonConvergence,   // outer iteration budget exhausted
  StepTooLarge,     // marker update produced a self-intersecting curve
  Resolution,       // a resolution-dependent consistency check failed
  Invariant,        // an internal invariant was violated
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Carries the relative residual history of a failed linear solve.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::vector<double> residuals)
      : Error(ErrorKind::SolverFailure, what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residual_history() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

}  // namespace qdomain

#endif  // QDOMAIN_ERROR_HPP
