// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDOMAIN_POISSON_HPP
#define QDOMAIN_POISSON_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qdomain/geometry.hpp"
#include "qdomain/grid.hpp"

namespace qdomain {

// Neighbour directions of a node: +x, -x, +y, -y.
enum Direction : int { kEast = 0, kWest = 1, kNorth = 2, kSouth = 3 };

// One grid edge crossed by the interface, seen from its inside node.
struct CutEdge {
  std::size_t node = 0;  // inside node
  int dir = 0;           // Direction towards the outside neighbour
  double s = 1.0;        // distance to the interface in units of h, in (0, 1]
  Point position;        // interface point on the edge
  Vec2 normal;           // outward unit normal at position
};

// Discretisation of a domain on a grid: which nodes are inside and where the
// interface crosses the edges leaving the inside set.
class DomainMask {
 public:
  // inside <=> phi < 0; fractions by linear interpolation along edges.
  static DomainMask from_level_set(const ScalarField& phi);
  // inside <=> node inside the polygon; fractions from exact edge crossings.
  static DomainMask from_polygon(const Grid2D& g, std::span<const Point> polygon);

  const Grid2D& grid() const { return grid_; }
  bool inside(std::size_t n) const { return inside_[n] != 0; }
  const std::vector<std::uint8_t>& inside_flags() const { return inside_; }
  std::size_t inside_count() const { return inside_count_; }
  const std::vector<CutEdge>& cuts() const { return cuts_; }
  // Index into cuts() for (node, dir), or -1.
  int cut_index(std::size_t node, int dir) const { return cut_of_[4 * node + static_cast<std::size_t>(dir)]; }
  // Inside nodes with no inside neighbour, removed during construction.
  std::size_t pruned() const { return pruned_; }

 private:
  explicit DomainMask(const Grid2D& g) : grid_(g) {}

  Grid2D grid_;
  std::vector<std::uint8_t> inside_;
  std::vector<CutEdge> cuts_;
  std::vector<int> cut_of_;
  std::size_t inside_count_ = 0;
  std::size_t pruned_ = 0;

  template <class Locate>
  static DomainMask build(const Grid2D& g, std::vector<std::uint8_t> inside, Locate locate);
};

// Compressed-row system over a subset of grid nodes.
struct LinearSystem {
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> col;
  std::vector<double> val;
  std::vector<double> rhs;
  std::vector<std::size_t> nodes;  // grid node of each unknown

  std::size_t size() const { return nodes.size(); }
  double max_asymmetry() const;
  void multiply(std::span<const double> x, std::span<double> y) const;
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

struct SolveOptions {
  double rel_tol = 1e-10;
  int max_iters = 0;  // 0 selects 20 (nx + ny)
  const ScalarField* initial_guess = nullptr;
  SolveStats* stats = nullptr;
};

// Conjugate gradients preconditioned by a modified incomplete Cholesky factor; max_iters <= 0 allows about two
// sweeps per unknown. Throws SolverError with the residual history when the
// tolerance is not reached.
std::vector<double> conjugate_gradient(const LinearSystem& sys, std::vector<double> x0, double rel_tol, int max_iters,
                                       SolveStats* stats = nullptr);

// Delta u = f inside, u = g at the interface crossings (g = 0 by default).
LinearSystem assemble_dirichlet(const DomainMask& mask, const ScalarField& f, std::span<const double> g = {});
ScalarField solve_dirichlet(const DomainMask& mask, const ScalarField& f, const SolveOptions& opt = {});
ScalarField solve_dirichlet(const DomainMask& mask, const ScalarField& f, std::span<const double> g,
                            const SolveOptions& opt = {});

// Delta u = f inside, du/dn + theta u = 0 at the interface.
LinearSystem assemble_robin(const DomainMask& mask, const ScalarField& f, double theta);
ScalarField solve_robin(const DomainMask& mask, const ScalarField& f, double theta, const SolveOptions& opt = {});

// Interface values of a Robin solution, one per cut of the mask.
std::vector<double> robin_boundary_values(const DomainMask& mask, const ScalarField& u, double theta);

enum class ExtensionForcing { One, Zero };

struct ExtensionReport {
  std::size_t clamped = 0;  // nodes where a negative value was reset to 0
  SolveStats stats;
};

// Two-region problem on the whole grid: Delta v = 1 (or 0) inside the mask
// away from the support, Delta v = 0 outside, v = speed at each cut of the
// mask, v = 0 on support nodes and on the grid border.
ScalarField solve_extension(const DomainMask& omega, const std::vector<std::uint8_t>& support, std::span<const double> speed,
                            ExtensionForcing forcing = ExtensionForcing::One, const SolveOptions& opt = {},
                            ExtensionReport* report = nullptr);

}  // namespace qdomain

#endif  // QDOMAIN_POISSON_HPP
