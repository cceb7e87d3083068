// Copyright 2026 The qdomain Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdomain/poisson.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <sstream>
#include <utility>

#include "qdomain/error.hpp"

namespace qdomain {

namespace {

// Interface fractions below this are clamped; the boundary shifts by at most
// kMinFraction * h, far below the discretisation error.
constexpr double kMinFraction = 1e-3;

constexpr int kDi[4] = {1, -1, 0, 0};
constexpr int kDj[4] = {0, 0, 1, -1};
constexpr Vec2 kDirVec[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

int opposite(int dir) { return dir ^ 1; }

Vec2 node_gradient(const ScalarField& phi, int i, int j) {
  const Grid2D& g = phi.grid();
  const double h = g.h();
  auto diff = [&](int i0, int j0, int i1, int j1, double span) { return (phi(i1, j1) - phi(i0, j0)) / span; };
  double gx, gy;
  if (i == 0) gx = diff(0, j, 1, j, h);
  else if (i == g.nx() - 1) gx = diff(i - 1, j, i, j, h);
  else gx = diff(i - 1, j, i + 1, j, 2 * h);
  if (j == 0) gy = diff(i, 0, i, 1, h);
  else if (j == g.ny() - 1) gy = diff(i, j - 1, i, j, h);
  else gy = diff(i, j - 1, i, j + 1, 2 * h);
  return {gx, gy};
}

struct CutLocation {
  double s;
  Point position;
  Vec2 normal;
};

// Sorted interface crossings of one grid line, with the crossing segment index.
struct LineCrossings {
  std::vector<std::pair<double, std::size_t>> at;
};

}  // namespace

template <class Locate>
DomainMask DomainMask::build(const Grid2D& g, std::vector<std::uint8_t> inside, Locate locate) {
  DomainMask m(g);
  const int nx = g.nx();
  const int ny = g.ny();

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t n = g.index(i, j);
      if (!inside[n]) continue;
      if (g.on_border(i, j)) {
        throw Error(ErrorKind::Geometry, "domain reaches the border of the computational grid");
      }
      bool has_neighbour = false;
      for (int d = 0; d < 4; ++d) has_neighbour |= inside[g.index(i + kDi[d], j + kDj[d])] != 0;
      if (!has_neighbour) {
        inside[n] = 0;
        ++m.pruned_;
      }
    }
  }

  m.cut_of_.assign(4 * g.size(), -1);
  for (int j = 1; j + 1 < ny; ++j) {
    for (int i = 1; i + 1 < nx; ++i) {
      const std::size_t n = g.index(i, j);
      if (!inside[n]) continue;
      ++m.inside_count_;
      for (int d = 0; d < 4; ++d) {
        const std::size_t q = g.index(i + kDi[d], j + kDj[d]);
        if (inside[q]) continue;
        CutLocation loc = locate(i, j, d);
        loc.s = std::clamp(loc.s, kMinFraction, 1.0);
        m.cut_of_[4 * n + static_cast<std::size_t>(d)] = static_cast<int>(m.cuts_.size());
        m.cuts_.push_back(CutEdge{n, d, loc.s, loc.position, loc.normal});
      }
    }
  }
  m.inside_ = std::move(inside);
  return m;
}

DomainMask DomainMask::from_level_set(const ScalarField& phi) {
  const Grid2D& g = phi.grid();
  std::vector<std::uint8_t> inside(g.size(), 0);
  for (std::size_t n = 0; n < g.size(); ++n) inside[n] = phi[n] < 0.0 ? 1 : 0;
  return build(g, std::move(inside), [&](int i, int j, int d) {
    const int qi = i + kDi[d];
    const int qj = j + kDj[d];
    const double fp = phi(i, j);
    const double fq = phi(qi, qj);
    const double s = fp / (fp - fq);
    const Vec2 grad = node_gradient(phi, i, j) * (1.0 - s) + node_gradient(phi, qi, qj) * s;
    const double len = norm(grad);
    return CutLocation{s, g.node(i, j) + kDirVec[d] * (s * g.h()), len > 0.0 ? grad / len : kDirVec[d]};
  });
}

DomainMask DomainMask::from_polygon(const Grid2D& g, std::span<const Point> polygon_in) {
  if (polygon_in.size() < 3) throw Error(ErrorKind::Geometry, "polygon needs at least three vertices");
  std::vector<Point> polygon(polygon_in.begin(), polygon_in.end());
  if (signed_area(polygon) < 0.0) std::reverse(polygon.begin(), polygon.end());
  const std::size_t nv = polygon.size();

  std::vector<LineCrossings> rows(g.ny());
  std::vector<LineCrossings> cols(g.nx());
  const double h = g.h();
  const Point o = g.origin();
  for (std::size_t k = 0; k < nv; ++k) {
    const Point a = polygon[k];
    const Point b = polygon[(k + 1) % nv];
    const int jlo = std::max(0, static_cast<int>(std::floor((std::min(a.y, b.y) - o.y) / h)));
    const int jhi = std::min(g.ny() - 1, static_cast<int>(std::ceil((std::max(a.y, b.y) - o.y) / h)));
    for (int j = jlo; j <= jhi; ++j) {
      const double y = o.y + j * h;
      if ((a.y > y) != (b.y > y)) rows[j].at.push_back({a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y), k});
    }
    const int ilo = std::max(0, static_cast<int>(std::floor((std::min(a.x, b.x) - o.x) / h)));
    const int ihi = std::min(g.nx() - 1, static_cast<int>(std::ceil((std::max(a.x, b.x) - o.x) / h)));
    for (int i = ilo; i <= ihi; ++i) {
      const double x = o.x + i * h;
      if ((a.x > x) != (b.x > x)) cols[i].at.push_back({a.y + (x - a.x) * (b.y - a.y) / (b.x - a.x), k});
    }
  }
  for (auto& r : rows) std::sort(r.at.begin(), r.at.end());
  for (auto& c : cols) std::sort(c.at.begin(), c.at.end());

  std::vector<std::uint8_t> inside(g.size(), 0);
  for (int j = 0; j < g.ny(); ++j) {
    const auto& xs = rows[j].at;
    std::size_t passed = 0;
    for (int i = 0; i < g.nx(); ++i) {
      const double x = o.x + i * h;
      while (passed < xs.size() && xs[passed].first <= x) ++passed;
      inside[g.index(i, j)] = (passed % 2 == 1) ? 1 : 0;
    }
  }

  auto outward = [&](std::size_t k) {
    const Vec2 d = polygon[(k + 1) % nv] - polygon[k];
    return normalized(Vec2{d.y, -d.x});
  };

  return build(g, std::move(inside), [&](int i, int j, int d) {
    const Point p = g.node(i, j);
    const bool horizontal = d == kEast || d == kWest;
    const auto& line = horizontal ? rows[j].at : cols[i].at;
    const double c0 = horizontal ? p.x : p.y;
    const bool forward = d == kEast || d == kNorth;
    // Row and column parities can disagree by rounding when the curve passes
    // through a node, so take the crossing nearest to the edge interval.
    const double lo = forward ? c0 : c0 - h;
    const double hi = forward ? c0 + h : c0;
    const std::pair<double, std::size_t>* best = nullptr;
    double gap = std::numeric_limits<double>::infinity();
    auto it = std::lower_bound(line.begin(), line.end(), std::make_pair(lo, std::size_t{0}),
                               [](const auto& l, const auto& r) { return l.first < r.first; });
    for (auto c = it == line.begin() ? it : std::prev(it); c != line.end() && c->first <= hi + h; ++c) {
      const double dist = c->first < lo ? lo - c->first : (c->first > hi ? c->first - hi : 0.0);
      if (dist < gap) {
        gap = dist;
        best = &*c;
      }
    }
    if (!best) return CutLocation{0.5, p + kDirVec[d] * (0.5 * h), kDirVec[d]};
    const double s = std::clamp(std::abs(best->first - c0) / h, 0.0, 1.0);
    return CutLocation{s, p + kDirVec[d] * (s * h), outward(best->second)};
  });
}

double LinearSystem::max_asymmetry() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < size(); ++r) {
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      const std::size_t c = col[k];
      const auto first = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[c]);
      const auto last = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[c + 1]);
      const auto it = std::lower_bound(first, last, r);
      const double mirror = (it != last && *it == r) ? val[static_cast<std::size_t>(it - col.begin())] : 0.0;
      worst = std::max(worst, std::abs(val[k] - mirror));
    }
  }
  return worst;
}

void LinearSystem::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t r = 0; r < size(); ++r) {
    double acc = 0.0;
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * x[col[k]];
    y[r] = acc;
  }
}

namespace {

// Modified incomplete Cholesky with no fill, stored as the pivots d of
// M = (D + L) D^-1 (D + U). Every row couples grid neighbours only, so two
// neighbours of one row are never coupled to each other and the dropped fill
// is exactly the second sum below.
class IncompleteCholesky {
 public:
  explicit IncompleteCholesky(const LinearSystem& sys) : inv_d_(sys.size()) {
    constexpr double kOmega = 0.97;
    const std::size_t n = sys.size();
    std::vector<double> d(n);
    lower_ptr_.push_back(0);
    upper_ptr_.push_back(0);
    for (std::size_t i = 0; i < n; ++i) {
      double diag = 0.0;
      double drop = 0.0;
      for (std::size_t e = sys.row_ptr[i]; e < sys.row_ptr[i + 1]; ++e) {
        const std::size_t k = sys.col[e];
        if (k == i) {
          diag = sys.val[e];
        } else if (k < i) {
          double fill = 0.0;
          for (std::size_t f = sys.row_ptr[k]; f < sys.row_ptr[k + 1]; ++f) {
            if (sys.col[f] > k && sys.col[f] != i) fill += sys.val[f];
          }
          drop += sys.val[e] * (sys.val[e] + kOmega * fill) / d[k];
          lower_.push_back({k, sys.val[e]});
        } else {
          upper_.push_back({k, sys.val[e]});
        }
      }
      lower_ptr_.push_back(lower_.size());
      upper_ptr_.push_back(upper_.size());
      // Fall back to the plain diagonal if the modification eats the pivot.
      d[i] = diag - drop > 1e-3 * diag ? diag - drop : diag;
      inv_d_[i] = 1.0 / d[i];
    }
  }

  void apply(const std::vector<double>& r, std::vector<double>& z) const {
    const std::size_t n = inv_d_.size();
    for (std::size_t i = 0; i < n; ++i) {
      double acc = r[i];
      for (std::size_t e = lower_ptr_[i]; e < lower_ptr_[i + 1]; ++e) acc -= lower_[e].val * z[lower_[e].col];
      z[i] = acc * inv_d_[i];
    }
    for (std::size_t i = n; i-- > 0;) {
      double acc = 0.0;
      for (std::size_t e = upper_ptr_[i]; e < upper_ptr_[i + 1]; ++e) acc += upper_[e].val * z[upper_[e].col];
      z[i] -= acc * inv_d_[i];
    }
  }

 private:
  struct Entry {
    std::size_t col;
    double val;
  };
  std::vector<double> inv_d_;
  std::vector<Entry> lower_, upper_;
  std::vector<std::size_t> lower_ptr_, upper_ptr_;
};

}  // namespace

std::vector<double> conjugate_gradient(const LinearSystem& sys, std::vector<double> x, double rel_tol, int max_iters,
                                       SolveStats* stats) {
  const std::size_t n = sys.size();
  if (x.size() != n) x.assign(n, 0.0);
  if (max_iters <= 0) max_iters = static_cast<int>(std::min<std::size_t>(2 * n + 10, 1u << 30));
  auto dotp = [n](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
  };

  const double bnorm = std::sqrt(dotp(sys.rhs, sys.rhs));
  if (bnorm == 0.0) {
    if (stats) *stats = {0, 0.0};
    return std::vector<double>(n, 0.0);
  }
  std::vector<double> r(n), z(n), p(n), ap(n);
  sys.multiply(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = sys.rhs[i] - r[i];
  std::vector<double> history{std::sqrt(dotp(r, r)) / bnorm};
  if (history.back() <= rel_tol) {
    if (stats) *stats = {0, history.back()};
    return x;
  }
  const IncompleteCholesky precond(sys);
  precond.apply(r, z);
  p = z;
  double rz = dotp(r, z);
  for (int it = 1; it <= max_iters; ++it) {
    sys.multiply(p, ap);
    const double alpha = rz / dotp(p, ap);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    history.push_back(std::sqrt(dotp(r, r)) / bnorm);
    if (history.back() <= rel_tol) {
      if (stats) *stats = {it, history.back()};
      return x;
    }
    precond.apply(r, z);
    const double rz_next = dotp(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  std::ostringstream msg;
  msg << "conjugate gradients stalled at relative residual " << history.back() << " after " << max_iters
      << " iterations";
  throw SolverError(msg.str(), std::move(history));
}

namespace {

class Assembler {
 public:
  explicit Assembler(std::size_t unknowns) { sys_.row_ptr.push_back(0); sys_.rhs.reserve(unknowns); }

  void add(std::size_t c, double v) { row_.push_back({c, v}); }
  void finish_row(std::size_t node, double rhs) {
    std::sort(row_.begin(), row_.end());
    for (std::size_t k = 0; k < row_.size(); ++k) {
      if (k > 0 && row_[k].first == row_[k - 1].first) {
        sys_.val.back() += row_[k].second;
        continue;
      }
      sys_.col.push_back(row_[k].first);
      sys_.val.push_back(row_[k].second);
    }
    sys_.row_ptr.push_back(sys_.col.size());
    sys_.rhs.push_back(rhs);
    sys_.nodes.push_back(node);
    row_.clear();
  }
  LinearSystem take() { return std::move(sys_); }

 private:
  LinearSystem sys_;
  std::vector<std::pair<std::size_t, double>> row_;
};

std::vector<long> number_unknowns(const DomainMask& mask) {
  std::vector<long> id(mask.grid().size(), -1);
  long next = 0;
  for (std::size_t n = 0; n < id.size(); ++n) {
    if (mask.inside(n)) id[n] = next++;
  }
  return id;
}

// Shared interior stencil; cut arms are delegated to on_cut(row, cut, diag, rhs).
template <class OnCut>
LinearSystem assemble_interior(const DomainMask& mask, const ScalarField& f, OnCut on_cut) {
  const Grid2D& g = mask.grid();
  if (!(f.grid() == g)) throw Error(ErrorKind::Parameter, "right-hand side lives on a different grid");
  const double ih2 = 1.0 / (g.h() * g.h());
  const auto id = number_unknowns(mask);
  Assembler as(mask.inside_count());
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (id[n] < 0) continue;
    const int i = g.i_of(n);
    const int j = g.j_of(n);
    double diag = 0.0;
    double rhs = -f[n];
    for (int d = 0; d < 4; ++d) {
      const std::size_t q = g.index(i + kDi[d], j + kDj[d]);
      if (id[q] >= 0) {
        diag += ih2;
        as.add(static_cast<std::size_t>(id[q]), -ih2);
      } else {
        const int c = mask.cut_index(n, d);
        on_cut(static_cast<std::size_t>(c), diag, rhs);
      }
    }
    as.add(static_cast<std::size_t>(id[n]), diag);
    as.finish_row(n, rhs);
  }
  return as.take();
}

ScalarField scatter(const Grid2D& g, const LinearSystem& sys, const std::vector<double>& x) {
  ScalarField out(g);
  for (std::size_t r = 0; r < sys.size(); ++r) out[sys.nodes[r]] = x[r];
  return out;
}

std::vector<double> gather(const LinearSystem& sys, const ScalarField* guess) {
  std::vector<double> x(sys.size(), 0.0);
  if (guess) {
    for (std::size_t r = 0; r < sys.size(); ++r) x[r] = (*guess)[sys.nodes[r]];
  }
  return x;
}

int iteration_budget(const Grid2D& g, const SolveOptions& opt) {
  return opt.max_iters > 0 ? opt.max_iters : 20 * (g.nx() + g.ny());
}

ScalarField solve(const Grid2D& g, const LinearSystem& sys, const SolveOptions& opt) {
  if (opt.initial_guess && !(opt.initial_guess->grid() == g)) {
    throw Error(ErrorKind::Parameter, "initial guess lives on a different grid");
  }
  auto x = conjugate_gradient(sys, gather(sys, opt.initial_guess), opt.rel_tol, iteration_budget(g, opt), opt.stats);
  return scatter(g, sys, x);
}

}  // namespace

LinearSystem assemble_dirichlet(const DomainMask& mask, const ScalarField& f, std::span<const double> gvals) {
  if (!gvals.empty() && gvals.size() != mask.cuts().size()) {
    throw Error(ErrorKind::Parameter, "boundary data must provide one value per interface crossing");
  }
  const double h = mask.grid().h();
  return assemble_interior(mask, f, [&](std::size_t c, double& diag, double& rhs) {
    const double w = 1.0 / (mask.cuts()[c].s * h * h);
    diag += w;
    if (!gvals.empty()) rhs += w * gvals[c];
  });
}

ScalarField solve_dirichlet(const DomainMask& mask, const ScalarField& f, const SolveOptions& opt) {
  return solve_dirichlet(mask, f, {}, opt);
}

ScalarField solve_dirichlet(const DomainMask& mask, const ScalarField& f, std::span<const double> g,
                            const SolveOptions& opt) {
  if (mask.inside_count() == 0) throw Error(ErrorKind::DegenerateState, "domain mask is empty");
  return solve(mask.grid(), assemble_dirichlet(mask, f, g), opt);
}

namespace {

// Robin coupling strength along the edge direction of cut c.
double robin_kappa(const DomainMask& mask, const CutEdge& cut, double theta) {
  const double ne = std::max(0.0, dot(cut.normal, kDirVec[cut.dir]));
  return ne * theta * cut.s * mask.grid().h();
}

}  // namespace

LinearSystem assemble_robin(const DomainMask& mask, const ScalarField& f, double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw Error(ErrorKind::Parameter, "Robin coefficient must be positive");
  const double h = mask.grid().h();
  return assemble_interior(mask, f, [&](std::size_t c, double& diag, double&) {
    const CutEdge& cut = mask.cuts()[c];
    const double kappa = robin_kappa(mask, cut, theta);
    diag += kappa / ((1.0 + kappa) * cut.s * h * h);
  });
}

ScalarField solve_robin(const DomainMask& mask, const ScalarField& f, double theta, const SolveOptions& opt) {
  if (mask.inside_count() == 0) throw Error(ErrorKind::DegenerateState, "domain mask is empty");
  return solve(mask.grid(), assemble_robin(mask, f, theta), opt);
}

std::vector<double> robin_boundary_values(const DomainMask& mask, const ScalarField& u, double theta) {
  std::vector<double> out;
  out.reserve(mask.cuts().size());
  for (const CutEdge& cut : mask.cuts()) out.push_back(u[cut.node] / (1.0 + robin_kappa(mask, cut, theta)));
  return out;
}

ScalarField solve_extension(const DomainMask& omega, const std::vector<std::uint8_t>& support,
                            std::span<const double> speed, ExtensionForcing forcing, const SolveOptions& opt,
                            ExtensionReport* report) {
  const Grid2D& g = omega.grid();
  if (support.size() != g.size()) throw Error(ErrorKind::Parameter, "support mask lives on a different grid");
  if (speed.size() != omega.cuts().size()) {
    throw Error(ErrorKind::Parameter, "boundary speed must provide one value per interface crossing");
  }
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (support[n] && !omega.inside(n)) {
      throw Error(ErrorKind::Geometry, "support of the measure is not contained in the domain");
    }
  }

  const double h = g.h();
  const double ih2 = 1.0 / (h * h);
  std::vector<long> id(g.size(), -1);
  long next = 0;
  for (int j = 1; j + 1 < g.ny(); ++j)
    for (int i = 1; i + 1 < g.nx(); ++i)
      if (!support[g.index(i, j)]) id[g.index(i, j)] = next++;

  Assembler as(static_cast<std::size_t>(next));
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (id[n] < 0) continue;
    const int i = g.i_of(n);
    const int j = g.j_of(n);
    const bool in = omega.inside(n);
    double diag = 0.0;
    double rhs = (in && forcing == ExtensionForcing::One) ? -1.0 : 0.0;
    for (int d = 0; d < 4; ++d) {
      const std::size_t q = g.index(i + kDi[d], j + kDj[d]);
      if (omega.inside(q) != in) {
        const int c = in ? omega.cut_index(n, d) : omega.cut_index(q, opposite(d));
        const double s = std::max(kMinFraction, in ? omega.cuts()[c].s : 1.0 - omega.cuts()[c].s);
        diag += ih2 / s;
        rhs += ih2 / s * speed[c];
      } else if (id[q] < 0) {
        diag += ih2;
      } else {
        diag += ih2;
        as.add(static_cast<std::size_t>(id[q]), -ih2);
      }
    }
    as.add(static_cast<std::size_t>(id[n]), diag);
    as.finish_row(n, rhs);
  }
  const LinearSystem sys = as.take();
  ExtensionReport local;
  SolveOptions o = opt;
  o.stats = &local.stats;
  ScalarField v = solve(g, sys, o);
  for (double& x : v.values()) {
    if (x < 0.0) {
      x = 0.0;
      ++local.clamped;
    }
  }
#ifndef NDEBUG
  double top = 0.0;
  for (double s : speed) top = std::max(top, s);
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (!omega.inside(n) && v[n] > top * (1.0 + 1e-6) + 1e-12) {
      throw Error(ErrorKind::Invariant, "extension violates the discrete maximum principle outside the domain");
    }
  }
#endif
  if (opt.stats) *opt.stats = local.stats;
  if (report) *report = local;
  return v;
}

}  // namespace qdomain
