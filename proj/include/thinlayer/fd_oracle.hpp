#pragma once

// Independent radial oracle: vertex-centred finite volumes for
//
//     -alpha ( (1/r)(r u')' - n^2 u / r^2 ) = f_n(r)
//
// on a chain of regions with uniform spacing per region. Break radii are grid
// nodes. A continuous interface shares one node whose control volume straddles
// both materials; an interface with prescribed jumps carries two nodes (one
// per side) tied by the trace-jump row and a combined flux-balance row.
// Nothing here uses the closed-form radial basis.

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <vector>

#include "thinlayer/analytic.hpp"
#include "thinlayer/errors.hpp"
#include "thinlayer/geometry.hpp"
#include "thinlayer/radial.hpp"

namespace thinlayer {

enum class FdConfiguration { full, two_region, jump_problem };

inline const char* to_string(FdConfiguration c) {
  switch (c) {
    case FdConfiguration::full: return "full";
    case FdConfiguration::two_region: return "two-region";
    case FdConfiguration::jump_problem: return "jump-problem";
  }
  return "?";
}

struct FdInterface {
  bool split_node = false;
  /// u_L - u_E at the interface (split nodes only)
  double trace_jump = 0.0;
  /// alpha_L u_L' - alpha_E u_E' at the interface (split nodes only)
  double flux_jump = 0.0;
};

struct FdProblem {
  int n = 0;
  std::vector<RegionSpec> regions;
  std::vector<FdInterface> interfaces;
  /// Radial source profile f_n(r); applied in every region.
  ForcingSpec forcing;
  FourierMode mode{};
};

struct FdNode {
  double r = 0.0;
  double u = 0.0;
  /// region the value belongs to; a shared continuous node belongs to the inner one
  int region = 0;
};

struct FdSolution {
  std::vector<FdNode> nodes;
  std::vector<int> cells;
};

/// Cells per region for base spacing h, doubled `refinement` times.
inline std::vector<int> fd_cell_counts(const std::vector<RegionSpec>& regions, double h,
                                       int refinement) {
  if (!(h > 0.0)) throw ValidationError("h", "grid spacing must be positive");
  std::vector<int> cells;
  for (const auto& reg : regions) {
    const double width = reg.r_hi - reg.r_lo;
    if (!(width > 0.0)) throw ValidationError("regions", "empty region");
    const int base = std::max(8, static_cast<int>(std::ceil(width / h - 1e-9)));
    cells.push_back(base << refinement);
  }
  return cells;
}

inline FdSolution fd_solve(const FdProblem& p, const std::vector<int>& cells) {
  const auto nreg = p.regions.size();
  if (nreg == 0 || p.interfaces.size() + 1 != nreg || cells.size() != nreg)
    throw ValidationError("fd", "inconsistent region / interface description");

  // Node layout.
  FdSolution sol;
  sol.cells = cells;
  std::vector<double> h(nreg);
  for (std::size_t k = 0; k < nreg; ++k) {
    const auto& reg = p.regions[k];
    h[k] = (reg.r_hi - reg.r_lo) / cells[k];
    const bool share_first = k > 0 && !p.interfaces[k - 1].split_node;
    for (int j = share_first ? 1 : 0; j <= cells[k]; ++j) {
      const double r = j == cells[k] ? reg.r_hi : reg.r_lo + j * h[k];
      sol.nodes.push_back({r, 0.0, static_cast<int>(k)});
    }
  }
  const auto N = static_cast<Eigen::Index>(sol.nodes.size());
  const double nn = static_cast<double>(p.n) * p.n;
  const auto f = [&](double r) { return p.forcing.radial_value(p.mode, r); };

  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);

  // Contribution of the half cell [r_i, r_i + side * hk / 2] of region k to row `row`,
  // whose own unknown is `self` and whose neighbour across the half cell is `nb`.
  const auto half_cell = [&](Eigen::Index row, Eigen::Index self, Eigen::Index nb, double ri,
                             std::size_t k, double side) {
    const double hk = h[k];
    const double alpha = p.regions[k].alpha;
    const double face = ri + side * 0.5 * hk;
    const double coupling = alpha * face / hk;
    trip.emplace_back(row, self, coupling);
    trip.emplace_back(row, nb, -coupling);
    if (ri > 0.0) trip.emplace_back(row, self, alpha * nn / ri * 0.5 * hk);
    // integral of f r over the half cell
    rhs(row) += ri > 0.0 ? f(ri) * ri * 0.5 * hk : f(0.0) * hk * hk / 8.0;
  };

  for (Eigen::Index i = 0; i < N; ++i) {
    const auto& node = sol.nodes[i];
    const auto k = static_cast<std::size_t>(node.region);
    const double r = node.r;

    if (i == 0) {
      if (p.n == 0) {
        half_cell(i, i, i + 1, r, k, +1.0);
      } else {
        trip.emplace_back(i, i, 1.0);  // regular at the origin
      }
      continue;
    }
    if (i == N - 1) {
      trip.emplace_back(i, i, 1.0);  // u(R_ext) = 0
      continue;
    }

    const bool at_region_end = r == p.regions[k].r_hi && k + 1 < nreg;
    const bool at_region_start = r == p.regions[k].r_lo && k > 0;

    if (at_region_end && !p.interfaces[k].split_node) {
      // shared node: left half cell in region k, right half cell in region k+1
      half_cell(i, i, i - 1, r, k, -1.0);
      half_cell(i, i, i + 1, r, k + 1, +1.0);
    } else if (at_region_end) {
      // inner copy of a split node: trace-jump row u_L - u_E = J_u
      trip.emplace_back(i, i, 1.0);
      trip.emplace_back(i, i + 1, -1.0);
      rhs(i) = p.interfaces[k].trace_jump;
    } else if (at_region_start && p.interfaces[k - 1].split_node) {
      // outer copy of a split node: combined flux balance over both half cells
      const auto& itf = p.interfaces[k - 1];
      half_cell(i, i - 1, i - 2, r, k - 1, -1.0);
      half_cell(i, i, i + 1, r, k, +1.0);
      rhs(i) += r * itf.flux_jump;
    } else {
      half_cell(i, i, i - 1, r, k, -1.0);
      half_cell(i, i, i + 1, r, k, +1.0);
    }
  }

  Eigen::SparseMatrix<double> A(N, N);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw DegenerateError("singular finite-difference system");
  const Eigen::VectorXd u = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !u.allFinite())
    throw DegenerateError("finite-difference solve failed");
  for (Eigen::Index i = 0; i < N; ++i) sol.nodes[i].u = u(i);
  return sol;
}

/// The four-region layered problem.
inline FdProblem fd_full_problem(const FourierMode& mode, double delta, const MaterialParams& m,
                                 const CircleGeometry& g, const LayerSplit& split,
                                 const ForcingSpec& forcing) {
  check_layer_fits(g, split, delta);
  const double r1 = g.R - split.p1 * delta;
  const double r2 = g.R + split.p2 * delta;
  FdProblem p;
  p.n = mode.n;
  p.mode = mode;
  p.forcing = forcing;
  p.regions = {{0.0, r1, m.alpha_i}, {r1, g.R, m.alpha_delta}, {g.R, r2, m.alpha_delta},
               {r2, g.R_ext, m.alpha_e}};
  p.interfaces = {{}, {}, {}};
  return p;
}

/// The classical two-region transmission problem (layer of zero thickness).
inline FdProblem fd_two_region_problem(const FourierMode& mode, const MaterialParams& m,
                                       const CircleGeometry& g, const ForcingSpec& forcing) {
  FdProblem p;
  p.n = mode.n;
  p.mode = mode;
  p.forcing = forcing;
  p.regions = {{0.0, g.R, m.alpha_i}, {g.R, g.R_ext, m.alpha_e}};
  p.interfaces = {{}};
  return p;
}

/// Homogeneous two-region problem with prescribed trace and flux jumps at R.
inline FdProblem fd_jump_problem(const FourierMode& mode, const MaterialParams& m,
                                 const CircleGeometry& g, double trace_jump, double flux_jump) {
  FdProblem p;
  p.n = mode.n;
  p.mode = mode;
  p.regions = {{0.0, g.R, m.alpha_i}, {g.R, g.R_ext, m.alpha_e}};
  p.interfaces = {{true, trace_jump, flux_jump}};
  return p;
}

inline FdSolution fd_oracle_solve(const FdProblem& p, double h, int refinement = 0) {
  return fd_solve(p, fd_cell_counts(p.regions, h, refinement));
}

/// Max-norm distance between oracle nodes and a piecewise analytic solution
/// given region by region (same region order as the oracle problem).
inline double fd_max_error(const FdSolution& fd, const std::vector<Region>& analytic) {
  double e = 0.0;
  for (const auto& node : fd.nodes)
    e = std::max(e, std::abs(node.u - analytic.at(node.region).eval(node.r)));
  return e;
}

}  // namespace thinlayer
