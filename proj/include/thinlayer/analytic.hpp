#pragma once

// Exact per-mode solutions of the four-region layered problem and of the
// two-region problems solved by the first two asymptotic terms.
//
// All per-mode problems share one shape: a chain of concentric regions,
// each with constant conductivity, glued by linear interface conditions and
// closed by u(R_ext) = 0. `solve_radial_chain` assembles and solves that
// system; the public solvers only describe their chain.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "thinlayer/dense_solve.hpp"
#include "thinlayer/errors.hpp"
#include "thinlayer/geometry.hpp"
#include "thinlayer/radial.hpp"

namespace thinlayer {

/// Interface conditions at the outer edge r = rho of region k, written with
/// L = region k and E = region k+1:
///
///   u_L(rho) - trace_slope * u_L'(rho) - u_E(rho)                  = trace_jump
///   alpha_L u_L'(rho) - flux_value * u_L(rho) - alpha_E u_E'(rho)   = flux_jump
///
/// All zeros give classical continuity of the trace and of the flux.
struct InterfaceCondition {
  double trace_jump = 0.0;
  double flux_jump = 0.0;
  double trace_slope = 0.0;
  double flux_value = 0.0;
};

struct RegionSpec {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double alpha = 1.0;
};

/// Solves a chain of regions for one mode. The first region must start at
/// r = 0 (regular basis only); the last one carries the Dirichlet condition.
inline std::vector<Region> solve_radial_chain(const FourierMode& mode,
                                              const std::vector<RegionSpec>& regions,
                                              const std::vector<InterfaceCondition>& interfaces,
                                              const ForcingSpec& forcing, double scale) {
  const auto nreg = regions.size();
  if (nreg == 0 || interfaces.size() + 1 != nreg)
    throw ValidationError("chain", "need one interface between consecutive regions");
  if (regions.front().r_lo != 0.0)
    throw ValidationError("chain", "first region must start at the origin");

  std::vector<Region> out(nreg);
  for (std::size_t k = 0; k < nreg; ++k) {
    out[k].r_lo = regions[k].r_lo;
    out[k].r_hi = regions[k].r_hi;
    out[k].alpha = regions[k].alpha;
    out[k].piece.n = mode.n;
    out[k].piece.scale = scale;
    out[k].piece.particular = particular_for_mode(forcing, mode, regions[k].alpha);
  }

  // Unknown layout: a_0, then (a_k, b_k) for k >= 1.
  const auto col_a = [](std::size_t k) { return k == 0 ? 0 : static_cast<Eigen::Index>(2 * k - 1); };
  const auto col_b = [](std::size_t k) { return static_cast<Eigen::Index>(2 * k); };
  const Eigen::Index nunk = static_cast<Eigen::Index>(2 * nreg - 1);

  Mat A = Mat::Zero(nunk, nunk);
  Vec rhs = Vec::Zero(nunk);
  const int n = mode.n;

  // Adds weight * (order-th derivative of region k's unknown basis at r) to row i,
  // and moves the particular contribution to the right-hand side.
  const auto put = [&](Eigen::Index i, std::size_t k, double r, int order, double weight) {
    A(i, col_a(k)) += weight * radial_basis(n, scale, 0, r, order);
    if (k > 0) A(i, col_b(k)) += weight * radial_basis(n, scale, 1, r, order);
    RadialPiece part;
    part.n = n;
    part.particular = out[k].piece.particular;
    rhs(i) -= weight * part.eval(r, order);
  };

  Eigen::Index row = 0;
  for (std::size_t k = 0; k + 1 < nreg; ++k) {
    const double rho = regions[k].r_hi;
    const auto& c = interfaces[k];
    const double aL = regions[k].alpha;
    const double aE = regions[k + 1].alpha;

    rhs(row) += c.trace_jump;
    put(row, k, rho, 0, 1.0);
    if (c.trace_slope != 0.0) put(row, k, rho, 1, -c.trace_slope);
    put(row, k + 1, rho, 0, -1.0);
    ++row;

    rhs(row) += c.flux_jump;
    put(row, k, rho, 1, aL);
    if (c.flux_value != 0.0) put(row, k, rho, 0, -c.flux_value);
    put(row, k + 1, rho, 1, -aE);
    ++row;
  }
  put(row, nreg - 1, regions.back().r_hi, 0, 1.0);

  const Vec x = solve_interface_system(std::move(A), std::move(rhs));
  for (std::size_t k = 0; k < nreg; ++k) {
    out[k].piece.a = x(col_a(k));
    if (k > 0) out[k].piece.b = x(col_b(k));
  }
  return out;
}

/// Value or derivative of a piecewise solution; at a shared break radius the
/// inner region wins.
inline double eval_regions(const Region* begin, const Region* end, double r, int order) {
  if (order != 0 && order != 1) throw ValidationError("order", "derivative order must be 0 or 1");
  for (const Region* it = begin; it != end; ++it)
    if (it->contains(r)) return it->eval(r, order);
  throw ValidationError("r", "radius " + std::to_string(r) + " outside the solution domain");
}

struct FullModeSolution {
  FourierMode mode{};
  double delta = 0.0;
  /// inner, layer 1, layer 2, outer
  std::array<Region, 4> regions{};

  const Region& inner() const { return regions[0]; }
  const Region& layer(int side) const { return regions[side == 1 ? 1 : 2]; }
  const Region& outer() const { return regions[3]; }

  double eval(double r, int order = 0) const {
    return eval_regions(regions.data(), regions.data() + regions.size(), r, order);
  }

  double max_coefficient() const {
    double m = 0.0;
    for (const auto& reg : regions) m = std::max(m, reg.piece.max_coefficient());
    return m;
  }
};

struct TwoRegionModeSolution {
  FourierMode mode{};
  Region inner;
  Region outer;

  double eval(double r, int order = 0) const {
    const std::array<Region, 2> regs{inner, outer};
    return eval_regions(regs.data(), regs.data() + 2, r, order);
  }

  /// Traces and normal derivatives at the interface r = R, from each side.
  double inner_trace() const { return inner.eval(inner.r_hi, 0); }
  double outer_trace() const { return outer.eval(outer.r_lo, 0); }
  double inner_normal_derivative() const { return inner.eval(inner.r_hi, 1); }
  double outer_normal_derivative() const { return outer.eval(outer.r_lo, 1); }

  double max_coefficient() const {
    return std::max(inner.piece.max_coefficient(), outer.piece.max_coefficient());
  }
};

inline double eval_mode_solution(const FullModeSolution& s, double r, int order) {
  return s.eval(r, order);
}
inline double eval_mode_solution(const TwoRegionModeSolution& s, double r, int order) {
  return s.eval(r, order);
}
inline double eval_mode_solution(const RadialPiece& p, double r, int order) {
  if (order != 0 && order != 1) throw ValidationError("order", "derivative order must be 0 or 1");
  return p.eval(r, order);
}

inline TwoRegionModeSolution make_two_region(const FourierMode& mode, std::vector<Region> regs) {
  TwoRegionModeSolution s;
  s.mode = mode;
  s.inner = std::move(regs.at(0));
  s.outer = std::move(regs.at(1));
  return s;
}

/// Two-region problem on [0, R] u [R, R_ext] with conductivities (alpha_i, alpha_e).
inline TwoRegionModeSolution solve_two_region(const FourierMode& mode, const MaterialParams& m,
                                              const CircleGeometry& g, const ForcingSpec& forcing,
                                              const InterfaceCondition& at_gamma) {
  mode.validate();
  g.validate();
  m.validate();
  return make_two_region(mode, solve_radial_chain(mode,
                                                  {{0.0, g.R, m.alpha_i}, {g.R, g.R_ext, m.alpha_e}},
                                                  {at_gamma}, forcing, g.R));
}

/// Exact solution of the layered problem for one mode: four regions with
/// conductivities (alpha_i, alpha_delta, alpha_delta, alpha_e), continuity of
/// the trace and of the flux at every break radius, u(R_ext) = 0.
inline FullModeSolution solve_full_mode(const FourierMode& mode, double delta,
                                        const MaterialParams& m, const CircleGeometry& g,
                                        const LayerSplit& split, const ForcingSpec& forcing) {
  mode.validate();
  m.validate();
  g.validate();
  split.validate();
  if (!(delta > 0.0)) throw ValidationError("delta", "layer thickness must be positive");
  check_layer_fits(g, split, delta);
  const double r1 = g.R - split.p1 * delta;
  const double r2 = g.R + split.p2 * delta;
  const auto regs = solve_radial_chain(
      mode,
      {{0.0, r1, m.alpha_i}, {r1, g.R, m.alpha_delta}, {g.R, r2, m.alpha_delta},
       {r2, g.R_ext, m.alpha_e}},
      {{}, {}, {}}, forcing, g.R);
  FullModeSolution s;
  s.mode = mode;
  s.delta = delta;
  for (std::size_t k = 0; k < 4; ++k) s.regions[k] = regs[k];
  return s;
}

/// Residuals of the seven conditions of a full solution, each divided by
/// (1 + largest coefficient magnitude). Order: trace and flux at R - p1 delta,
/// trace and derivative at R, trace and flux at R + p2 delta, Dirichlet at R_ext.
inline std::array<double, 7> full_mode_residuals(const FullModeSolution& s) {
  const auto& r = s.regions;
  const double scale = 1.0 + s.max_coefficient();
  std::array<double, 7> res{};
  for (std::size_t k = 0; k < 3; ++k) {
    const double rho = r[k].r_hi;
    res[2 * k] = std::abs(r[k].eval(rho, 0) - r[k + 1].eval(rho, 0)) / scale;
    res[2 * k + 1] = std::abs(r[k].flux(rho) - r[k + 1].flux(rho)) / scale;
  }
  res[6] = std::abs(r[3].eval(r[3].r_hi, 0)) / scale;
  return res;
}

/// Order-zero term: classical transmission problem with (alpha_i, alpha_e).
inline TwoRegionModeSolution solve_u0_mode(const FourierMode& mode, const MaterialParams& m,
                                           const CircleGeometry& g, const ForcingSpec& forcing) {
  return solve_two_region(mode, m, g, forcing, {});
}

/// Order-one term: homogeneous two-region problem with
///   u_i1 - u_e1             = A d_r u_i0(R),
///   alpha_i u_i1' - alpha_e u_e1' = B (-n^2/R^2) u_i0(R),
/// with A = trace_jump_coefficient and B = flux_jump_coefficient.
inline TwoRegionModeSolution solve_u1_mode(const FourierMode& mode, const MaterialParams& m,
                                           const CircleGeometry& g, const LayerSplit& split,
                                           const TwoRegionModeSolution& u0) {
  split.validate();
  if (!(u0.mode == mode)) throw ValidationError("u0", "order-zero term solved for another mode");
  InterfaceCondition c;
  c.trace_jump = trace_jump_coefficient(m, split) * u0.inner_normal_derivative();
  c.flux_jump =
      flux_jump_coefficient(m, split) * surface_laplacian_symbol(mode, g) * u0.inner_trace();
  return solve_two_region(mode, m, g, ForcingSpec{}, c);
}

/// Affine function of the scaled layer coordinate s: c0 + c1 s.
struct LayerProfile {
  int side = 1;
  double c0 = 0.0;
  double c1 = 0.0;

  double at(double s) const { return c0 + c1 * s; }

  /// Value (order 0) or r-derivative (order 1) at radius r inside a layer of
  /// thickness delta, where s = (r - R) / (delta p_side).
  double eval_radial(double r, int order, double R, double delta, double p) const {
    const double width = delta * p;
    return order == 0 ? at((r - R) / width) : c1 / width;
  }
};

/// Order-zero layer term: the common trace u0(R), constant across the layer.
inline LayerProfile layer_profile_order0(int side, const TwoRegionModeSolution& u0) {
  return {side, side == 1 ? u0.inner_trace() : u0.outer_trace(), 0.0};
}

/// Order-one layer term, integrated from the flux relations in the layer:
///   side 1: u_i1(R) + p1 [ (s+1) a_i/a_d - 1 ] d_r u_i0(R),
///   side 2: u_e1(R) + p2 [ (s-1) a_e/a_d + 1 ] d_r u_e0(R).
inline LayerProfile layer_profile_order1(int side, const MaterialParams& m,
                                         const LayerSplit& split,
                                         const TwoRegionModeSolution& u0,
                                         const TwoRegionModeSolution& u1) {
  if (side == 1) {
    const double ratio = m.alpha_i / m.alpha_delta;
    const double dn = u0.inner_normal_derivative();
    return {1, u1.inner_trace() + split.p1 * (ratio - 1.0) * dn, split.p1 * ratio * dn};
  }
  if (side == 2) {
    const double ratio = m.alpha_e / m.alpha_delta;
    const double dn = u0.outer_normal_derivative();
    return {2, u1.outer_trace() + split.p2 * (1.0 - ratio) * dn, split.p2 * ratio * dn};
  }
  throw ValidationError("side", "side must be 1 or 2");
}

}  // namespace thinlayer
