#pragma once

// Reduced model: the layer is removed and replaced by second-order transmission
// conditions on the circle r = R. At the mid-diffusion split the trace jump
// vanishes and the flux jump becomes delta * kappa * (surface Laplacian of u),
// kappa = (a_e - a_d)(a_i - a_d) / a_d.
//
// Two independent routes produce the per-mode solution:
//   * direct: the two-region chain with a Robin-like flux condition;
//   * boundary equation: lift G, then solve the scalar per-mode equation
//       (a_i S_i + a_e S_e + delta kappa n^2/R^2) omega = g_n
//     for the trace omega of U - G, using the Dirichlet-to-Neumann symbols.

#include <cmath>
#include <string>

#include "thinlayer/analytic.hpp"
#include "thinlayer/errors.hpp"
#include "thinlayer/geometry.hpp"
#include "thinlayer/radial.hpp"

namespace thinlayer {

struct DtNSymbol {
  int n = 0;
  double value = 0.0;
};

/// Interior Dirichlet-to-Neumann multiplier on the disk of radius R: n / R.
inline DtNSymbol dtn_interior(int n, double R) {
  if (n < 0) throw ValidationError("mode", "mode index must be nonnegative");
  if (!(R > 0.0)) throw ValidationError("geometry", "R must be positive");
  return {n, static_cast<double>(n) / R};
}

/// Exterior multiplier on the annulus R < r < R_ext with u(R_ext) = 0, taken
/// with the normal pointing toward the origin.
inline DtNSymbol dtn_exterior(int n, double R, double R_ext) {
  if (n < 0) throw ValidationError("mode", "mode index must be nonnegative");
  if (!(R > 0.0) || !(R < R_ext)) throw ValidationError("geometry", "require 0 < R < R_ext");
  if (n == 0) return {0, -1.0 / (R * std::log(R / R_ext))};
  if (std::isinf(R_ext)) return {n, static_cast<double>(n) / R};
  const double q = std::pow(R / R_ext, 2.0 * n);
  return {n, (n / R) * (1.0 + q) / (1.0 - q)};
}

struct BoundarySymbol {
  int n = 0;
  double lambda = 0.0;
  /// a_i S_i + a_e S_e; the resonance test is relative to this.
  double scale = 0.0;
  bool resonant = false;
};

inline constexpr double kResonanceRelTol = 1e-10;

/// Per-mode multiplier of the boundary operator:
///   a_i n/R + a_e S_e(n) + delta kappa n^2 / R^2.
inline BoundarySymbol boundary_symbol(int n, double delta, const MaterialParams& m,
                                      const CircleGeometry& g) {
  m.validate();
  g.validate();
  if (!m.is_mid_diffusion()) throw ValidationError("materials", "not mid-diffusion");
  if (!(delta >= 0.0)) throw ValidationError("delta", "layer thickness must be nonnegative");
  BoundarySymbol b;
  b.n = n;
  b.scale = m.alpha_i * dtn_interior(n, g.R).value + m.alpha_e * dtn_exterior(n, g.R, g.R_ext).value;
  const double nn = static_cast<double>(n) * n;
  b.lambda = b.scale + delta * m.kappa() * nn / (g.R * g.R);
  b.resonant = std::abs(b.lambda) < kResonanceRelTol * b.scale;
  return b;
}

struct ReducedModeSolution {
  FourierMode mode{};
  double delta = 0.0;
  Region inner;
  Region outer;
  /// Common trace at r = R.
  double trace = 0.0;

  double eval(double r, int order = 0) const {
    const std::array<Region, 2> regs{inner, outer};
    return eval_regions(regs.data(), regs.data() + 2, r, order);
  }
  double inner_normal_derivative() const { return inner.eval(inner.r_hi, 1); }
  double outer_normal_derivative() const { return outer.eval(outer.r_lo, 1); }

  TwoRegionModeSolution as_two_region() const { return {mode, inner, outer}; }
};

struct LiftResult {
  TwoRegionModeSolution G;
  /// Right-hand side of the per-mode boundary equation.
  double g = 0.0;
};

/// Lift of the source: -div(alpha grad G) = f per region, G and alpha d_r G
/// continuous at R, G(R_ext) = 0. Also assembles
///   g_n = (a_e d_r G_e - a_i d_r G_i)(R) + delta kappa (-n^2/R^2) G(R).
inline LiftResult lift_mode(const FourierMode& mode, double delta, const MaterialParams& m,
                            const CircleGeometry& g, const ForcingSpec& forcing) {
  LiftResult out;
  out.G = solve_two_region(mode, m, g, forcing, {});
  const double flux_mismatch = m.alpha_e * out.G.outer_normal_derivative() -
                               m.alpha_i * out.G.inner_normal_derivative();
  out.g = flux_mismatch +
          delta * m.kappa() * surface_laplacian_symbol(mode, g) * out.G.inner_trace();
  return out;
}

namespace detail {

inline ReducedModeSolution to_reduced(const FourierMode& mode, double delta,
                                      const TwoRegionModeSolution& s) {
  ReducedModeSolution r;
  r.mode = mode;
  r.delta = delta;
  r.inner = s.inner;
  r.outer = s.outer;
  r.trace = s.inner_trace();
  return r;
}

inline void check_reduced_inputs(const FourierMode& mode, double delta, const MaterialParams& m,
                                 const CircleGeometry& g) {
  mode.validate();
  m.validate();
  g.validate();
  if (!(delta >= 0.0)) throw ValidationError("delta", "layer thickness must be nonnegative");
}

}  // namespace detail

/// Boundary-equation route.
inline ReducedModeSolution solve_reduced_mode(const FourierMode& mode, double delta,
                                              const MaterialParams& m, const CircleGeometry& g,
                                              const ForcingSpec& forcing) {
  detail::check_reduced_inputs(mode, delta, m, g);
  const auto sym = boundary_symbol(mode.n, delta, m, g);
  if (sym.resonant) throw ResonanceError(mode.n, sym.lambda);

  const auto lift = lift_mode(mode, delta, m, g, forcing);
  const double omega = lift.g / sym.lambda;

  // Harmonic extensions of a unit trace: (r/R)^n inside; outside the combination
  // a phi_+ + b phi_- equal to 1 at R and 0 at R_ext.
  double a_out = 0.0;
  double b_out = 0.0;
  if (mode.n == 0) {
    a_out = 1.0;
    b_out = -1.0 / std::log(g.R_ext / g.R);
  } else {
    const double t2 = std::pow(g.R_ext / g.R, 2.0 * mode.n);
    a_out = 1.0 / (1.0 - t2);
    b_out = -t2 / (1.0 - t2);
  }

  TwoRegionModeSolution u = lift.G;
  u.inner.piece.a += omega;
  u.outer.piece.a += omega * a_out;
  u.outer.piece.b += omega * b_out;
  return detail::to_reduced(mode, delta, u);
}

/// Direct route: the two-region chain with u continuous at R and
///   a_i u_i' - a_e u_e' = delta kappa (-n^2/R^2) u_i(R).
inline ReducedModeSolution solve_reduced_mode_direct(const FourierMode& mode, double delta,
                                                     const MaterialParams& m,
                                                     const CircleGeometry& g,
                                                     const ForcingSpec& forcing) {
  detail::check_reduced_inputs(mode, delta, m, g);
  const auto sym = boundary_symbol(mode.n, delta, m, g);
  if (sym.resonant) throw ResonanceError(mode.n, sym.lambda);
  InterfaceCondition c;
  c.flux_value = delta * m.kappa() * surface_laplacian_symbol(mode, g);
  return detail::to_reduced(mode, delta, solve_two_region(mode, m, g, forcing, c));
}

enum class ModelSafety { mid_diffusion_only, allow_unsafe };

/// Second-order conditions for an arbitrary split:
///   u_i - u_e                 = delta A d_r u_i(R),
///   a_i u_i' - a_e u_e'       = delta B (-n^2/R^2) u_i(R).
/// Well-posedness is not guaranteed when A != 0, so such splits are refused
/// unless the caller opts in.
inline ReducedModeSolution solve_reduced_mode_general(const FourierMode& mode, double delta,
                                                      const MaterialParams& m,
                                                      const CircleGeometry& g,
                                                      const LayerSplit& split,
                                                      const ForcingSpec& forcing,
                                                      ModelSafety safety =
                                                          ModelSafety::mid_diffusion_only) {
  detail::check_reduced_inputs(mode, delta, m, g);
  split.validate();
  const double A = trace_jump_coefficient(m, split);
  if (safety == ModelSafety::mid_diffusion_only && std::abs(A) > 1e-13)
    throw ValidationError("split", "nonzero trace-jump coefficient; the general model is "
                                   "only available with the unsafe-model flag");
  InterfaceCondition c;
  c.trace_slope = delta * A;
  c.flux_value = delta * flux_jump_coefficient(m, split) * surface_laplacian_symbol(mode, g);
  const auto s = solve_two_region(mode, m, g, forcing, c);
  auto out = detail::to_reduced(mode, delta, s);
  out.trace = s.inner_trace();
  return out;
}

/// Layer reconstruction from the reduced solution:
///   side 1: u_i(R) + delta p1 [ (s+1) a_i/a_d - 1 ] d_r u_i(R),
///   side 2: u_e(R) + delta p2 [ (s-1) a_e/a_d + 1 ] d_r u_e(R).
inline LayerProfile reconstruct_layer_ap(int side, double delta, const MaterialParams& m,
                                         const LayerSplit& split,
                                         const ReducedModeSolution& reduced) {
  if (side == 1) {
    const double ratio = m.alpha_i / m.alpha_delta;
    const double dn = reduced.inner_normal_derivative();
    const double w = delta * split.p1;
    return {1, reduced.inner.eval(reduced.inner.r_hi) + w * (ratio - 1.0) * dn, w * ratio * dn};
  }
  if (side == 2) {
    const double ratio = m.alpha_e / m.alpha_delta;
    const double dn = reduced.outer_normal_derivative();
    const double w = delta * split.p2;
    return {2, reduced.outer.eval(reduced.outer.r_lo) + w * (1.0 - ratio) * dn, w * ratio * dn};
  }
  throw ValidationError("side", "side must be 1 or 2");
}

/// Terms of the expansion U_ap = sum_j delta^j w_j: w_0 solves the classical
/// transmission problem with the source; for j >= 1, w_j is harmonic per region,
/// continuous at R, with a_i w_i' - a_e w_e' = kappa (-n^2/R^2) w_{j-1}(R).
inline TwoRegionModeSolution solve_w_recurrence(int j, const FourierMode& mode,
                                                const MaterialParams& m, const CircleGeometry& g,
                                                const ForcingSpec& forcing,
                                                const TwoRegionModeSolution* previous) {
  if (j < 0 || j > 2) throw ValidationError("j", "recurrence index must be 0, 1 or 2");
  if (j == 0) return solve_u0_mode(mode, m, g, forcing);
  if (previous == nullptr || !(previous->mode == mode))
    throw ValidationError("previous", "w_{j-1} for the same mode is required");
  InterfaceCondition c;
  c.flux_jump = m.kappa() * surface_laplacian_symbol(mode, g) * previous->inner_trace();
  return solve_two_region(mode, m, g, ForcingSpec{}, c);
}

}  // namespace thinlayer
