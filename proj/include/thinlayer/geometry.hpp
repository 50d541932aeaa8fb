#pragma once

// Concentric-circle geometry, material parameters, Fourier-mode bookkeeping
// and the layer split (p1, p2) of a thin annulus around the circle r = R.
//
//      0 ........ R - p1*delta ..... R ..... R + p2*delta ........ R_ext
//        inner        layer 1            layer 2           outer
//       alpha_i       alpha_delta        alpha_delta       alpha_e

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <string_view>

#include "thinlayer/errors.hpp"

namespace thinlayer {

struct MaterialParams {
  double alpha_i = 1.0;
  double alpha_delta = 1.0;
  double alpha_e = 1.0;

  void validate() const {
    if (!(alpha_i > 0.0) || !(alpha_delta > 0.0) || !(alpha_e > 0.0))
      throw ValidationError("materials", "conductivities must be strictly positive");
  }

  /// Strict ordering alpha_i < alpha_delta < alpha_e (or reversed), with a
  /// relative guard so that alpha_delta is not numerically equal to either end.
  bool is_mid_diffusion(double rel_guard = 1e-12) const {
    const double lo = std::min(alpha_i, alpha_e);
    const double hi = std::max(alpha_i, alpha_e);
    const double guard = rel_guard * hi;
    return alpha_delta - lo > guard && hi - alpha_delta > guard;
  }

  /// (alpha_e - alpha_delta)(alpha_i - alpha_delta) / alpha_delta.
  double kappa() const {
    return (alpha_e - alpha_delta) * (alpha_i - alpha_delta) / alpha_delta;
  }
};

struct CircleGeometry {
  double R = 1.0;
  double R_ext = 2.0;

  void validate() const {
    if (!(R > 0.0) || !(R_ext > R))
      throw ValidationError("geometry", "require 0 < R < R_ext");
  }
};

struct LayerSplit {
  double p1 = 0.5;
  double p2 = 0.5;

  static LayerSplit from_p1(double p1) { return {p1, 1.0 - p1}; }

  void validate() const {
    if (!(p1 > 0.0 && p1 < 1.0) || !(p2 > 0.0 && p2 < 1.0))
      throw ValidationError("split", "p1 and p2 must lie in (0, 1)");
    if (std::abs(p1 + p2 - 1.0) > 1e-14)
      throw ValidationError("split", "p1 + p2 must equal 1");
  }

  bool in_band(double p_min) const {
    return p1 >= p_min && p1 <= 1.0 - p_min && p2 >= p_min && p2 <= 1.0 - p_min;
  }

  double fraction(int side) const { return side == 1 ? p1 : p2; }
};

/// Coefficient of the normal derivative in the order-one trace jump:
/// p1 (1 - a_i/a_d) + p2 (a_i/a_e - a_i/a_d). Zero at the mid-diffusion split.
inline double trace_jump_coefficient(const MaterialParams& m, const LayerSplit& s) {
  return s.p1 * (1.0 - m.alpha_i / m.alpha_delta) +
         s.p2 * (m.alpha_i / m.alpha_e - m.alpha_i / m.alpha_delta);
}

/// Coefficient of the surface Laplacian in the order-one flux jump:
/// p1 (a_d - a_i) + p2 (a_d - a_e). Equals kappa at the mid-diffusion split.
inline double flux_jump_coefficient(const MaterialParams& m, const LayerSplit& s) {
  return s.p1 * (m.alpha_delta - m.alpha_i) + s.p2 * (m.alpha_delta - m.alpha_e);
}

enum class Parity { cosine, sine };

inline std::string_view to_string(Parity p) { return p == Parity::cosine ? "cos" : "sin"; }

struct FourierMode {
  int n = 0;
  Parity parity = Parity::cosine;

  void validate() const {
    if (n < 0) throw ValidationError("mode", "mode index must be nonnegative");
    if (n == 0 && parity == Parity::sine)
      throw ValidationError("mode", "sine mode 0 is identically zero");
  }

  friend bool operator==(const FourierMode&, const FourierMode&) = default;
  friend auto operator<=>(const FourierMode&, const FourierMode&) = default;
};

using WarningSink = std::function<void(std::string_view)>;

/// Default band for "p1, p2 not too close to 0 or 1".
inline constexpr double kDefaultSplitPMin = 0.05;

/// The split that cancels the order-one trace jump:
///   p1 = a_i (a_e - a_d) / (a_d (a_e - a_i)),
///   p2 = a_e (a_d - a_i) / (a_d (a_e - a_i)).
/// A split outside [p_min, 1 - p_min] is reported through `warn` but accepted.
inline LayerSplit mid_diffusion_split(const MaterialParams& m, double p_min = kDefaultSplitPMin,
                                      const WarningSink& warn = {}) {
  m.validate();
  if (!m.is_mid_diffusion())
    throw ValidationError("materials", "not mid-diffusion: need alpha_i < alpha_delta < alpha_e "
                                       "or alpha_e < alpha_delta < alpha_i");
  const double denom = m.alpha_delta * (m.alpha_e - m.alpha_i);
  const double p1 = m.alpha_i * (m.alpha_e - m.alpha_delta) / denom;
  const double p2 = m.alpha_e * (m.alpha_delta - m.alpha_i) / denom;
  // Take the smaller fraction from its formula and close the sum exactly.
  LayerSplit s = p1 <= p2 ? LayerSplit{p1, 1.0 - p1} : LayerSplit{1.0 - p2, p2};
  if (warn && !s.in_band(p_min))
    warn("mid-diffusion split p1=" + std::to_string(s.p1) + " lies outside [" +
         std::to_string(p_min) + ", " + std::to_string(1.0 - p_min) + "]");
  return s;
}

/// Per-mode symbol of the Laplace-Beltrami operator on the circle of radius R.
inline double surface_laplacian_symbol(const FourierMode& mode, const CircleGeometry& g) {
  const double n = mode.n;
  return -(n * n) / (g.R * g.R);
}

/// Radius of the point with scaled normal coordinate s on side `side` of the
/// layer: s in [-1, 0] for side 1, s in [0, 1] for side 2.
inline double layer_radius(const CircleGeometry& g, const LayerSplit& split, double delta,
                           int side, double s) {
  if (!(delta > 0.0)) throw ValidationError("delta", "layer thickness must be positive");
  if (side == 1) {
    if (s < -1.0 || s > 0.0) throw ValidationError("s", "side-1 coordinate must lie in [-1, 0]");
  } else if (side == 2) {
    if (s < 0.0 || s > 1.0) throw ValidationError("s", "side-2 coordinate must lie in [0, 1]");
  } else {
    throw ValidationError("side", "side must be 1 or 2");
  }
  return g.R + delta * split.fraction(side) * s;
}

/// Checks that the layer of thickness delta fits strictly inside (0, R_ext).
inline void check_layer_fits(const CircleGeometry& g, const LayerSplit& s, double delta) {
  if (!(delta >= 0.0)) throw ValidationError("delta", "layer thickness must be nonnegative");
  if (!(g.R - s.p1 * delta > 0.0) || !(g.R + s.p2 * delta < g.R_ext))
    throw ValidationError("delta", "layer of thickness " + std::to_string(delta) +
                                       " does not fit inside (0, R_ext)");
}

}  // namespace thinlayer
