#pragma once

// Closed-form radial factors for one Fourier mode.
//
// In a region of constant conductivity alpha, the mode-n part u(r) cos(n t)
// of a solution of -div(alpha grad u) = f satisfies
//
//     -alpha ( (1/r)(r u')' - n^2 u / r^2 ) = f_n(r).
//
// We write u = a phi_+(r) + b phi_-(r) + sum_k c_k r^{k}, with
//     phi_+ = (r/rho)^n,  phi_- = (r/rho)^{-n}   for n >= 1,
//     phi_+ = 1,          phi_- = log(r/rho)     for n = 0,
// where rho is a per-piece scale radius that equilibrates the interface systems.

#include <cmath>
#include <map>
#include <vector>

#include "thinlayer/errors.hpp"
#include "thinlayer/geometry.hpp"

namespace thinlayer {

struct ForcingTerm {
  double c = 0.0;
  int m = 0;
  FourierMode mode{};
};

/// Finite sum of separable sources c r^m {cos, sin}(n t). Resonant powers
/// m + 2 = n are rejected: their particular solution needs an r^n log r term.
class ForcingSpec {
public:
  ForcingSpec() = default;
  ForcingSpec(std::initializer_list<ForcingTerm> terms) {
    for (const auto& t : terms) add(t);
  }

  ForcingSpec& add(const ForcingTerm& t) {
    t.mode.validate();
    if (t.m < 0) throw ValidationError("forcing", "radial power m must be nonnegative");
    if (t.m + 2 == t.mode.n)
      throw ValidationError("forcing", "resonant forcing term (m + 2 = n = " +
                                           std::to_string(t.mode.n) + ")");
    terms_.push_back(t);
    return *this;
  }

  const std::vector<ForcingTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  std::vector<ForcingTerm> terms_for(const FourierMode& mode) const {
    std::vector<ForcingTerm> out;
    for (const auto& t : terms_)
      if (t.mode == mode) out.push_back(t);
    return out;
  }

  /// Radial forcing profile f_n(r) for one mode.
  double radial_value(const FourierMode& mode, double r) const {
    double v = 0.0;
    for (const auto& t : terms_)
      if (t.mode == mode) v += t.c * std::pow(r, t.m);
    return v;
  }

  ForcingSpec scaled(double factor) const {
    ForcingSpec out;
    for (auto t : terms_) {
      t.c *= factor;
      out.terms_.push_back(t);
    }
    return out;
  }

private:
  std::vector<ForcingTerm> terms_;
};

/// coef * r^power
struct PowerTerm {
  double coef = 0.0;
  int power = 0;
};

/// Particular solution of the radial equation for a single source term:
/// -c / (alpha ((m+2)^2 - n^2)) r^{m+2}.
inline PowerTerm particular_radial(const ForcingTerm& term, double alpha) {
  const int k = term.m + 2;
  const int n = term.mode.n;
  if (k == n) throw ValidationError("forcing", "resonant forcing term");
  if (!(alpha > 0.0)) throw ValidationError("alpha", "conductivity must be positive");
  return {-term.c / (alpha * static_cast<double>(k * k - n * n)), k};
}

/// Particular part of one mode in a region of conductivity alpha; terms with
/// equal powers are merged in increasing power order.
inline std::vector<PowerTerm> particular_for_mode(const ForcingSpec& forcing,
                                                  const FourierMode& mode, double alpha) {
  std::map<int, double> by_power;
  for (const auto& t : forcing.terms_for(mode)) {
    const auto p = particular_radial(t, alpha);
    by_power[p.power] += p.coef;
  }
  std::vector<PowerTerm> out;
  for (const auto& [k, c] : by_power)
    if (c != 0.0) out.push_back({c, k});
  return out;
}

/// Homogeneous radial basis: which = 0 gives phi_+, which = 1 gives phi_-.
/// `order` selects the value (0) or the r-derivative (1).
inline double radial_basis(int n, double scale, int which, double r, int order) {
  if (n == 0) {
    if (which == 0) return order == 0 ? 1.0 : 0.0;
    return order == 0 ? std::log(r / scale) : 1.0 / r;
  }
  const double e = which == 0 ? n : -n;
  // derivative as e (r/scale)^(e-1) / scale so that r = 0 stays finite for e >= 1
  return order == 0 ? std::pow(r / scale, e) : e * std::pow(r / scale, e - 1.0) / scale;
}

struct RadialPiece {
  int n = 0;
  double scale = 1.0;
  double a = 0.0;
  double b = 0.0;
  std::vector<PowerTerm> particular;

  double eval(double r, int order = 0) const {
    double v = 0.0;
    if (a != 0.0) v += a * radial_basis(n, scale, 0, r, order);
    if (b != 0.0) v += b * radial_basis(n, scale, 1, r, order);
    for (const auto& p : particular) {
      if (order == 0)
        v += p.coef * std::pow(r, p.power);
      else if (p.power != 0)
        v += p.coef * p.power * std::pow(r, p.power - 1);
    }
    return v;
  }

  double max_coefficient() const {
    double m = std::max(std::abs(a), std::abs(b));
    for (const auto& p : particular) m = std::max(m, std::abs(p.coef));
    return m;
  }

  bool is_zero() const { return max_coefficient() == 0.0; }
};

/// A radial interval with constant conductivity and the piece that lives on it.
struct Region {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double alpha = 1.0;
  RadialPiece piece;

  bool contains(double r) const { return r >= r_lo && r <= r_hi; }
  double eval(double r, int order = 0) const { return piece.eval(r, order); }
  double flux(double r) const { return alpha * piece.eval(r, 1); }
};

}  // namespace thinlayer
