#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "thinlayer/errors.hpp"

namespace thinlayer {

/// Composite Gauss-Legendre rule: `segments` equal sub-intervals, `points`
/// nodes each.
class QuadratureRule {
public:
  explicit QuadratureRule(int points = 16, int segments = 8) : points_(points), segments_(segments) {
    if (points < 8) throw ValidationError("quadrature.points", "need at least 8 points");
    if (segments < 1) throw ValidationError("quadrature.segments", "need at least one segment");
    build_nodes();
    self_test();
  }

  int points() const noexcept { return points_; }
  int segments() const noexcept { return segments_; }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  template <class F>
  double integrate(F&& f, double a, double b) const {
    if (!(b > a)) throw ValidationError("interval", "empty integration interval");
    const double h = (b - a) / segments_;
    double total = 0.0;
    for (int s = 0; s < segments_; ++s) {
      const double lo = a + s * h;
      const double mid = lo + 0.5 * h;
      double part = 0.0;
      for (std::size_t k = 0; k < nodes_.size(); ++k) part += weights_[k] * f(mid + 0.5 * h * nodes_[k]);
      total += 0.5 * h * part;
    }
    return total;
  }

private:
  // Newton iteration on P_n from the Chebyshev-like initial guesses.
  void build_nodes() {
    const int n = points_;
    nodes_.assign(n, 0.0);
    weights_.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      // recompute derivative at the converged node
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes_[i] = -x;
      nodes_[n - 1 - i] = x;
      weights_[i] = w;
      weights_[n - 1 - i] = w;
    }
  }

  // Monomials x^k on [0, 1] up to degree 2n - 1 on a single panel.
  void self_test() const {
    for (int k = 0; k <= 2 * points_ - 1; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < nodes_.size(); ++j)
        s += 0.5 * weights_[j] * std::pow(0.5 + 0.5 * nodes_[j], k);
      const double exact = 1.0 / (k + 1);
      if (std::abs(s - exact) > 1e-13 * exact)
        throw Error("Gauss-Legendre self-test failed at degree " + std::to_string(k));
    }
  }

  int points_;
  int segments_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace thinlayer
