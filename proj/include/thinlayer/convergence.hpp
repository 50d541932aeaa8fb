#pragma once

// H1 error measurement on the delta-dependent subdomains and log-log slope
// fitting for the convergence studies.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thinlayer/analytic.hpp"
#include "thinlayer/errors.hpp"
#include "thinlayer/geometry.hpp"
#include "thinlayer/quadrature.hpp"
#include "thinlayer/reduced.hpp"

namespace thinlayer {

/// Angular factor of ||cos(n t)||^2 over a full turn.
inline double angular_factor(int n) { return n == 0 ? 2.0 * std::numbers::pi : std::numbers::pi; }

/// Squared H1 norm over the annulus r in [a, b] of u(r) {cos,sin}(n t), where
/// `fn(r)` returns the pair (u(r), u'(r)).
template <class F>
double h1_norm_sq_mode(double a, double b, int n, F&& fn, const QuadratureRule& rule) {
  if (!(b > a) || a < 0.0) throw ValidationError("interval", "empty radial interval");
  const double nn = static_cast<double>(n) * n;
  const double integral = rule.integrate(
      [&](double r) {
        const auto [u, du] = fn(r);
        return (du * du + nn / (r * r) * u * u + u * u) * r;
      },
      a, b);
  return angular_factor(n) * integral;
}

template <class F>
double h1_norm_mode(double a, double b, int n, F&& fn, const QuadratureRule& rule) {
  return std::sqrt(h1_norm_sq_mode(a, b, n, std::forward<F>(fn), rule));
}

/// Everything a convergence study needs besides delta.
struct Scenario {
  CircleGeometry geometry{};
  MaterialParams materials{};
  LayerSplit split{};
  ForcingSpec forcing;
  std::vector<FourierMode> modes;
  QuadratureRule rule{};
};

/// How the two layer errors combine in the composite.
enum class LayerGrouping {
  /// delta^{1/2} ||e||_{H1(whole layer)}
  whole_layer,
  /// delta^{1/2} (||e||_{H1(side 1)} + ||e||_{H1(side 2)})
  per_side,
};

struct ModeErrors {
  FourierMode mode{};
  double err_i = 0.0;
  double err_layer1 = 0.0;
  double err_layer2 = 0.0;
  double err_e = 0.0;
};

struct ErrorRecord {
  double delta = 0.0;
  LayerGrouping grouping = LayerGrouping::whole_layer;
  std::vector<ModeErrors> per_mode;
  // totals over all modes (root sum of squares: modes are H1-orthogonal)
  double err_i = 0.0;
  double err_layer1 = 0.0;
  double err_layer2 = 0.0;
  double err_e = 0.0;
  /// max relative disagreement between the two reduced-model routes (reduced
  /// studies only)
  double route_gap = 0.0;

  double layer_weighted(const ModeErrors& m) const { return weighted(m.err_layer1, m.err_layer2); }
  double layer_weighted() const { return weighted(err_layer1, err_layer2); }
  double composite(const ModeErrors& m) const { return m.err_i + layer_weighted(m) + m.err_e; }
  double composite() const { return err_i + layer_weighted() + err_e; }

  void finalize_totals() {
    double si = 0.0, s1 = 0.0, s2 = 0.0, se = 0.0;
    for (const auto& m : per_mode) {
      si += m.err_i * m.err_i;
      s1 += m.err_layer1 * m.err_layer1;
      s2 += m.err_layer2 * m.err_layer2;
      se += m.err_e * m.err_e;
    }
    err_i = std::sqrt(si);
    err_layer1 = std::sqrt(s1);
    err_layer2 = std::sqrt(s2);
    err_e = std::sqrt(se);
  }

private:
  double weighted(double l1, double l2) const {
    const double w = std::sqrt(delta);
    return grouping == LayerGrouping::whole_layer ? w * std::hypot(l1, l2) : w * (l1 + l2);
  }
};

namespace detail {

inline void check_scenario(const Scenario& s) {
  s.geometry.validate();
  s.materials.validate();
  s.split.validate();
  if (s.modes.empty()) throw ValidationError("modes", "mode set is empty");
  for (const auto& m : s.modes) m.validate();
}

/// H1 error of a region piece against a comparator on [a, b].
template <class Cmp>
double region_error(double a, double b, int n, const Region& exact, Cmp&& cmp,
                    const QuadratureRule& rule) {
  return h1_norm_mode(
      a, b, n,
      [&](double r) {
        const auto [v, dv] = cmp(r);
        return std::pair{exact.eval(r, 0) - v, exact.eval(r, 1) - dv};
      },
      rule);
}

inline auto piece_sum(const Region& base, const Region* corr, double delta) {
  return [&base, corr, delta](double r) {
    double v = base.eval(r, 0);
    double dv = base.eval(r, 1);
    if (corr != nullptr) {
      v += delta * corr->eval(r, 0);
      dv += delta * corr->eval(r, 1);
    }
    return std::pair{v, dv};
  };
}

inline auto layer_cmp(const LayerProfile& prof, double R, double delta, double p) {
  return [prof, R, delta, p](double r) {
    return std::pair{prof.eval_radial(r, 0, R, delta, p), prof.eval_radial(r, 1, R, delta, p)};
  };
}

}  // namespace detail

/// Error of the truncated expansion u^(order), order in {0, 1}, against the
/// exact layered solution on the delta-dependent subdomains.
inline ErrorRecord theorem2_errors(int order, double delta, const Scenario& sc) {
  if (order != 0 && order != 1) throw ValidationError("order", "expansion order must be 0 or 1");
  detail::check_scenario(sc);
  const auto& g = sc.geometry;
  const auto& sp = sc.split;
  const double r1 = g.R - sp.p1 * delta;
  const double r2 = g.R + sp.p2 * delta;

  ErrorRecord rec;
  rec.delta = delta;
  rec.grouping = LayerGrouping::whole_layer;
  for (const auto& mode : sc.modes) {
    const auto full = solve_full_mode(mode, delta, sc.materials, g, sp, sc.forcing);
    const auto u0 = solve_u0_mode(mode, sc.materials, g, sc.forcing);
    std::optional<TwoRegionModeSolution> u1;
    if (order == 1) u1 = solve_u1_mode(mode, sc.materials, g, sp, u0);

    ModeErrors e;
    e.mode = mode;
    e.err_i = detail::region_error(0.0, r1, mode.n, full.inner(),
                                   detail::piece_sum(u0.inner, u1 ? &u1->inner : nullptr, delta),
                                   sc.rule);
    e.err_e = detail::region_error(r2, g.R_ext, mode.n, full.outer(),
                                   detail::piece_sum(u0.outer, u1 ? &u1->outer : nullptr, delta),
                                   sc.rule);
    for (int side = 1; side <= 2; ++side) {
      LayerProfile prof = layer_profile_order0(side, u0);
      if (u1) {
        const auto p1 = layer_profile_order1(side, sc.materials, sp, u0, *u1);
        prof.c0 += delta * p1.c0;
        prof.c1 += delta * p1.c1;
      }
      const double a = side == 1 ? r1 : g.R;
      const double b = side == 1 ? g.R : r2;
      const double err = detail::region_error(a, b, mode.n, full.layer(side),
                                              detail::layer_cmp(prof, g.R, delta, sp.fraction(side)),
                                              sc.rule);
      (side == 1 ? e.err_layer1 : e.err_layer2) = err;
    }
    rec.per_mode.push_back(e);
  }
  rec.finalize_totals();
  return rec;
}

/// Relative disagreement between the boundary-equation and direct routes.
inline double reduced_route_gap(const ReducedModeSolution& a, const ReducedModeSolution& b) {
  const double scale = std::max({1.0, std::abs(a.trace), a.as_two_region().max_coefficient()});
  double gap = std::abs(a.trace - b.trace);
  gap = std::max(gap, std::abs(a.inner.piece.a - b.inner.piece.a));
  gap = std::max(gap, std::abs(a.outer.piece.a - b.outer.piece.a));
  gap = std::max(gap, std::abs(a.outer.piece.b - b.outer.piece.b));
  return gap / scale;
}

/// Error of the reduced model (with reconstructed layer) against the exact
/// layered solution. Requires the mid-diffusion ordering.
inline ErrorRecord theorem4_errors(double delta, const Scenario& sc) {
  detail::check_scenario(sc);
  const auto& m = sc.materials;
  if (!m.is_mid_diffusion()) throw ValidationError("materials", "not mid-diffusion");
  const auto& g = sc.geometry;
  const auto& sp = sc.split;
  const double r1 = g.R - sp.p1 * delta;
  const double r2 = g.R + sp.p2 * delta;

  ErrorRecord rec;
  rec.delta = delta;
  rec.grouping = LayerGrouping::per_side;
  for (const auto& mode : sc.modes) {
    const auto full = solve_full_mode(mode, delta, m, g, sp, sc.forcing);
    const auto ap = solve_reduced_mode(mode, delta, m, g, sc.forcing);
    const auto direct = solve_reduced_mode_direct(mode, delta, m, g, sc.forcing);
    rec.route_gap = std::max(rec.route_gap, reduced_route_gap(ap, direct));

    ModeErrors e;
    e.mode = mode;
    e.err_i = detail::region_error(0.0, r1, mode.n, full.inner(),
                                   detail::piece_sum(ap.inner, nullptr, 0.0), sc.rule);
    e.err_e = detail::region_error(r2, g.R_ext, mode.n, full.outer(),
                                   detail::piece_sum(ap.outer, nullptr, 0.0), sc.rule);
    for (int side = 1; side <= 2; ++side) {
      const auto prof = reconstruct_layer_ap(side, delta, m, sp, ap);
      const double a = side == 1 ? r1 : g.R;
      const double b = side == 1 ? g.R : r2;
      const double err = detail::region_error(a, b, mode.n, full.layer(side),
                                              detail::layer_cmp(prof, g.R, delta, sp.fraction(side)),
                                              sc.rule);
      (side == 1 ? e.err_layer1 : e.err_layer2) = err;
    }
    rec.per_mode.push_back(e);
  }
  rec.finalize_totals();
  return rec;
}

/// ||U_ap - (w_0 + delta w_1)|| over the fixed limit domains [0, R] and [R, R_ext].
inline ErrorRecord w_expansion_errors(double delta, const Scenario& sc) {
  detail::check_scenario(sc);
  const auto& m = sc.materials;
  const auto& g = sc.geometry;
  ErrorRecord rec;
  rec.delta = delta;
  rec.grouping = LayerGrouping::per_side;
  for (const auto& mode : sc.modes) {
    const auto ap = solve_reduced_mode(mode, delta, m, g, sc.forcing);
    const auto w0 = solve_w_recurrence(0, mode, m, g, sc.forcing, nullptr);
    const auto w1 = solve_w_recurrence(1, mode, m, g, sc.forcing, &w0);
    ModeErrors e;
    e.mode = mode;
    e.err_i = detail::region_error(0.0, g.R, mode.n, ap.inner,
                                   detail::piece_sum(w0.inner, &w1.inner, delta), sc.rule);
    e.err_e = detail::region_error(g.R, g.R_ext, mode.n, ap.outer,
                                   detail::piece_sum(w0.outer, &w1.outer, delta), sc.rule);
    rec.per_mode.push_back(e);
  }
  rec.finalize_totals();
  return rec;
}

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// RMS deviation of ln(error) from the fitted line
  double residual = 0.0;
};

/// Least-squares line through (ln delta, ln error).
inline SlopeFit fit_slope(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 3) throw ValidationError("ladder", "degenerate ladder: need at least 3 points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [d, e] : pts) {
    if (!(d > 0.0)) throw ValidationError("ladder", "degenerate ladder: nonpositive delta");
    if (!(e > 0.0)) throw ValidationError("ladder", "degenerate ladder: nonpositive error");
    sx += std::log(d);
    sy += std::log(e);
  }
  const double n = static_cast<double>(pts.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [d, e] : pts) {
    const double dx = std::log(d) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(e) - my);
  }
  if (sxx == 0.0) throw ValidationError("ladder", "degenerate ladder: repeated delta");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (const auto& [d, e] : pts) {
    const double dev = std::log(e) - (fit.intercept + fit.slope * std::log(d));
    ss += dev * dev;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

enum class Study { theorem2_order0, theorem2_order1, theorem4, w_expansion };

inline const char* to_string(Study s) {
  switch (s) {
    case Study::theorem2_order0: return "theorem2-order0";
    case Study::theorem2_order1: return "theorem2-order1";
    case Study::theorem4: return "theorem4";
    case Study::w_expansion: return "w-expansion";
  }
  return "?";
}

inline double expected_slope(Study s) { return s == Study::theorem2_order0 ? 1.0 : 2.0; }

enum class StudyStatus { ok, out_of_band, exact_reproduction };

inline const char* to_string(StudyStatus s) {
  switch (s) {
    case StudyStatus::ok: return "ok";
    case StudyStatus::out_of_band: return "out_of_band";
    case StudyStatus::exact_reproduction: return "exact_reproduction";
  }
  return "?";
}

struct ConvergenceReport {
  Study study = Study::theorem2_order0;
  std::vector<ErrorRecord> records;
  std::optional<SlopeFit> fit;
  double expected = 0.0;
  double band = 0.15;
  StudyStatus status = StudyStatus::ok;
  double max_route_gap = 0.0;
};

inline ErrorRecord study_errors(Study s, double delta, const Scenario& sc) {
  switch (s) {
    case Study::theorem2_order0: return theorem2_errors(0, delta, sc);
    case Study::theorem2_order1: return theorem2_errors(1, delta, sc);
    case Study::theorem4: return theorem4_errors(delta, sc);
    case Study::w_expansion: return w_expansion_errors(delta, sc);
  }
  throw ValidationError("study", "unknown study");
}

inline void check_ladder(const std::vector<double>& ladder) {
  if (ladder.size() < 3) throw ValidationError("delta_ladder", "degenerate ladder: need at least 3 values");
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    if (!(ladder[k] > 0.0)) throw ValidationError("delta_ladder", "values must be positive");
    if (k > 0 && !(ladder[k] < ladder[k - 1]))
      throw ValidationError("delta_ladder", "values must be strictly decreasing");
  }
}

/// Runs one study over a delta ladder and fits the log-log slope of the
/// composite error. A ladder on which every composite vanishes to rounding
/// (relative to the size of the order-zero solution) is reported as an exact
/// reproduction with no slope.
inline ConvergenceReport run_study(Study s, const std::vector<double>& ladder, const Scenario& sc,
                                   double band = 0.15) {
  check_ladder(ladder);
  ConvergenceReport rep;
  rep.study = s;
  rep.expected = expected_slope(s);
  rep.band = band;
  for (double d : ladder) {
    rep.records.push_back(study_errors(s, d, sc));
    rep.max_route_gap = std::max(rep.max_route_gap, rep.records.back().route_gap);
  }

  double ref = 0.0;
  for (const auto& mode : sc.modes) {
    const auto u0 = solve_u0_mode(mode, sc.materials, sc.geometry, sc.forcing);
    ref += h1_norm_sq_mode(0.0, sc.geometry.R, mode.n,
                           [&](double r) { return std::pair{u0.inner.eval(r), u0.inner.eval(r, 1)}; },
                           sc.rule);
    ref += h1_norm_sq_mode(sc.geometry.R, sc.geometry.R_ext, mode.n,
                           [&](double r) { return std::pair{u0.outer.eval(r), u0.outer.eval(r, 1)}; },
                           sc.rule);
  }
  const double exact_tol = 1e-12 * (1.0 + std::sqrt(ref));
  bool all_exact = true;
  for (const auto& r : rep.records) all_exact = all_exact && r.composite() <= exact_tol;
  if (all_exact) {
    rep.status = StudyStatus::exact_reproduction;
    return rep;
  }

  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rep.records) pts.emplace_back(r.delta, r.composite());
  rep.fit = fit_slope(pts);
  rep.status = std::abs(rep.fit->slope - rep.expected) <= band ? StudyStatus::ok
                                                               : StudyStatus::out_of_band;
  return rep;
}

}  // namespace thinlayer
