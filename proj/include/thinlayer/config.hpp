#pragma once

// JSON experiment configuration. Every field is validated before any solve;
// failures raise ValidationError naming the offending field path.
//
// {
//   "geometry":  {"R": 1.0, "R_ext": 2.0},
//   "materials": {"alpha_i": 1.0, "alpha_delta": 2.0, "alpha_e": 4.0},
//   "split":     {"mode": "mid-diffusion"}            | {"mode": "explicit", "p1": 0.5},
//   "split_p_min": 0.05,
//   "forcing":   [{"c": 4.0, "m": 0, "n": 0, "parity": "cos"}, ...],
//   "modes":     [0, 2]                                (or {"n": 2, "parity": "sin"}),
//   "delta_ladder": [0.1, 0.05, 0.025, 0.0125, 0.00625],
//   "quadrature": {"points": 16, "segments": 8},
//   "oracle":    {"h": 0.02, "levels": 4, "delta": 0.05},
//   "slope_band": 0.15,
//   "oracle_order_band": 0.2,
//   "allow_unsafe_model": false,
//   "profile_samples": 41,
//   "sweep":     {"max_mode": 64},
//   "output":    {"dir": "out"}
// }

#include <algorithm>
#include <json.hpp>
#include <string>
#include <vector>

#include "thinlayer/convergence.hpp"
#include "thinlayer/errors.hpp"
#include "thinlayer/geometry.hpp"
#include "thinlayer/radial.hpp"

namespace thinlayer {

enum class SplitMode { mid_diffusion, explicit_p1 };

struct OracleSettings {
  double h = 0.02;
  int levels = 4;
  double delta = 0.05;
};

struct ExperimentConfig {
  CircleGeometry geometry{};
  MaterialParams materials{};
  SplitMode split_mode = SplitMode::mid_diffusion;
  double explicit_p1 = 0.5;
  double split_p_min = kDefaultSplitPMin;
  ForcingSpec forcing;
  std::vector<FourierMode> modes;
  std::vector<double> delta_ladder;
  int quadrature_points = 16;
  int quadrature_segments = 8;
  OracleSettings oracle{};
  double slope_band = 0.15;
  double oracle_order_band = 0.2;
  bool allow_unsafe_model = false;
  int profile_samples = 41;
  int sweep_max_mode = 64;
  std::string output_dir = "out";

  LayerSplit split(const WarningSink& warn = {}) const {
    if (split_mode == SplitMode::mid_diffusion) return mid_diffusion_split(materials, split_p_min, warn);
    return LayerSplit::from_p1(explicit_p1);
  }

  Scenario scenario() const {
    Scenario s;
    s.geometry = geometry;
    s.materials = materials;
    s.split = split();
    s.forcing = forcing;
    s.modes = modes;
    s.rule = QuadratureRule(quadrature_points, quadrature_segments);
    return s;
  }

  /// Checks every field against the library preconditions.
  void validate() const {
    geometry.validate();
    materials.validate();
    if (split_mode == SplitMode::mid_diffusion) {
      if (!materials.is_mid_diffusion())
        throw ValidationError("materials", "not mid-diffusion (split mode is mid-diffusion)");
    } else if (!(explicit_p1 > 0.0 && explicit_p1 < 1.0)) {
      throw ValidationError("split.p1", "must lie in (0, 1)");
    }
    if (!(split_p_min >= 0.0 && split_p_min < 0.5))
      throw ValidationError("split_p_min", "must lie in [0, 0.5)");
    if (modes.empty()) throw ValidationError("modes", "mode set is empty");
    for (std::size_t k = 0; k < modes.size(); ++k) {
      try {
        modes[k].validate();
      } catch (const ValidationError& e) {
        throw ValidationError("modes[" + std::to_string(k) + "]", e.message());
      }
    }
    if (delta_ladder.empty()) throw ValidationError("delta_ladder", "ladder is empty");
    const auto sp = split();
    for (std::size_t k = 0; k < delta_ladder.size(); ++k) {
      const std::string field = "delta_ladder[" + std::to_string(k) + "]";
      if (!(delta_ladder[k] > 0.0)) throw ValidationError(field, "must be positive");
      if (k > 0 && !(delta_ladder[k] < delta_ladder[k - 1]))
        throw ValidationError(field, "ladder must be strictly decreasing");
      if (!(geometry.R - sp.p1 * delta_ladder[k] > 0.0) ||
          !(geometry.R + sp.p2 * delta_ladder[k] < geometry.R_ext))
        throw ValidationError(field, "layer does not fit inside (0, R_ext)");
    }
    if (quadrature_points < 8) throw ValidationError("quadrature.points", "need at least 8");
    if (quadrature_segments < 1) throw ValidationError("quadrature.segments", "need at least 1");
    if (!(oracle.h > 0.0)) throw ValidationError("oracle.h", "must be positive");
    if (oracle.levels < 3) throw ValidationError("oracle.levels", "need at least 3 grids");
    if (!(oracle.delta > 0.0) || !(geometry.R - sp.p1 * oracle.delta > 0.0) ||
        !(geometry.R + sp.p2 * oracle.delta < geometry.R_ext))
      throw ValidationError("oracle.delta", "layer does not fit inside (0, R_ext)");
    if (!(slope_band > 0.0)) throw ValidationError("slope_band", "must be positive");
    if (!(oracle_order_band > 0.0)) throw ValidationError("oracle_order_band", "must be positive");
    if (profile_samples < 2) throw ValidationError("profile_samples", "need at least 2");
    if (sweep_max_mode < 0) throw ValidationError("sweep.max_mode", "must be nonnegative");
  }
};

namespace detail {

template <class T>
T get_field(const nlohmann::json& j, const char* key, const std::string& path, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(path + key, "wrong type");
  }
}

template <class T>
T require_field(const nlohmann::json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(path + key, "missing field");
  return get_field<T>(j, key, path, T{});
}

inline const nlohmann::json& require_object(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(key, "missing field");
  if (!j.at(key).is_object()) throw ValidationError(key, "must be an object");
  return j.at(key);
}

inline Parity parse_parity(const nlohmann::json& j, const std::string& path) {
  const auto s = get_field<std::string>(j, "parity", path, "cos");
  if (s == "cos" || s == "cosine") return Parity::cosine;
  if (s == "sin" || s == "sine") return Parity::sine;
  throw ValidationError(path + "parity", "expected \"cos\" or \"sin\"");
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  using detail::get_field;
  using detail::require_field;
  if (!j.is_object()) throw ValidationError("config", "top level must be a JSON object");
  ExperimentConfig c;

  const auto& geo = detail::require_object(j, "geometry");
  c.geometry.R = require_field<double>(geo, "R", "geometry.");
  c.geometry.R_ext = require_field<double>(geo, "R_ext", "geometry.");

  const auto& mat = detail::require_object(j, "materials");
  c.materials.alpha_i = require_field<double>(mat, "alpha_i", "materials.");
  c.materials.alpha_delta = require_field<double>(mat, "alpha_delta", "materials.");
  c.materials.alpha_e = require_field<double>(mat, "alpha_e", "materials.");

  if (j.contains("split")) {
    const auto& sp = j.at("split");
    const auto mode = get_field<std::string>(sp, "mode", "split.", "mid-diffusion");
    if (mode == "mid-diffusion") {
      c.split_mode = SplitMode::mid_diffusion;
    } else if (mode == "explicit") {
      c.split_mode = SplitMode::explicit_p1;
      c.explicit_p1 = require_field<double>(sp, "p1", "split.");
    } else {
      throw ValidationError("split.mode", "expected \"mid-diffusion\" or \"explicit\"");
    }
  }
  c.split_p_min = get_field<double>(j, "split_p_min", "", c.split_p_min);

  if (j.contains("forcing")) {
    const auto& terms = j.at("forcing");
    if (!terms.is_array()) throw ValidationError("forcing", "must be an array");
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const std::string path = "forcing[" + std::to_string(k) + "].";
      ForcingTerm t;
      t.c = require_field<double>(terms[k], "c", path);
      t.m = get_field<int>(terms[k], "m", path, 0);
      t.mode.n = get_field<int>(terms[k], "n", path, 0);
      t.mode.parity = detail::parse_parity(terms[k], path);
      try {
        c.forcing.add(t);
      } catch (const ValidationError& e) {
        throw ValidationError("forcing[" + std::to_string(k) + "]", e.message());
      }
    }
  }

  if (j.contains("modes")) {
    const auto& ms = j.at("modes");
    if (!ms.is_array()) throw ValidationError("modes", "must be an array");
    for (std::size_t k = 0; k < ms.size(); ++k) {
      const std::string path = "modes[" + std::to_string(k) + "]";
      FourierMode m;
      if (ms[k].is_number_integer()) {
        m.n = ms[k].get<int>();
      } else if (ms[k].is_object()) {
        m.n = require_field<int>(ms[k], "n", path + ".");
        m.parity = detail::parse_parity(ms[k], path + ".");
      } else {
        throw ValidationError(path, "expected an integer or {\"n\", \"parity\"}");
      }
      c.modes.push_back(m);
    }
  }

  if (!j.contains("modes")) {
    // default: every mode that carries a source term
    for (const auto& t : c.forcing.terms())
      if (std::find(c.modes.begin(), c.modes.end(), t.mode) == c.modes.end()) c.modes.push_back(t.mode);
    std::sort(c.modes.begin(), c.modes.end());
  }

  c.delta_ladder = get_field<std::vector<double>>(j, "delta_ladder", "", {});
  if (j.contains("quadrature")) {
    c.quadrature_points = get_field<int>(j.at("quadrature"), "points", "quadrature.", c.quadrature_points);
    c.quadrature_segments =
        get_field<int>(j.at("quadrature"), "segments", "quadrature.", c.quadrature_segments);
  }
  if (j.contains("oracle")) {
    const auto& o = j.at("oracle");
    c.oracle.h = get_field<double>(o, "h", "oracle.", c.oracle.h);
    c.oracle.levels = get_field<int>(o, "levels", "oracle.", c.oracle.levels);
    c.oracle.delta = get_field<double>(o, "delta", "oracle.", c.oracle.delta);
  }
  c.slope_band = get_field<double>(j, "slope_band", "", c.slope_band);
  c.oracle_order_band = get_field<double>(j, "oracle_order_band", "", c.oracle_order_band);
  c.allow_unsafe_model = get_field<bool>(j, "allow_unsafe_model", "", c.allow_unsafe_model);
  c.profile_samples = get_field<int>(j, "profile_samples", "", c.profile_samples);
  if (j.contains("sweep"))
    c.sweep_max_mode = get_field<int>(j.at("sweep"), "max_mode", "sweep.", c.sweep_max_mode);
  if (j.contains("output")) c.output_dir = get_field<std::string>(j.at("output"), "dir", "output.", c.output_dir);

  c.validate();
  return c;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace thinlayer
