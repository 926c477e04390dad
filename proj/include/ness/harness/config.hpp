#pragma once

// Experiment configuration read from a JSON file. The schema is documented in docs/config.md.

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ness/correlation.hpp"
#include "ness/errors.hpp"
#include "ness/model.hpp"

namespace ness::harness {

using json = nlohmann::json;

enum class ScanVariable { Length, Offset };

enum class MeasureKind { RenyiEntropy, RenyiMi, Mi, RenyiNegativity, Negativity };

struct MeasureRequest {
  MeasureKind kind;
  int n = 1;  // 1 for the von Neumann kinds

  std::string label() const {
    switch (kind) {
      case MeasureKind::RenyiEntropy: return "S_" + std::to_string(n);
      case MeasureKind::RenyiMi: return "MI_" + std::to_string(n);
      case MeasureKind::Mi: return "MI";
      case MeasureKind::RenyiNegativity: return "E_" + std::to_string(n);
      case MeasureKind::Negativity: return "E";
    }
    return "?";
  }
  bool operator==(const MeasureRequest&) const = default;
};

struct FitSpec {
  bool enabled = true;
  std::optional<std::pair<double, double>> window;  // inclusive scan-value range
  double tail_fraction = 0.5;                       // used when no window is given
};

/// Scan geometry. Length scans: l_L = round(ell_left_scale * x), l_R = round(ell_right_scale * x),
/// d_L - d_R = round(offset_scale * x). Offset scans: l_L, l_R fixed and d_L - d_R = x.
/// The nearer interval sits at base_distance.
struct GeometryTemplate {
  long m0 = 0;
  long base_distance = 1000000;
  ScanVariable variable = ScanVariable::Length;
  double ell_left_scale = 1.0, ell_right_scale = 1.0, offset_scale = 0.0;
  long ell_left = 1, ell_right = 1;

  Geometry at(double x) const {
    long ll, lr, off;
    if (variable == ScanVariable::Length) {
      ll = std::lround(ell_left_scale * x);
      lr = std::lround(ell_right_scale * x);
      off = std::lround(offset_scale * x);
    } else {
      ll = ell_left;
      lr = ell_right;
      off = std::lround(x);
    }
    Geometry g;
    g.m0 = m0;
    g.ell_left = ll;
    g.ell_right = lr;
    g.d_left = base_distance + std::max(off, 0L);
    g.d_right = base_distance + std::max(-off, 0L);
    return g;
  }
};

struct ExperimentConfig {
  ImpurityModel model = SingleSite{};
  BiasConfig bias = BiasConfig::from_fermi_momenta(std::numbers::pi / 2 + 0.2, std::numbers::pi / 2);
  GeometryTemplate geometry;
  std::vector<double> grid;
  std::vector<MeasureRequest> measures;
  CorrelationMode mode = CorrelationMode::LongRange;
  double quad_tol = 1e-11;
  FitSpec fit;
  long exclusion_radius = 5;
  unsigned threads = 0;  // 0: hardware concurrency
  std::string output;

  void validate() const {
    if (grid.empty()) throw ConfigError("grid: must not be empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (!(grid[i] > grid[i - 1])) throw ConfigError("grid: values must be strictly increasing");
    if (measures.empty()) throw ConfigError("measures: nothing requested");
    for (const auto& m : measures) {
      if (m.kind == MeasureKind::RenyiNegativity && (m.n < 2 || m.n % 2 != 0))
        throw ConfigError("measures: Renyi negativity needs even n, got " + std::to_string(m.n));
      if ((m.kind == MeasureKind::RenyiEntropy || m.kind == MeasureKind::RenyiMi) && m.n < 2)
        throw ConfigError("measures: Renyi index must be >= 2");
    }
    if (exclusion_radius < 0) throw ConfigError("exclusion_radius: must be >= 0");
    if (!(quad_tol > 0.0)) throw ConfigError("quad_tol: must be positive");
    if (fit.window && fit.window->first > fit.window->second) throw ConfigError("fit.window: empty range");
    if (!(fit.tail_fraction > 0.0 && fit.tail_fraction <= 1.0)) throw ConfigError("fit.tail_fraction: need (0, 1]");
    try {
      validate_model(model);
      for (double x : grid) geometry.at(x).validate();
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
};

namespace detail {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

inline ImpurityModel parse_model(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "single_site") return SingleSite{j.at("onsite_energy").get<double>(), get_or(j, "hopping", 1.0)};
  if (type == "constant_s") return ConstantS::beam_splitter(j.at("transmission").get<double>());
  throw ConfigError("model.type: unknown value '" + type + "'");
}

inline BiasConfig parse_bias(const json& j) {
  const double eta = get_or(j, "hopping", 1.0);
  if (j.contains("k_fermi_left") || j.contains("k_fermi_right"))
    return BiasConfig::from_fermi_momenta(j.at("k_fermi_left").get<double>(), j.at("k_fermi_right").get<double>(), eta);
  if (j.contains("mu_left") || j.contains("mu_right"))
    return BiasConfig(eta, j.at("mu_left").get<double>(), j.at("mu_right").get<double>());
  throw ConfigError("bias: give k_fermi_left/k_fermi_right or mu_left/mu_right");
}

inline GeometryTemplate parse_geometry(const json& j) {
  GeometryTemplate g;
  g.m0 = get_or(j, "m0", 0L);
  g.base_distance = get_or(j, "base_distance", 1000000L);
  const auto var = get_or<std::string>(j, "scan", "length");
  if (var == "length") {
    g.variable = ScanVariable::Length;
    g.ell_left_scale = get_or(j, "ell_left_scale", 1.0);
    g.ell_right_scale = get_or(j, "ell_right_scale", 1.0);
    g.offset_scale = get_or(j, "offset_scale", 0.0);
  } else if (var == "offset") {
    g.variable = ScanVariable::Offset;
    g.ell_left = j.at("ell_left").get<long>();
    g.ell_right = j.at("ell_right").get<long>();
  } else {
    throw ConfigError("geometry.scan: expected 'length' or 'offset'");
  }
  return g;
}

inline std::vector<double> parse_grid(const json& j) {
  std::vector<double> out;
  if (j.is_array()) return j.get<std::vector<double>>();
  if (j.contains("values")) return j.at("values").get<std::vector<double>>();
  if (j.contains("range")) {
    const auto& r = j.at("range");
    const double a = r.at("start").get<double>(), b = r.at("stop").get<double>(), h = r.at("step").get<double>();
    if (!(h > 0.0)) throw ConfigError("grid.range.step: must be positive");
    const long n = std::lround(std::floor((b - a) / h + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * h);
    return out;
  }
  if (j.contains("dyadic")) {
    const auto& r = j.at("dyadic");
    const long a = r.at("start").get<long>(), b = r.at("stop").get<long>();
    if (a < 1) throw ConfigError("grid.dyadic.start: must be >= 1");
    for (long x = a; x <= b; x *= 2) out.push_back(static_cast<double>(x));
    return out;
  }
  throw ConfigError("grid: expected an array, 'values', 'range' or 'dyadic'");
}

inline std::vector<MeasureRequest> parse_measures(const json& j, const std::vector<int>& n_values) {
  std::vector<MeasureRequest> out;
  auto add = [&](MeasureRequest m) {
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  };
  for (const auto& item : j) {
    const auto s = item.get<std::string>();
    if (s == "MI") {
      add({MeasureKind::Mi, 1});
    } else if (s == "E") {
      add({MeasureKind::Negativity, 1});
    } else {
      const auto us = s.find('_');
      if (us == std::string::npos) throw ConfigError("measures: unknown measure '" + s + "'");
      const auto head = s.substr(0, us), tail = s.substr(us + 1);
      MeasureKind kind;
      if (head == "S") kind = MeasureKind::RenyiEntropy;
      else if (head == "MI") kind = MeasureKind::RenyiMi;
      else if (head == "E") kind = MeasureKind::RenyiNegativity;
      else throw ConfigError("measures: unknown measure '" + s + "'");
      if (tail == "n") {
        if (n_values.empty()) throw ConfigError("measures: '" + s + "' needs n_values");
        for (int n : n_values) add({kind, n});
      } else {
        try {
          std::size_t pos = 0;
          const int n = std::stoi(tail, &pos);
          if (pos != tail.size()) throw std::invalid_argument(tail);
          add({kind, n});
        } catch (const std::logic_error&) {
          throw ConfigError("measures: bad Renyi index in '" + s + "'");
        }
      }
    }
  }
  return out;
}

}  // namespace detail

inline ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  try {
    c.model = detail::parse_model(j.at("model"));
    c.bias = detail::parse_bias(j.at("bias"));
    c.geometry = detail::parse_geometry(j.at("geometry"));
    c.grid = detail::parse_grid(j.at("grid"));
    const auto n_values = detail::get_or(j, "n_values", std::vector<int>{});
    c.measures = detail::parse_measures(j.at("measures"), n_values);
    const auto mode = detail::get_or<std::string>(j, "mode", "longrange");
    if (mode == "longrange") c.mode = CorrelationMode::LongRange;
    else if (mode == "full") c.mode = CorrelationMode::Full;
    else throw ConfigError("mode: expected 'longrange' or 'full'");
    c.quad_tol = detail::get_or(j, "quad_tol", 1e-11);
    if (j.contains("fit")) {
      const auto& f = j.at("fit");
      c.fit.enabled = detail::get_or(f, "enabled", true);
      if (f.contains("window")) {
        const auto w = f.at("window").get<std::vector<double>>();
        if (w.size() != 2) throw ConfigError("fit.window: expected [lo, hi]");
        c.fit.window = std::pair{w[0], w[1]};
      }
      c.fit.tail_fraction = detail::get_or(f, "tail_fraction", 0.5);
    }
    c.exclusion_radius = detail::get_or(j, "exclusion_radius", 5L);
    c.threads = detail::get_or(j, "threads", 0u);
    c.output = detail::get_or<std::string>(j, "output", "");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return parse_config(j);
}

}  // namespace ness::harness
