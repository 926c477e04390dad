#pragma once

// Parameter scans: numeric measures from correlation matrices next to their
// asymptotic predictions, with one fitted constant per (measure, n) series.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ness/asymptotics.hpp"
#include "ness/correlation.hpp"
#include "ness/harness/config.hpp"
#include "ness/harness/fit.hpp"
#include "ness/measures.hpp"

namespace ness::harness {

inline constexpr double nan = std::numeric_limits<double>::quiet_NaN();

struct ScanRow {
  std::size_t index = 0;  // position in the grid
  double scan_value = 0.0;
  MeasureRequest measure{MeasureKind::Mi, 1};
  double numeric = nan;
  double lin_term = nan;
  double log_term = nan;
  double const_fit = nan;
  double residual = nan;
  bool degenerate = false;
  std::string error;         // numeric failure
  std::string analytic_note; // analytic prediction unavailable

  bool failed() const { return !error.empty(); }
  bool has_analytic() const { return std::isfinite(lin_term) && std::isfinite(log_term); }

  std::string flag() const {
    if (failed()) return "error: " + error;
    std::string f;
    if (degenerate) f = "degenerate";
    if (!analytic_note.empty()) f += (f.empty() ? "" : "; ") + ("no_analytic: " + analytic_note);
    return f;
  }
};

namespace detail {

/// Length differences whose vanishing drops a log term:
/// l_L + d_L - l_R - d_R, d_L - d_R, l_R + d_R - d_L, l_L + d_L - d_R.
inline std::array<long, 4> degeneracy_differences(const Geometry& g) {
  return {g.ell_left + g.d_left - g.ell_right - g.d_right, g.d_left - g.d_right, g.ell_right + g.d_right - g.d_left,
          g.ell_left + g.d_left - g.d_right};
}

/// Flags grid points within `radius` of a vanishing difference. Differences that are zero
/// over the whole grid are structural (e.g. the symmetric configuration) and never flag.
inline std::vector<bool> degeneracy_flags(const ExperimentConfig& cfg) {
  std::array<bool, 4> structural{true, true, true, true};
  std::vector<std::array<long, 4>> diffs;
  for (double x : cfg.grid) {
    diffs.push_back(degeneracy_differences(cfg.geometry.at(x)));
    for (int i = 0; i < 4; ++i) structural[i] = structural[i] && diffs.back()[i] == 0;
  }
  std::vector<bool> out;
  for (const auto& d : diffs) {
    bool flag = false;
    for (int i = 0; i < 4; ++i) flag = flag || (!structural[i] && std::abs(d[i]) <= cfg.exclusion_radius);
    out.push_back(flag);
  }
  return out;
}

inline bool needs_sides(const std::vector<MeasureRequest>& ms) {
  return std::any_of(ms.begin(), ms.end(),
                     [](const auto& m) { return m.kind == MeasureKind::RenyiMi || m.kind == MeasureKind::Mi; });
}
inline bool needs_kind(const std::vector<MeasureRequest>& ms, MeasureKind k) {
  return std::any_of(ms.begin(), ms.end(), [k](const auto& m) { return m.kind == k; });
}

inline AsymptoticPrediction prediction(const ExperimentConfig& cfg, const Geometry& g, const MeasureRequest& m) {
  switch (m.kind) {
    case MeasureKind::RenyiEntropy: return union_entropy_asym(cfg.model, cfg.bias, g, m.n);
    case MeasureKind::RenyiMi: return renyi_mi_asym(cfg.model, cfg.bias, g, m.n);
    case MeasureKind::Mi: return vn_mi_asym(cfg.model, cfg.bias, g);
    case MeasureKind::RenyiNegativity: return negativity_asym_symmetric(cfg.model, cfg.bias, g, Order::renyi(m.n));
    case MeasureKind::Negativity: return negativity_asym_symmetric(cfg.model, cfg.bias, g, Order::vn());
  }
  throw DomainError("unknown measure");
}

/// All rows of one grid point. Numeric failures are recorded per row.
inline std::vector<ScanRow> evaluate_point(const ExperimentConfig& cfg, const LongRangeKernel* kernel,
                                           std::size_t index, bool degenerate) {
  const double x = cfg.grid[index];
  const Geometry g = cfg.geometry.at(x);
  std::vector<ScanRow> rows;
  for (const auto& m : cfg.measures) {
    ScanRow r;
    r.index = index;
    r.scan_value = x;
    r.measure = m;
    r.degenerate = degenerate;
    rows.push_back(r);
  }

  auto build = [&](Subsystem sub) {
    return kernel ? build_corr_matrix(*kernel, g, sub)
                  : build_corr_matrix(cfg.model, cfg.bias, g, sub, cfg.mode, cfg.quad_tol);
  };

  try {
    const CorrelationMatrix ca = build(Subsystem::Both);
    const Spectrum sa = correlation_spectrum(ca);
    std::optional<Spectrum> sl, sr;
    if (needs_sides(cfg.measures)) {
      sl = correlation_spectrum(build(Subsystem::Left));
      sr = correlation_spectrum(build(Subsystem::Right));
    }
    // Each spectrum is computed once; a failure lands on the rows that need it.
    std::vector<cplx> xi;
    std::optional<XiRoots> roots;
    std::string xi_error, roots_error;
    if (needs_kind(cfg.measures, MeasureKind::RenyiNegativity)) try {
        xi = gen_eigvals(build_c_xi(ca));
      } catch (const Error& e) {
        xi_error = e.what();
      }
    if (needs_kind(cfg.measures, MeasureKind::Negativity)) try {
        roots = c_xi_roots(ca.mat, ca.size_left);
      } catch (const Error& e) {
        roots_error = e.what();
      }
    for (auto& r : rows) {
      try {
        switch (r.measure.kind) {
          case MeasureKind::RenyiEntropy: r.numeric = renyi_entropy(sa, r.measure.n).value; break;
          case MeasureKind::RenyiMi:
            r.numeric = mutual_information(*sl, *sr, sa, Order::renyi(r.measure.n)).value;
            break;
          case MeasureKind::Mi: r.numeric = mutual_information(*sl, *sr, sa, Order::vn()).value; break;
          case MeasureKind::RenyiNegativity:
            if (!xi_error.empty()) throw Error(xi_error);
            r.numeric = negativity_from_spectra(xi, sa, 0.5 * r.measure.n).value;
            break;
          case MeasureKind::Negativity:
            if (!roots) throw Error(roots_error);
            r.numeric = negativity_from_roots(*roots, sa).value;
            break;
        }
      } catch (const Error& e) {
        r.error = e.what();
      }
    }
  } catch (const Error& e) {
    for (auto& r : rows) r.error = e.what();
  }

  for (auto& r : rows) {
    try {
      const auto p = prediction(cfg, g, r.measure);
      r.lin_term = p.linear_term();
      r.log_term = p.log_term();
    } catch (const Error& e) {
      r.analytic_note = e.what();
    }
  }
  return rows;
}

inline IndexWindow default_window(std::size_t n, double tail_fraction) {
  const auto skip = static_cast<std::size_t>(std::floor(static_cast<double>(n) * (1.0 - tail_fraction) + 1e-9));
  return {std::min(skip, n), n};
}

/// Fits one constant per measure series and fills const_fit and residual.
inline void apply_fits(const ExperimentConfig& cfg, std::vector<ScanRow>& rows) {
  const std::size_t n_grid = cfg.grid.size();
  const IndexWindow tail = default_window(n_grid, cfg.fit.tail_fraction);
  for (const auto& m : cfg.measures) {
    std::vector<ScanRow*> series;
    for (auto& r : rows)
      if (r.measure == m) series.push_back(&r);
    std::vector<double> num, ana;
    for (const ScanRow* r : series) {
      const bool in_window = cfg.fit.window ? (r->scan_value >= cfg.fit.window->first &&
                                               r->scan_value <= cfg.fit.window->second)
                                            : (r->index >= tail.begin && r->index < tail.end);
      if (!in_window || r->failed() || !r->has_analytic() || r->degenerate) continue;
      num.push_back(r->numeric);
      ana.push_back(r->lin_term + r->log_term);
    }
    double c = 0.0;
    if (cfg.fit.enabled) c = num.empty() ? nan : fit_constant(num, ana).constant;
    for (ScanRow* r : series) {
      if (!r->has_analytic()) continue;
      r->const_fit = c;
      r->residual = r->failed() ? nan : r->numeric - (r->lin_term + r->log_term + c);
    }
  }
}

}  // namespace detail

struct ScanResult {
  std::vector<ScanRow> rows;  // grid-major, measures in configuration order
  std::size_t failed_rows = 0;
};

inline ScanResult run_scan(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t n_grid = cfg.grid.size();
  const auto degenerate = detail::degeneracy_flags(cfg);
  std::vector<std::vector<ScanRow>> per_point(n_grid);

  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_grid));
  // Largest geometries first so the pool drains evenly.
  std::vector<std::size_t> order(n_grid);
  for (std::size_t i = 0; i < n_grid; ++i) order[i] = i;
  auto size_of = [&](std::size_t i) {
    const Geometry g = cfg.geometry.at(cfg.grid[i]);
    return g.ell_left + g.ell_right;
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return size_of(a) > size_of(b); });

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    std::optional<LongRangeKernel> kernel;
    if (cfg.mode == CorrelationMode::LongRange) kernel.emplace(cfg.model, cfg.bias, cfg.quad_tol);
    for (std::size_t k = next++; k < n_grid; k = next++) {
      const std::size_t i = order[k];
      per_point[i] = detail::evaluate_point(cfg, kernel ? &*kernel : nullptr, i, degenerate[i]);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }

  ScanResult out;
  for (auto& pt : per_point)
    for (auto& r : pt) {
      if (r.failed()) ++out.failed_rows;
      out.rows.push_back(std::move(r));
    }
  detail::apply_fits(cfg, out.rows);
  return out;
}

/// Rows of one measure series, in grid order.
inline std::vector<ScanRow> series_of(const ScanResult& res, const MeasureRequest& m) {
  std::vector<ScanRow> out;
  for (const auto& r : res.rows)
    if (r.measure == m) out.push_back(r);
  return out;
}

}  // namespace ness::harness
