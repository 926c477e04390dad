#pragma once

// Identity suite over an (n, T) grid: gamma sums against their closed forms and
// the special values of Q_n, Qtilde_n, q and qtilde.

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "ness/fisher_hartwig.hpp"
#include "ness/special_functions.hpp"

namespace ness::harness {

struct IdentityGrid {
  std::vector<int> n_values{2, 3, 4, 5};
  std::vector<int> even_n_values{2, 4, 6};
  std::vector<int> sum_gamma_n_values{2, 3, 4, 5, 6, 7, 8};
  std::vector<double> transmissions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  double gamma_tol = 1e-7;
  double q_tol = 1e-9;
  double q_tilde_tol = 1e-8;
};

struct IdentityEntry {
  std::string identity;
  int n = 0;         // 0 where not applicable
  double T = -1.0;   // negative where not applicable
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct IdentitySummary {
  std::string identity;
  std::size_t count = 0;
  double max_residual = 0.0;
  bool passed = true;
};

struct IdentityReport {
  std::vector<IdentityEntry> entries;

  std::vector<IdentitySummary> summary() const {
    std::vector<IdentitySummary> out;
    for (const auto& e : entries) {
      auto it = std::find_if(out.begin(), out.end(), [&](const auto& s) { return s.identity == e.identity; });
      if (it == out.end()) {
        out.push_back({e.identity});
        it = out.end() - 1;
      }
      ++it->count;
      it->max_residual = std::max(it->max_residual, e.residual);
      it->passed = it->passed && e.passed;
    }
    return out;
  }
  bool all_passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.passed; });
  }
};

namespace detail {

inline void add_residual(IdentityReport& rep, std::string name, int n, double T, double residual, double tol) {
  rep.entries.push_back({std::move(name), n, T, residual, tol, std::isfinite(residual) && residual <= tol});
}

/// Sign checks report the offending magnitude; zero when the sign is right.
inline void add_sign(IdentityReport& rep, std::string name, double T, double value, bool want_positive) {
  const bool ok = want_positive ? value > 0.0 : value < 0.0;
  rep.entries.push_back({std::move(name), 0, T, ok ? 0.0 : std::abs(value), 0.0, ok});
}

}  // namespace detail

inline IdentityReport run_identities(const IdentityGrid& grid = {}) {
  IdentityReport rep;
  for (int n : grid.n_values)
    for (double T : grid.transmissions) {
      const auto r = gamma_identities(T, n);
      detail::add_residual(rep, "gamma_sum_i", n, T, r.i, grid.gamma_tol);
      detail::add_residual(rep, "gamma_sum_ii", n, T, r.ii, grid.gamma_tol);
      detail::add_residual(rep, "gamma_sum_iii", n, T, r.iii, grid.gamma_tol);
    }
  for (int n : grid.even_n_values)
    for (double T : grid.transmissions)
      detail::add_residual(rep, "gamma_sum_iv", n, T, gamma_identities(T, n).iv.value(), grid.gamma_tol);
  for (int n : grid.sum_gamma_n_values)
    detail::add_residual(rep, "sum_gamma_squared", n, -1.0, gamma_identities(0.5, n).sum_gamma_squared,
                         grid.gamma_tol);
  for (int n : grid.n_values) {
    const double dn = n;
    detail::add_residual(rep, "Q_n(1)=0", n, 1.0, std::abs(q_n(1.0, dn)), grid.q_tol);
    detail::add_residual(rep, "Q_n(0)=(1/n-n)/12", n, 0.0, std::abs(q_n(0.0, dn) - (1.0 / dn - dn) / 12.0),
                         grid.q_tol);
    detail::add_residual(rep, "Qtilde_n(0)=0", n, 0.0, std::abs(q_tilde_n(0.0, dn)), grid.q_tilde_tol);
    detail::add_residual(rep, "Qtilde_n(1)=0", n, 1.0, std::abs(q_tilde_n(1.0, dn)), grid.q_tilde_tol);
  }
  for (double T : {0.0, 1.0}) {
    detail::add_residual(rep, "q_endpoint_zero", 0, T, std::abs(q_fun(T)), grid.q_tilde_tol);
    detail::add_residual(rep, "qtilde_endpoint_zero", 0, T, std::abs(q_tilde_fun(T)), grid.q_tilde_tol);
  }
  for (double T : grid.transmissions) {
    detail::add_sign(rep, "q_negative", T, q_fun(T), false);
    detail::add_sign(rep, "qtilde_positive", T, q_tilde_fun(T), true);
  }
  return rep;
}

inline void write_identity_report(std::ostream& os, const IdentityReport& rep, bool verbose = false) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-22s %6s %14s %10s  %s\n", "identity", "rows", "max_residual", "tolerance",
                "status");
  os << buf;
  std::map<std::string, double> tol;
  for (const auto& e : rep.entries) tol[e.identity] = std::max(tol[e.identity], e.tolerance);
  for (const auto& s : rep.summary()) {
    std::snprintf(buf, sizeof buf, "%-22s %6zu %14.3e %10.1e  %s\n", s.identity.c_str(), s.count, s.max_residual,
                  tol[s.identity], s.passed ? "ok" : "FAIL");
    os << buf;
  }
  if (verbose)
    for (const auto& e : rep.entries) {
      std::snprintf(buf, sizeof buf, "  %-22s n=%d T=%.2f residual=%.3e %s\n", e.identity.c_str(), e.n, e.T,
                    e.residual, e.passed ? "" : "FAIL");
      os << buf;
    }
}

}  // namespace ness::harness
