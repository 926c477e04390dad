#pragma once

// Exact Toeplitz log-determinants against the Fisher-Hartwig expansion for the
// replica symbol families.

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "ness/fisher_hartwig.hpp"
#include "ness/harness/csv.hpp"

namespace ness::harness {

struct FhCase {
  std::string name;
  WindowAngles windows;
};

/// Window angles on a pi/8 lattice, one per overlap case.
inline std::vector<FhCase> default_fh_cases() {
  const double p = std::numbers::pi / 8.0;
  return {{"containment", {3 * p, 4 * p, 2 * p, 5 * p}},
          {"disjoint", {p, 2 * p, 4 * p, 6 * p}},
          {"partial", {2 * p, 4 * p, 3 * p, 6 * p}}};
}

struct FhValidateConfig {
  std::vector<FhCase> cases = default_fh_cases();
  std::vector<std::size_t> sizes{256, 512, 1024};
  double transmission = 0.5;
  int n = 2;
  double gamma = 0.5;
};

struct FhPoint {
  std::size_t M;
  cplx exact;
  cplx asymptotic;
  cplx difference;  // imaginary part reduced mod 2 pi
};

struct FhSeries {
  std::string case_name;
  std::string family;  // mi_left, mi_right, mi_both, negativity
  std::size_t jumps = 0;
  std::vector<FhPoint> points;
  std::vector<double> dd_ratios;  // |D(M_k) - D(M_{k-1})| / |D(M_{k+1}) - D(M_k)|
  cplx log_m_fit;                 // from the two largest sizes
  cplx log_m_expected;            // -sum beta^2
  double log_m_rel_error = 0.0;

  bool converging(double factor = 2.0) const {
    for (double r : dd_ratios)
      if (!(r >= factor)) return false;
    return !dd_ratios.empty();
  }
};

namespace detail {

inline cplx reduce_phase(cplx z) { return {z.real(), std::remainder(z.imag(), 2.0 * std::numbers::pi)}; }

inline FhSeries fh_series(const PiecewiseSymbol& s, const std::string& case_name, const std::string& family,
                          const std::vector<std::size_t>& sizes) {
  FhSeries out;
  out.case_name = case_name;
  out.family = family;
  out.jumps = s.jump_count();
  std::vector<cplx> beyond_linear;
  for (std::size_t M : sizes) {
    const cplx exact = lu_logdet(toeplitz_from_symbol(s, M));
    const auto terms = fh_terms(s, M);
    out.points.push_back({M, exact, terms.value(), reduce_phase(exact - terms.value())});
    beyond_linear.push_back(reduce_phase(exact - terms.linear));
  }
  for (std::size_t k = 1; k + 1 < out.points.size(); ++k) {
    const double a = std::abs(out.points[k].difference - out.points[k - 1].difference);
    const double b = std::abs(out.points[k + 1].difference - out.points[k].difference);
    out.dd_ratios.push_back(a / b);
  }
  out.log_m_expected = fh_terms(s, sizes.front()).log_m_coefficient();
  if (sizes.size() >= 2) {
    const std::size_t k = sizes.size() - 1;
    const double span = std::log(static_cast<double>(sizes[k]) / static_cast<double>(sizes[k - 1]));
    out.log_m_fit = reduce_phase(beyond_linear[k] - beyond_linear[k - 1]) / span;
    out.log_m_rel_error = std::abs(out.log_m_fit - out.log_m_expected) / std::abs(out.log_m_expected);
  }
  return out;
}

}  // namespace detail

inline std::vector<FhSeries> run_fh_validate(const FhValidateConfig& cfg = {}) {
  std::vector<FhSeries> out;
  for (const auto& c : cfg.cases) {
    const double T = cfg.transmission;
    out.push_back(detail::fh_series(mi_symbol(Subsystem::Left, cfg.gamma, cfg.n, c.windows, T), c.name, "mi_left",
                                    cfg.sizes));
    out.push_back(detail::fh_series(mi_symbol(Subsystem::Right, cfg.gamma, cfg.n, c.windows, T), c.name, "mi_right",
                                    cfg.sizes));
    out.push_back(detail::fh_series(mi_symbol(Subsystem::Both, cfg.gamma, cfg.n, c.windows, T), c.name, "mi_both",
                                    cfg.sizes));
    out.push_back(detail::fh_series(negativity_symbol(cfg.gamma, cfg.n, c.windows, T), c.name, "negativity",
                                    cfg.sizes));
  }
  return out;
}

inline void write_fh_csv(std::ostream& os, const std::vector<FhSeries>& series) {
  os << "case,family,M,exact_re,exact_im,asym_re,asym_im,diff_re,diff_im,dd_ratio,logM_fit_re,logM_fit_im,"
        "logM_expected_re,logM_expected_im,logM_rel_error\n";
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const auto& p = s.points[i];
      const bool last = i + 1 == s.points.size();
      const double dd = i >= 2 ? s.dd_ratios[i - 2] : std::nan("");  // ratio ending at this size
      os << s.case_name << ',' << s.family << ',' << p.M << ',' << format_number(p.exact.real()) << ','
         << format_number(p.exact.imag()) << ',' << format_number(p.asymptotic.real()) << ','
         << format_number(p.asymptotic.imag()) << ',' << format_number(p.difference.real()) << ','
         << format_number(p.difference.imag()) << ',' << format_number(dd) << ','
         << format_number(last ? s.log_m_fit.real() : std::nan("")) << ','
         << format_number(last ? s.log_m_fit.imag() : std::nan("")) << ','
         << format_number(s.log_m_expected.real()) << ',' << format_number(s.log_m_expected.imag()) << ','
         << format_number(last ? s.log_m_rel_error : std::nan("")) << '\n';
    }
  }
}

}  // namespace ness::harness
