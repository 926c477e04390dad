// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "ness/asymptotics.hpp"
#include "ness/correlation.hpp"
#include "ness/harness/fh_validate.hpp"
#include "ness/harness/fit.hpp"
#include "ness/harness/identities.hpp"
#include "ness/harness/scan.hpp"
#include "ness/measures.hpp"

using namespace ness;
using namespace ness::harness;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const BiasConfig kFigBias = BiasConfig::from_fermi_momenta(pi / 2 + 0.2, pi / 2);
const std::vector<double> kEps{0.5, 1.0, 2.0};

ExperimentConfig scan_config(double eps) {
  ExperimentConfig c;
  c.model = SingleSite{eps, 1.0};
  c.bias = kFigBias;
  c.geometry.base_distance = 1000000;
  return c;
}

Outcome ac1() {
  const auto rep = run_identities();
  double worst = 0.0;
  std::string failed;
  for (const auto& s : rep.summary()) {
    worst = std::max(worst, s.max_residual);
    if (!s.passed) failed += " " + s.identity;
  }
  return {rep.all_passed(), fmt("%zu checks, max residual %.2e%s%s", rep.entries.size(), worst,
                                failed.empty() ? "" : ", failed:", failed.c_str())};
}

Outcome ac2() {
  double worst = 0.0;
  std::size_t max_dim = 0;
  for (double eps : kEps) {
    LongRangeKernel k(SingleSite{eps, 1.0}, kFigBias);
    for (long ell : {10L, 40L, 80L}) {
      for (long off : {0L, 7L}) {
        const Geometry g{0, 1000000 + off, ell, 1000000, ell};
        const auto ca = build_corr_matrix(k, g, Subsystem::Both);
        max_dim = std::max(max_dim, ca.dim());
        for (int n : {2, 4}) {
          const double a = renyi_negativity_eig(ca, ca.size_left, n).value;
          const double b = renyi_negativity_det(ca, ca.size_left, n).value;
          worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1e-300));
        }
      }
    }
  }
  return {worst <= 1e-8, fmt("max relative difference %.2e up to dimension %zu", worst, max_dim)};
}

Outcome ac3() {
  struct Case {
    const char* name;
    ImpurityModel model;
    BiasConfig bias;
  };
  const std::vector<Case> cases{
      {"T=0", ConstantS::beam_splitter(0.0), kFigBias},
      {"T=1", ConstantS::beam_splitter(1.0), kFigBias},
      {"mu_L=mu_R", SingleSite{1.0, 1.0}, BiasConfig::from_fermi_momenta(pi / 2, pi / 2)},
      {"mu_L=mu_R,eps=2", SingleSite{2.0, 1.0}, BiasConfig::from_fermi_momenta(1.2, 1.2)}};
  double mi_max = 0.0, e_max = 0.0, en_max = 0.0;
  for (const auto& c : cases) {
    LongRangeKernel k(c.model, c.bias);
    for (const Geometry& g : {Geometry{0, 100000, 40, 100000, 40}, Geometry{0, 100030, 30, 100000, 50}}) {
      const auto cl = correlation_spectrum(build_corr_matrix(k, g, Subsystem::Left));
      const auto cr = correlation_spectrum(build_corr_matrix(k, g, Subsystem::Right));
      const auto ca = build_corr_matrix(k, g, Subsystem::Both);
      const auto sa = correlation_spectrum(ca);
      mi_max = std::max(mi_max, std::abs(mutual_information(cl, cr, sa, Order::vn()).value));
      mi_max = std::max(mi_max, std::abs(mutual_information(cl, cr, sa, Order::renyi(2.0)).value));
      const auto xi = gen_eigvals(build_c_xi(ca));
      e_max = std::max(e_max, std::abs(fermionic_negativity(ca, ca.size_left).value));
      for (int n : {2, 4, 6}) {
        const double en = negativity_from_spectra(xi, sa, 0.5 * n).value;
        en_max = std::max(en_max, std::abs(en - (1.0 - n) * renyi_entropy(sa, n).value));
      }
    }
  }
  const bool ok = mi_max <= 1e-8 && e_max <= 1e-8 && en_max <= 1e-8;
  return {ok, fmt("max |MI| %.2e, max |E| %.2e, max |E_n-(1-n)S_n| %.2e", mi_max, e_max, en_max)};
}

Outcome ac4() {
  bool ok = true;
  std::string detail;
  for (double eps : kEps) {
    auto c = scan_config(eps);
    c.geometry.variable = ScanVariable::Length;
    c.grid = {16, 32, 64, 128, 256, 512};
    c.measures = {{MeasureKind::Mi, 1}, {MeasureKind::RenyiMi, 2}, {MeasureKind::Negativity, 1},
                  {MeasureKind::RenyiNegativity, 4}};
    c.fit.window = std::pair{128.0, 512.0};
    const auto res = run_scan(c);
    for (const auto& m : c.measures) {
      double worst = 0.0, r128 = NAN, r512 = NAN;
      for (const auto& r : series_of(res, m)) {
        if (r.scan_value < 128) continue;
        worst = std::max(worst, std::abs(r.residual));
        if (r.scan_value == 128) r128 = std::abs(r.residual);
        if (r.scan_value == 512) r512 = std::abs(r.residual);
      }
      const bool pass = res.failed_rows == 0 && worst <= 0.05 && r512 < r128;
      ok = ok && pass;
      detail += fmt("\n    eps=%.1f %-4s max|res|=%.4f |res(128)|=%.4f |res(512)|=%.4f %s", eps, m.label().c_str(),
                    worst, r128, r512, pass ? "ok" : "FAIL");
    }
  }
  return {ok, "symmetric length scan, fit over l in [128, 512]" + detail};
}

Outcome ac5() {
  bool ok = true;
  std::string detail;
  for (double eps : kEps) {
    auto c = scan_config(eps);
    c.geometry.variable = ScanVariable::Offset;
    c.geometry.ell_left = 100;
    c.geometry.ell_right = 200;
    for (double x = -350; x <= 150; x += 5) c.grid.push_back(x);
    c.measures = {{MeasureKind::Mi, 1}, {MeasureKind::RenyiMi, 2}};
    c.fit.enabled = false;
    c.exclusion_radius = 5;
    const auto res = run_scan(c);
    for (const auto& m : c.measures) {
      std::size_t closer = 0, counted = 0;
      double best = -INFINITY, at = NAN;
      for (const auto& r : series_of(res, m)) {
        if (r.failed()) continue;
        if (r.numeric > best) {
          best = r.numeric;
          at = r.scan_value;
        }
        if (r.degenerate || !r.has_analytic()) continue;
        ++counted;
        if (std::abs(r.numeric - r.lin_term - r.log_term) < std::abs(r.numeric - r.lin_term)) ++closer;
      }
      const double frac = counted ? static_cast<double>(closer) / static_cast<double>(counted) : 0.0;
      const bool plateau = at >= 0.0 && at <= 100.0;
      const bool pass = res.failed_rows == 0 && frac >= 0.9 && plateau;
      ok = ok && pass;
      detail += fmt("\n    eps=%.1f %-4s with-log closer at %zu/%zu (%.1f%%), numeric max at offset %g %s", eps,
                    m.label().c_str(), closer, counted, 100.0 * frac, at, pass ? "ok" : "FAIL");
    }
  }
  return {ok, "offset scan, l_L=100, l_R=200, plateau 0 <= d_L-d_R <= 100" + detail};
}

Outcome ac6() {
  bool ok = true;
  std::string detail;
  for (double eps : {0.0, 1.0, 2.0}) {
    auto c = scan_config(eps);
    c.grid = {64, 128, 256, 512};
    c.measures = {{MeasureKind::RenyiEntropy, 2}, {MeasureKind::RenyiEntropy, 3}};
    c.fit.enabled = false;
    const auto res = run_scan(c);
    for (const auto& m : c.measures) {
      std::vector<double> x, y;
      const double n = m.n;
      for (const auto& r : series_of(res, m)) {
        x.push_back(std::log(r.scan_value));
        y.push_back(r.numeric - (1 + n) / (3 * n) * std::log(r.scan_value));
      }
      const double slope = fit_line(x, y).slope;
      const bool pass = res.failed_rows == 0 && std::abs(slope) <= 0.02;
      ok = ok && pass;
      detail += fmt("\n    eps=%.1f %s slope %+.4f %s", eps, m.label().c_str(), slope, pass ? "ok" : "FAIL");
    }
  }
  return {ok, "S_n - (1+n)/(3n) ln l against ln l, l = 64..512" + detail};
}

Outcome ac7() {
  const auto series = run_fh_validate();
  bool conv = true, coeff = true;
  double min_ratio = INFINITY, worst_err = 0.0;
  std::string detail;
  for (const auto& s : series) {
    const double r = s.dd_ratios.empty() ? NAN : s.dd_ratios.front();
    min_ratio = std::min(min_ratio, r);
    worst_err = std::max(worst_err, s.log_m_rel_error);
    conv = conv && s.converging(2.0);
    coeff = coeff && s.log_m_rel_error <= 0.02;
    detail += fmt("\n    %-11s %-10s dd ratio %.3f, ln M coefficient error %.3f%%", s.case_name.c_str(),
                  s.family.c_str(), r, 100.0 * s.log_m_rel_error);
  }
  return {conv && coeff,
          fmt("M = 256, 512, 1024: min dd ratio %.3f (need >= 2), max ln M error %.3f%% (need <= 2%%)", min_ratio,
              100.0 * worst_err) +
              detail};
}

Outcome ac8() {
  bool ok = true;
  std::string detail;
  for (double eps : kEps) {
    auto c = scan_config(eps);
    c.geometry.ell_left_scale = 1.0;
    c.geometry.ell_right_scale = 2.0;
    c.geometry.offset_scale = 0.5;
    for (double x = 32; x <= 256; x += 8) c.grid.push_back(x);
    c.measures = {{MeasureKind::Mi, 1}, {MeasureKind::RenyiMi, 2}};
    c.fit.enabled = false;
    const auto res = run_scan(c);
    for (const auto& m : c.measures) {
      // Dyadic blocks [32, 64), [64, 128), [128, 256), [256, 512).
      std::vector<double> env(4, 0.0);
      for (const auto& r : series_of(res, m)) {
        const auto b = static_cast<std::size_t>(std::floor(std::log2(r.scan_value / 32.0)));
        env[b] = std::max(env[b], std::abs(r.residual));
      }
      bool dec = res.failed_rows == 0;
      for (std::size_t b = 1; b < env.size(); ++b) dec = dec && env[b] < env[b - 1];
      ok = ok && dec;
      detail += fmt("\n    eps=%.1f %-4s block maxima %.4f %.4f %.4f %.4f %s", eps, m.label().c_str(), env[0], env[1],
                    env[2], env[3], dec ? "ok" : "FAIL");
    }
  }
  return {ok, "l_L=l, l_R=2l, d_L-d_R=l/2, l = 32..256 step 8, |num - ana|" + detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 identity suite", ac1},          {"AC2 negativity route equivalence", ac2},
      {"AC3 vanishing theorems", ac3},      {"AC4 symmetric scaling scan", ac4},
      {"AC5 offset scan", ac5},             {"AC6 equal-length entropy", ac6},
      {"AC7 Fisher-Hartwig convergence", ac7}, {"AC8 deviation envelope", ac8}};
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures ? 1 : 0;
}
