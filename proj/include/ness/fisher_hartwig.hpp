#pragma once

// Piecewise-constant Toeplitz symbols, exact Toeplitz and block-Toeplitz
// determinants, Fisher-Hartwig asymptotics and the gamma-root sums that turn
// replica determinants into the closed-form special functions.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "ness/asymptotics.hpp"
#include "ness/correlation.hpp"
#include "ness/densela.hpp"
#include "ness/errors.hpp"
#include "ness/model.hpp"
#include "ness/quadrature.hpp"
#include "ness/special_functions.hpp"

namespace ness {

namespace detail {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Map an angle into [-pi, pi).
inline double wrap_angle(double t) {
  double w = std::fmod(t + std::numbers::pi, two_pi);
  if (w < 0.0) w += two_pi;
  return w - std::numbers::pi;
}

inline bool same_value(cplx a, cplx b) { return std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(a)); }

}  // namespace detail

/// values[r] holds on [jumps[r], jumps[r+1]), the last arc wrapping to jumps[0] + 2 pi.
/// A constant symbol has no jumps and a single value.
struct PiecewiseSymbol {
  std::vector<double> jumps;
  std::vector<cplx> values;
  /// Set when a phase was nudged off a negative-real jump ratio.
  bool phase_perturbed = false;

  static PiecewiseSymbol constant(cplx c) {
    PiecewiseSymbol s;
    s.values = {c};
    s.validate();
    return s;
  }

  /// Sample `value(theta)` between the candidate breakpoints and drop null jumps.
  template <class F>
  static PiecewiseSymbol from_breakpoints(std::vector<double> candidates, F&& value) {
    for (double& t : candidates) t = detail::wrap_angle(t);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    if (candidates.empty()) candidates.push_back(-std::numbers::pi);
    const std::size_t k = candidates.size();
    std::vector<cplx> vals(k);
    for (std::size_t r = 0; r < k; ++r) {
      const double a = candidates[r];
      const double b = r + 1 < k ? candidates[r + 1] : candidates[0] + detail::two_pi;
      vals[r] = value(detail::wrap_angle(0.5 * (a + b)));
    }
    PiecewiseSymbol s;
    for (std::size_t r = 0; r < k; ++r) {
      const cplx prev = vals[(r + k - 1) % k];
      if (!detail::same_value(prev, vals[r])) {
        s.jumps.push_back(candidates[r]);
        s.values.push_back(vals[r]);
      }
    }
    if (s.jumps.empty()) s.values = {vals[0]};
    s.validate();
    return s;
  }

  std::size_t jump_count() const { return jumps.size(); }

  /// Arc r spans [arc_begin(r), arc_end(r)).
  double arc_begin(std::size_t r) const { return jumps.empty() ? -std::numbers::pi : jumps[r]; }
  double arc_end(std::size_t r) const {
    if (jumps.empty()) return std::numbers::pi;
    return r + 1 < jumps.size() ? jumps[r + 1] : jumps[0] + detail::two_pi;
  }

  cplx value_at(double theta) const {
    if (jumps.empty()) return values[0];
    theta = detail::wrap_angle(theta);
    auto it = std::upper_bound(jumps.begin(), jumps.end(), theta);
    if (it == jumps.begin()) return values.back();
    return values[static_cast<std::size_t>(it - jumps.begin()) - 1];
  }

  /// phi(theta_r^-) / phi(theta_r^+)
  cplx jump_ratio(std::size_t r) const {
    const std::size_t k = jumps.size();
    return values[(r + k - 1) % k] / values[r];
  }

  void validate() const {
    if (jumps.empty()) {
      if (values.size() != 1) throw DomainError("PiecewiseSymbol: constant symbol needs exactly one value");
    } else if (values.size() != jumps.size()) {
      throw DomainError("PiecewiseSymbol: one value per arc required");
    }
    for (std::size_t r = 0; r < jumps.size(); ++r) {
      if (!(jumps[r] >= -std::numbers::pi && jumps[r] < std::numbers::pi))
        throw DomainError("PiecewiseSymbol: jump outside [-pi, pi)");
      if (r > 0 && !(jumps[r] > jumps[r - 1])) throw DomainError("PiecewiseSymbol: jumps not strictly ascending");
      if (detail::same_value(jump_ratio(r), 1.0)) throw DomainError("PiecewiseSymbol: null jump");
    }
    for (const cplx& v : values)
      if (v == 0.0 || !std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw DomainError("PiecewiseSymbol: values must be finite and nonzero");
  }
};

/// Fourier coefficient int phi(theta) e^{-i L theta} dtheta / 2 pi.
inline cplx fourier_coefficient(const PiecewiseSymbol& s, long lag) {
  cplx c = 0.0;
  const std::size_t arcs = s.values.size();
  for (std::size_t r = 0; r < arcs; ++r) c += s.values[r] * detail::exp_window(lag, s.arc_begin(r), s.arc_end(r));
  return c;
}

inline ComplexMatrix toeplitz_from_symbol(const PiecewiseSymbol& s, std::size_t M) {
  if (M == 0) throw DimensionError("toeplitz_from_symbol: M must be >= 1");
  const long m = static_cast<long>(M);
  std::vector<cplx> coeff(2 * M - 1);
  for (long lag = -(m - 1); lag <= m - 1; ++lag) coeff[static_cast<std::size_t>(lag + m - 1)] = fourier_coefficient(s, lag);
  ComplexMatrix k(M, M);
  for (std::size_t a = 0; a < M; ++a)
    for (std::size_t b = 0; b < M; ++b)
      k(a, b) = coeff[static_cast<std::size_t>(static_cast<long>(a) - static_cast<long>(b) + m - 1)];
  return k;
}

/// Pieces of the Fisher-Hartwig expansion, without the O(1) constant.
struct FisherHartwigTerms {
  std::vector<cplx> betas;
  cplx linear = 0.0;      // (M / 2 pi) sum_r width_r ln phi_r
  cplx pair_terms = 0.0;  // jump interactions, ln M part included
  cplx value() const { return linear + pair_terms; }
  /// Coefficient of ln M, equal to -sum beta_r^2 when sum beta_r = 0.
  cplx log_m_coefficient() const {
    cplx s = 0.0;
    for (const auto& b : betas) s -= b * b;
    return s;
  }
};

/// beta_r = ln(phi(theta_r^-)/phi(theta_r^+)) / (2 pi i), principal branch.
inline std::vector<cplx> fh_betas(const PiecewiseSymbol& s) {
  std::vector<cplx> betas;
  cplx sum = 0.0;
  for (std::size_t r = 0; r < s.jumps.size(); ++r) {
    const cplx b = std::log(s.jump_ratio(r)) / cplx(0.0, detail::two_pi);
    if (!(std::abs(b.real()) < 0.5)) {
      std::ostringstream os;
      os << "fh_betas: |Re beta| = " << std::abs(b.real()) << " at theta = " << s.jumps[r]
         << " is outside the principal representation";
      throw BranchError(os.str());
    }
    betas.push_back(b);
    sum += b;
  }
  if (std::abs(sum) > 1e-9) throw BranchError("fh_betas: symbol has nonzero winding (sum of beta != 0)");
  return betas;
}

/// Pair interaction -(1/2 pi^2) sum_{r1<r2} ln rho_1 ln rho_2 ln(scale * dist(theta_1, theta_2)),
/// dist = |e^{i t2} - e^{i t1}| or |t2 - t1|; coincident angles contribute nothing.
inline cplx fh_pair_sum(const std::vector<double>& theta, const std::vector<cplx>& log_ratio, double scale,
                        bool theta_differences) {
  cplx s = 0.0;
  for (std::size_t a = 0; a < theta.size(); ++a) {
    for (std::size_t b = a + 1; b < theta.size(); ++b) {
      if (theta[a] == theta[b]) continue;
      const double dist = theta_differences ? std::abs(theta[b] - theta[a])
                                            : std::abs(std::polar(1.0, theta[b]) - std::polar(1.0, theta[a]));
      s += log_ratio[a] * log_ratio[b] * std::log(scale * dist);
    }
  }
  return -s / (2.0 * std::numbers::pi * std::numbers::pi);
}

inline FisherHartwigTerms fh_terms(const PiecewiseSymbol& s, std::size_t M, bool theta_differences = false) {
  s.validate();
  FisherHartwigTerms out;
  const double m = static_cast<double>(M);
  if (s.jumps.empty()) {
    out.linear = m * std::log(s.values[0]);
    return out;
  }
  out.betas = fh_betas(s);
  const std::size_t k = s.jumps.size();
  // Continuous logarithm: principal on the wrap arc, then ln phi_r = ln phi_{r-1} - 2 pi i beta_r.
  std::vector<cplx> logs(k);
  cplx current = std::log(s.values[k - 1]);
  for (std::size_t r = 0; r < k; ++r) {
    current -= cplx(0.0, detail::two_pi) * out.betas[r];
    logs[r] = current;
  }
  cplx lin = 0.0;
  for (std::size_t r = 0; r < k; ++r) lin += (s.arc_end(r) - s.arc_begin(r)) * logs[r];
  out.linear = m * lin / detail::two_pi;
  std::vector<cplx> lr(k);
  for (std::size_t r = 0; r < k; ++r) lr[r] = cplx(0.0, detail::two_pi) * out.betas[r];
  out.pair_terms = fh_pair_sum(s.jumps, lr, m, theta_differences);
  return out;
}

inline cplx fh_logdet_asym(const PiecewiseSymbol& s, std::size_t M, bool theta_differences = false) {
  return fh_terms(s, M, theta_differences).value();
}

/// Window angles 0 < minus < plus < pi for the two intervals.
struct WindowAngles {
  double left_minus, left_plus, right_minus, right_plus;

  void validate() const {
    auto ok = [](double lo, double hi) { return 0.0 < lo && lo < hi && hi < std::numbers::pi; };
    if (!ok(left_minus, left_plus) || !ok(right_minus, right_plus))
      throw DomainError("WindowAngles: need 0 < theta_minus < theta_plus < pi for both windows");
  }
  bool in_left(double t) const { return t >= -left_plus && t <= -left_minus; }
  bool in_right(double t) const { return t >= right_minus && t <= right_plus; }
  std::vector<double> breakpoints() const {
    return {-std::numbers::pi, 0.0,         -left_plus, -left_minus, left_minus,
            left_plus,         right_minus, right_plus, -right_minus, -right_plus};
  }
};

namespace detail {

/// theta < 0: w(theta); theta >= 0: T w(theta) + R w(-theta).
template <class W>
PiecewiseSymbol mirrored_symbol(const WindowAngles& win, double T, W&& window_value) {
  const double R = 1.0 - T;
  return PiecewiseSymbol::from_breakpoints(win.breakpoints(), [&](double t) -> cplx {
    if (t < 0.0) return window_value(t);
    return T * window_value(t) + R * window_value(-t);
  });
}

inline bool has_negative_real_ratio(const PiecewiseSymbol& s) {
  for (std::size_t r = 0; r < s.jumps.size(); ++r) {
    const cplx q = s.jump_ratio(r);
    if (q.real() < 0.0 && std::abs(q.imag()) <= 1e-14 * std::abs(q)) return true;
  }
  return false;
}

template <class Build>
PiecewiseSymbol build_with_phase_guard(Build&& build) {
  constexpr double nudge = 1e-12;
  PiecewiseSymbol s = build(0.0);
  for (int attempt = 1; attempt <= 4 && has_negative_real_ratio(s); ++attempt) {
    s = build(nudge * attempt);
    s.phase_perturbed = true;
  }
  return s;
}

inline void check_unit_transmission(double T) {
  if (!(T >= 0.0 && T <= 1.0)) throw DomainError("symbol: transmission outside [0, 1]");
}

}  // namespace detail

/// Replica symbol of the simplified state for X in {A_L, A_R, A}.
inline PiecewiseSymbol mi_symbol(Subsystem sub, double gamma, int n, const WindowAngles& win, double T) {
  win.validate();
  detail::check_unit_transmission(T);
  if (n < 1) throw DomainError("mi_symbol: n must be >= 1");
  return detail::build_with_phase_guard([&](double dphi) {
    const cplx w = std::polar(1.0, detail::two_pi * gamma / n + dphi);
    return detail::mirrored_symbol(win, T, [&](double t) -> cplx {
      if (sub != Subsystem::Right && win.in_left(t)) return w;
      if (sub != Subsystem::Left && win.in_right(t)) return w;
      return 1.0;
    });
  });
}

/// Replica symbol entering the Renyi negativity: the right window carries -e^{-2 pi i gamma/n}.
inline PiecewiseSymbol negativity_symbol(double gamma, int n, const WindowAngles& win, double T) {
  win.validate();
  detail::check_unit_transmission(T);
  if (n < 1) throw DomainError("negativity_symbol: n must be >= 1");
  return detail::build_with_phase_guard([&](double dphi) {
    const double a = detail::two_pi * gamma / n + dphi;
    const cplx wl = std::polar(1.0, a);
    const cplx wr = -std::polar(1.0, -a);
    return detail::mirrored_symbol(win, T, [&](double t) -> cplx {
      if (win.in_left(t)) return wl;
      if (win.in_right(t)) return wr;
      return 1.0;
    });
  });
}

struct GammaSet {
  int n = 0;
  std::vector<double> gammas;       // -(n-1)/2 ... (n-1)/2
  std::vector<cplx> roots;          // z_gamma, 1/z = 1 - e^{2 pi i gamma/n}, gamma != 0
  std::vector<cplx> tilde_roots;    // even n: 1/z = (e^{ia} + e^{-ia}) / e^{ia}, gamma = 1/2 ... (n-1)/2

  explicit GammaSet(int order) : n(order) {
    if (n < 1) throw DomainError("GammaSet: n must be >= 1");
    for (int k = 0; k < n; ++k) {
      const double g = -(n - 1) / 2.0 + k;
      gammas.push_back(g);
      const cplx w = std::polar(1.0, detail::two_pi * g / n);
      if (g != 0.0) roots.push_back(1.0 / (1.0 - w));
      if (n % 2 == 0 && g > 0.0) {
        const cplx inv = (w + 1.0 / w) / w;
        if (std::abs(inv) > 1e-12) tilde_roots.push_back(1.0 / inv);
      }
    }
  }

  static cplx p(int n, cplx z) { return std::pow(z, n) + std::pow(1.0 - z, n); }
  static cplx p_tilde(int n, cplx z) { return std::pow(z, n / 2) + std::pow(1.0 - z, n / 2); }

  double sum_gamma_squared() const {
    double s = 0.0;
    for (double g : gammas) s += g * g;
    return s;
  }
};

enum class OverlapCase { Containment, Disjoint, Partial };

inline OverlapCase classify_windows(const WindowAngles& w) {
  if (w.left_plus <= w.right_minus || w.right_plus <= w.left_minus) return OverlapCase::Disjoint;
  const bool l_in_r = w.right_minus <= w.left_minus && w.left_plus <= w.right_plus;
  const bool r_in_l = w.left_minus <= w.right_minus && w.right_plus <= w.left_plus;
  if (l_in_r || r_in_l) return OverlapCase::Containment;
  return OverlapCase::Partial;
}

namespace detail {

/// Log-term contribution of one replica symbol in the long-range limit:
/// interactions among the jumps at theta > 0 only, with theta differences.
inline cplx positive_side_log_term(const PiecewiseSymbol& s) {
  std::vector<double> theta;
  std::vector<cplx> lr;
  for (std::size_t r = 0; r < s.jumps.size(); ++r) {
    if (s.jumps[r] <= 0.0) continue;
    theta.push_back(s.jumps[r]);
    lr.push_back(std::log(s.jump_ratio(r)));
  }
  return fh_pair_sum(theta, lr, 1.0, true);
}

}  // namespace detail

/// sum over gamma of the MI log term G_gamma = G(A_L) + G(A_R) - G(A) for constant T.
inline double gamma_log_sum_mi(double T, int n, OverlapCase which, const WindowAngles& win) {
  win.validate();
  if (n < 2) throw DomainError("gamma_log_sum_mi: n must be >= 2");
  if (classify_windows(win) != which) throw DomainError("gamma_log_sum_mi: windows inconsistent with the case");
  cplx total = 0.0;
  for (double g : GammaSet(n).gammas) {
    if (g == 0.0) continue;
    total += detail::positive_side_log_term(mi_symbol(Subsystem::Left, g, n, win, T));
    total += detail::positive_side_log_term(mi_symbol(Subsystem::Right, g, n, win, T));
    total -= detail::positive_side_log_term(mi_symbol(Subsystem::Both, g, n, win, T));
  }
  return total.real();
}

/// Closed form of the same sum: [Q_n(T)+Q_n(R)-(1/n-n)/12] ln|ratio1| + Qtilde_n(T) ln|ratio2|
/// with the window angles in place of lengths.
inline double mi_log_closed_form(double T, double n, const WindowAngles& win) {
  const auto lr = mi_log_ratios<double>(win.left_minus, win.left_plus - win.left_minus, win.right_minus,
                                        win.right_plus - win.right_minus);
  const double R = 1.0 - T;
  return (q_n(T, n) + q_n(R, n) - (1.0 / n - n) / 12.0) * lr[0] + q_tilde_n(T, n) * lr[1];
}

struct GammaIdentityResiduals {
  double i = 0.0, ii = 0.0, iii = 0.0;
  std::optional<double> iv;  // even n only
  double sum_gamma_squared = 0.0;
};

inline GammaIdentityResiduals gamma_identities(double T, int n) {
  if (n < 2) throw DomainError("gamma_identities: n must be >= 2");
  if (!(T >= 0.0 && T <= 1.0)) throw DomainError("gamma_identities: T outside [0, 1]");
  const double R = 1.0 - T;
  const double pi = std::numbers::pi, pi2 = pi * pi;
  const GammaSet gs(n);
  cplx s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (double g : gs.gammas) {
    const cplx w = std::polar(1.0, detail::two_pi * g / n);
    const cplx a = std::log(T * w + R);
    s1 += a * a / (4.0 * pi2);
    s2 += cplx(0.0, g / (pi * n)) * a;
    s3 += a * std::log(T + R * w) / (2.0 * pi2);
    if (n % 2 == 0) {
      const cplx b = std::log(R * w - T / w);
      s4 += b * b / (2.0 * pi2);
    }
  }
  GammaIdentityResiduals res;
  res.i = std::abs(s1 - q_n(R, n));
  res.ii = std::abs(s2 - ((1.0 / n - n) / 12.0 + q_n(R, n) - q_n(T, n)));
  res.iii = std::abs(s3 - q_tilde_n(T, n));
  if (n % 2 == 0) {
    const double h = 0.5 * n;
    res.iv = std::abs(s4 - (2.0 * q_n(T, h) + 2.0 * q_n(R, h) - 1.0 / (6.0 * n) - n / 12.0));
  }
  res.sum_gamma_squared = std::abs(gs.sum_gamma_squared() - (std::pow(n, 3) - n) / 12.0);
  return res;
}

/// 2x2 block symbol; the off-diagonal entries carry e^{+-i shift k}:
/// Phi12(k) = v12 e^{i shift k}, Phi21(k) = v21 e^{-i shift k}.
struct BlockSymbol {
  std::vector<double> breakpoints;           // ascending in [-pi, pi)
  std::vector<std::array<cplx, 4>> values;   // (11, 12, 21, 22) per arc
  long shift = 0;

  double arc_begin(std::size_t r) const { return breakpoints[r]; }
  double arc_end(std::size_t r) const {
    return r + 1 < breakpoints.size() ? breakpoints[r + 1] : breakpoints[0] + detail::two_pi;
  }

  void validate() const {
    if (breakpoints.empty() || values.size() != breakpoints.size())
      throw DomainError("BlockSymbol: one value per arc required");
    for (std::size_t r = 0; r < breakpoints.size(); ++r) {
      if (r > 0 && !(breakpoints[r] > breakpoints[r - 1])) throw DomainError("BlockSymbol: breakpoints not ascending");
      const auto& v = values[r];
      if (std::abs(v[2] - std::conj(v[1])) > 1e-12) throw DomainError("BlockSymbol: Phi21 != conj(Phi12)");
      for (const cplx d : {v[0], v[3]})
        if (std::abs(d.imag()) > 1e-12 || d.real() < -1e-12 || d.real() > 1.0 + 1e-12)
          throw DomainError("BlockSymbol: diagonal entries must be real in [0, 1]");
    }
  }

  static BlockSymbol identity() {
    BlockSymbol b;
    b.breakpoints = {-std::numbers::pi};
    b.values = {{1.0, 0.0, 0.0, 1.0}};
    return b;
  }
};

namespace detail {

/// +1 inside (a, b) when a < b, -1 inside (b, a) when b < a.
inline double oriented_indicator(double k, double a, double b) {
  if (a < b) return (k > a && k < b) ? 1.0 : 0.0;
  if (b < a) return (k > b && k < a) ? -1.0 : 0.0;
  return 0.0;
}

}  // namespace detail

/// Symbol of C_A for l_L = l_R in the interleaved basis (right site, left site) per block,
/// constant scattering only. offset = d_L - d_R.
inline BlockSymbol correlation_block_symbol(const ImpurityModel& model, const BiasConfig& bias, long offset) {
  if (!is_constant(model)) throw ScopeError("correlation_block_symbol: needs momentum-independent scattering");
  validate_model(model);
  const auto& c = std::get<ConstantS>(model);
  const double T = std::norm(c.t_left);
  const cplx tr = std::conj(c.t_left) * c.r_left;
  const double kl = bias.kf_left(), kr = bias.kf_right();
  std::vector<double> cand{-std::numbers::pi, -kl, -kr, kl, kr};
  for (double& t : cand) t = detail::wrap_angle(t);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  BlockSymbol b;
  b.shift = offset;
  for (std::size_t r = 0; r < cand.size(); ++r) {
    const double a = cand[r];
    const double e = r + 1 < cand.size() ? cand[r + 1] : cand[0] + detail::two_pi;
    const double k = detail::wrap_angle(0.5 * (a + e));
    const double w_r = detail::oriented_indicator(k, kr, kl);
    const double w_l = detail::oriented_indicator(k, kl, kr);
    const double p11 = (std::abs(k) < kr ? 1.0 : 0.0) + T * w_r;
    const double p22 = (std::abs(k) < kl ? 1.0 : 0.0) + T * w_l;
    const cplx p12 = tr * w_r;
    b.breakpoints.push_back(a);
    b.values.push_back({p11, p12, std::conj(p12), p22});
  }
  b.validate();
  return b;
}

/// 2l x 2l matrix with 2x2 block (j, m) equal to the Fourier coefficient of Phi at lag j - m.
inline ComplexMatrix block_toeplitz_matrix(const BlockSymbol& b, std::size_t ell) {
  if (ell == 0) throw DimensionError("block_toeplitz_matrix: length must be >= 1");
  b.validate();
  const long l = static_cast<long>(ell);
  std::vector<std::array<cplx, 4>> coeff(2 * ell - 1);
  for (long lag = -(l - 1); lag <= l - 1; ++lag) {
    std::array<cplx, 4> f{};
    for (std::size_t r = 0; r < b.values.size(); ++r) {
      const double a = b.arc_begin(r), e = b.arc_end(r);
      const auto& v = b.values[r];
      f[0] += v[0] * detail::exp_window(lag, a, e);
      f[1] += v[1] * detail::exp_window(lag - b.shift, a, e);
      f[2] += v[2] * detail::exp_window(lag + b.shift, a, e);
      f[3] += v[3] * detail::exp_window(lag, a, e);
    }
    coeff[static_cast<std::size_t>(lag + l - 1)] = f;
  }
  ComplexMatrix m(2 * ell, 2 * ell);
  for (std::size_t j = 0; j < ell; ++j)
    for (std::size_t q = 0; q < ell; ++q) {
      const auto& f = coeff[static_cast<std::size_t>(static_cast<long>(j) - static_cast<long>(q) + l - 1)];
      m(2 * j, 2 * q) = f[0];
      m(2 * j, 2 * q + 1) = f[1];
      m(2 * j + 1, 2 * q) = f[2];
      m(2 * j + 1, 2 * q + 1) = f[3];
    }
  return m;
}

enum class BlockRegime { Symmetric, Far };

/// ln det(lambda I - C_A) for l_L = l_R = l: linear and ln l terms.
/// Symmetric: l >> |d_L - d_R|; Far: l << |d_L - d_R|.
inline cplx block_fh_logdet_asym(cplx lambda, const ImpurityModel& model, const BiasConfig& bias, BlockRegime regime,
                                 std::size_t ell) {
  if (lambda.imag() == 0.0 && lambda.real() >= 0.0 && lambda.real() <= 1.0)
    throw BranchError("block_fh_logdet_asym: lambda lies on the spectral segment [0, 1]");
  if (ell == 0) throw DimensionError("block_fh_logdet_asym: length must be >= 1");
  const double pi = std::numbers::pi, pi2 = pi * pi;
  double kl = bias.kf_left(), kr = bias.kf_right();
  // The formulas assume k_F,L >= k_F,R; the other ordering is the mirror image.
  if (kl < kr) std::swap(kl, kr);
  const double l = static_cast<double>(ell);
  const cplx ll = std::log(lambda), lm = std::log(lambda - 1.0);
  const cplx x = std::log((lambda - 1.0) / lambda);
  if (regime == BlockRegime::Symmetric) {
    const cplx lin = kr / pi * 2.0 * lm + (kl - kr) / pi * (ll + lm) + (pi - kl) / pi * 2.0 * ll;
    return lin * l + x * x / pi2 * std::log(l);
  }
  cplx window = 0.0;
  if (kl > kr) {
    auto f = [&](double k) {
      const double T = transmission_at(model, k);
      return std::log(lambda - T) + std::log(lambda - (1.0 - T));  // not the log of the product: branch cut
    };
    if (is_constant(model)) {
      window = (kl - kr) * f(0.5 * (kl + kr));
    } else {
      QuadOptions opt;
      opt.abs_tol = 1e-11;
      window = integrate(f, kr, kl, opt);
    }
  }
  const cplx lin = kr / pi * 2.0 * lm + (kl - kr) / (2.0 * pi) * (ll + lm) + window / (2.0 * pi) +
                   (pi - kl) / pi * 2.0 * ll;
  const double Tl = kl > kr ? transmission_at(model, kl) : 1.0;
  const double Tr = kl > kr ? transmission_at(model, kr) : 1.0;
  auto sq = [](cplx z) { return z * z; };
  const cplx jumps = sq(std::log(lambda / (lambda - Tl))) + sq(std::log(lambda / (lambda - (1.0 - Tl)))) +
                     sq(std::log((lambda - 1.0) / (lambda - Tr))) +
                     sq(std::log((lambda - 1.0) / (lambda - (1.0 - Tr))));
  return lin * l + std::log(l) * (x * x / (2.0 * pi2) + jumps / (4.0 * pi2));
}

}  // namespace ness
