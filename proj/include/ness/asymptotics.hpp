#pragma once

// Volume-law coefficients and logarithmic corrections for entropies, mutual
// information and negativity in the long-range regime.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "ness/errors.hpp"
#include "ness/measures.hpp"
#include "ness/model.hpp"
#include "ness/quadrature.hpp"
#include "ness/special_functions.hpp"

namespace ness {

struct LinearTerm {
  double coeff;   // per site
  double length;  // sites
};

struct LogTerm {
  double coeff;
  double argument;  // > 0
};

/// linear + sum coeff * ln(argument) + optional constant
struct AsymptoticPrediction {
  std::vector<LinearTerm> linear_terms;
  std::vector<LogTerm> log_terms;
  std::optional<double> constant;

  /// Per-site coefficient of the leading (first) linear term.
  double linear_coeff() const { return linear_terms.empty() ? 0.0 : linear_terms.front().coeff; }
  double linear_term() const {
    double s = 0.0;
    for (const auto& t : linear_terms) s += t.coeff * t.length;
    return s;
  }
  double log_term() const {
    double s = 0.0;
    for (const auto& t : log_terms) s += t.coeff * std::log(t.argument);
    return s;
  }
  double value() const { return linear_term() + log_term() + constant.value_or(0.0); }

  AsymptoticPrediction& operator+=(const AsymptoticPrediction& o) {
    linear_terms.insert(linear_terms.end(), o.linear_terms.begin(), o.linear_terms.end());
    log_terms.insert(log_terms.end(), o.log_terms.begin(), o.log_terms.end());
    if (o.constant) constant = constant.value_or(0.0) + *o.constant;
    return *this;
  }
  AsymptoticPrediction scaled(double s) const {
    AsymptoticPrediction p = *this;
    for (auto& t : p.linear_terms) t.coeff *= s;
    for (auto& t : p.log_terms) t.coeff *= s;
    if (p.constant) *p.constant *= s;
    return p;
  }
};

struct SortedLengths {
  std::array<long, 4> m;

  explicit SortedLengths(const Geometry& g)
      : m{g.d_left, g.ell_left + g.d_left, g.d_right, g.ell_right + g.d_right} {
    std::stable_sort(m.begin(), m.end());
  }
};

enum class VolumeKind { EntropyN, MiN, MiVN, NegN, NegVN };

namespace detail {

inline void require_bias(const BiasConfig& bias, const char* who) {
  if (!bias.biased()) throw BiasError(std::string(who) + ": formula requires a finite bias (mu_L != mu_R)");
}

inline double volume_integrand(VolumeKind kind, double T, double n) {
  const double R = 1.0 - T;
  switch (kind) {
    case VolumeKind::EntropyN:
      return std::log(std::pow(T, n) + std::pow(R, n)) / ((1.0 - n) * 2.0 * std::numbers::pi);
    case VolumeKind::MiN:
      return std::log(std::pow(T, n) + std::pow(R, n)) / ((1.0 - n) * std::numbers::pi);
    case VolumeKind::MiVN:
      return -(xlogx(T) + xlogx(R)) / std::numbers::pi;
    case VolumeKind::NegN:
      return std::log(std::pow(T, 0.5 * n) + std::pow(R, 0.5 * n)) / std::numbers::pi;
    case VolumeKind::NegVN:
      return std::log(std::sqrt(T) + std::sqrt(R)) / std::numbers::pi;
  }
  return 0.0;
}

/// ln |prod(num) / prod(den)| with exactly-zero factors omitted.
template <class Num>
double log_ratio(std::initializer_list<Num> num, std::initializer_list<Num> den) {
  double s = 0.0;
  for (Num v : num)
    if (v != Num(0)) s += std::log(std::abs(static_cast<double>(v)));
  for (Num v : den)
    if (v != Num(0)) s -= std::log(std::abs(static_cast<double>(v)));
  return s;
}

}  // namespace detail

inline double volume_coeff(const ImpurityModel& model, const BiasConfig& bias, VolumeKind kind, double n = 1.0) {
  if ((kind == VolumeKind::EntropyN || kind == VolumeKind::MiN) && (!(n > 0.0) || n == 1.0))
    throw DomainError("volume_coeff: Renyi kinds need n > 0, n != 1");
  if (kind == VolumeKind::NegN && !(n > 0.0)) throw DomainError("volume_coeff: n must be positive");
  const double a = bias.k_minus(), b = bias.k_plus();
  if (a == b) return 0.0;
  if (is_constant(model)) return (b - a) * detail::volume_integrand(kind, transmission_at(model, 0.5 * (a + b)), n);
  QuadOptions opt;
  opt.abs_tol = 1e-11;
  return integrate([&](double k) { return detail::volume_integrand(kind, transmission_at(model, k), n); }, a, b, opt);
}

/// The two log arguments of the mutual-information correction, as ln|ratio|.
/// ratio1 = (m3-m1)(m4-m2) / ((lL+dL-lR-dR)(dL-dR)),
/// ratio2 = (m3-m1)(m4-m2) / ((lR+dR-dL)(lL+dL-dR)); vanishing differences are dropped.
template <class Len>
std::array<double, 2> mi_log_ratios(Len dL, Len lL, Len dR, Len lR) {
  std::array<Len, 4> m{dL, lL + dL, dR, lR + dR};
  std::stable_sort(m.begin(), m.end());
  const Len a = m[2] - m[0], b = m[3] - m[1];
  return {detail::log_ratio<Len>({a, b}, {lL + dL - lR - dR, dL - dR}),
          detail::log_ratio<Len>({a, b}, {lR + dR - dL, lL + dL - dR})};
}

/// Coefficients (c1, c2) of ln|ratio1|, ln|ratio2| contributed by one Fermi momentum
/// with transmission T, already divided by (1 - n).
inline std::array<double, 2> renyi_mi_log_coeffs(double T, double n) {
  const double R = 1.0 - T;
  return {(q_n(T, n) + q_n(R, n) - (1.0 / n - n) / 12.0) / (1.0 - n), q_tilde_n(T, n) / (1.0 - n)};
}

inline std::array<double, 2> vn_mi_log_coeffs(double T) { return {q_fun(T), q_tilde_fun(T)}; }

namespace detail {

inline AsymptoticPrediction mi_prediction(const Geometry& g, double linear, std::array<double, 2> cl, std::array<double, 2> cr) {
  const auto mo = mirror_overlap(g);
  const auto lr = mi_log_ratios<long>(g.d_left, g.ell_left, g.d_right, g.ell_right);
  AsymptoticPrediction p;
  p.linear_terms.push_back({linear, static_cast<double>(mo.ell_mirror)});
  // Equal weights for the two Fermi momenta.
  p.log_terms.push_back({0.5 * (cl[0] + cr[0]), std::exp(lr[0])});
  p.log_terms.push_back({0.5 * (cl[1] + cr[1]), std::exp(lr[1])});
  return p;
}

}  // namespace detail

inline AsymptoticPrediction single_interval_entropy_asym(const ImpurityModel& model, const BiasConfig& bias,
                                                         const Geometry& g, Side side, double n) {
  detail::require_bias(bias, "single_interval_entropy_asym");
  g.validate();
  if (!(n > 0.0) || n == 1.0) throw DomainError("single_interval_entropy_asym: n must be positive and != 1");
  const double k_side = side == Side::Left ? bias.kf_left() : bias.kf_right();
  const double k_other = side == Side::Left ? bias.kf_right() : bias.kf_left();
  const double len = static_cast<double>(side == Side::Left ? g.ell_left : g.ell_right);
  const double T_side = transmission_at(model, k_side);
  const double R_other = 1.0 - transmission_at(model, k_other);
  AsymptoticPrediction p;
  p.linear_terms.push_back({volume_coeff(model, bias, VolumeKind::EntropyN, n), len});
  p.log_terms.push_back({(1.0 + n) / (12.0 * n) + (q_n(T_side, n) + q_n(R_other, n)) / (1.0 - n), len});
  return p;
}

inline AsymptoticPrediction renyi_mi_asym(const ImpurityModel& model, const BiasConfig& bias, const Geometry& g,
                                          double n) {
  detail::require_bias(bias, "renyi_mi_asym");
  g.validate();
  if (!(n > 0.0) || n == 1.0) throw DomainError("renyi_mi_asym: n must be positive and != 1");
  return detail::mi_prediction(g, volume_coeff(model, bias, VolumeKind::MiN, n),
                               renyi_mi_log_coeffs(transmission_at(model, bias.kf_left()), n),
                               renyi_mi_log_coeffs(transmission_at(model, bias.kf_right()), n));
}

inline AsymptoticPrediction vn_mi_asym(const ImpurityModel& model, const BiasConfig& bias, const Geometry& g) {
  detail::require_bias(bias, "vn_mi_asym");
  g.validate();
  return detail::mi_prediction(g, volume_coeff(model, bias, VolumeKind::MiVN),
                               vn_mi_log_coeffs(transmission_at(model, bias.kf_left())),
                               vn_mi_log_coeffs(transmission_at(model, bias.kf_right())));
}

inline AsymptoticPrediction mi_asym(const ImpurityModel& model, const BiasConfig& bias, const Geometry& g,
                                    Order order) {
  return order.von_neumann ? vn_mi_asym(model, bias, g) : renyi_mi_asym(model, bias, g, order.n);
}

/// S_A^(n) of the union, assembled as S_{A_L} + S_{A_R} - I^(n).
inline AsymptoticPrediction union_entropy_asym(const ImpurityModel& model, const BiasConfig& bias, const Geometry& g,
                                               double n) {
  AsymptoticPrediction p = single_interval_entropy_asym(model, bias, g, Side::Left, n);
  p += single_interval_entropy_asym(model, bias, g, Side::Right, n);
  p += renyi_mi_asym(model, bias, g, n).scaled(-1.0);
  return p;
}

/// Symmetric configuration only. order = vn() gives the fermionic negativity.
inline AsymptoticPrediction negativity_asym_symmetric(const ImpurityModel& model, const BiasConfig& bias, long ell,
                                                      Order order) {
  detail::require_bias(bias, "negativity_asym_symmetric");
  if (ell < 1) throw DomainError("negativity_asym_symmetric: length must be >= 1");
  const double n = order.von_neumann ? 1.0 : order.n;
  if (!order.von_neumann && (std::fmod(n, 2.0) != 0.0 || n < 2.0))
    throw DomainError("negativity_asym_symmetric: Renyi negativity needs even n");
  const double h = 0.5 * n;
  double log_coeff = -n / 4.0;
  for (double k : {bias.kf_left(), bias.kf_right()}) {
    const double T = transmission_at(model, k);
    log_coeff += q_n(T, h) + q_n(1.0 - T, h);
  }
  AsymptoticPrediction p;
  const double lin = order.von_neumann ? volume_coeff(model, bias, VolumeKind::NegVN)
                                       : volume_coeff(model, bias, VolumeKind::NegN, n);
  p.linear_terms.push_back({lin, static_cast<double>(ell)});
  p.log_terms.push_back({log_coeff, static_cast<double>(ell)});
  return p;
}

inline AsymptoticPrediction negativity_asym_symmetric(const ImpurityModel& model, const BiasConfig& bias,
                                                      const Geometry& g, Order order) {
  if (!g.symmetric())
    throw ScopeError("negativity_asym_symmetric: closed form covers only l_L = l_R, d_L = d_R");
  return negativity_asym_symmetric(model, bias, g.ell_left, order);
}

}  // namespace ness
