#pragma once

// Scattering models, bias configuration and two-interval geometry.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <type_traits>
#include <variant>
#include <vector>

#include "ness/errors.hpp"

namespace ness {

using cplx = std::complex<double>;

/// Scattering amplitudes at one momentum. S = [[r_L, t_R], [t_L, r_R]].
struct ScatteringData {
  double k = 0.0;
  cplx r_left, t_left, r_right, t_right;

  double transmission() const { return std::norm(t_left); }
  double reflection() const { return std::norm(r_left); }

  /// max-entry deviation of S^H S from the identity
  double unitarity_residual() const {
    const cplx s00 = std::norm(r_left) + std::norm(t_left);
    const cplx s11 = std::norm(t_right) + std::norm(r_right);
    const cplx s01 = std::conj(r_left) * t_right + std::conj(t_left) * r_right;
    return std::max({std::abs(s00 - 1.0), std::abs(s11 - 1.0), std::abs(s01)});
  }
};

/// Momentum-independent scattering matrix.
struct ConstantS {
  cplx r_left, t_left, r_right, t_right;

  /// Symmetric beam splitter with transmission probability T: t = sqrt(T), r = i sqrt(1-T).
  static ConstantS beam_splitter(double T) {
    if (!(T >= 0.0 && T <= 1.0)) throw DomainError("ConstantS::beam_splitter: transmission must lie in [0, 1]");
    const double t = std::sqrt(T);
    const cplx r(0.0, std::sqrt(1.0 - T));
    return ConstantS{r, t, r, t};
  }
};

/// Single site with on-site energy eps0 in a chain with hopping eta.
struct SingleSite {
  double onsite_energy = 0.0;
  double hopping = 1.0;
};

using ImpurityModel = std::variant<ConstantS, SingleSite>;

inline void validate_model(const ImpurityModel& model) {
  if (const auto* s = std::get_if<SingleSite>(&model)) {
    if (!(s->hopping > 0.0)) throw DomainError("SingleSite: hopping must be positive");
    if (!std::isfinite(s->onsite_energy)) throw DomainError("SingleSite: on-site energy must be finite");
  } else {
    const auto& c = std::get<ConstantS>(model);
    ScatteringData d{0.0, c.r_left, c.t_left, c.r_right, c.t_right};
    if (d.unitarity_residual() > 1e-10) throw DomainError("ConstantS: scattering matrix is not unitary");
  }
}

inline bool is_constant(const ImpurityModel& model) { return std::holds_alternative<ConstantS>(model); }

inline ScatteringData scattering_at(const ImpurityModel& model, double k) {
  if (!(k > 0.0 && k < std::numbers::pi)) {
    std::ostringstream os;
    os << "scattering_at: momentum " << k << " outside (0, pi)";
    throw DomainError(os.str());
  }
  return std::visit(
      [k](const auto& m) -> ScatteringData {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ConstantS>) {
          return ScatteringData{k, m.r_left, m.t_left, m.r_right, m.t_right};
        } else {
          if (!(m.hopping > 0.0)) throw DomainError("SingleSite: hopping must be positive");
          const double s = std::sin(k);
          const double a = m.onsite_energy / (2.0 * m.hopping);
          const cplx t = s / cplx(s, a);
          const cplx r = t - 1.0;
          return ScatteringData{k, r, t, r, t};
        }
      },
      model);
}

/// Transmission probability T(k) without building the full amplitude set.
inline double transmission_at(const ImpurityModel& model, double k) {
  if (const auto* s = std::get_if<SingleSite>(&model)) {
    if (!(k > 0.0 && k < std::numbers::pi)) throw DomainError("transmission_at: momentum outside (0, pi)");
    const double sn = std::sin(k);
    const double a = s->onsite_energy / (2.0 * s->hopping);
    return sn * sn / (sn * sn + a * a);
  }
  return scattering_at(model, k).transmission();
}

inline double fermi_momentum(double hopping, double mu) {
  if (!(hopping > 0.0)) throw DomainError("fermi_momentum: hopping must be positive");
  if (std::abs(mu) > 2.0 * hopping) {
    std::ostringstream os;
    os << "fermi_momentum: |mu| = " << std::abs(mu) << " exceeds the band edge 2*eta = " << 2.0 * hopping;
    throw DomainError(os.str());
  }
  return std::acos(std::clamp(-mu / (2.0 * hopping), -1.0, 1.0));
}

class BiasConfig {
 public:
  BiasConfig(double hopping, double mu_left, double mu_right)
      : hopping_(hopping),
        mu_left_(mu_left),
        mu_right_(mu_right),
        kf_left_(fermi_momentum(hopping, mu_left)),
        kf_right_(fermi_momentum(hopping, mu_right)) {}

  static BiasConfig from_fermi_momenta(double kf_left, double kf_right, double hopping = 1.0) {
    auto check = [](double k) {
      if (!(k >= 0.0 && k <= std::numbers::pi)) throw DomainError("BiasConfig: Fermi momentum outside [0, pi]");
    };
    check(kf_left);
    check(kf_right);
    BiasConfig b(hopping, -2.0 * hopping * std::cos(kf_left), -2.0 * hopping * std::cos(kf_right));
    b.kf_left_ = kf_left;  // keep the exact momenta rather than the acos round trip
    b.kf_right_ = kf_right;
    return b;
  }

  double hopping() const { return hopping_; }
  double mu_left() const { return mu_left_; }
  double mu_right() const { return mu_right_; }
  double kf_left() const { return kf_left_; }
  double kf_right() const { return kf_right_; }
  double k_plus() const { return std::max(kf_left_, kf_right_); }
  double k_minus() const { return std::min(kf_left_, kf_right_); }
  double delta_k() const { return k_plus() - k_minus(); }
  bool biased() const { return kf_left_ != kf_right_; }

 private:
  double hopping_, mu_left_, mu_right_;
  double kf_left_, kf_right_;
};

enum class Side { Left, Right };

/// Impurity occupies |m| <= m0. A_L = [-m0-dL-lL, -m0-dL-1], A_R = [m0+dR+1, m0+dR+lR].
struct Geometry {
  long m0 = 0;
  long d_left = 0;
  long ell_left = 1;
  long d_right = 0;
  long ell_right = 1;

  void validate() const {
    if (m0 < 0 || d_left < 0 || d_right < 0) throw DomainError("Geometry: m0 and distances must be >= 0");
    if (ell_left < 1 || ell_right < 1) throw DomainError("Geometry: interval lengths must be >= 1");
  }

  std::vector<long> sites_left() const {
    std::vector<long> s;
    s.reserve(static_cast<std::size_t>(ell_left));
    for (long j = ell_left; j >= 1; --j) s.push_back(-m0 - d_left - j);
    return s;
  }
  std::vector<long> sites_right() const {
    std::vector<long> s;
    s.reserve(static_cast<std::size_t>(ell_right));
    for (long j = 1; j <= ell_right; ++j) s.push_back(m0 + d_right + j);
    return s;
  }
  bool symmetric() const { return ell_left == ell_right && d_left == d_right; }
};

struct MirrorOverlap {
  long ell_mirror;
  long delta_left;
  long delta_right;
};

inline MirrorOverlap mirror_overlap(const Geometry& g) {
  g.validate();
  const long lm = std::max(std::min(g.d_left + g.ell_left, g.d_right + g.ell_right) - std::max(g.d_left, g.d_right), 0L);
  return {lm, g.ell_left - lm, g.ell_right - lm};
}

}  // namespace ness
