#pragma once

// Entropies, mutual information and negativities from correlation matrices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <sstream>
#include <vector>

#include "ness/correlation.hpp"
#include "ness/densela.hpp"
#include "ness/errors.hpp"

namespace ness {

struct MeasureResult {
  double value = 0.0;
  double imag_residual = 0.0;
  std::size_t clamped_count = 0;
};

/// Replica index: a real n != 1, or the von Neumann limit.
struct Order {
  double n = 1.0;
  bool von_neumann = true;

  static Order vn() { return {1.0, true}; }
  static Order renyi(double n) {
    if (!(n > 0.0) || n == 1.0) throw DomainError("Order::renyi: n must be positive and != 1");
    return {n, false};
  }
};

/// Eigenvalues of a correlation matrix clamped into [0, 1].
struct Spectrum {
  std::vector<double> values;
  std::size_t clamped_count = 0;
};

inline Spectrum clamp_spectrum(std::vector<double> ev) {
  Spectrum s;
  for (double& l : ev) {
    if (l < -1e-6 || l > 1.0 + 1e-6) {
      std::ostringstream os;
      os << "correlation eigenvalue " << l << " outside [0, 1]";
      throw SpectrumError(os.str(), l);
    }
    if (l < 0.0 || l > 1.0) {
      l = std::clamp(l, 0.0, 1.0);
      ++s.clamped_count;
    }
  }
  s.values = std::move(ev);
  return s;
}

inline Spectrum correlation_spectrum(const ComplexMatrix& c) { return clamp_spectrum(herm_eigvals(c)); }
inline Spectrum correlation_spectrum(const CorrelationMatrix& c) { return correlation_spectrum(c.mat); }

inline MeasureResult renyi_entropy(const Spectrum& s, double n) {
  if (!(n > 0.0) || n == 1.0) throw DomainError("renyi_entropy: n must be positive and != 1");
  double sum = 0.0;
  for (double l : s.values) {
    if (l == 0.0 || l == 1.0) continue;
    sum += std::log(std::pow(l, n) + std::pow(1.0 - l, n));
  }
  return {sum / (1.0 - n), 0.0, s.clamped_count};
}

inline MeasureResult vn_entropy(const Spectrum& s) {
  constexpr double window = 1e-12;
  double sum = 0.0;
  for (double l : s.values) {
    if (l <= window || l >= 1.0 - window) continue;
    sum -= l * std::log(l) + (1.0 - l) * std::log1p(-l);
  }
  return {sum, 0.0, s.clamped_count};
}

inline MeasureResult entropy(const Spectrum& s, Order order) {
  return order.von_neumann ? vn_entropy(s) : renyi_entropy(s, order.n);
}

inline MeasureResult renyi_entropy(const CorrelationMatrix& c, double n) {
  return renyi_entropy(correlation_spectrum(c), n);
}
inline MeasureResult vn_entropy(const CorrelationMatrix& c) { return vn_entropy(correlation_spectrum(c)); }

inline MeasureResult mutual_information(const Spectrum& sl, const Spectrum& sr, const Spectrum& sa, Order order) {
  if (sa.values.size() != sl.values.size() + sr.values.size())
    throw DimensionError("mutual_information: dim(A) != dim(A_L) + dim(A_R)");
  const auto l = entropy(sl, order), r = entropy(sr, order), a = entropy(sa, order);
  return {l.value + r.value - a.value, 0.0, l.clamped_count + r.clamped_count + a.clamped_count};
}

inline MeasureResult mutual_information(const CorrelationMatrix& cl, const CorrelationMatrix& cr,
                                        const CorrelationMatrix& ca, Order order) {
  if (ca.dim() != cl.dim() + cr.dim()) throw DimensionError("mutual_information: dim(A) != dim(A_L) + dim(A_R)");
  return mutual_information(correlation_spectrum(cl), correlation_spectrum(cr), correlation_spectrum(ca), order);
}

/// C_Xi = (I - (I + G+ G-)^{-1} (G+ + G-)) / 2 with G+- = D+-(I - 2C)D+-, D+- = diag(+-i I_left, I_right).
inline ComplexMatrix build_c_xi(const ComplexMatrix& c, std::size_t size_left) {
  if (!c.square()) throw DimensionError("build_c_xi: matrix is not square");
  if (size_left > c.rows()) throw DimensionError("build_c_xi: size_left exceeds dimension");
  const std::size_t n = c.rows();
  ComplexMatrix gp(n, n), gm(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    const bool la = a < size_left;
    for (std::size_t b = 0; b < n; ++b) {
      const bool lb = b < size_left;
      const cplx g = (a == b ? 1.0 : 0.0) - 2.0 * c(a, b);
      // d_a d_b for D+: (i)(i) = -1 on LL, i on LR/RL, 1 on RR; D- flips the LR/RL sign.
      if (la && lb) {
        gp(a, b) = -g;
        gm(a, b) = -g;
      } else if (la || lb) {
        gp(a, b) = cplx(0.0, 1.0) * g;
        gm(a, b) = cplx(0.0, -1.0) * g;
      } else {
        gp(a, b) = g;
        gm(a, b) = g;
      }
    }
  }
  ComplexMatrix lhs = ComplexMatrix::identity(n) + matmul(gp, gm);
  ComplexMatrix rhs = gp + gm;
  ComplexMatrix x(1, 1);
  try {
    x = solve(lhs, rhs);
  } catch (const SingularityError& e) {
    throw SingularityError(std::string("build_c_xi: I + G+G- is singular (") + e.what() + ")", e.index());
  }
  ComplexMatrix out = ComplexMatrix::identity(n) - x;
  out *= 0.5;
  return out;
}

inline ComplexMatrix build_c_xi(const CorrelationMatrix& c, std::size_t size_left) {
  return build_c_xi(c.mat, size_left);
}
inline ComplexMatrix build_c_xi(const CorrelationMatrix& c) { return build_c_xi(c.mat, c.size_left); }

namespace detail {

inline cplx half_power(cplx z, double e) {
  if (e == 0.5) return std::sqrt(z);
  const double r = std::round(e);
  if (r == e && r >= 0.0 && r < 64.0) {
    cplx p = 1.0;
    for (int i = 0; i < static_cast<int>(r); ++i) p *= z;
    return p;
  }
  return std::pow(z, e);
}

/// sum_xi ln(xi^e + (1-xi)^e) + e * sum_lambda ln(lambda^2 + (1-lambda)^2)
inline MeasureResult negativity_sum(const std::vector<cplx>& xi, const Spectrum& lambda, double e) {
  // For e >= 1 an eigenvalue within the window of 0 or 1 changes the sum by at most e * window.
  // For e < 1 skipping would cost window^e, so roundoff outside [0, 1] is clamped instead;
  // c_xi_roots is the accurate route there.
  constexpr double window = 1e-12;
  cplx total = 0.0;
  std::size_t clamped = lambda.clamped_count;
  for (cplx x : xi) {
    if (std::abs(x) < window || std::abs(1.0 - x) < window) {
      ++clamped;
      if (e >= 1.0) continue;
      x = std::clamp(x.real(), 0.0, 1.0);
    }
    total += std::log(half_power(x, e) + half_power(1.0 - x, e));
  }
  double moment = 0.0;
  for (double l : lambda.values) moment += std::log(l * l + (1.0 - l) * (1.0 - l));
  total += e * moment;
  MeasureResult r{total.real(), std::abs(total.imag()), clamped};
  if (r.imag_residual > 1e-6) {
    std::ostringstream os;
    os << "negativity: imaginary residual " << r.imag_residual << " (eigenvalue near a branch cut)";
    throw BranchError(os.str());
  }
  return r;
}

inline void require_even(double n, const char* who) {
  if (!(n >= 2.0) || std::fmod(n, 2.0) != 0.0) throw DomainError(std::string(who) + ": n must be an even integer >= 2");
}

}  // namespace detail

/// Negativity from precomputed C_Xi eigenvalues and correlation spectrum; exponent e = n/2.
inline MeasureResult negativity_from_spectra(const std::vector<cplx>& xi, const Spectrum& lambda, double e) {
  return detail::negativity_sum(xi, lambda, e);
}

/// Paired square roots of the C_Xi eigenvalues: root_xi[i] = sqrt(xi_i), root_rest[i] = sqrt(1 - xi_i).
struct XiRoots {
  std::vector<double> root_xi;
  std::vector<double> root_rest;
  double pairing_residual = 0.0;  // max |xi + (1 - xi) - 1|
};

/// With A = I + G+ G+^H = L L^H, 2 xi and 2 (1 - xi) are the squared singular values of
/// L^{-1}(I - G+) and L^{-1}(I + G+). Each root comes out with absolute accuracy near eps,
/// where sqrt of a computed xi would amplify its roundoff.
inline XiRoots c_xi_roots(const ComplexMatrix& c, std::size_t size_left) {
  if (!c.square()) throw DimensionError("c_xi_roots: matrix is not square");
  if (size_left > c.rows()) throw DimensionError("c_xi_roots: size_left exceeds dimension");
  const std::size_t n = c.rows();
  ComplexMatrix gp(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const bool la = a < size_left, lb = b < size_left;
      const cplx g = (a == b ? 1.0 : 0.0) - 2.0 * c(a, b);
      gp(a, b) = la && lb ? -g : (la || lb ? cplx(0.0, 1.0) * g : g);
    }
  const ComplexMatrix id = ComplexMatrix::identity(n);
  const ComplexMatrix l = cholesky_lower(id + matmul(gp, gp.adjoint()));
  std::vector<double> s = singular_values(lower_solve(l, id - gp));
  const std::vector<double> t = singular_values(lower_solve(l, id + gp));
  std::reverse(s.begin(), s.end());  // ascending xi pairs with descending 1 - xi
  XiRoots out;
  out.root_xi.resize(n);
  out.root_rest.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.root_xi[i] = s[i] / std::numbers::sqrt2;
    out.root_rest[i] = t[i] / std::numbers::sqrt2;
    out.pairing_residual =
        std::max(out.pairing_residual, std::abs(out.root_xi[i] * out.root_xi[i] + out.root_rest[i] * out.root_rest[i] - 1.0));
  }
  if (out.pairing_residual > 1e-8) {
    std::ostringstream os;
    os << "c_xi_roots: singular values do not pair (residual " << out.pairing_residual << ")";
    throw ConvergenceError(os.str(), 0);
  }
  return out;
}

/// Fermionic negativity from paired roots and the correlation spectrum.
inline MeasureResult negativity_from_roots(const XiRoots& roots, const Spectrum& lambda) {
  double total = 0.0;
  for (std::size_t i = 0; i < roots.root_xi.size(); ++i) total += std::log(roots.root_xi[i] + roots.root_rest[i]);
  double moment = 0.0;
  for (double l : lambda.values) moment += std::log(l * l + (1.0 - l) * (1.0 - l));
  return {total + 0.5 * moment, 0.0, lambda.clamped_count};
}

inline MeasureResult fermionic_negativity(const CorrelationMatrix& c, std::size_t size_left) {
  return negativity_from_roots(c_xi_roots(c.mat, size_left), correlation_spectrum(c));
}

inline MeasureResult renyi_negativity_eig(const CorrelationMatrix& c, std::size_t size_left, int n) {
  detail::require_even(n, "renyi_negativity_eig");
  return detail::negativity_sum(gen_eigvals(build_c_xi(c, size_left)), correlation_spectrum(c), 0.5 * n);
}

/// sum_gamma log det(I - C_gamma), C_gamma = diag((1 - w) I_left, (1 + 1/w) I_right) C with w = e^{2 pi i gamma/n}.
inline MeasureResult renyi_negativity_det(const ComplexMatrix& c, std::size_t size_left, int n) {
  detail::require_even(n, "renyi_negativity_det");
  if (!c.square()) throw DimensionError("renyi_negativity_det: matrix is not square");
  if (size_left > c.rows()) throw DimensionError("renyi_negativity_det: size_left exceeds dimension");
  const std::size_t dim = c.rows();
  cplx total = 0.0;
  for (int k = 0; k < n; ++k) {
    const double gamma = -(n - 1) / 2.0 + k;
    const cplx w = std::polar(1.0, 2.0 * std::numbers::pi * gamma / n);
    const cplx fl = 1.0 - w;
    const cplx fr = 1.0 + 1.0 / w;
    ComplexMatrix m(dim, dim);
    for (std::size_t a = 0; a < dim; ++a) {
      const cplx f = a < size_left ? fl : fr;
      for (std::size_t b = 0; b < dim; ++b) m(a, b) = (a == b ? 1.0 : 0.0) - f * c(a, b);
    }
    try {
      total += lu_logdet(m);
    } catch (const SingularityError& e) {
      std::ostringstream os;
      os << "renyi_negativity_det: factor I - C_gamma singular at gamma = " << gamma;
      throw SingularityError(os.str(), e.index());
    }
  }
  // Conjugate gamma pairs cancel the phase up to multiples of 2 pi.
  const double two_pi = 2.0 * std::numbers::pi;
  const double phase = total.imag() - two_pi * std::round(total.imag() / two_pi);
  MeasureResult r{total.real(), std::abs(phase), 0};
  if (r.imag_residual > 1e-6) throw BranchError("renyi_negativity_det: product of factors is not real");
  return r;
}

inline MeasureResult renyi_negativity_det(const CorrelationMatrix& c, std::size_t size_left, int n) {
  return renyi_negativity_det(c.mat, size_left, n);
}

}  // namespace ness
