#pragma once

// Q_n(p), Qtilde_n(T), q(T), qtilde(T): the coefficient functions of the
// logarithmic corrections. All are evaluated from their integral
// representations over x in [0, 1], which are smooth except at x = 0.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ness/errors.hpp"
#include "ness/quadrature.hpp"

namespace ness {

namespace detail {

inline constexpr double pi2 = std::numbers::pi * std::numbers::pi;
inline constexpr double special_tol = 1e-12;

inline void check_unit(double p, const char* who) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << who << ": argument " << p << " outside [0, 1]";
    throw DomainError(os.str());
  }
}

inline void check_order(double n, const char* who) {
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError(std::string(who) + ": n must be positive");
}

/// int_0^1 h(x) dx / x with x = u^{1/s}; h(x) = O(x^s) at the origin.
template <class H>
double integrate_over_x(H&& h, double s) {
  QuadOptions opt;
  opt.abs_tol = special_tol;
  if (s == 1.0) return integrate([&](double x) { return h(x) / x; }, 0.0, 1.0, opt);
  const double inv = 1.0 / s;
  return inv * integrate([&](double u) { return h(std::pow(u, inv)) / u; }, 0.0, 1.0, opt);
}

inline double xlogx(double y) { return y > 0.0 ? y * std::log(y) : 0.0; }

}  // namespace detail

inline double q_n(double p, double n) {
  detail::check_unit(p, "q_n");
  detail::check_order(n, "q_n");
  const double r = 1.0 - p;
  const double norm = std::pow(p, n) + std::pow(r, n);
  auto h = [&](double x) {
    return std::log(std::pow(1.0 + p * x, n) + std::pow(r * x, n)) +
           std::log((std::pow(x + p, n) + std::pow(r, n)) / norm);
  };
  return -n / 12.0 + detail::integrate_over_x(h, std::min(n, 1.0)) / (2.0 * detail::pi2);
}

inline double q_tilde_n(double T, double n) {
  detail::check_unit(T, "q_tilde_n");
  detail::check_order(n, "q_tilde_n");
  const double R = 1.0 - T;
  auto h = [&](double x) {
    const double mix = std::pow(T + R * x, n) + std::pow(R + T * x, n);
    return std::log(std::pow(1.0 + T * x, n) + std::pow(R * x, n)) +
           std::log(std::pow(1.0 + R * x, n) + std::pow(T * x, n)) +
           std::log((std::pow(x + T, n) + std::pow(R, n)) / mix) +
           std::log((std::pow(x + R, n) + std::pow(T, n)) / mix);
  };
  return -n / 12.0 + detail::integrate_over_x(h, std::min(n, 1.0)) / (2.0 * detail::pi2);
}

/// von Neumann limit of [Q_n(T) + Q_n(R) - (1/n - n)/12] / (1 - n).
inline double q_fun(double T) {
  detail::check_unit(T, "q_fun");
  const double R = 1.0 - T;
  using detail::xlogx;
  const double ent = xlogx(T) + xlogx(R);
  auto h = [&](double x) {
    const double a = -(xlogx(1.0 + R * x) + xlogx(1.0 + T * x)) / (1.0 + x);
    const double b = ent - (xlogx(R + x) + xlogx(T + x)) / (1.0 + x);
    return a + b;
  };
  return 1.0 / 24.0 + detail::integrate_over_x(h, 0.5) / (2.0 * detail::pi2);
}

/// von Neumann limit of Qtilde_n(T) / (1 - n).
inline double q_tilde_fun(double T) {
  detail::check_unit(T, "q_tilde_fun");
  const double R = 1.0 - T;
  using detail::xlogx;
  const double ent = xlogx(T) + xlogx(R);
  auto h = [&](double x) { return (xlogx(R + T * x) + xlogx(T + R * x)) / (1.0 + x) - ent; };
  return q_fun(T) + 1.0 / 12.0 + detail::integrate_over_x(h, 0.5) / detail::pi2;
}

}  // namespace ness
