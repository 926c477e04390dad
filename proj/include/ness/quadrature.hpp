#pragma once

// Globally adaptive Gauss-Legendre quadrature for real- or complex-valued
// integrands: the panel with the largest error estimate is bisected until the
// summed estimate meets the tolerance.

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <type_traits>
#include <utility>
#include <vector>

namespace ness {

struct QuadOptions {
  double abs_tol = 1e-11;
  /// Initial panels are no wider than this (resolves oscillations up front).
  double max_panel = std::numeric_limits<double>::infinity();
  std::size_t max_panels = 100000;
};

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  bool converged = true;
};

namespace detail {

constexpr unsigned gauss_points = 20;
using gauss_rule = boost::math::quadrature::gauss<double, gauss_points>;

template <class F>
auto gauss_panel(F& f, double a, double b) {
  using R = std::invoke_result_t<F&, double>;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const auto& x = gauss_rule::abscissa();
  const auto& w = gauss_rule::weights();
  R sum{};
  std::size_t start = 0;
  if constexpr (gauss_points % 2 == 1) {
    sum = w[0] * f(c);
    start = 1;
  }
  for (std::size_t i = start; i < x.size(); ++i) {
    sum += w[i] * (f(c - h * x[i]) + f(c + h * x[i]));
  }
  return R(sum * h);
}

template <class R>
struct Panel {
  double a, b;
  R left, right;  // rule on each half
  double err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

}  // namespace detail

/// Oriented integral of f over [a, b] (b < a flips the sign).
template <class F>
auto integrate_detailed(F&& f, double a, double b, const QuadOptions& opt = {}) {
  using R = std::invoke_result_t<F&, double>;
  using P = detail::Panel<R>;
  QuadResult<R> out;
  if (a == b) return out;
  if (b < a) {
    auto r = integrate_detailed(f, b, a, opt);
    r.value = -r.value;
    return r;
  }
  auto make = [&](double lo, double hi, R whole) {
    const double m = 0.5 * (lo + hi);
    P p{lo, hi, detail::gauss_panel(f, lo, m), detail::gauss_panel(f, m, hi), 0.0};
    p.err = std::abs(p.left + p.right - whole);
    return p;
  };

  std::size_t count = 1;
  if (std::isfinite(opt.max_panel) && opt.max_panel > 0.0)
    count = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / opt.max_panel)));
  std::priority_queue<P> heap;
  double total_err = 0.0;
  const double h = (b - a) / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double lo = a + h * static_cast<double>(i);
    const double hi = (i + 1 == count) ? b : a + h * static_cast<double>(i + 1);
    P p = make(lo, hi, detail::gauss_panel(f, lo, hi));
    total_err += p.err;
    heap.push(p);
  }
  while (total_err > opt.abs_tol && heap.size() < opt.max_panels) {
    P top = heap.top();
    const double m = 0.5 * (top.a + top.b);
    if (!(m > top.a && top.b > m)) break;
    heap.pop();
    P l = make(top.a, m, top.left);
    P r = make(m, top.b, top.right);
    total_err += l.err + r.err - top.err;
    heap.push(l);
    heap.push(r);
  }
  // Sum in ascending-position order for reproducibility.
  std::vector<P> panels;
  panels.reserve(heap.size());
  out.error = 0.0;
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const P& x, const P& y) { return x.a < y.a; });
  for (const auto& p : panels) {
    out.value += p.left + p.right;
    out.error += p.err;
  }
  out.converged = out.error <= opt.abs_tol;
  return out;
}

template <class F>
auto integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
  return integrate_detailed(std::forward<F>(f), a, b, opt).value;
}

}  // namespace ness
