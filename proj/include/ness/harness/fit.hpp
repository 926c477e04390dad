#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ness/errors.hpp"

namespace ness::harness {

struct IndexWindow {
  std::size_t begin;  // inclusive
  std::size_t end;    // exclusive
};

struct ConstantFit {
  double constant;
  double rms;
};

/// Least-squares additive constant between two series over a window.
inline ConstantFit fit_constant(const std::vector<double>& numeric, const std::vector<double>& analytic,
                                IndexWindow w) {
  if (numeric.size() != analytic.size()) throw DimensionError("fit_constant: series lengths differ");
  if (w.begin >= w.end || w.end > numeric.size()) throw DomainError("fit_constant: empty or out-of-range window");
  const double count = static_cast<double>(w.end - w.begin);
  double mean = 0.0;
  for (std::size_t i = w.begin; i < w.end; ++i) mean += numeric[i] - analytic[i];
  mean /= count;
  double ss = 0.0;
  for (std::size_t i = w.begin; i < w.end; ++i) {
    const double r = numeric[i] - analytic[i] - mean;
    ss += r * r;
  }
  return {mean, std::sqrt(ss / count)};
}

inline ConstantFit fit_constant(const std::vector<double>& numeric, const std::vector<double>& analytic) {
  return fit_constant(numeric, analytic, {0, numeric.size()});
}

/// Ordinary least-squares line y = intercept + slope * x.
struct LineFit {
  double intercept;
  double slope;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionError("fit_line: series lengths differ");
  if (x.size() < 2) throw DomainError("fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw DomainError("fit_line: abscissae coincide");
  const double slope = sxy / sxx;
  return {my - slope * mx, slope};
}

}  // namespace ness::harness
