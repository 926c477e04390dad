#pragma once

// Restricted two-point correlation matrices <c_j^dag c_m> for the biased chain.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ness/densela.hpp"
#include "ness/errors.hpp"
#include "ness/model.hpp"
#include "ness/quadrature.hpp"

namespace ness {

enum class Subsystem { Left, Right, Both };
enum class CorrelationMode { LongRange, Full };

inline const char* to_string(Subsystem s) {
  switch (s) {
    case Subsystem::Left: return "A_L";
    case Subsystem::Right: return "A_R";
    default: return "A";
  }
}

struct CorrelationMatrix {
  std::vector<long> sites;
  ComplexMatrix mat;
  /// Number of leading indices that belong to A_L.
  std::size_t size_left = 0;

  CorrelationMatrix(std::vector<long> s, ComplexMatrix m, std::size_t n_left)
      : sites(std::move(s)), mat(std::move(m)), size_left(n_left) {
    if (!mat.square() || mat.rows() != sites.size())
      throw DimensionError("CorrelationMatrix: matrix size does not match the site list");
    if (size_left > sites.size()) throw DimensionError("CorrelationMatrix: size_left exceeds dimension");
    const double dev = mat.hermitian_deviation();
    if (dev > 1e-10) throw SymmetryError("CorrelationMatrix: not Hermitian", dev);
    for (std::size_t i = 0; i < mat.rows(); ++i) {
      const cplx d = mat(i, i);
      if (std::abs(d.imag()) > 1e-10 || d.real() < -1e-10 || d.real() > 1.0 + 1e-10)
        throw DomainError("CorrelationMatrix: diagonal entry outside [0, 1]");
    }
  }

  std::size_t dim() const { return sites.size(); }
  std::size_t size_right() const { return sites.size() - size_left; }
};

namespace detail {

/// int_a^b e^{-i n k} dk / 2pi, oriented.
inline cplx exp_window(long n, double a, double b) {
  if (n == 0) return cplx((b - a) / (2.0 * std::numbers::pi), 0.0);
  const double nn = static_cast<double>(n);
  const cplx eb = std::polar(1.0, -nn * b);
  const cplx ea = std::polar(1.0, -nn * a);
  return cplx(0.0, 1.0) * (eb - ea) / (2.0 * std::numbers::pi * nn);
}

/// int_{-a}^{a} e^{-i n k} dk / 2pi
inline double sinc_window(long n, double a) {
  if (n == 0) return a / std::numbers::pi;
  const double nn = static_cast<double>(n);
  return std::sin(nn * a) / (std::numbers::pi * nn);
}

inline double oscillation_panel(double freq) {
  return freq > 0.0 ? 0.5 * std::numbers::pi / freq : std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Long-range kernel with per-lag memoization. Same-side blocks depend on j - m,
/// cross blocks on j + m, so a scan over offsets reuses most values.
class LongRangeKernel {
 public:
  LongRangeKernel(ImpurityModel model, BiasConfig bias, double abs_tol = 1e-11)
      : model_(std::move(model)), bias_(bias), tol_(abs_tol) {
    validate_model(model_);
  }

  const ImpurityModel& model() const { return model_; }
  const BiasConfig& bias() const { return bias_; }

  /// j, m in A_R, lag = j - m.
  cplx same_right(long lag) const {
    return cached(cache_rr_, lag, [&] {
      return cplx(detail::sinc_window(lag, bias_.kf_right()), 0.0) +
             window(lag, bias_.kf_right(), bias_.kf_left(), Weight::Transmission);
    });
  }
  /// j, m in A_L, lag = j - m.
  cplx same_left(long lag) const {
    return cached(cache_ll_, lag, [&] {
      return cplx(detail::sinc_window(lag, bias_.kf_left()), 0.0) +
             window(-lag, bias_.kf_left(), bias_.kf_right(), Weight::Transmission);
    });
  }
  /// j in A_R, m in A_L, sum = j + m.
  cplx right_left(long sum) const {
    return cached(cache_rl_, sum, [&] { return window(sum, bias_.kf_right(), bias_.kf_left(), Weight::CrossLeft); });
  }
  /// j in A_L, m in A_R, sum = j + m.
  cplx left_right(long sum) const {
    return cached(cache_lr_, sum, [&] { return window(-sum, bias_.kf_left(), bias_.kf_right(), Weight::CrossRight); });
  }

  cplx entry(long j, long m, long m0) const {
    const Side sj = side_of(j, m0), sm = side_of(m, m0);
    if (sj == Side::Right && sm == Side::Right) return same_right(j - m);
    if (sj == Side::Left && sm == Side::Left) return same_left(j - m);
    if (sj == Side::Right) return right_left(j + m);
    return left_right(j + m);
  }

  static Side side_of(long site, long m0) {
    if (site > m0) return Side::Right;
    if (site < -m0) return Side::Left;
    std::ostringstream os;
    os << "site " << site << " lies inside the impurity region |m| <= " << m0;
    throw DomainError(os.str());
  }

 private:
  enum class Weight { Transmission, CrossLeft, CrossRight };

  cplx weight(Weight w, double k) const {
    if (w == Weight::Transmission) return transmission_at(model_, k);
    const ScatteringData s = scattering_at(model_, k);
    if (w == Weight::CrossLeft) return std::conj(s.t_left) * s.r_left;
    return std::conj(s.t_right) * s.r_right;
  }

  /// int_a^b w(k) e^{-i n k} dk / 2pi, oriented.
  cplx window(long n, double a, double b, Weight w) const {
    if (a == b) return 0.0;
    if (is_constant(model_)) {
      const double mid = 0.5 * (a + b);
      return weight(w, mid) * detail::exp_window(n, a, b);
    }
    const double nn = static_cast<double>(n);
    QuadOptions opt;
    opt.abs_tol = tol_;
    opt.max_panel = detail::oscillation_panel(std::abs(nn));
    return integrate(
        [&](double k) { return weight(w, k) * std::polar(1.0 / (2.0 * std::numbers::pi), -nn * k); }, a, b, opt);
  }

  template <class F>
  cplx cached(std::map<long, cplx>& cache, long key, F&& compute) const {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
    }
    const cplx v = compute();
    std::lock_guard<std::mutex> lock(mutex_);
    cache.emplace(key, v);
    return v;
  }

  ImpurityModel model_;
  BiasConfig bias_;
  double tol_;
  mutable std::mutex mutex_;
  mutable std::map<long, cplx> cache_rr_, cache_ll_, cache_rl_, cache_lr_;
};

inline cplx corr_entry_longrange(const ImpurityModel& model, const BiasConfig& bias, long j, long m, long m0 = 0) {
  return LongRangeKernel(model, bias).entry(j, m, m0);
}

namespace detail {

/// Scattering state incoming from the left with momentum q > 0, at site x.
inline cplx wave_from_left(const ScatteringData& s, double x, Side side) {
  const cplx I(0.0, 1.0);
  if (side == Side::Left) return std::exp(I * s.k * x) + s.r_left * std::exp(-I * s.k * x);
  return s.t_left * std::exp(I * s.k * x);
}

/// Scattering state incoming from the right with momentum -q, q > 0.
inline cplx wave_from_right(const ScatteringData& s, double x, Side side) {
  const cplx I(0.0, 1.0);
  if (side == Side::Left) return s.t_right * std::exp(-I * s.k * x);
  return std::exp(-I * s.k * x) + s.r_right * std::exp(I * s.k * x);
}

/// Gauss-Legendre sum of conj(psi_j) psi_m / 2pi over `panels` equal panels of (0, kf),
/// for every pair of sites at once: Psi^H W Psi.
inline ComplexMatrix full_mode_sum(const ImpurityModel& model, double kf, bool from_left,
                                   const std::vector<long>& sites, long m0, std::size_t panels) {
  const auto& x = gauss_rule::abscissa();
  const auto& w = gauss_rule::weights();
  const std::size_t n = sites.size(), per = 2 * x.size();
  ComplexMatrix psi(panels * per, n), wpsi(panels * per, n);
  std::vector<Side> side(n);
  for (std::size_t a = 0; a < n; ++a) side[a] = sites[a] > m0 ? Side::Right : Side::Left;
  const double h = 0.5 * kf / static_cast<double>(panels);
  std::size_t row = 0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double c = (2.0 * static_cast<double>(p) + 1.0) * h;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (double sign : {-1.0, 1.0}) {
        const ScatteringData s = scattering_at(model, c + sign * h * x[i]);
        const double weight = w[i] * h / (2.0 * std::numbers::pi);
        for (std::size_t a = 0; a < n; ++a) {
          const double xs = static_cast<double>(sites[a]);
          const cplx v = from_left ? wave_from_left(s, xs, side[a]) : wave_from_right(s, xs, side[a]);
          psi(row, a) = v;
          wpsi(row, a) = weight * v;
        }
        ++row;
      }
  }
  return matmul(psi.adjoint(), wpsi);
}

}  // namespace detail

/// Exact scattering-state integral, reflection cross terms included; bound states ignored.
inline cplx corr_entry_full(const ImpurityModel& model, const BiasConfig& bias, long j, long m, long m0 = 0,
                            double abs_tol = 1e-10) {
  validate_model(model);
  const Side sj = LongRangeKernel::side_of(j, m0), sm = LongRangeKernel::side_of(m, m0);
  const double jj = static_cast<double>(j), mm = static_cast<double>(m);
  QuadOptions opt;
  opt.abs_tol = 0.5 * abs_tol;
  opt.max_panel = detail::oscillation_panel(std::abs(jj) + std::abs(mm));
  const double norm = 1.0 / (2.0 * std::numbers::pi);
  cplx total = 0.0;
  if (bias.kf_left() > 0.0) {
    total += integrate(
        [&](double q) {
          const ScatteringData s = scattering_at(model, q);
          return norm * std::conj(detail::wave_from_left(s, jj, sj)) * detail::wave_from_left(s, mm, sm);
        },
        0.0, bias.kf_left(), opt);
  }
  if (bias.kf_right() > 0.0) {
    total += integrate(
        [&](double q) {
          const ScatteringData s = scattering_at(model, q);
          return norm * std::conj(detail::wave_from_right(s, jj, sj)) * detail::wave_from_right(s, mm, sm);
        },
        0.0, bias.kf_right(), opt);
  }
  return total;
}

/// Full-mode matrix for a site list. Panels start at one period of the fastest
/// oscillation and are halved until two successive sums agree to abs_tol.
inline ComplexMatrix full_mode_matrix(const ImpurityModel& model, const BiasConfig& bias,
                                      const std::vector<long>& sites, long m0, double abs_tol = 1e-11) {
  validate_model(model);
  if (sites.empty()) throw DimensionError("full_mode_matrix: no sites");
  long reach = 0;
  for (long s : sites) {
    LongRangeKernel::side_of(s, m0);
    reach = std::max(reach, std::abs(s));
  }
  const double freq = 2.0 * static_cast<double>(reach);
  ComplexMatrix total(sites.size(), sites.size());
  for (bool from_left : {true, false}) {
    const double kf = from_left ? bias.kf_left() : bias.kf_right();
    if (!(kf > 0.0)) continue;
    std::size_t panels = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(kf * freq / (2.0 * std::numbers::pi))));
    ComplexMatrix prev = detail::full_mode_sum(model, kf, from_left, sites, m0, panels);
    constexpr int max_refinements = 8;
    for (int level = 1;; ++level) {
      panels *= 2;
      ComplexMatrix cur = detail::full_mode_sum(model, kf, from_left, sites, m0, panels);
      double diff = 0.0;
      for (std::size_t i = 0; i < cur.entries().size(); ++i)
        diff = std::max(diff, std::abs(cur.entries()[i] - prev.entries()[i]));
      if (diff <= abs_tol) {
        total += cur;
        break;
      }
      if (level == max_refinements) {
        std::ostringstream os;
        os << "full_mode_matrix: panel refinement stalled at change " << diff;
        throw ConvergenceError(os.str(), static_cast<std::size_t>(level));
      }
      prev = std::move(cur);
    }
  }
  return total;
}

inline std::vector<long> subsystem_sites(const Geometry& g, Subsystem sub) {
  std::vector<long> sites;
  if (sub != Subsystem::Right) sites = g.sites_left();
  if (sub != Subsystem::Left) {
    auto r = g.sites_right();
    sites.insert(sites.end(), r.begin(), r.end());
  }
  return sites;
}

/// Long-range build reusing an existing kernel cache.
inline CorrelationMatrix build_corr_matrix(const LongRangeKernel& kernel, const Geometry& g, Subsystem sub) {
  g.validate();
  const auto sites = subsystem_sites(g, sub);
  const std::size_t n = sites.size();
  ComplexMatrix mat(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    mat(a, a) = cplx(kernel.entry(sites[a], sites[a], g.m0).real(), 0.0);
    for (std::size_t b = a + 1; b < n; ++b) {
      const cplx v = kernel.entry(sites[a], sites[b], g.m0);
      mat(a, b) = v;
      mat(b, a) = std::conj(v);
    }
  }
  const std::size_t n_left = sub == Subsystem::Right ? 0 : static_cast<std::size_t>(g.ell_left);
  return CorrelationMatrix(sites, std::move(mat), n_left);
}

inline CorrelationMatrix build_corr_matrix(const ImpurityModel& model, const BiasConfig& bias, const Geometry& g,
                                           Subsystem sub, CorrelationMode mode = CorrelationMode::LongRange,
                                           double abs_tol = 1e-11) {
  if (mode == CorrelationMode::LongRange) return build_corr_matrix(LongRangeKernel(model, bias, abs_tol), g, sub);
  g.validate();
  const auto sites = subsystem_sites(g, sub);
  ComplexMatrix mat = full_mode_matrix(model, bias, sites, g.m0, abs_tol);
  for (std::size_t a = 0; a < sites.size(); ++a) {
    mat(a, a) = cplx(mat(a, a).real(), 0.0);
    for (std::size_t b = a + 1; b < sites.size(); ++b) mat(b, a) = std::conj(mat(a, b));
  }
  const std::size_t n_left = sub == Subsystem::Right ? 0 : static_cast<std::size_t>(g.ell_left);
  return CorrelationMatrix(sites, std::move(mat), n_left);
}

}  // namespace ness
