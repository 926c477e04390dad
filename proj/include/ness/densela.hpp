#pragma once

// Dense complex linear algebra on row-major matrices, backed by LAPACK/BLAS.
//
// LAPACK works column-major. A row-major buffer read column-major is the
// transpose, and eigenvalues and determinants are transpose-invariant (for a
// Hermitian matrix the transpose is the conjugate, same real spectrum), so the
// spectral routines hand the buffer over without reordering.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <vector>

#ifndef lapack_complex_double
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>
#include <cblas.h>

#include "ness/errors.hpp"

namespace ness {

using cplx = std::complex<double>;

class ComplexMatrix {
 public:
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) throw DimensionError("ComplexMatrix: rows and cols must be >= 1");
  }
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0) throw DimensionError("ComplexMatrix: rows and cols must be >= 1");
    if (data_.size() != rows * cols) throw DimensionError("ComplexMatrix: entry count != rows*cols");
  }
  /// Row-wise initializer, e.g. {{0, 1}, {1, 0}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows_init)
      : ComplexMatrix(rows_init.size(), rows_init.size() ? rows_init.begin()->size() : 0) {
    std::size_t i = 0;
    for (const auto& row : rows_init) {
      if (row.size() != cols_) throw DimensionError("ComplexMatrix: ragged initializer");
      std::copy(row.begin(), row.end(), data_.begin() + i * cols_);
      ++i;
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static ComplexMatrix diagonal(const std::vector<cplx>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  cplx* data() noexcept { return data_.data(); }
  const cplx* data() const noexcept { return data_.data(); }
  const std::vector<cplx>& entries() const noexcept { return data_; }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
  }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix a(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) a(j, i) = std::conj((*this)(i, j));
    return a;
  }

  /// max |m_ij - conj(m_ji)|
  double hermitian_deviation() const {
    if (!square()) throw DimensionError("hermitian_deviation: matrix is not square");
    double dev = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        dev = std::max(dev, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return dev;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
  }
  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

 private:
  void check_same_shape(const ComplexMatrix& o) const {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw DimensionError("ComplexMatrix: shape mismatch");
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<cplx> data_;
};

namespace detail {

inline void require_square(const ComplexMatrix& m, const char* who) {
  if (!m.square()) {
    std::ostringstream os;
    os << who << ": matrix is " << m.rows() << "x" << m.cols() << ", expected square";
    throw DimensionError(os.str());
  }
}

inline void require_finite(const ComplexMatrix& m, const char* who) {
  if (!m.all_finite()) throw DomainError(std::string(who) + ": matrix has non-finite entries");
}

}  // namespace detail

/// Eigenvalues of a Hermitian matrix, ascending. Hermiticity is checked, not imposed.
inline std::vector<double> herm_eigvals(const ComplexMatrix& m, double tol = 1e-10) {
  detail::require_square(m, "herm_eigvals");
  detail::require_finite(m, "herm_eigvals");
  const double dev = m.hermitian_deviation();
  if (dev > tol) {
    std::ostringstream os;
    os << "herm_eigvals: matrix not Hermitian, max |m - m^H| = " << dev;
    throw SymmetryError(os.str(), dev);
  }
  const auto n = static_cast<lapack_int>(m.rows());
  std::vector<cplx> a(m.entries());
  std::vector<double> w(m.rows());
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, w.data());
  if (info > 0) throw ConvergenceError("herm_eigvals: eigensolver did not converge", static_cast<std::size_t>(info));
  if (info < 0) throw Error("herm_eigvals: invalid LAPACK argument");
  return w;  // LAPACK returns ascending order
}

/// All eigenvalues of a general complex matrix (Hessenberg reduction + shifted QR).
inline std::vector<cplx> gen_eigvals(const ComplexMatrix& m) {
  detail::require_square(m, "gen_eigvals");
  detail::require_finite(m, "gen_eigvals");
  const auto n = static_cast<lapack_int>(m.rows());
  std::vector<cplx> a(m.entries());
  std::vector<cplx> w(m.rows());
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(), nullptr, 1, nullptr, 1);
  if (info > 0) {
    std::ostringstream os;
    os << "gen_eigvals: QR iteration failed to converge at subdiagonal index " << info;
    throw ConvergenceError(os.str(), static_cast<std::size_t>(info));
  }
  if (info < 0) throw Error("gen_eigvals: invalid LAPACK argument");
  return w;
}

/// log det via partial-pivoting LU: sum of log pivots, permutation sign folded into Im.
inline cplx lu_logdet(const ComplexMatrix& m) {
  detail::require_square(m, "lu_logdet");
  detail::require_finite(m, "lu_logdet");
  const auto n = static_cast<lapack_int>(m.rows());
  std::vector<cplx> a(m.entries());
  std::vector<lapack_int> ipiv(m.rows());
  const lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, a.data(), n, ipiv.data());
  if (info < 0) throw Error("lu_logdet: invalid LAPACK argument");
  cplx sum = 0.0;
  bool odd = false;
  for (lapack_int i = 0; i < n; ++i) {
    const cplx p = a[static_cast<std::size_t>(i) * (n + 1)];
    if (std::abs(p) <= 1e-300) {
      std::ostringstream os;
      os << "lu_logdet: singular pivot at index " << i;
      throw SingularityError(os.str(), static_cast<std::size_t>(i));
    }
    sum += std::log(p);
    if (ipiv[i] != i + 1) odd = !odd;
  }
  if (odd) sum += cplx(0.0, std::numbers::pi);
  return sum;
}

/// Singular values, descending.
inline std::vector<double> singular_values(const ComplexMatrix& m) {
  detail::require_finite(m, "singular_values");
  const auto r = static_cast<lapack_int>(m.rows()), c = static_cast<lapack_int>(m.cols());
  std::vector<cplx> a(m.entries());
  std::vector<double> s(std::min(m.rows(), m.cols()));
  const lapack_int info =
      LAPACKE_zgesdd(LAPACK_ROW_MAJOR, 'N', r, c, a.data(), c, s.data(), nullptr, std::max<lapack_int>(r, 1), nullptr, std::max<lapack_int>(c, 1));
  if (info > 0) throw ConvergenceError("singular_values: SVD did not converge", static_cast<std::size_t>(info));
  if (info < 0) throw Error("singular_values: invalid LAPACK argument");
  return s;
}

/// Lower Cholesky factor L of a Hermitian positive-definite matrix, a = L L^H.
inline ComplexMatrix cholesky_lower(const ComplexMatrix& a) {
  detail::require_square(a, "cholesky_lower");
  detail::require_finite(a, "cholesky_lower");
  const auto n = static_cast<lapack_int>(a.rows());
  std::vector<cplx> l(a.entries());
  const lapack_int info = LAPACKE_zpotrf(LAPACK_ROW_MAJOR, 'L', n, l.data(), n);
  if (info > 0) {
    std::ostringstream os;
    os << "cholesky_lower: matrix not positive definite at index " << info - 1;
    throw SingularityError(os.str(), static_cast<std::size_t>(info - 1));
  }
  if (info < 0) throw Error("cholesky_lower: invalid LAPACK argument");
  for (lapack_int i = 0; i < n; ++i)
    for (lapack_int j = i + 1; j < n; ++j) l[static_cast<std::size_t>(i * n + j)] = 0.0;
  return ComplexMatrix(a.rows(), a.cols(), std::move(l));
}

/// Solve l x = b for lower-triangular l.
inline ComplexMatrix lower_solve(const ComplexMatrix& l, const ComplexMatrix& b) {
  detail::require_square(l, "lower_solve");
  if (b.rows() != l.rows()) throw DimensionError("lower_solve: right-hand side has wrong row count");
  const auto n = static_cast<lapack_int>(l.rows());
  const auto nrhs = static_cast<lapack_int>(b.cols());
  std::vector<cplx> x(b.entries());
  const lapack_int info = LAPACKE_ztrtrs(LAPACK_ROW_MAJOR, 'L', 'N', 'N', n, nrhs, l.data(), n, x.data(), nrhs);
  if (info > 0) {
    std::ostringstream os;
    os << "lower_solve: zero diagonal at index " << info - 1;
    throw SingularityError(os.str(), static_cast<std::size_t>(info - 1));
  }
  if (info < 0) throw Error("lower_solve: invalid LAPACK argument");
  return ComplexMatrix(b.rows(), b.cols(), std::move(x));
}

/// a * b
inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
  ComplexMatrix c(a.rows(), b.cols());
  const cplx one = 1.0, zero = 0.0;
  cblas_zgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(a.rows()), static_cast<int>(b.cols()),
              static_cast<int>(a.cols()), &one, a.data(), static_cast<int>(a.cols()), b.data(),
              static_cast<int>(b.cols()), &zero, c.data(), static_cast<int>(c.cols()));
  return c;
}

/// Solve a x = b for x.
inline ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  detail::require_square(a, "solve");
  if (b.rows() != a.rows()) throw DimensionError("solve: right-hand side has wrong row count");
  std::vector<cplx> lu(a.entries());
  std::vector<cplx> x(b.entries());
  std::vector<lapack_int> ipiv(a.rows());
  const auto n = static_cast<lapack_int>(a.rows());
  const auto nrhs = static_cast<lapack_int>(b.cols());
  const lapack_int info = LAPACKE_zgesv(LAPACK_ROW_MAJOR, n, nrhs, lu.data(), n, ipiv.data(), x.data(), nrhs);
  if (info > 0) {
    std::ostringstream os;
    os << "solve: singular matrix, zero pivot at index " << info - 1;
    throw SingularityError(os.str(), static_cast<std::size_t>(info - 1));
  }
  if (info < 0) throw Error("solve: invalid LAPACK argument");
  return ComplexMatrix(b.rows(), b.cols(), std::move(x));
}

}  // namespace ness
