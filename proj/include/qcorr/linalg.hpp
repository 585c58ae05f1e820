// Copyright 2026 The qcorr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense complex matrices of compile-time dimension 2..4 and the handful of
// kernels the rest of the library needs: products, adjoints, Kronecker
// products, a cyclic Jacobi Hermitian eigensolver and PSD square roots.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

using cplx = std::complex<double>;

template <std::size_t N>
class Matrix {
  static_assert(N >= 2 && N <= 4, "qcorr matrices are 2x2, 3x3 or 4x4");

 public:
  static constexpr std::size_t dim = N;

  constexpr Matrix() = default;

  static constexpr Matrix zero() { return Matrix{}; }

  static constexpr Matrix identity() {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  static constexpr Matrix diagonal(const std::array<cplx, N>& d) {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }

  /// Row-major initialisation.
  static constexpr Matrix from_rows(const std::array<cplx, N * N>& entries) {
    Matrix m;
    m.data_ = entries;
    return m;
  }

  constexpr cplx& operator()(std::size_t r, std::size_t c) { return data_[r * N + c]; }
  constexpr const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * N + c]; }

  constexpr const std::array<cplx, N * N>& entries() const { return data_; }

  Matrix adjoint() const {
    Matrix m;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t c = 0; c < N; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
  }

  Matrix transpose() const {
    Matrix m;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t c = 0; c < N; ++c) m(c, r) = (*this)(r, c);
    return m;
  }

  Matrix conj() const {
    Matrix m;
    for (std::size_t k = 0; k < N * N; ++k) m.data_[k] = std::conj(data_[k]);
    return m;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
  }

  Matrix& operator+=(const Matrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
  friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= cplx(s); }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix m;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t k = 0; k < N; ++k) {
        const cplx ark = a(r, k);
        if (ark == cplx(0.0)) continue;
        for (std::size_t c = 0; c < N; ++c) m(r, c) += ark * b(k, c);
      }
    return m;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::array<cplx, N * N> data_{};
};

using Mat2 = Matrix<2>;
using Mat3 = Matrix<3>;
using Mat4 = Matrix<4>;

namespace pauli {
inline Mat2 identity() { return Mat2::identity(); }
inline Mat2 x() { return Mat2::from_rows({0.0, 1.0, 1.0, 0.0}); }
inline Mat2 y() { return Mat2::from_rows({0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0}); }
inline Mat2 z() { return Mat2::from_rows({1.0, 0.0, 0.0, -1.0}); }
/// sigma_1, sigma_2, sigma_3 in that order.
inline std::array<Mat2, 3> xyz() { return {x(), y(), z()}; }
}  // namespace pauli

/// Kronecker product, entry[(2i+k),(2j+l)] = a[i,j] * b[k,l].
inline Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 m;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) m(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return m;
}

/// Hilbert-Schmidt (Frobenius) norm sqrt(tr A^dagger A).
template <std::size_t N>
double hs_norm(const Matrix<N>& a) {
  double s = 0.0;
  for (const cplx& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

template <std::size_t N>
double hermiticity_defect(const Matrix<N>& a) {
  return hs_norm(a - a.adjoint());
}

template <std::size_t N>
Matrix<N> hermitian_part(const Matrix<N>& a) {
  return 0.5 * (a + a.adjoint());
}

template <std::size_t N>
struct HermitianEigen {
  std::array<double, N> values{};  // descending
  Matrix<N> vectors;               // column k pairs with values[k]
};

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kJacobiOffDiagonalTolerance = 1e-14;
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kPsdClampTolerance = 1e-10;

namespace detail {

template <std::size_t N>
double off_diagonal_norm(const Matrix<N>& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

// One complex Jacobi rotation annihilating a(p,q). With a(p,q) = |a| e^{i phi}
// the unitary is U = diag(1, e^{-i phi}) R on the (p,q) plane, R real.
template <std::size_t N>
void jacobi_rotate(Matrix<N>& a, Matrix<N>& v, std::size_t p, std::size_t q) {
  const cplx apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const cplx phase = apq / mag;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * mag);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const cplx up_p = c, up_q = -s * std::conj(phase);  // column p of U (rows p, q)
  const cplx uq_p = s, uq_q = c * std::conj(phase);   // column q of U

  // A <- A U (columns p, q)
  for (std::size_t k = 0; k < N; ++k) {
    const cplx akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * up_p + akq * up_q;
    a(k, q) = akp * uq_p + akq * uq_q;
  }
  // A <- U^dagger A (rows p, q)
  for (std::size_t k = 0; k < N; ++k) {
    const cplx apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(up_p) * apk + std::conj(up_q) * aqk;
    a(q, k) = std::conj(uq_p) * apk + std::conj(uq_q) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < N; ++k) {
    const cplx vkp = v(k, p), vkq = v(k, q);
    v(k, p) = vkp * up_p + vkq * up_q;
    v(k, q) = vkp * uq_p + vkq * uq_q;
  }
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
/// The input is symmetrised first; eigenvalues come back in descending order.
template <std::size_t N>
HermitianEigen<N> hermitian_eig(const Matrix<N>& h) {
  if (!h.all_finite()) throw InvalidArgument("hermitian_eig: non-finite entry");
  const double defect = hermiticity_defect(h);
  if (defect > kHermitianTolerance)
    throw InvalidArgument("hermitian_eig: matrix is not Hermitian (defect " + std::to_string(defect) + ")");

  Matrix<N> a = hermitian_part(h);
  Matrix<N> v = Matrix<N>::identity();
  const double scale = hs_norm(a);
  const double tol = kJacobiOffDiagonalTolerance * scale;

  int sweep = 0;
  while (detail::off_diagonal_norm(a) > tol) {
    if (++sweep > kJacobiMaxSweeps) throw NumericalFailure("hermitian_eig: Jacobi sweeps did not converge");
    for (std::size_t p = 0; p + 1 < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) detail::jacobi_rotate(a, v, p, q);
  }

  std::array<std::size_t, N> order;
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

  HermitianEigen<N> out;
  for (std::size_t k = 0; k < N; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < N; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

/// V diag(f(lambda)) V^dagger for a decomposition.
template <std::size_t N, class F>
Matrix<N> spectral_map(const HermitianEigen<N>& e, F&& f) {
  Matrix<N> m;
  for (std::size_t k = 0; k < N; ++k) {
    const double fk = f(e.values[k]);
    if (fk == 0.0) continue;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t c = 0; c < N; ++c) m(r, c) += fk * e.vectors(r, k) * std::conj(e.vectors(c, k));
  }
  return m;
}

inline constexpr double kSvdOrthogonalityTolerance = 1e-15;

/// Singular values of a square complex matrix, descending, by one-sided
/// (Hestenes) Jacobi rotations on the columns. Accurate to about eps ||A||
/// in absolute terms, so tiny singular values are not lost to squaring.
template <std::size_t N>
std::array<double, N> singular_values(const Matrix<N>& m) {
  if (!m.all_finite()) throw InvalidArgument("singular_values: non-finite entry");
  Matrix<N> a = m;
  auto col_dot = [&](std::size_t p, std::size_t q) {
    cplx s = 0.0;
    for (std::size_t k = 0; k < N; ++k) s += std::conj(a(k, p)) * a(k, q);
    return s;
  };
  for (int sweep = 0;; ++sweep) {
    if (sweep > kJacobiMaxSweeps) throw NumericalFailure("singular_values: Jacobi sweeps did not converge");
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) {
        const double alpha = col_dot(p, p).real(), beta = col_dot(q, q).real();
        const cplx g = col_dot(p, q);
        const double mag = std::abs(g);
        if (mag == 0.0 || mag <= kSvdOrthogonalityTolerance * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const cplx phase = g / mag;
        const double theta = (beta - alpha) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < N; ++k) {
          const cplx xp = a(k, p), xq = a(k, q);
          a(k, p) = c * xp - s * std::conj(phase) * xq;
          a(k, q) = s * xp + c * std::conj(phase) * xq;
        }
      }
    if (!rotated) break;
  }
  std::array<double, N> out;
  for (std::size_t k = 0; k < N; ++k) out[k] = std::sqrt(col_dot(k, k).real());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues in [-1e-10, 0) are treated as zero.
template <std::size_t N>
Matrix<N> psd_sqrt(const Matrix<N>& h) {
  const auto e = hermitian_eig(h);
  if (e.values[N - 1] < -kPsdClampTolerance)
    throw NotPsd("psd_sqrt: eigenvalue " + std::to_string(e.values[N - 1]) + " below clamp tolerance");
  return spectral_map(e, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

}  // namespace qcorr
