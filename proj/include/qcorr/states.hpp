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

#include <array>
#include <cmath>
#include <string>

#include "qcorr/errors.hpp"
#include "qcorr/linalg.hpp"

namespace qcorr {

using Vec3 = std::array<double, 3>;
using RealMat3 = std::array<std::array<double, 3>, 3>;

inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPositivityTolerance = 1e-10;

/// Two-qubit state in the computational basis |00>, |01>, |10>, |11>.
/// Always Hermitian, unit trace and positive semidefinite (within tolerance).
class DensityMatrix {
 public:
  /// Validates and stores the Hermitian part of `m`; throws NotAState.
  static DensityMatrix from_matrix(const Mat4& m) {
    if (!m.all_finite()) throw NotAState("density matrix has non-finite entries");
    const double defect = hermiticity_defect(m);
    if (defect > kHermitianTolerance)
      throw NotAState("density matrix not Hermitian (defect " + std::to_string(defect) + ")");
    Mat4 h = hermitian_part(m);
    const double tr = h.trace().real();
    if (std::abs(tr - 1.0) > kTraceTolerance)
      throw NotAState("density matrix trace " + std::to_string(tr) + " != 1");
    const auto e = hermitian_eig(h);
    if (e.values[3] < -kPositivityTolerance)
      throw NotAState("density matrix has negative eigenvalue " + std::to_string(e.values[3]));
    return DensityMatrix(h);
  }

  const Mat4& matrix() const noexcept { return m_; }
  cplx operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  double purity() const { return (m_ * m_).trace().real(); }

 private:
  explicit DensityMatrix(const Mat4& m) : m_(m) {}
  Mat4 m_;
};

/// Tr[a b] for two states.
inline double overlap(const DensityMatrix& a, const DensityMatrix& b) {
  return (a.matrix() * b.matrix()).trace().real();
}

/// alpha |00> + beta |11>.
struct PureStateSpec {
  cplx alpha{1.0};
  cplx beta{0.0};
};

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

/// (1-p)/4 I + p |B><B|.
struct WernerSpec {
  double p = 1.0;
  BellState bell = BellState::PhiPlus;
};

/// rho = 1/4 (I + r.sigma x I + I x s.sigma + sum t_ij sigma_i x sigma_j)
struct PauliDecomposition {
  Vec3 r{};
  Vec3 s{};
  RealMat3 t{};
};

inline std::array<cplx, 4> bell_vector(BellState b) {
  const double h = 1.0 / std::sqrt(2.0);
  switch (b) {
    case BellState::PhiPlus: return {h, 0.0, 0.0, h};
    case BellState::PhiMinus: return {h, 0.0, 0.0, -h};
    case BellState::PsiPlus: return {0.0, h, h, 0.0};
    case BellState::PsiMinus: return {0.0, h, -h, 0.0};
  }
  throw InvalidArgument("unknown Bell state");
}

inline Mat4 projector(const std::array<cplx, 4>& psi) {
  Mat4 m;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) m(r, c) = psi[r] * std::conj(psi[c]);
  return m;
}

inline DensityMatrix make_pure(const PureStateSpec& spec) {
  const double norm = std::norm(spec.alpha) + std::norm(spec.beta);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-9)
    throw InvalidArgument("make_pure: |alpha|^2 + |beta|^2 = " + std::to_string(norm) + ", expected 1");
  // accepted within 1e-9, then renormalised so the trace check (1e-12) holds
  const double r = std::sqrt(norm);
  return DensityMatrix::from_matrix(projector({spec.alpha / r, 0.0, 0.0, spec.beta / r}));
}

inline DensityMatrix make_werner(const WernerSpec& spec) {
  if (!(spec.p >= 0.0 && spec.p <= 1.0))
    throw InvalidArgument("make_werner: p = " + std::to_string(spec.p) + " outside [0, 1]");
  Mat4 m = ((1.0 - spec.p) / 4.0) * Mat4::identity() + spec.p * projector(bell_vector(spec.bell));
  return DensityMatrix::from_matrix(m);
}

inline DensityMatrix maximally_mixed() { return DensityMatrix::from_matrix(0.25 * Mat4::identity()); }

namespace detail {
inline double real_trace_of_product(const Mat4& op, const Mat4& rho, const char* label) {
  const cplx v = (op * rho).trace();
  if (std::abs(v.imag()) >= 1e-10)
    throw NumericalFailure(std::string("pauli_decompose: imaginary residue in ") + label);
  return v.real();
}
}  // namespace detail

inline PauliDecomposition pauli_decompose(const DensityMatrix& rho) {
  const auto s = pauli::xyz();
  const Mat2 id = Mat2::identity();
  PauliDecomposition d;
  for (std::size_t i = 0; i < 3; ++i) {
    d.r[i] = detail::real_trace_of_product(kron(s[i], id), rho.matrix(), "r");
    d.s[i] = detail::real_trace_of_product(kron(id, s[i]), rho.matrix(), "s");
    for (std::size_t j = 0; j < 3; ++j)
      d.t[i][j] = detail::real_trace_of_product(kron(s[i], s[j]), rho.matrix(), "t");
  }
  return d;
}

/// Inverse of pauli_decompose; throws NotAState if the expansion is not a
/// valid density matrix.
inline DensityMatrix pauli_reconstruct(const PauliDecomposition& d) {
  const auto s = pauli::xyz();
  const Mat2 id = Mat2::identity();
  Mat4 m = Mat4::identity();
  for (std::size_t i = 0; i < 3; ++i) {
    m += d.r[i] * kron(s[i], id);
    m += d.s[i] * kron(id, s[i]);
    for (std::size_t j = 0; j < 3; ++j) m += d.t[i][j] * kron(s[i], s[j]);
  }
  return DensityMatrix::from_matrix(0.25 * m);
}

/// Component sums of the local Bloch vectors. Reported for inspection only;
/// no constraint is placed on them (Bell states have r = s = 0).
inline std::array<double, 2> bloch_component_sums(const PauliDecomposition& d) {
  return {d.r[0] + d.r[1] + d.r[2], d.s[0] + d.s[1] + d.s[2]};
}

inline std::string to_string(BellState b) {
  switch (b) {
    case BellState::PhiPlus: return "phi_plus";
    case BellState::PhiMinus: return "phi_minus";
    case BellState::PsiPlus: return "psi_plus";
    case BellState::PsiMinus: return "psi_minus";
  }
  return "?";
}

}  // namespace qcorr
