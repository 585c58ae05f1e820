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

// Correlation measures of a two-qubit state: teleportation fidelity,
// Bell-CHSH value, two- and three-setting steering, concurrence, plus the
// quantum speed limit bound for a channel family.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qcorr/channels.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

struct Thresholds {
  double f_classical = 2.0 / 3.0;
  double f_lhv = 0.87;
  double bell_classical = 2.0;
  double steering_zero = 0.0;
  double concurrence_zero = 0.0;
};

struct MeasureVector {
  double fidelity = 0.0;
  double n_value = 0.0;
  double bell = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
  double concurrence = 0.0;
  std::optional<double> tau_qsl;
};

/// How the steering coefficients c_i are taken from T.
enum class SteeringMode { SingularValues, Eigenvalues };

struct MeasureOptions {
  SteeringMode steering = SteeringMode::SingularValues;
};

/// The six threshold tests, strongest first.
enum class Measure { FidelityLhv, Bell, Steering2, Steering3, Teleportation, Entanglement };

inline constexpr std::array<Measure, 6> kChainOrder = {Measure::FidelityLhv, Measure::Bell,
                                                       Measure::Steering2,   Measure::Steering3,
                                                       Measure::Teleportation, Measure::Entanglement};

inline std::string to_string(Measure m) {
  switch (m) {
    case Measure::FidelityLhv: return "fidelity_lhv";
    case Measure::Bell: return "bell";
    case Measure::Steering2: return "steering2";
    case Measure::Steering3: return "steering3";
    case Measure::Teleportation: return "teleportation";
    case Measure::Entanglement: return "entanglement";
  }
  return "?";
}

inline double measure_value(const MeasureVector& v, Measure m) {
  switch (m) {
    case Measure::FidelityLhv:
    case Measure::Teleportation: return v.fidelity;
    case Measure::Bell: return v.bell;
    case Measure::Steering2: return v.s2;
    case Measure::Steering3: return v.s3;
    case Measure::Entanglement: return v.concurrence;
  }
  return 0.0;
}

inline double measure_threshold(const Thresholds& t, Measure m) {
  switch (m) {
    case Measure::FidelityLhv: return t.f_lhv;
    case Measure::Teleportation: return t.f_classical;
    case Measure::Bell: return t.bell_classical;
    case Measure::Steering2:
    case Measure::Steering3: return t.steering_zero;
    case Measure::Entanglement: return t.concurrence_zero;
  }
  return 0.0;
}

/// u_i = sqrt(eig(T^T T)), descending.
inline Vec3 correlation_singular_values(const RealMat3& t) {
  Mat3 gram;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) s += t[k][i] * t[k][j];
      gram(i, j) = s;
    }
  const auto e = hermitian_eig(gram);
  return {std::sqrt(std::max(e.values[0], 0.0)), std::sqrt(std::max(e.values[1], 0.0)),
          std::sqrt(std::max(e.values[2], 0.0))};
}

/// Steering coefficients. Eigenvalue mode requires a symmetric T.
inline Vec3 steering_coefficients(const RealMat3& t, SteeringMode mode) {
  if (mode == SteeringMode::SingularValues) return correlation_singular_values(t);
  Mat3 m;
  double asym = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      m(i, j) = t[i][j];
      asym += (t[i][j] - t[j][i]) * (t[i][j] - t[j][i]);
    }
  if (std::sqrt(asym) > 1e-10)
    throw InvalidArgument("steering eigenvalue mode needs a symmetric correlation matrix");
  return hermitian_eig(m).values;
}

struct FidelityResult {
  double fidelity;
  double n_value;
};

inline FidelityResult teleportation_fidelity(const PauliDecomposition& d) {
  const Vec3 u = correlation_singular_values(d.t);
  const double n = u[0] + u[1] + u[2];
  return {0.5 * (1.0 + n / 3.0), n};
}

inline FidelityResult teleportation_fidelity(const DensityMatrix& rho) {
  return teleportation_fidelity(pauli_decompose(rho));
}

inline double bell_chsh(const PauliDecomposition& d) {
  const Vec3 u = correlation_singular_values(d.t);
  return 2.0 * std::sqrt(u[0] * u[0] + u[1] * u[1]);
}

inline double bell_chsh(const DensityMatrix& rho) { return bell_chsh(pauli_decompose(rho)); }

inline double steering(const PauliDecomposition& d, int n, SteeringMode mode = SteeringMode::SingularValues) {
  if (n != 2 && n != 3) throw InvalidArgument("steering: number of measurements must be 2 or 3");
  const Vec3 c = steering_coefficients(d.t, mode);
  const double c_sq = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
  const double c_min = std::min({std::abs(c[0]), std::abs(c[1]), std::abs(c[2])});
  const double lambda = n == 2 ? std::sqrt(std::max(c_sq - c_min * c_min, 0.0)) : std::sqrt(c_sq);
  return std::max(0.0, (lambda - 1.0) / (std::sqrt(static_cast<double>(n)) - 1.0));
}

inline double steering(const DensityMatrix& rho, int n, SteeringMode mode = SteeringMode::SingularValues) {
  return steering(pauli_decompose(rho), n, mode);
}

/// (sigma_y x sigma_y) rho* (sigma_y x sigma_y)
inline Mat4 spin_flip(const Mat4& rho) {
  const Mat4 yy = kron(pauli::y(), pauli::y());
  return yy * rho.conj() * yy;
}

/// Eigenvalues of rho below this are rounding noise and are dropped from
/// the factor A before the concurrence is formed.
inline constexpr double kConcurrenceNoiseFloor = 1e-14;

/// Wootters concurrence. With rho = A A^dagger, the square roots of the
/// eigenvalues of rho rho~ are the singular values of A^T (sy x sy) A, which
/// are computed directly instead of being recovered from their squares.
inline double concurrence(const DensityMatrix& rho) {
  const auto e = hermitian_eig(rho.matrix());
  if (e.values[3] < -kPsdClampTolerance) throw NotPsd("concurrence: negative eigenvalue " + std::to_string(e.values[3]));
  Mat4 a;
  for (std::size_t k = 0; k < 4; ++k) {
    if (e.values[k] < kConcurrenceNoiseFloor) continue;
    const double w = std::sqrt(e.values[k]);
    for (std::size_t r = 0; r < 4; ++r) a(r, k) = w * e.vectors(r, k);
  }
  const Mat4 yy = kron(pauli::y(), pauli::y());
  const auto l = singular_values(a.transpose() * yy * a);
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

inline MeasureVector evaluate_measures(const DensityMatrix& rho, const MeasureOptions& opt = {}) {
  const PauliDecomposition d = pauli_decompose(rho);
  const auto f = teleportation_fidelity(d);
  MeasureVector v;
  v.fidelity = f.fidelity;
  v.n_value = f.n_value;
  v.bell = bell_chsh(d);
  v.s2 = steering(d, 2, opt.steering);
  v.s3 = steering(d, 3, opt.steering);
  v.concurrence = concurrence(rho);
  return v;
}

/// Pointwise implication chain F > F_lhv => B > 2 => S2 > 0 => S3 > 0 =>
/// F > 2/3 => C > 0. A link is broken when the stronger measure clears its
/// threshold by more than `margin` while the weaker one does not clear its own.
inline bool hierarchy_consistent(const MeasureVector& v, const Thresholds& th, double margin = 1e-9) {
  for (std::size_t i = 0; i + 1 < kChainOrder.size(); ++i) {
    const Measure strong = kChainOrder[i], weak = kChainOrder[i + 1];
    const bool strong_alive = measure_value(v, strong) - measure_threshold(th, strong) > margin;
    const bool weak_dead = measure_value(v, weak) <= measure_threshold(th, weak);
    if (strong_alive && weak_dead) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Quantum speed limit

/// Literal: sum_a ||K_a rho0 Kdot_a^dagger||. Symmetrized: the norm of the
/// full generator ||sum_a (Kdot_a rho0 K_a^dagger + K_a rho0 Kdot_a^dagger)||.
enum class QslGenerator { Literal, Symmetrized };

/// Denominator evaluated at t, or averaged over [0, t].
enum class QslDenominator { Instantaneous, TimeAveraged };

struct QslOptions {
  QslGenerator generator = QslGenerator::Literal;
  QslDenominator denominator = QslDenominator::Instantaneous;
  NoiseSides sides = NoiseSides::First;
};

struct QslResult {
  double tau = 0.0;
  bool degenerate = false;
};

inline constexpr double kQslDegenerateDenominator = 1e-15;

namespace detail {

// Forward-difference fallback used where the analytic derivative sits on a
// square-root branch point.
inline std::vector<Mat2> kraus_derivative_forward(const ChannelFamily& f, double t) {
  const double h = 1e-7 * std::max(t, 1e-3);
  const auto k0 = kraus_at(f, t).operators;
  const auto k1 = kraus_at(f, t + h).operators;
  std::vector<Mat2> out;
  for (std::size_t i = 0; i < k0.size(); ++i) out.push_back((1.0 / h) * (k1[i] - k0[i]));
  return out;
}

inline std::vector<Mat2> kraus_rate(const ChannelFamily& f, double t) {
  try {
    return kraus_derivative_at(f, t);
  } catch (const DerivativeSingularity&) {
    return kraus_derivative_forward(f, t);
  }
}

inline double qsl_denominator_at(const ChannelFamily& f, const DensityMatrix& rho0, double t, const QslOptions& opt) {
  const auto k = kraus_at(f, t).operators;
  const auto kd = kraus_rate(f, t);
  std::vector<Mat4> ops, rates;
  if (opt.sides == NoiseSides::First) {
    ops = lift_first(k);
    rates = lift_first(kd);
  } else {
    for (std::size_t i = 0; i < k.size(); ++i)
      for (std::size_t j = 0; j < k.size(); ++j) {
        ops.push_back(kron(k[i], k[j]));
        rates.push_back(kron(kd[i], k[j]) + kron(k[i], kd[j]));
      }
  }
  const Mat4& r0 = rho0.matrix();
  if (opt.generator == QslGenerator::Literal) {
    double s = 0.0;
    for (std::size_t a = 0; a < ops.size(); ++a) s += hs_norm(ops[a] * r0 * rates[a].adjoint());
    return s;
  }
  Mat4 g;
  for (std::size_t a = 0; a < ops.size(); ++a) {
    const Mat4 half = ops[a] * r0 * rates[a].adjoint();
    g += half + half.adjoint();
  }
  return hs_norm(g);
}

}  // namespace detail

/// Lower bound on the evolution time from rho0 to rho_t:
/// (2 theta^2 / pi^2) sqrt(tr rho0^2) / denominator, theta = acos(tr[rho0 rho_t] / tr[rho0^2]).
inline QslResult qsl_time(const ChannelFamily& f, const DensityMatrix& rho0, double t, const QslOptions& opt = {}) {
  detail::check_time(t);
  if (t == 0.0) return {0.0, true};
  const DensityMatrix rho_t = evolve(f, t, rho0, opt.sides);
  const double purity = rho0.purity();
  const double theta = std::acos(std::clamp(overlap(rho0, rho_t) / purity, -1.0, 1.0));

  double denom = 0.0;
  if (opt.denominator == QslDenominator::Instantaneous) {
    denom = detail::qsl_denominator_at(f, rho0, t, opt);
  } else {
    constexpr int kPanels = 200;  // midpoint rule, never samples s = 0
    for (int i = 0; i < kPanels; ++i) denom += detail::qsl_denominator_at(f, rho0, t * (i + 0.5) / kPanels, opt);
    denom /= kPanels;
  }
  if (denom < kQslDegenerateDenominator) return {0.0, true};
  const double pi = std::numbers::pi;
  return {2.0 * theta * theta / (pi * pi) * std::sqrt(purity) / denom, false};
}

}  // namespace qcorr
