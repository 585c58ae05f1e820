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

// Time-parameterised single-qubit noise channels (amplitude damping, phase
// damping, depolarizing, random telegraph noise) in Markovian and
// non-Markovian regimes, their memory kernels, and the analytic time
// derivatives of their Kraus operators.

#include <array>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "qcorr/errors.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

enum class ChannelKind { AmplitudeDamping, PhaseDamping, Depolarizing, RandomTelegraph };
enum class Regime { Markovian, NonMarkovian };

/// Which line width enters the depolarizing kernel of axis i: its own
/// Gamma_i (default) or the single global Gamma.
enum class DepolarizingLineWidth { PerAxis, Global };

struct ChannelParams {
  double gamma = 1.0;  ///< coupling strength (AD, PD) or damping rate (RTN)
  double Gamma = 0.1;  ///< reservoir line width
  double a = 0.0;      ///< RTN switching rate
  Vec3 gamma_vec{};    ///< depolarizing per-axis couplings
  Vec3 Gamma_vec{1.0, 1.0, 1.0};
  DepolarizingLineWidth dp_line_width = DepolarizingLineWidth::PerAxis;
  /// Debug only: use diag(1, sqrt p) for the phase-damping E0. Breaks
  /// completeness; exists so the validator can demonstrate the failure.
  bool literal_pd_sqrt = false;
};

struct ChannelFamily {
  ChannelKind kind = ChannelKind::AmplitudeDamping;
  Regime regime = Regime::NonMarkovian;
  ChannelParams params;

  /// Throws InvalidArgument when the parameters violate the kind's constraints.
  void validate() const;
};

struct KrausSet {
  std::vector<Mat2> operators;
  double time = 0.0;
};

/// Value of a kernel together with 1 - value (computed without
/// cancellation near t = 0) and the first two time derivatives.
struct KernelJet {
  double value = 1.0;
  double complement = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

inline constexpr double kCompletenessTolerance = 1e-10;
inline constexpr double kNegativeWeightClamp = 1e-9;

inline std::string to_string(ChannelKind k) {
  switch (k) {
    case ChannelKind::AmplitudeDamping: return "amplitude_damping";
    case ChannelKind::PhaseDamping: return "phase_damping";
    case ChannelKind::Depolarizing: return "depolarizing";
    case ChannelKind::RandomTelegraph: return "random_telegraph";
  }
  return "?";
}

inline std::string to_string(Regime r) {
  return r == Regime::Markovian ? "markovian" : "non_markovian";
}

namespace detail {

// y(t) = e^{-k t} (cos(w t) + (k / w) sin(w t)) with w^2 = omega_sq of either
// sign (negative continues to cosh/sinh). y(0) = 1, y'(0) = 0.
struct DampedOscillator {
  double kappa;
  double omega_sq;

  KernelJet at(double t) const {
    // ec = e^{-kt} C(t), es = e^{-kt} S(t), S = sin(wt)/w.
    double ec, es;
    if (omega_sq > 0.0) {
      const double w = std::sqrt(omega_sq);
      const double decay = std::exp(-kappa * t);
      ec = decay * std::cos(w * t);
      es = decay * std::sin(w * t) / w;
    } else if (omega_sq < 0.0) {
      const double w = std::sqrt(-omega_sq);
      const double up = std::exp((w - kappa) * t);
      const double down = std::exp(-(w + kappa) * t);
      ec = 0.5 * (up + down);
      es = 0.5 * (up - down) / w;
    } else {
      const double decay = std::exp(-kappa * t);
      ec = decay;
      es = decay * t;
    }
    const double stiffness = kappa * kappa + omega_sq;
    KernelJet j;
    j.value = ec + kappa * es;
    j.d1 = -stiffness * es;
    j.d2 = -stiffness * (ec - kappa * es);
    j.complement = complement(t, j.value);
    return j;
  }

  // Taylor series of 1 - y from y'' + 2k y' + (k^2 + w^2) y = 0 for small t.
  double complement(double t, double value) const {
    const double scale = std::max(std::abs(kappa), std::sqrt(std::abs(omega_sq))) * t;
    if (scale > 0.25) return 1.0 - value;
    const double stiffness = kappa * kappa + omega_sq;
    double a_prev = 1.0, a_cur = 0.0;  // a_n, a_{n+1}
    double tn = t;                     // t^{n+1}
    double sum = 0.0;
    for (int n = 0; n < 60; ++n) {
      const double a_next = -(2.0 * kappa * (n + 1) * a_cur + stiffness * a_prev) / ((n + 2.0) * (n + 1.0));
      tn *= t;
      const double term = a_next * tn;
      sum += term;
      a_prev = a_cur;
      a_cur = a_next;
      if (n > 2 && std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return -sum;
  }
};

inline KernelJet exponential_jet(double rate, double t) {
  KernelJet j;
  j.value = std::exp(-rate * t);
  j.complement = -std::expm1(-rate * t);
  j.d1 = -rate * j.value;
  j.d2 = rate * rate * j.value;
  return j;
}

// p = exp(-gamma/2 (t + (e^{-Gamma t} - 1)/Gamma)).
inline KernelJet dephasing_jet(double gamma, double Gamma, double t) {
  const double x = Gamma * t;
  double shifted;  // x + e^{-x} - 1
  if (x < 0.1) {
    double term = x * x / 2.0;
    shifted = 0.0;
    for (int n = 2; n < 30 && term != 0.0; ++n) {
      shifted += term;
      term *= -x / (n + 1);
    }
  } else {
    shifted = x + std::expm1(-x);
  }
  const double exponent = -0.5 * gamma * shifted / Gamma;
  const double e1 = 0.5 * gamma * std::expm1(-x);
  const double e2 = -0.5 * gamma * Gamma * std::exp(-x);
  KernelJet j;
  j.value = std::exp(exponent);
  j.complement = -std::expm1(exponent);
  j.d1 = j.value * e1;
  j.d2 = j.value * (e2 + e1 * e1);
  return j;
}

// Jet of p = g^2 from the jet of g.
inline KernelJet squared(const KernelJet& g) {
  KernelJet p;
  p.value = g.value * g.value;
  p.complement = g.complement * (2.0 - g.complement);
  p.d1 = 2.0 * g.value * g.d1;
  p.d2 = 2.0 * (g.d1 * g.d1 + g.value * g.d2);
  return p;
}

inline Vec3 depolarizing_line_widths(const ChannelParams& p) {
  if (p.dp_line_width == DepolarizingLineWidth::Global) return {p.Gamma, p.Gamma, p.Gamma};
  return p.Gamma_vec;
}

inline std::array<KernelJet, 3> depolarizing_jets(const ChannelFamily& f, double t) {
  const Vec3 lw = depolarizing_line_widths(f.params);
  const Vec3& g = f.params.gamma_vec;
  std::array<KernelJet, 3> out;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t j = (i + 1) % 3, k = (i + 2) % 3;
    if (f.regime == Regime::Markovian) {
      const double rate = 4.0 / lw[i] * (g[j] * g[j] + g[k] * g[k]);
      out[i] = exponential_jet(0.5 * rate, t);
    } else {
      const double d_sq = 16.0 * (g[j] * g[j] / (lw[j] * lw[j]) + g[k] * g[k] / (lw[k] * lw[k])) - 1.0;
      out[i] = DampedOscillator{0.5 * lw[i], 0.25 * lw[i] * lw[i] * d_sq}.at(t);
    }
  }
  return out;
}

inline KernelJet random_telegraph_jet(const ChannelParams& p, double t) {
  const double ratio = 2.0 * p.a / p.gamma;
  return DampedOscillator{p.gamma, p.gamma * p.gamma * (ratio * ratio - 1.0)}.at(t);
}

// Weights of the depolarizing Kraus operators (I, sx, sy, sz) from the
// kernel complements q_i = 1 - Omega_i, with first and second derivatives.
struct Weight {
  double value, d1, d2;
};

inline std::array<Weight, 4> depolarizing_weights(const std::array<KernelJet, 3>& om) {
  const double q1 = om[0].complement, q2 = om[1].complement, q3 = om[2].complement;
  auto combo = [&](double s1, double s2, double s3) {
    // 1/4 (1 + s1 O1 + s2 O2 + s3 O3) expressed through q to keep small weights accurate
    const double v = 0.25 * ((1.0 + s1 + s2 + s3) - s1 * q1 - s2 * q2 - s3 * q3);
    return Weight{v, 0.25 * (s1 * om[0].d1 + s2 * om[1].d1 + s3 * om[2].d1),
                  0.25 * (s1 * om[0].d2 + s2 * om[1].d2 + s3 * om[2].d2)};
  };
  return {combo(1, 1, 1), combo(1, -1, -1), combo(-1, 1, -1), combo(-1, -1, 1)};
}

inline double checked_sqrt_weight(double w, const char* what) {
  if (w < -kNegativeWeightClamp)
    throw CpViolation(std::string("depolarizing weight ") + what + " = " + std::to_string(w) +
                      " is negative: parameters break complete positivity");
  return w > 0.0 ? std::sqrt(w) : 0.0;
}

// d/dt sqrt(w(t)). At a branch point w = 0 with w' = 0 this is the
// right-sided limit sqrt(w''/2); with w' != 0 the derivative does not exist.
inline double sqrt_rate(double w, double w1, double w2, const char* what) {
  if (w > 0.0) return w1 / (2.0 * std::sqrt(w));
  if (w1 == 0.0) return std::sqrt(std::max(w2, 0.0) / 2.0);
  throw DerivativeSingularity(std::string("derivative of sqrt(") + what + ") is singular at this time");
}

inline Mat2 diag2(double a, double b) { return Mat2::diagonal({a, b}); }
inline Mat2 lowering(double v) { return Mat2::from_rows({0.0, v, 0.0, 0.0}); }

inline void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("channel time must be finite and >= 0");
}

}  // namespace detail

inline void ChannelFamily::validate() const {
  const auto& p = params;
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  switch (kind) {
    case ChannelKind::AmplitudeDamping:
      if (!positive(p.gamma)) throw InvalidArgument("amplitude damping needs gamma > 0");
      if (regime == Regime::NonMarkovian) {
        if (!positive(p.Gamma)) throw InvalidArgument("amplitude damping needs Gamma > 0");
        if (!(2.0 * p.gamma * p.Gamma - p.Gamma * p.Gamma > 0.0))
          throw InvalidArgument("non-Markovian amplitude damping needs 2 gamma Gamma - Gamma^2 > 0");
      }
      break;
    case ChannelKind::PhaseDamping:
      if (!positive(p.gamma)) throw InvalidArgument("phase damping needs gamma > 0");
      if (regime == Regime::NonMarkovian && !positive(p.Gamma))
        throw InvalidArgument("non-Markovian phase damping needs Gamma > 0");
      break;
    case ChannelKind::Depolarizing: {
      for (double g : p.gamma_vec)
        if (!positive(g)) throw InvalidArgument("depolarizing needs gamma_i > 0");
      for (double g : detail::depolarizing_line_widths(p))
        if (!positive(g)) throw InvalidArgument("depolarizing needs Gamma_i > 0");
      break;
    }
    case ChannelKind::RandomTelegraph: {
      if (!positive(p.gamma) || !positive(p.a)) throw InvalidArgument("random telegraph noise needs a, gamma > 0");
      const double ratio = p.a / p.gamma;
      if (regime == Regime::Markovian && ratio > 0.5)
        throw InvalidArgument("Markovian random telegraph noise needs a/gamma <= 0.5");
      if (regime == Regime::NonMarkovian && ratio <= 0.5)
        throw InvalidArgument("non-Markovian random telegraph noise needs a/gamma > 0.5");
      break;
    }
  }
}

/// Full jets of the memory kernel(s): [p] for AD/PD, [Omega_1..3] for the
/// depolarizing channel, [Lambda] for RTN.
inline std::vector<KernelJet> kernel_jets(const ChannelFamily& f, double t) {
  detail::check_time(t);
  const auto& p = f.params;
  const bool markov = f.regime == Regime::Markovian;
  switch (f.kind) {
    case ChannelKind::AmplitudeDamping: {
      if (markov) return {detail::exponential_jet(p.gamma, t)};
      const double d_sq = 2.0 * p.gamma * p.Gamma - p.Gamma * p.Gamma;
      return {detail::squared(detail::DampedOscillator{0.5 * p.Gamma, 0.25 * d_sq}.at(t))};
    }
    case ChannelKind::PhaseDamping:
      if (markov) return {detail::exponential_jet(0.5 * p.gamma, t)};
      return {detail::dephasing_jet(p.gamma, p.Gamma, t)};
    case ChannelKind::Depolarizing: {
      const auto om = detail::depolarizing_jets(f, t);
      return {om.begin(), om.end()};
    }
    case ChannelKind::RandomTelegraph:
      return {detail::random_telegraph_jet(p, t)};
  }
  throw InvalidArgument("unknown channel kind");
}

inline std::vector<double> memory_kernel(const ChannelFamily& f, double t) {
  std::vector<double> out;
  for (const auto& j : kernel_jets(f, t)) {
    if (!std::isfinite(j.value) || std::abs(j.value) > 1.0 + 1e-12)
      throw NumericalFailure("memory kernel " + std::to_string(j.value) + " outside [-1, 1]");
    out.push_back(j.value);
  }
  return out;
}

/// sum_i E_i^dagger E_i
inline Mat2 completeness_sum(const KrausSet& k) {
  Mat2 s;
  for (const auto& e : k.operators) s += e.adjoint() * e;
  return s;
}

inline double completeness_defect(const KrausSet& k) {
  return hs_norm(completeness_sum(k) - Mat2::identity());
}

namespace detail {
inline KrausSet build_kraus(const ChannelFamily& f, double t) {
  const auto jets = kernel_jets(f, t);
  KrausSet k;
  k.time = t;
  switch (f.kind) {
    case ChannelKind::AmplitudeDamping: {
      const auto& p = jets[0];
      k.operators = {diag2(1.0, std::sqrt(p.value)), lowering(std::sqrt(std::max(p.complement, 0.0)))};
      break;
    }
    case ChannelKind::PhaseDamping: {
      const auto& p = jets[0];
      const double e0 = f.params.literal_pd_sqrt ? std::sqrt(p.value) : p.value;
      const double one_minus_sq = p.complement * (1.0 + p.value);
      k.operators = {diag2(1.0, e0), diag2(0.0, std::sqrt(std::max(one_minus_sq, 0.0)))};
      break;
    }
    case ChannelKind::Depolarizing: {
      const auto w = depolarizing_weights({jets[0], jets[1], jets[2]});
      const auto s = pauli::xyz();
      k.operators = {checked_sqrt_weight(w[0].value, "P4") * Mat2::identity(),
                     checked_sqrt_weight(w[1].value, "P1") * s[0],
                     checked_sqrt_weight(w[2].value, "P2") * s[1],
                     checked_sqrt_weight(w[3].value, "P3") * s[2]};
      break;
    }
    case ChannelKind::RandomTelegraph: {
      const double q = jets[0].complement;
      k.operators = {std::sqrt(std::max(1.0 - 0.5 * q, 0.0)) * Mat2::identity(),
                     std::sqrt(std::max(0.5 * q, 0.0)) * pauli::z()};
      break;
    }
  }
  return k;
}
}  // namespace detail

/// Kraus operators of the family at time t. Throws NumericalFailure if the
/// completeness relation fails beyond 1e-10.
inline KrausSet kraus_at(const ChannelFamily& f, double t) {
  KrausSet k = detail::build_kraus(f, t);
  const double defect = completeness_defect(k);
  if (!(defect <= kCompletenessTolerance)) {
    std::ostringstream msg;
    msg << "Kraus completeness violated at t = " << t << " (defect " << std::setprecision(3) << defect << ")";
    throw NumericalFailure(msg.str());
  }
  return k;
}

/// Entrywise time derivatives of kraus_at(f, t), same order. At t = 0 the
/// derivative is one-sided.
inline std::vector<Mat2> kraus_derivative_at(const ChannelFamily& f, double t) {
  using detail::diag2;
  using detail::sqrt_rate;
  const auto jets = kernel_jets(f, t);
  switch (f.kind) {
    case ChannelKind::AmplitudeDamping: {
      const auto& p = jets[0];
      return {diag2(0.0, sqrt_rate(p.value, p.d1, p.d2, "p")),
              detail::lowering(sqrt_rate(p.complement, -p.d1, -p.d2, "1-p"))};
    }
    case ChannelKind::PhaseDamping: {
      const auto& p = jets[0];
      const double e0 = f.params.literal_pd_sqrt ? sqrt_rate(p.value, p.d1, p.d2, "p") : p.d1;
      const double w = p.complement * (1.0 + p.value);
      const double w1 = -2.0 * p.value * p.d1;
      const double w2 = -2.0 * (p.d1 * p.d1 + p.value * p.d2);
      return {diag2(0.0, e0), diag2(0.0, sqrt_rate(w, w1, w2, "1-p^2"))};
    }
    case ChannelKind::Depolarizing: {
      const auto w = detail::depolarizing_weights({jets[0], jets[1], jets[2]});
      const auto s = pauli::xyz();
      const char* names[] = {"P4", "P1", "P2", "P3"};
      std::vector<Mat2> out;
      for (std::size_t i = 0; i < 4; ++i) {
        const double v = w[i].value < 0.0 ? 0.0 : w[i].value;
        const double r = sqrt_rate(v, w[i].d1, w[i].d2, names[i]);
        out.push_back(r * (i == 0 ? Mat2::identity() : s[i - 1]));
      }
      return out;
    }
    case ChannelKind::RandomTelegraph: {
      const auto& l = jets[0];
      return {sqrt_rate(1.0 - 0.5 * l.complement, 0.5 * l.d1, 0.5 * l.d2, "(1+L)/2") * Mat2::identity(),
              sqrt_rate(0.5 * l.complement, -0.5 * l.d1, -0.5 * l.d2, "(1-L)/2") * pauli::z()};
    }
  }
  throw InvalidArgument("unknown channel kind");
}

/// E_i (x) I for each operator.
inline std::vector<Mat4> lift_first(const std::vector<Mat2>& ops) {
  std::vector<Mat4> out;
  out.reserve(ops.size());
  for (const auto& e : ops) out.push_back(kron(e, Mat2::identity()));
  return out;
}

/// E_i (x) F_j for all pairs.
inline std::vector<Mat4> lift_both(const std::vector<Mat2>& first, const std::vector<Mat2>& second) {
  std::vector<Mat4> out;
  out.reserve(first.size() * second.size());
  for (const auto& e : first)
    for (const auto& f : second) out.push_back(kron(e, f));
  return out;
}

inline DensityMatrix apply_kraus(const std::vector<Mat4>& ops, const DensityMatrix& rho) {
  Mat4 out;
  for (const auto& k : ops) out += k * rho.matrix() * k.adjoint();
  return DensityMatrix::from_matrix(out);
}

enum class NoiseSides { First, Both };

/// Noise on the first qubit only: sum_i (E_i x I) rho (E_i x I)^dagger.
inline DensityMatrix apply_one_sided(const KrausSet& k, const DensityMatrix& rho) {
  return apply_kraus(lift_first(k.operators), rho);
}

/// Independent local noise on both qubits.
inline DensityMatrix apply_two_sided(const KrausSet& k1, const KrausSet& k2, const DensityMatrix& rho) {
  return apply_kraus(lift_both(k1.operators, k2.operators), rho);
}

/// rho(t) for the family acting on the first qubit or on both qubits.
inline DensityMatrix evolve(const ChannelFamily& f, double t, const DensityMatrix& rho, NoiseSides sides) {
  const KrausSet k = kraus_at(f, t);
  return sides == NoiseSides::First ? apply_one_sided(k, rho) : apply_two_sided(k, k, rho);
}

}  // namespace qcorr
