#pragma once

// Test-side oracles built on Eigen, independent of the library's Jacobi
// solver, plus a few shared helpers.

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <random>

#include "qcorr/qcorr.hpp"

namespace testing_support {

using qcorr::cplx;

template <std::size_t N>
Eigen::Matrix<cplx, static_cast<int>(N), static_cast<int>(N)> to_eigen(const qcorr::Matrix<N>& m) {
  Eigen::Matrix<cplx, static_cast<int>(N), static_cast<int>(N)> out;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out(static_cast<int>(i), static_cast<int>(j)) = m(i, j);
  return out;
}

/// Wootters concurrence straight from the non-Hermitian product rho rho~.
inline double concurrence_oracle(const qcorr::DensityMatrix& rho) {
  Eigen::Matrix4cd r = to_eigen(rho.matrix());
  Eigen::Matrix4cd yy;
  yy.setZero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::Matrix4cd tilde = yy * r.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(r * tilde);
  std::array<double, 4> l;
  for (int i = 0; i < 4; ++i) l[static_cast<std::size_t>(i)] = std::sqrt(std::max(es.eigenvalues()(i).real(), 0.0));
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

template <std::size_t N>
qcorr::Matrix<N> random_hermitian(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  qcorr::Matrix<N> a;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) a(i, j) = cplx(n(rng), n(rng));
  return qcorr::hermitian_part(a);
}

/// The Bell-state scenario family for this kind and regime.
inline qcorr::ChannelFamily family(qcorr::ChannelKind k, qcorr::Regime r) {
  for (const auto& row : qcorr::scenario_rows())
    if (row.state == "Bell" && row.config.sweep.family->kind == k && row.regime == r) return *row.config.sweep.family;
  throw std::logic_error("no such scenario family");
}

inline std::vector<qcorr::ChannelFamily> all_families() {
  std::vector<qcorr::ChannelFamily> out;
  for (auto k : {qcorr::ChannelKind::AmplitudeDamping, qcorr::ChannelKind::PhaseDamping,
                 qcorr::ChannelKind::Depolarizing, qcorr::ChannelKind::RandomTelegraph})
    for (auto r : {qcorr::Regime::Markovian, qcorr::Regime::NonMarkovian}) out.push_back(family(k, r));
  return out;
}

inline qcorr::DensityMatrix bell() { return qcorr::make_pure({1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2}); }

inline double max_abs_diff(const qcorr::Mat4& a, const qcorr::Mat4& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

}  // namespace testing_support
