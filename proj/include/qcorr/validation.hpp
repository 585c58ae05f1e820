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

// Invariant suite behind `qcorr validate`: channel properties, derivative
// and oracle cross-checks, speed-limit shape, and the scenario verdicts.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qcorr/table1.hpp"

namespace qcorr {

namespace sampling {

using Rng = std::mt19937_64;

inline cplx gaussian(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  return {re, n(rng)};
}

/// G G^dagger / tr with G a complex Ginibre matrix (full rank almost surely).
inline DensityMatrix random_mixed(Rng& rng) {
  Mat4 g;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) g(i, j) = gaussian(rng);
  Mat4 r = g * g.adjoint();
  return DensityMatrix::from_matrix(r * (1.0 / r.trace().real()));
}

/// 0.9 |psi><psi| + 0.1 random_mixed: full rank and usually entangled.
inline DensityMatrix random_entangled(Rng& rng) {
  std::array<cplx, 4> v;
  double norm = 0.0;
  for (auto& x : v) {
    x = gaussian(rng);
    norm += std::norm(x);
  }
  Mat4 pure;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) pure(i, j) = v[i] * std::conj(v[j]) / norm;
  return DensityMatrix::from_matrix(0.9 * pure + 0.1 * random_mixed(rng).matrix());
}

/// Haar-random element of U(2).
inline Mat2 random_unitary(Rng& rng) {
  cplx a = gaussian(rng), b = gaussian(rng);
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  a /= n;
  b /= n;
  const cplx phase = std::polar(1.0, std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng));
  return phase * Mat2::from_rows({a, b, -std::conj(b), std::conj(a)});
}

}  // namespace sampling

namespace oracle {

using xcplx = std::complex<long double>;
using XMat4 = std::array<xcplx, 16>;

inline XMat4 mul(const XMat4& a, const XMat4& b) {
  XMat4 c{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t j = 0; j < 4; ++j) c[4 * i + j] += a[4 * i + k] * b[4 * k + j];
  return c;
}

/// Eigenvalues of an arbitrary 4x4 complex matrix from its characteristic
/// polynomial (Faddeev-LeVerrier) and Durand-Kerner root finding, carried
/// out in extended precision.
inline std::array<xcplx, 4> eigenvalues(const XMat4& a) {
  std::array<xcplx, 5> c{};  // c[k] multiplies lambda^k
  c[4] = 1.0L;
  XMat4 m{};
  for (int k = 1; k <= 4; ++k) {
    m = mul(a, m);
    for (std::size_t i = 0; i < 4; ++i) m[5 * i] += c[static_cast<std::size_t>(5 - k)];
    const XMat4 am = mul(a, m);
    xcplx tr = 0.0L;
    for (std::size_t i = 0; i < 4; ++i) tr += am[5 * i];
    c[static_cast<std::size_t>(4 - k)] = -tr / static_cast<long double>(k);
  }
  auto poly = [&](xcplx z) { return (((z + c[3]) * z + c[2]) * z + c[1]) * z + c[0]; };
  auto dpoly = [&](xcplx z) { return ((4.0L * z + 3.0L * c[3]) * z + 2.0L * c[2]) * z + c[1]; };
  long double radius = 1.0L;
  for (std::size_t k = 0; k < 4; ++k) radius = std::max(radius, 1.0L + std::abs(c[k]));

  std::array<xcplx, 4> z;
  for (std::size_t i = 0; i < 4; ++i) z[i] = radius * std::pow(xcplx(0.4L, 0.9L), static_cast<long double>(i + 1));
  for (int iter = 0; iter < 5000; ++iter) {
    long double change = 0.0L;
    for (std::size_t i = 0; i < 4; ++i) {
      xcplx den = 1.0L;
      for (std::size_t j = 0; j < 4; ++j)
        if (j != i) den *= z[i] - z[j];
      const xcplx step = poly(z[i]) / den;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-21L * radius) break;
  }
  for (auto& r : z)
    for (int k = 0; k < 3; ++k) {
      const xcplx d = dpoly(r);
      if (std::abs(d) > 0.0L) r -= poly(r) / d;
    }
  return z;
}

/// Concurrence from the eigenvalues of rho (sy x sy) rho* (sy x sy).
inline double concurrence(const DensityMatrix& rho) {
  const Mat4 flipped = spin_flip(rho.matrix());
  XMat4 a, b;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      a[4 * i + j] = xcplx(rho.matrix()(i, j).real(), rho.matrix()(i, j).imag());
      b[4 * i + j] = xcplx(flipped(i, j).real(), flipped(i, j).imag());
    }
  const auto ev = eigenvalues(mul(a, b));
  std::array<long double, 4> l;
  for (std::size_t i = 0; i < 4; ++i) l[i] = std::sqrt(std::max(ev[i].real(), 0.0L));
  std::sort(l.begin(), l.end(), std::greater<>());
  return static_cast<double>(std::max(0.0L, l[0] - l[1] - l[2] - l[3]));
}

}  // namespace oracle

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationOptions {
  SteeringMode steering = SteeringMode::SingularValues;
  bool literal_pd_sqrt = false;
  unsigned threads = 1;
  std::uint64_t seed = 20260101;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  std::vector<ScenarioRow> rows;
  std::vector<ScenarioOutcome> outcomes;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

/// Runs every scenario row. Errors are captured per row.
inline std::vector<ScenarioOutcome> run_scenarios(const std::vector<ScenarioRow>& rows,
                                                  std::vector<RunResult>* results = nullptr) {
  std::vector<ScenarioOutcome> out;
  if (results) results->assign(rows.size(), {});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ScenarioOutcome o{&rows[i], {}, {}};
    try {
      RunResult r = run(rows[i].config);
      o.verdict = r.verdict;
      if (results) (*results)[i] = std::move(r);
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    out.push_back(std::move(o));
  }
  return out;
}

namespace detail {

struct FamilyCase {
  std::string name;
  ChannelFamily family;
  double t_max;  // in units of 1/time_scale
};

inline std::vector<FamilyCase> family_cases(bool literal_pd_sqrt) {
  std::vector<FamilyCase> out;
  for (const auto& row : scenario_rows()) {
    if (row.state != "Bell") continue;
    ChannelFamily f = *row.config.sweep.family;
    f.params.literal_pd_sqrt = literal_pd_sqrt;
    out.push_back({row.noise + " " + to_string(row.regime), f, row.config.sweep.t_max / row.config.sweep.time_scale});
  }
  return out;
}

inline std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << x;
  return os.str();
}

template <class Fn>
CheckResult guarded(std::string name, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {std::move(name), false, std::string("threw: ") + e.what()};
  }
}

inline CheckResult check_completeness(const FamilyCase& c) {
  double worst = 0.0, at = 0.0;
  for (double t : uniform_grid(c.t_max, 1000)) {
    const double d = completeness_defect(build_kraus(c.family, t));
    if (!(d <= worst)) {
      worst = d;
      at = t;
    }
  }
  return {"completeness " + c.name, worst <= kCompletenessTolerance,
          "max defect " + fmt(worst) + " at t = " + fmt(at) + " over 1000 times"};
}

inline CheckResult check_state_preservation(const FamilyCase& c, sampling::Rng& rng) {
  std::uniform_real_distribution<double> time(0.0, c.t_max);
  double worst_trace = 0.0, worst_eig = 0.0;
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix rho = i % 2 ? sampling::random_mixed(rng) : sampling::random_entangled(rng);
    const double t = time(rng);
    for (NoiseSides sides : {NoiseSides::First, NoiseSides::Both}) {
      const DensityMatrix out = evolve(c.family, t, rho, sides);
      worst_trace = std::max(worst_trace, std::abs(out.matrix().trace().real() - 1.0));
      worst_eig = std::min(worst_eig, hermitian_eig(out.matrix()).values.back());
    }
  }
  return {"trace/positivity " + c.name, worst_trace <= kTraceTolerance && worst_eig >= -kPositivityTolerance,
          "max |tr-1| " + fmt(worst_trace) + ", min eigenvalue " + fmt(worst_eig) + " on 100 states x 2 sides"};
}

inline CheckResult check_derivatives(const FamilyCase& c, sampling::Rng& rng) {
  std::uniform_real_distribution<double> time(0.01 * c.t_max, c.t_max);
  const double h = 1e-6 / c.family.params.gamma;
  double worst = 0.0;
  int checked = 0;
  for (int i = 0; i < 200 && checked < 50; ++i) {
    const double t = time(rng);
    const auto k = build_kraus(c.family, t).operators;
    bool near_branch = false;
    for (const auto& e : k)
      for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t s = 0; s < 2; ++s) {
          const double m = std::abs(e(r, s));
          if (m > 0.0 && m < 1e-3) near_branch = true;
        }
    if (near_branch) continue;
    const auto a = kraus_derivative_at(c.family, t);
    const auto up = build_kraus(c.family, t + h).operators;
    const auto dn = build_kraus(c.family, t - h).operators;
    double scale = 1e-3, err = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const Mat2 fd = (up[j] - dn[j]) * (1.0 / (2.0 * h));
      for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t s = 0; s < 2; ++s) {
          scale = std::max(scale, std::abs(a[j](r, s)));
          err = std::max(err, std::abs(a[j](r, s) - fd(r, s)));
        }
    }
    worst = std::max(worst, err / scale);
    ++checked;
  }
  return {"kraus derivative " + c.name, checked >= 20 && worst <= 1e-6,
          "max relative error " + fmt(worst) + " over " + std::to_string(checked) + " times"};
}

}  // namespace detail

inline ValidationReport run_validation(const ValidationOptions& opt = {}) {
  using detail::fmt;
  using detail::guarded;
  ValidationReport rep;
  sampling::Rng rng(opt.seed);
  const auto cases = detail::family_cases(opt.literal_pd_sqrt);

  for (const auto& c : cases) rep.checks.push_back(guarded("completeness " + c.name, [&] {
    return detail::check_completeness(c);
  }));
  for (const auto& c : cases) rep.checks.push_back(guarded("trace/positivity " + c.name, [&] {
    return detail::check_state_preservation(c, rng);
  }));
  for (const auto& c : cases) rep.checks.push_back(guarded("kraus derivative " + c.name, [&] {
    return detail::check_derivatives(c, rng);
  }));

  rep.checks.push_back(guarded("concurrence oracle", [&] {
    double worst = 0.0;
    int entangled = 0;
    for (int i = 0; i < 100; ++i) {
      const DensityMatrix rho = i % 4 ? sampling::random_entangled(rng) : sampling::random_mixed(rng);
      const double c = concurrence(rho);
      entangled += c > 0.0;
      worst = std::max(worst, std::abs(c - oracle::concurrence(rho)));
    }
    return CheckResult{"concurrence oracle", worst <= 1e-9,
                       "max difference " + fmt(worst) + " on 100 states (" + std::to_string(entangled) +
                           " entangled)"};
  }));

  rep.checks.push_back(guarded("local unitary invariance", [&] {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const DensityMatrix rho = sampling::random_entangled(rng);
      const Mat4 u = kron(sampling::random_unitary(rng), sampling::random_unitary(rng));
      const DensityMatrix turned = DensityMatrix::from_matrix(u * rho.matrix() * u.adjoint());
      const MeasureVector a = evaluate_measures(rho), b = evaluate_measures(turned);
      for (double d : {a.fidelity - b.fidelity, a.n_value - b.n_value, a.bell - b.bell, a.s2 - b.s2, a.s3 - b.s3,
                       a.concurrence - b.concurrence})
        worst = std::max(worst, std::abs(d));
    }
    return CheckResult{"local unitary invariance", worst <= 1e-10,
                       "max change " + fmt(worst) + " over 50 unitary pairs"};
  }));

  rep.checks.push_back(guarded("pauli round trip", [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const DensityMatrix rho = sampling::random_mixed(rng);
      worst = std::max(worst, hs_norm(pauli_reconstruct(pauli_decompose(rho)).matrix() - rho.matrix()));
    }
    return CheckResult{"pauli round trip", worst <= 1e-12, "max residual " + fmt(worst) + " on 100 states"};
  }));

  // Speed limit shape.
  for (const auto& c : cases) {
    const bool monotone = c.family.regime == Regime::Markovian &&
                          (c.family.kind == ChannelKind::AmplitudeDamping || c.family.kind == ChannelKind::PhaseDamping);
    if (!monotone) continue;
    const std::string name = "speed limit monotone " + c.name;
    rep.checks.push_back(guarded(name, [&] {
      const DensityMatrix rho0 = make_state(bell_phi_plus_spec());
      const auto grid = uniform_grid(15.0 / c.family.params.gamma, 2000);
      double worst = std::numeric_limits<double>::infinity(), prev = 0.0;
      for (std::size_t i = 1; i < grid.size(); ++i) {
        const double tau = qsl_time(c.family, rho0, grid[i]).tau;
        if (i > 1) worst = std::min(worst, tau - prev);
        prev = tau;
      }
      return CheckResult{name, worst >= -1e-10, "min step " + fmt(worst) + " on (0, 15/gamma]"};
    }));
  }

  // Scenario rows, in the selected steering mode.
  rep.rows = scenario_rows();
  for (auto& row : rep.rows) {
    row.config.sweep.threads = opt.threads;
    row.config.sweep.measure_options.steering = opt.steering;
    if (row.config.sweep.family) row.config.sweep.family->params.literal_pd_sqrt = opt.literal_pd_sqrt;
  }
  std::vector<RunResult> results;
  rep.outcomes = run_scenarios(rep.rows, &results);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    const auto& o = rep.outcomes[i];
    const std::string tag = row.state + " " + row.noise + " " + to_string(row.regime);
    if (!o.error.empty()) {
      rep.checks.push_back({"scenario " + tag, false, "threw: " + o.error});
      continue;
    }
    rep.checks.push_back({"scenario " + tag, o.matches() && o.chains_ok(),
                          "expected " + row.expected + ", got " + o.verdict.classification + ", " +
                              std::to_string(o.verdict.violations.size()) + " chain violations"});
    std::size_t broken = 0;
    for (const auto& v : results[i].trajectory.values) broken += !hierarchy_consistent(v, row.config.thresholds);
    rep.checks.push_back({"pointwise hierarchy " + tag, broken == 0,
                          std::to_string(broken) + " of " + std::to_string(results[i].trajectory.values.size()) +
                              " grid points out of order"});
  }

  // Both steering readings agree on these (diagonal correlation matrix) rows.
  rep.checks.push_back(guarded("steering readings agree", [&] {
    std::size_t differing = 0;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      if (!rep.outcomes[i].error.empty()) continue;
      RunConfig alt = rep.rows[i].config;
      alt.sweep.measures.qsl = false;
      alt.sweep.measure_options.steering = opt.steering == SteeringMode::SingularValues
                                               ? SteeringMode::Eigenvalues
                                               : SteeringMode::SingularValues;
      if (verdict_json(run(alt).verdict) != verdict_json(rep.outcomes[i].verdict)) ++differing;
    }
    return CheckResult{"steering readings agree", differing == 0,
                       std::to_string(differing) + " rows with a different verdict"};
  }));

  // First speed-limit turning point against the first concurrence revival.
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    if (row.id != "fig1_ad_nm") continue;
    const std::string name = "speed limit turning point " + row.state + " " + row.noise + " " + to_string(row.regime);
    rep.checks.push_back(guarded(name, [&] {
      if (!rep.outcomes[i].error.empty()) throw NumericalFailure(rep.outcomes[i].error);
      const auto& cfg = row.config.sweep;
      const auto turning = qsl_turning_points(*cfg.family, make_state(cfg.initial_state), cfg.t_max, cfg.n_points,
                                              cfg.qsl_options(), cfg.time_scale, opt.threads);
      const auto revival = detail::first_revival(results[i].crossings[Measure::Entanglement]);
      if (turning.empty() || !revival) return CheckResult{name, false, "no turning point or no revival"};
      const double step = cfg.t_max / cfg.n_points;
      return CheckResult{name, std::abs(turning.front() - *revival) <= step,
                         "turning " + fmt(turning.front()) + " vs revival " + fmt(*revival)};
    }));
  }
  for (const auto& c : cases) {
    if (c.family.kind != ChannelKind::PhaseDamping) continue;
    const std::string name = "speed limit without turning point " + c.name;
    rep.checks.push_back(guarded(name, [&] {
      const auto turning =
          qsl_turning_points(c.family, make_state(bell_phi_plus_spec()), c.t_max, 2000, {}, 1.0, opt.threads);
      return CheckResult{name, turning.empty(), std::to_string(turning.size()) + " turning points"};
    }));
  }
  return rep;
}

/// Verdict matrix in the layout of the decay/revival summary table.
inline void print_scenarios(std::ostream& os, const std::vector<ScenarioOutcome>& outcomes) {
  os << std::left << std::setw(13) << "state" << std::setw(6) << "noise" << std::setw(15) << "regime"
     << std::setw(10) << "expected" << std::setw(10) << "observed" << std::setw(7) << "decay" << std::setw(9)
     << "revival"
     << "result\n";
  for (const auto& o : outcomes) {
    const std::string observed = o.error.empty() ? o.verdict.classification : "error";
    const std::string decay = o.error.empty() ? (o.verdict.decay_order_ok ? "ok" : "FAIL") : "-";
    const std::string revival =
        !o.error.empty() || !o.verdict.revival_order_ok ? "-" : (*o.verdict.revival_order_ok ? "ok" : "FAIL");
    os << std::setw(13) << o.row->state << std::setw(6) << o.row->noise << std::setw(15) << to_string(o.row->regime)
       << std::setw(10) << o.row->expected << std::setw(10) << observed << std::setw(7) << decay << std::setw(9)
       << revival << (o.matches() && o.chains_ok() ? "PASS" : "FAIL") << '\n';
    if (!o.error.empty()) os << "  error: " << o.error << '\n';
  }
  os << std::right;
}

inline void print_validation(std::ostream& os, const ValidationReport& rep) {
  print_scenarios(os, rep.outcomes);
  os << '\n';
  std::size_t failed = 0;
  for (const auto& c : rep.checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    failed += !c.passed;
  }
  os << '\n' << rep.checks.size() - failed << " of " << rep.checks.size() << " checks passed\n";
  if (failed) {
    os << "failed:\n";
    for (const auto& c : rep.checks)
      if (!c.passed) os << "  " << c.name << '\n';
  }
}

}  // namespace qcorr
