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

// Time sweeps of the correlation measures, refined threshold crossings,
// hierarchy-order verdicts and speed-limit turning points.

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "qcorr/channels.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

using InitialState = std::variant<PureStateSpec, WernerSpec>;

inline DensityMatrix make_state(const InitialState& s) {
  return std::visit(
      [](const auto& spec) -> DensityMatrix {
        if constexpr (std::is_same_v<std::decay_t<decltype(spec)>, PureStateSpec>)
          return make_pure(spec);
        else
          return make_werner(spec);
      },
      s);
}

struct MeasureSelection {
  bool fidelity = true;
  bool bell = true;
  bool steering = true;
  bool concurrence = true;
  bool qsl = true;

  bool includes(Measure m) const {
    switch (m) {
      case Measure::FidelityLhv:
      case Measure::Teleportation: return fidelity;
      case Measure::Bell: return bell;
      case Measure::Steering2:
      case Measure::Steering3: return steering;
      case Measure::Entanglement: return concurrence;
    }
    return false;
  }
};

/// A sweep over [0, t_max] on a uniform grid. Grid coordinates are in axis
/// units: physical time times `time_scale` (e.g. gamma for a gamma*t axis).
/// Without a channel family the sweep is a static Werner sweep whose axis
/// is the mixing weight p.
struct SweepConfig {
  InitialState initial_state = PureStateSpec{1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};
  std::optional<ChannelFamily> family;
  double t_max = 40.0;
  int n_points = 2000;
  double time_scale = 1.0;
  NoiseSides sides = NoiseSides::First;
  MeasureSelection measures;
  MeasureOptions measure_options;
  QslGenerator qsl_generator = QslGenerator::Literal;
  QslDenominator qsl_denominator = QslDenominator::Instantaneous;
  unsigned threads = 1;  ///< 0 = hardware concurrency

  bool is_werner_scan() const { return !family.has_value(); }

  QslOptions qsl_options() const { return {qsl_generator, qsl_denominator, sides}; }

  void validate() const {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidArgument("t_max must be > 0");
    if (n_points < 2) throw InvalidArgument("n_points must be >= 2");
    if (!(time_scale > 0.0) || !std::isfinite(time_scale)) throw InvalidArgument("time scale must be > 0");
    if (family) {
      family->validate();
      make_state(initial_state);
    } else {
      if (!std::holds_alternative<WernerSpec>(initial_state))
        throw InvalidArgument("a sweep without a channel scans the Werner weight and needs a Werner state");
      if (t_max > 1.0) throw InvalidArgument("Werner weight scan needs t_max <= 1");
    }
  }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<MeasureVector> values;
};

enum class Direction { Death, Revival };

inline std::string to_string(Direction d) { return d == Direction::Death ? "death" : "revival"; }

struct Crossing {
  double time;
  Direction direction;
};

struct MeasureCrossings {
  bool selected = false;
  bool initially_alive = true;
  std::vector<Crossing> events;  // sorted; deaths and revivals alternate
};

struct CrossingReport {
  std::array<MeasureCrossings, 6> measures;

  MeasureCrossings& operator[](Measure m) { return measures[static_cast<std::size_t>(m)]; }
  const MeasureCrossings& operator[](Measure m) const { return measures[static_cast<std::size_t>(m)]; }

  bool any(Direction d) const {
    for (const auto& m : measures)
      for (const auto& e : m.events)
        if (e.direction == d) return true;
    return false;
  }
};

struct Violation {
  std::string chain;  // "decay" or "revival"
  Measure stronger;
  Measure weaker;
  double stronger_time;
  double weaker_time;
};

struct HierarchyVerdict {
  bool decay_order_ok = true;
  std::optional<bool> revival_order_ok;  // empty when nothing revives
  std::vector<Violation> violations;
  std::string classification;  // "decay", "both" or "none"
};

inline constexpr double kCrossingTolerance = 1e-8;
inline constexpr double kTouchTolerance = 1e-6;
inline constexpr double kTieTolerance = 1e-8;
/// A measure is alive only when it exceeds its threshold by more than this.
/// Below it the excess is rounding noise (e.g. 2 sqrt(1 + p^2) - 2 at p ~ 1e-8).
inline constexpr double kAliveMargin = 1e-12;

using Evaluator = std::function<MeasureVector(double)>;

namespace detail {

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::size_t> first_bad(threads, n);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        const std::size_t lo = n * w / threads, hi = n * (w + 1) / threads;
        for (std::size_t i = lo; i < hi; ++i) {
          try {
            fn(i);
          } catch (...) {
            errors[w] = std::current_exception();
            first_bad[w] = i;
            return;
          }
        }
      });
    }
  }
  // Report the failure at the smallest grid index regardless of scheduling.
  const auto it = std::min_element(first_bad.begin(), first_bad.end());
  if (*it < n) std::rethrow_exception(errors[static_cast<std::size_t>(it - first_bad.begin())]);
}

inline double golden_section_min(const std::function<double(double)>& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Boundary of {t : f(t) > 0} inside [lo, hi], given opposite statuses at the ends.
inline double bisect_status(const std::function<double(double)>& f, double lo, double hi, bool lo_alive) {
  for (int it = 0; it < 300; ++it) {
    if (hi - lo <= 1e-13 * std::max(1.0, std::abs(hi))) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    const double v = f(mid);
    if (!std::isfinite(v))
      throw NumericalFailure("crossing bisection hit a non-finite value in [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
    if ((v > 0.0) == lo_alive)
      lo = mid;
    else
      hi = mid;
  }
  if (hi - lo > kCrossingTolerance)
    throw NumericalFailure("crossing bisection did not converge in [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
  return 0.5 * (lo + hi);
}

inline MeasureVector masked(MeasureVector v, const MeasureSelection& sel) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (!sel.fidelity) v.fidelity = v.n_value = nan;
  if (!sel.bell) v.bell = nan;
  if (!sel.steering) v.s2 = v.s3 = nan;
  if (!sel.concurrence) v.concurrence = nan;
  return v;
}

}  // namespace detail

/// Measures (without the speed limit) as a function of the grid coordinate.
inline Evaluator make_evaluator(const SweepConfig& cfg) {
  if (cfg.is_werner_scan()) {
    const BellState bell = std::get<WernerSpec>(cfg.initial_state).bell;
    const MeasureOptions opt = cfg.measure_options;
    return [bell, opt](double p) { return evaluate_measures(make_werner({std::clamp(p, 0.0, 1.0), bell}), opt); };
  }
  const DensityMatrix rho0 = make_state(cfg.initial_state);
  const ChannelFamily fam = *cfg.family;
  const double scale = cfg.time_scale;
  const NoiseSides sides = cfg.sides;
  const MeasureOptions opt = cfg.measure_options;
  return [=](double axis) { return evaluate_measures(evolve(fam, axis / scale, rho0, sides), opt); };
}

inline std::vector<double> uniform_grid(double t_max, int n_points) {
  std::vector<double> t(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) t[static_cast<std::size_t>(i)] = t_max * i / (n_points - 1);
  t.back() = t_max;
  return t;
}

/// Evaluates every selected measure (and the speed limit) on the grid.
inline Trajectory sweep(const SweepConfig& cfg) {
  cfg.validate();
  Trajectory traj;
  traj.times = uniform_grid(cfg.t_max, cfg.n_points);
  traj.values.resize(traj.times.size());
  const Evaluator eval = make_evaluator(cfg);
  const bool with_qsl = cfg.measures.qsl && !cfg.is_werner_scan();
  const std::optional<DensityMatrix> rho0 =
      with_qsl ? std::optional<DensityMatrix>(make_state(cfg.initial_state)) : std::nullopt;
  const QslOptions qopt = cfg.qsl_options();

  detail::parallel_for(traj.times.size(), cfg.threads, [&](std::size_t i) {
    const double t = traj.times[i];
    try {
      MeasureVector v = detail::masked(eval(t), cfg.measures);
      if (with_qsl) v.tau_qsl = qsl_time(*cfg.family, *rho0, t / cfg.time_scale, qopt).tau * cfg.time_scale;
      traj.values[i] = v;
    } catch (const InvalidArgument& e) {
      throw SweepFailure(std::string(e.what()) + " (grid time " + std::to_string(t) + ")", t, true);
    } catch (const Error& e) {
      throw SweepFailure(std::string(e.what()) + " (grid time " + std::to_string(t) + ")", t, false);
    }
  });
  return traj;
}

/// Threshold crossings of every selected measure, refined on the exact
/// measure function. A sign change between grid points is bisected; an
/// alive local minimum that comes within 1e-6 of the threshold and is
/// followed by a rise of more than 1e-6 counts as a death immediately
/// followed by a revival.
inline CrossingReport find_crossings(const Trajectory& traj, const Thresholds& th, const Evaluator& eval,
                                     const MeasureSelection& sel = {}) {
  CrossingReport report;
  const std::size_t n = traj.times.size();
  for (Measure m : kChainOrder) {
    MeasureCrossings& mc = report[m];
    mc.selected = sel.includes(m);
    if (!mc.selected || n == 0) continue;
    const double threshold = measure_threshold(th, m) + kAliveMargin;
    const std::function<double(double)> excess = [&](double t) { return measure_value(eval(t), m) - threshold; };

    std::vector<double> y(n);
    std::vector<bool> alive(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = measure_value(traj.values[i], m) - threshold;
      alive[i] = y[i] > 0.0;
    }
    mc.initially_alive = alive[0];

    for (std::size_t i = 1; i < n; ++i) {
      if (alive[i - 1] != alive[i]) {
        const double t = detail::bisect_status(excess, traj.times[i - 1], traj.times[i], alive[i - 1]);
        mc.events.push_back({t, alive[i - 1] ? Direction::Death : Direction::Revival});
        continue;
      }
      if (i + 1 >= n || !alive[i - 1] || !alive[i] || !alive[i + 1]) continue;
      if (!(y[i] <= y[i - 1] && y[i] < y[i + 1])) continue;
      double peak = y[i];
      for (std::size_t k = i + 1; k < n && y[k] >= y[k - 1]; ++k) peak = y[k];
      if (peak - y[i] <= kTouchTolerance) continue;

      const double lo = traj.times[i - 1], hi = traj.times[i + 1];
      const double t_min = detail::golden_section_min(excess, lo, hi, 1e-12 * std::max(1.0, hi));
      const double f_min = excess(t_min);
      if (f_min > kTouchTolerance) continue;
      if (f_min > 0.0) {
        mc.events.push_back({t_min, Direction::Death});
        mc.events.push_back({t_min, Direction::Revival});
      } else {
        mc.events.push_back({detail::bisect_status(excess, lo, t_min, true), Direction::Death});
        mc.events.push_back({detail::bisect_status(excess, t_min, hi, false), Direction::Revival});
      }
    }
  }
  return report;
}

inline CrossingReport find_crossings(const Trajectory& traj, const Thresholds& th, const SweepConfig& cfg) {
  return find_crossings(traj, th, make_evaluator(cfg), cfg.measures);
}

namespace detail {
inline double first_death(const MeasureCrossings& mc, double t0) {
  if (!mc.initially_alive) return t0;
  for (const auto& e : mc.events)
    if (e.direction == Direction::Death) return e.time;
  return std::numeric_limits<double>::infinity();
}

inline std::optional<double> first_revival(const MeasureCrossings& mc) {
  for (const auto& e : mc.events)
    if (e.direction == Direction::Revival) return e.time;
  return std::nullopt;
}
}  // namespace detail

/// Decay chain: the first death of a stronger measure never comes after the
/// first death of a weaker one (never-dying measures die at +infinity).
/// Revival chain: when a stronger measure first revives, every weaker
/// measure that had died must already have revived. Ties within 1e-8 pass.
inline HierarchyVerdict verify_hierarchy(const CrossingReport& report, double t0 = 0.0) {
  HierarchyVerdict v;
  const bool any_revival = report.any(Direction::Revival);
  const bool any_death = report.any(Direction::Death);
  v.classification = any_revival ? "both" : (any_death ? "decay" : "none");
  if (any_revival) v.revival_order_ok = true;

  for (std::size_t i = 0; i < kChainOrder.size(); ++i) {
    const MeasureCrossings& strong = report[kChainOrder[i]];
    if (!strong.selected) continue;
    for (std::size_t j = i + 1; j < kChainOrder.size(); ++j) {
      const MeasureCrossings& weak = report[kChainOrder[j]];
      if (!weak.selected) continue;

      const double qs = detail::first_death(strong, t0), qw = detail::first_death(weak, t0);
      if (qs > qw + kTieTolerance) {
        v.decay_order_ok = false;
        v.violations.push_back({"decay", kChainOrder[i], kChainOrder[j], qs, qw});
      }

      const auto revive = detail::first_revival(strong);
      if (!revive) continue;
      const Crossing* last = nullptr;
      for (const auto& e : weak.events)
        if (e.time <= *revive + kTieTolerance) last = &e;
      const bool weak_dead = last ? last->direction == Direction::Death : !weak.initially_alive;
      if (weak_dead) {
        v.revival_order_ok = false;
        v.violations.push_back({"revival", kChainOrder[i], kChainOrder[j], *revive,
                                last ? last->time : std::numeric_limits<double>::infinity()});
      }
    }
  }
  return v;
}

/// Interior local extrema of the speed-limit curve, in axis units, each
/// refined by golden-section search.
inline std::vector<double> qsl_turning_points(const ChannelFamily& fam, const DensityMatrix& rho0, double t_max,
                                              int n_points, const QslOptions& opt = {}, double time_scale = 1.0,
                                              unsigned threads = 1) {
  if (n_points < 3) throw InvalidArgument("qsl_turning_points needs n_points >= 3");
  const auto times = uniform_grid(t_max, n_points);
  std::vector<double> tau(times.size());
  auto curve = [&](double axis) { return qsl_time(fam, rho0, axis / time_scale, opt).tau; };
  detail::parallel_for(times.size(), threads, [&](std::size_t i) { tau[i] = curve(times[i]); });

  std::vector<double> out;
  int prev_sign = 0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double d = tau[i] - tau[i - 1];
    const int sign = (d > 0.0) - (d < 0.0);
    if (sign == 0) continue;
    if (prev_sign != 0 && sign != prev_sign) {
      // extremum at (or next to) sample i - 1
      const double lo = times[i >= 2 ? i - 2 : 0], hi = times[i];
      const double flip = prev_sign > 0 ? -1.0 : 1.0;
      out.push_back(detail::golden_section_min([&](double t) { return flip * curve(t); }, lo, hi, 1e-9));
    }
    prev_sign = sign;
  }
  return out;
}

}  // namespace qcorr
