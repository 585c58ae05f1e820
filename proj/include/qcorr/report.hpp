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

// Running a configured sweep and writing trajectory.csv, crossings.json and
// verdict.json.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include "json.hpp"
#include "qcorr/config.hpp"
#include "qcorr/dynamics.hpp"

namespace qcorr {

struct RunResult {
  Trajectory trajectory;
  CrossingReport crossings;
  HierarchyVerdict verdict;
};

inline RunResult run(const RunConfig& rc) {
  RunResult r;
  r.trajectory = sweep(rc.sweep);
  try {
    r.crossings = find_crossings(r.trajectory, rc.thresholds, rc.sweep);
  } catch (const InvalidArgument& e) {
    throw SweepFailure(std::string("crossing refinement: ") + e.what(), 0.0, true);
  } catch (const Error& e) {
    throw SweepFailure(std::string("crossing refinement: ") + e.what(), 0.0, false);
  }
  r.verdict = verify_hierarchy(r.crossings, r.trajectory.times.front());
  return r;
}

namespace detail {
inline void put_number(std::ostream& os, double x) {
  if (std::isnan(x)) {
    os << "nan";
    return;
  }
  if (std::isinf(x)) {
    os << (x > 0 ? "inf" : "-inf");
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  os << buf;
}

inline nlohmann::json time_or_null(double t) { return std::isfinite(t) ? nlohmann::json(t) : nlohmann::json(); }
}  // namespace detail

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,fidelity,n_value,bell,s2,s3,concurrence,tau_qsl\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const MeasureVector& v = traj.values[i];
    for (double x : {traj.times[i], v.fidelity, v.n_value, v.bell, v.s2, v.s3, v.concurrence}) {
      detail::put_number(os, x);
      os << ',';
    }
    detail::put_number(os, v.tau_qsl.value_or(nan));
    os << '\n';
  }
}

inline nlohmann::json crossings_json(const CrossingReport& report, const std::string& time_axis) {
  nlohmann::json measures = nlohmann::json::object();
  for (Measure m : kChainOrder) {
    const MeasureCrossings& mc = report[m];
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : mc.events) events.push_back({{"time", e.time}, {"direction", to_string(e.direction)}});
    measures[to_string(m)] = {
        {"selected", mc.selected}, {"initially_alive", mc.initially_alive}, {"events", events}};
  }
  nlohmann::json order = nlohmann::json::array();
  for (Measure m : kChainOrder) order.push_back(to_string(m));
  return {{"time_axis", time_axis}, {"chain_order", order}, {"measures", measures}};
}

inline nlohmann::json verdict_json(const HierarchyVerdict& v) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& x : v.violations)
    violations.push_back({{"chain", x.chain},
                          {"stronger", to_string(x.stronger)},
                          {"weaker", to_string(x.weaker)},
                          {"stronger_time", detail::time_or_null(x.stronger_time)},
                          {"weaker_time", detail::time_or_null(x.weaker_time)}});
  return {{"classification", v.classification},
          {"decay_order_ok", v.decay_order_ok},
          {"revival_order_ok", v.revival_order_ok ? nlohmann::json(*v.revival_order_ok) : nlohmann::json()},
          {"violations", violations}};
}

/// Creates `dir` if needed and writes the three output files.
inline void write_outputs(const std::filesystem::path& dir, const RunConfig& rc, const RunResult& r) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + (dir / name).string() + "'");
    return out;
  };
  {
    auto out = open("trajectory.csv");
    write_trajectory_csv(out, r.trajectory);
  }
  {
    auto out = open("crossings.json");
    out << crossings_json(r.crossings, rc.time_axis).dump(2) << '\n';
  }
  {
    auto out = open("verdict.json");
    out << verdict_json(r.verdict).dump(2) << '\n';
  }
}

}  // namespace qcorr
