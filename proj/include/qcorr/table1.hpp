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

// Built-in scenario rows: every state/channel/regime combination of the
// decay and revival summary, each with its expected classification. The
// shipped configs/ files are the JSON form of these rows.

#include <string>
#include <vector>

#include "qcorr/config.hpp"
#include "qcorr/report.hpp"

namespace qcorr {

struct ScenarioRow {
  std::string id;  ///< config file stem
  std::string state;
  std::string noise;
  Regime regime;
  std::string expected;  ///< "decay" or "both"
  RunConfig config;
};

namespace detail {

inline RunConfig scenario_config(std::string comment, InitialState state, ChannelFamily fam, double t_max,
                                 std::string axis, std::string out) {
  RunConfig rc;
  rc.comment = std::move(comment);
  rc.sweep.initial_state = state;
  rc.sweep.family = fam;
  rc.sweep.t_max = t_max;
  rc.sweep.n_points = 2000;
  rc.time_axis = std::move(axis);
  rc.output_dir = "out/" + out;
  rc.sweep.time_scale = axis_scale(rc);
  return rc;
}

inline ChannelFamily family(ChannelKind k, Regime r) {
  ChannelFamily f;
  f.kind = k;
  f.regime = r;
  f.params.gamma = 1.0;
  switch (k) {
    case ChannelKind::AmplitudeDamping:
    case ChannelKind::PhaseDamping: f.params.Gamma = 0.1; break;
    case ChannelKind::Depolarizing:
      f.params.Gamma_vec = {1.0, 1.0, 1.0};
      f.params.gamma_vec = r == Regime::NonMarkovian ? Vec3{0.2, 0.2, 5.0} : Vec3{0.2, 0.2, 0.2};
      break;
    case ChannelKind::RandomTelegraph: f.params.a = r == Regime::NonMarkovian ? 40.0 : 0.25; break;
  }
  return f;
}

}  // namespace detail

inline PureStateSpec bell_phi_plus_spec() { return {1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2}; }

inline std::vector<ScenarioRow> scenario_rows() {
  using detail::family;
  using detail::scenario_config;
  using K = ChannelKind;
  using R = Regime;
  const InitialState bell = bell_phi_plus_spec();
  const InitialState werner = WernerSpec{0.9, BellState::PhiPlus};
  std::vector<ScenarioRow> rows;
  auto add = [&](std::string id, std::string state, std::string noise, R regime, std::string expected,
                 std::string comment, InitialState s, K kind, double t_max, std::string axis) {
    rows.push_back({id, std::move(state), std::move(noise), regime, std::move(expected),
                    scenario_config(std::move(comment), s, family(kind, regime), t_max, std::move(axis), id)});
  };
  add("fig2_ad_m", "Bell", "AD", R::Markovian, "decay",
      "Figure 2: Bell state under Markovian amplitude damping, Gamma = 0.1 gamma, axis gamma t", bell,
      K::AmplitudeDamping, 40.0, "gamma");
  add("fig1_ad_nm", "Bell", "AD", R::NonMarkovian, "both",
      "Figure 1 (speed limit: Figure 3): Bell state under non-Markovian amplitude damping, Gamma = 0.1 gamma, axis "
      "gamma t",
      bell, K::AmplitudeDamping, 40.0, "gamma");
  add("fig4_pd_m", "Bell", "PD", R::Markovian, "decay",
      "Figure 4b (speed limit: Figure 5b): Bell state under Markovian phase damping, axis gamma t", bell,
      K::PhaseDamping, 40.0, "gamma");
  add("fig4_pd", "Bell", "PD", R::NonMarkovian, "decay",
      "Figure 4a (speed limit: Figure 5a): Bell state under non-Markovian phase damping, Gamma = 0.1 gamma, axis "
      "gamma t",
      bell, K::PhaseDamping, 40.0, "gamma");
  add("table1_dp_m", "Bell", "DP", R::Markovian, "decay",
      "Summary table row without a figure: Bell state under Markovian depolarizing noise, gamma_i = 0.2 Gamma_i, "
      "axis Gamma_1 t",
      bell, K::Depolarizing, 15.0, "Gamma1");
  add("fig6_dp_nm", "Bell", "DP", R::NonMarkovian, "both",
      "Figure 6 (speed limit: Figure 7): Bell state under non-Markovian depolarizing noise, gamma_1 = 0.2 Gamma_1, "
      "gamma_2 = 0.2 Gamma_2, gamma_3 = 5 Gamma_3, axis Gamma_1 t",
      bell, K::Depolarizing, 15.0, "Gamma1");
  add("fig9_rtn_m", "Bell", "RTN", R::Markovian, "decay",
      "Figure 9: Bell state under Markovian random telegraph noise, a/gamma = 0.25, axis gamma t", bell,
      K::RandomTelegraph, 10.0, "gamma");
  add("fig8_rtn_nm", "Bell", "RTN", R::NonMarkovian, "both",
      "Figure 8 (speed limit: Figure 10): Bell state under non-Markovian random telegraph noise, a/gamma = 40, axis "
      "gamma t",
      bell, K::RandomTelegraph, 5.0, "gamma");
  add("fig11_werner_ad_m", "Werner(0.9)", "AD", R::Markovian, "decay",
      "Figure 11: Werner state p = 0.9 under Markovian amplitude damping, Gamma = 0.1 gamma, axis gamma t", werner,
      K::AmplitudeDamping, 40.0, "gamma");
  add("fig12_werner_ad_nm", "Werner(0.9)", "AD", R::NonMarkovian, "both",
      "Figure 12 (speed limit: Figure 13): Werner state p = 0.9 under non-Markovian amplitude damping, Gamma = 0.1 "
      "gamma, axis gamma t",
      werner, K::AmplitudeDamping, 40.0, "gamma");
  add("table1_werner_rtn_m", "Werner(0.9)", "RTN", R::Markovian, "decay",
      "Summary table row without a figure: Werner state p = 0.9 under Markovian random telegraph noise, a/gamma = "
      "0.25, axis gamma t",
      werner, K::RandomTelegraph, 10.0, "gamma");
  add("fig14_werner_rtn_nm", "Werner(0.9)", "RTN", R::NonMarkovian, "both",
      "Figure 14 (speed limit: Figure 15): Werner state p = 0.9 under non-Markovian random telegraph noise, a/gamma "
      "= 40, axis gamma t",
      werner, K::RandomTelegraph, 5.0, "gamma");
  return rows;
}

/// Static Werner weight scan over p in [0, 1].
inline RunConfig werner_scan_config() {
  RunConfig rc;
  rc.comment = "Werner state thresholds: Werner weight p scanned over [0, 1], no channel";
  rc.sweep.initial_state = WernerSpec{1.0, BellState::PhiPlus};
  rc.sweep.t_max = 1.0;
  rc.sweep.n_points = 1001;
  rc.sweep.measures.qsl = false;
  rc.time_axis = "werner_p";
  rc.output_dir = "out/werner_scan";
  return rc;
}

struct ScenarioOutcome {
  const ScenarioRow* row;
  HierarchyVerdict verdict;
  std::string error;  ///< non-empty when the run threw

  bool matches() const { return error.empty() && verdict.classification == row->expected; }
  bool chains_ok() const {
    return error.empty() && verdict.decay_order_ok && verdict.revival_order_ok.value_or(true);
  }
};

}  // namespace qcorr
