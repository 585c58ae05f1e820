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

// JSON run configurations: parsing with strict key checking, and the
// inverse serialisation used to compare shipped files with built-ins.

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qcorr/dynamics.hpp"

namespace qcorr {

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Everything needed to reproduce one sweep and write its outputs.
struct RunConfig {
  std::string comment;
  SweepConfig sweep;
  Thresholds thresholds;
  /// gamma, Gamma, Gamma1..3, t or werner_p
  std::string time_axis = "gamma";
  std::string output_dir = "out";
};

namespace detail {

using nlohmann::json;

inline void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "' in " + where);
  }
}

inline double get_number(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(std::string("'") + key + "' in " + where + " must be a number");
  return j.at(key).get<double>();
}

inline cplx get_amplitude(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(std::string("missing '") + key + "' in " + where);
  const json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError(std::string("'") + key + "' must be a number or [re, im]");
}

inline Vec3 get_vec3(const json& j, const char* key, Vec3 fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 3) throw ConfigError(std::string("'") + key + "' in " + where + " must have 3 entries");
  Vec3 out;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_number()) throw ConfigError(std::string("'") + key + "' entries must be numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

template <class E, std::size_t N>
E parse_enum(const std::string& s, const std::array<std::pair<const char*, E>, N>& table, const std::string& what) {
  for (const auto& [name, value] : table)
    if (s == name) return value;
  throw ConfigError("unknown " + what + " '" + s + "'");
}

inline const std::array<std::pair<const char*, ChannelKind>, 4> kKindNames = {{
    {"amplitude_damping", ChannelKind::AmplitudeDamping},
    {"phase_damping", ChannelKind::PhaseDamping},
    {"depolarizing", ChannelKind::Depolarizing},
    {"random_telegraph", ChannelKind::RandomTelegraph},
}};
inline const std::array<std::pair<const char*, Regime>, 2> kRegimeNames = {{
    {"markovian", Regime::Markovian},
    {"non_markovian", Regime::NonMarkovian},
}};
inline const std::array<std::pair<const char*, BellState>, 4> kBellNames = {{
    {"phi_plus", BellState::PhiPlus},
    {"phi_minus", BellState::PhiMinus},
    {"psi_plus", BellState::PsiPlus},
    {"psi_minus", BellState::PsiMinus},
}};
inline const std::array<std::pair<const char*, SteeringMode>, 2> kSteeringNames = {{
    {"singular_values", SteeringMode::SingularValues},
    {"eigenvalues", SteeringMode::Eigenvalues},
}};
inline const std::array<std::pair<const char*, QslGenerator>, 2> kGeneratorNames = {{
    {"literal", QslGenerator::Literal},
    {"symmetrized", QslGenerator::Symmetrized},
}};
inline const std::array<std::pair<const char*, QslDenominator>, 2> kDenominatorNames = {{
    {"instantaneous", QslDenominator::Instantaneous},
    {"time_averaged", QslDenominator::TimeAveraged},
}};
inline const std::array<std::pair<const char*, DepolarizingLineWidth>, 2> kLineWidthNames = {{
    {"per_axis", DepolarizingLineWidth::PerAxis},
    {"global", DepolarizingLineWidth::Global},
}};
inline const std::array<std::pair<const char*, NoiseSides>, 2> kSidesNames = {{
    {"first", NoiseSides::First},
    {"both", NoiseSides::Both},
}};

template <class E, std::size_t N>
std::string enum_name(E value, const std::array<std::pair<const char*, E>, N>& table) {
  for (const auto& [name, v] : table)
    if (v == value) return name;
  return "?";
}

inline InitialState parse_state(const json& j) {
  const std::string where = "initial_state";
  if (!j.is_object() || !j.contains("type")) throw ConfigError("initial_state needs a 'type'");
  const std::string type = get_or<std::string>(j, "type", "", where);
  if (type == "pure") {
    require_keys(j, {"type", "alpha", "beta"}, where);
    return PureStateSpec{get_amplitude(j, "alpha", where), get_amplitude(j, "beta", where)};
  }
  if (type == "werner") {
    require_keys(j, {"type", "p", "bell"}, where);
    WernerSpec w;
    w.p = get_number(j, "p", 1.0, where);
    w.bell = parse_enum(get_or<std::string>(j, "bell", "phi_plus", where), kBellNames, "Bell state");
    return w;
  }
  throw ConfigError("initial_state type must be 'pure' or 'werner'");
}

inline std::optional<ChannelFamily> parse_channel(const json& j) {
  const std::string where = "channel";
  if (j.is_null()) return std::nullopt;
  require_keys(j, {"kind", "regime", "gamma", "Gamma", "a", "gamma_vec", "Gamma_vec", "line_width",
                   "debug_literal_pd_sqrt"},
               where);
  const std::string kind = get_or<std::string>(j, "kind", "", where);
  if (kind == "none") return std::nullopt;
  ChannelFamily f;
  f.kind = parse_enum(kind, kKindNames, "channel kind");
  f.regime = parse_enum(get_or<std::string>(j, "regime", "", where), kRegimeNames, "regime");
  auto& p = f.params;
  p.gamma = get_number(j, "gamma", p.gamma, where);
  p.Gamma = get_number(j, "Gamma", p.Gamma, where);
  p.a = get_number(j, "a", p.a, where);
  p.gamma_vec = get_vec3(j, "gamma_vec", p.gamma_vec, where);
  p.Gamma_vec = get_vec3(j, "Gamma_vec", p.Gamma_vec, where);
  p.dp_line_width = parse_enum(get_or<std::string>(j, "line_width", "per_axis", where), kLineWidthNames, "line width");
  p.literal_pd_sqrt = get_or<bool>(j, "debug_literal_pd_sqrt", false, where);
  return f;
}

inline double axis_scale(const RunConfig& rc) {
  const auto& axis = rc.time_axis;
  if (axis == "werner_p" || axis == "t") return 1.0;
  if (!rc.sweep.family) throw ConfigError("time axis '" + axis + "' needs a channel");
  const auto& p = rc.sweep.family->params;
  if (axis == "gamma") return p.gamma;
  if (axis == "Gamma") return p.Gamma;
  if (axis == "Gamma1" || axis == "Gamma2" || axis == "Gamma3") {
    const std::size_t i = static_cast<std::size_t>(axis.back() - '1');
    return p.dp_line_width == DepolarizingLineWidth::Global ? p.Gamma : p.Gamma_vec[i];
  }
  throw ConfigError("unknown time axis '" + axis + "'");
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& j) {
  detail::require_keys(j,
                       {"comment", "initial_state", "channel", "grid", "noise_sides", "measures", "thresholds",
                        "steering_eigen_mode", "qsl_generator", "qsl_denominator", "output_dir"},
                       "config");
  RunConfig rc;
  rc.comment = detail::get_or<std::string>(j, "comment", "", "config");
  if (!j.contains("initial_state")) throw ConfigError("config needs 'initial_state'");
  rc.sweep.initial_state = detail::parse_state(j.at("initial_state"));
  if (!j.contains("channel")) throw ConfigError("config needs 'channel' (use {\"kind\": \"none\"} for a Werner scan)");
  rc.sweep.family = detail::parse_channel(j.at("channel"));

  if (!j.contains("grid")) throw ConfigError("config needs 'grid'");
  const auto& g = j.at("grid");
  detail::require_keys(g, {"t_max", "n_points", "time_axis"}, "grid");
  rc.sweep.t_max = detail::get_number(g, "t_max", rc.sweep.t_max, "grid");
  if (g.contains("n_points") && !g.at("n_points").is_number_integer())
    throw ConfigError("grid.n_points must be an integer");
  rc.sweep.n_points = detail::get_or<int>(g, "n_points", rc.sweep.n_points, "grid");
  rc.time_axis = detail::get_or<std::string>(g, "time_axis", rc.sweep.family ? "gamma" : "werner_p", "grid");
  if (!rc.sweep.family && rc.time_axis != "werner_p")
    throw ConfigError("a config without a channel must use time_axis 'werner_p'");
  if (rc.sweep.family && rc.time_axis == "werner_p") throw ConfigError("time_axis 'werner_p' needs channel kind 'none'");

  rc.sweep.sides = detail::parse_enum(detail::get_or<std::string>(j, "noise_sides", "first", "config"),
                                      detail::kSidesNames, "noise_sides");
  if (j.contains("measures")) {
    const auto& m = j.at("measures");
    if (!m.is_array()) throw ConfigError("'measures' must be an array");
    MeasureSelection sel{false, false, false, false, false};
    for (const auto& item : m) {
      const std::string name = item.is_string() ? item.get<std::string>() : "";
      if (name == "fidelity") sel.fidelity = true;
      else if (name == "bell") sel.bell = true;
      else if (name == "steering") sel.steering = true;
      else if (name == "concurrence") sel.concurrence = true;
      else if (name == "qsl") sel.qsl = true;
      else throw ConfigError("unknown measure '" + name + "'");
    }
    rc.sweep.measures = sel;
  }
  if (j.contains("thresholds")) {
    const auto& t = j.at("thresholds");
    detail::require_keys(t, {"f_classical", "f_lhv", "bell_classical", "steering_zero", "concurrence_zero"},
                         "thresholds");
    rc.thresholds.f_classical = detail::get_number(t, "f_classical", rc.thresholds.f_classical, "thresholds");
    rc.thresholds.f_lhv = detail::get_number(t, "f_lhv", rc.thresholds.f_lhv, "thresholds");
    rc.thresholds.bell_classical = detail::get_number(t, "bell_classical", rc.thresholds.bell_classical, "thresholds");
    rc.thresholds.steering_zero = detail::get_number(t, "steering_zero", rc.thresholds.steering_zero, "thresholds");
    rc.thresholds.concurrence_zero =
        detail::get_number(t, "concurrence_zero", rc.thresholds.concurrence_zero, "thresholds");
  }
  rc.sweep.measure_options.steering = detail::parse_enum(
      detail::get_or<std::string>(j, "steering_eigen_mode", "singular_values", "config"), detail::kSteeringNames,
      "steering_eigen_mode");
  rc.sweep.qsl_generator = detail::parse_enum(detail::get_or<std::string>(j, "qsl_generator", "literal", "config"),
                                              detail::kGeneratorNames, "qsl_generator");
  rc.sweep.qsl_denominator =
      detail::parse_enum(detail::get_or<std::string>(j, "qsl_denominator", "instantaneous", "config"),
                         detail::kDenominatorNames, "qsl_denominator");
  rc.output_dir = detail::get_or<std::string>(j, "output_dir", rc.output_dir, "config");

  rc.sweep.time_scale = detail::axis_scale(rc);
  rc.sweep.validate();
  return rc;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(j);
}

/// Inverse of parse_run_config (all keys written out explicitly).
inline nlohmann::json to_json(const RunConfig& rc) {
  using nlohmann::json;
  json j;
  j["comment"] = rc.comment;
  if (const auto* pure = std::get_if<PureStateSpec>(&rc.sweep.initial_state)) {
    auto amp = [](cplx z) { return z.imag() == 0.0 ? json(z.real()) : json::array({z.real(), z.imag()}); };
    j["initial_state"] = {{"type", "pure"}, {"alpha", amp(pure->alpha)}, {"beta", amp(pure->beta)}};
  } else {
    const auto& w = std::get<WernerSpec>(rc.sweep.initial_state);
    j["initial_state"] = {{"type", "werner"}, {"p", w.p}, {"bell", to_string(w.bell)}};
  }
  if (rc.sweep.family) {
    const auto& f = *rc.sweep.family;
    const auto& p = f.params;
    json c = {{"kind", to_string(f.kind)}, {"regime", to_string(f.regime)}};
    switch (f.kind) {
      case ChannelKind::AmplitudeDamping:
      case ChannelKind::PhaseDamping:
        c["gamma"] = p.gamma;
        if (f.regime == Regime::NonMarkovian || f.kind == ChannelKind::AmplitudeDamping) c["Gamma"] = p.Gamma;
        break;
      case ChannelKind::Depolarizing:
        c["gamma_vec"] = p.gamma_vec;
        c["Gamma_vec"] = p.Gamma_vec;
        c["line_width"] = detail::enum_name(p.dp_line_width, detail::kLineWidthNames);
        if (p.dp_line_width == DepolarizingLineWidth::Global) c["Gamma"] = p.Gamma;
        break;
      case ChannelKind::RandomTelegraph:
        c["gamma"] = p.gamma;
        c["a"] = p.a;
        break;
    }
    if (p.literal_pd_sqrt) c["debug_literal_pd_sqrt"] = true;
    j["channel"] = c;
  } else {
    j["channel"] = {{"kind", "none"}};
  }
  j["grid"] = {{"t_max", rc.sweep.t_max}, {"n_points", rc.sweep.n_points}, {"time_axis", rc.time_axis}};
  j["noise_sides"] = detail::enum_name(rc.sweep.sides, detail::kSidesNames);
  json measures = json::array();
  const auto& sel = rc.sweep.measures;
  if (sel.fidelity) measures.push_back("fidelity");
  if (sel.bell) measures.push_back("bell");
  if (sel.steering) measures.push_back("steering");
  if (sel.concurrence) measures.push_back("concurrence");
  if (sel.qsl) measures.push_back("qsl");
  j["measures"] = measures;
  j["thresholds"] = {{"f_classical", rc.thresholds.f_classical},
                     {"f_lhv", rc.thresholds.f_lhv},
                     {"bell_classical", rc.thresholds.bell_classical},
                     {"steering_zero", rc.thresholds.steering_zero},
                     {"concurrence_zero", rc.thresholds.concurrence_zero}};
  j["steering_eigen_mode"] = detail::enum_name(rc.sweep.measure_options.steering, detail::kSteeringNames);
  j["qsl_generator"] = detail::enum_name(rc.sweep.qsl_generator, detail::kGeneratorNames);
  j["qsl_denominator"] = detail::enum_name(rc.sweep.qsl_denominator, detail::kDenominatorNames);
  j["output_dir"] = rc.output_dir;
  return j;
}

}  // namespace qcorr
