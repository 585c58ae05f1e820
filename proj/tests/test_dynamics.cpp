#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace qcorr;
using Catch::Matchers::WithinAbs;
using K = ChannelKind;
using R = Regime;

namespace {

const ScenarioRow& row(const std::string& id) {
  static const auto rows = scenario_rows();
  for (const auto& r : rows)
    if (r.id == id) return r;
  throw std::logic_error("unknown row " + id);
}

double first_event(const MeasureCrossings& mc, Direction d) {
  for (const auto& e : mc.events)
    if (e.direction == d) return e.time;
  return std::numeric_limits<double>::infinity();
}

std::size_t count(const CrossingReport& r, Direction d) {
  std::size_t n = 0;
  for (const auto& m : r.measures)
    for (const auto& e : m.events) n += e.direction == d;
  return n;
}

MeasureCrossings dies_at(double t) {
  MeasureCrossings mc;
  mc.selected = true;
  mc.events.push_back({t, Direction::Death});
  return mc;
}

MeasureCrossings never_dies() {
  MeasureCrossings mc;
  mc.selected = true;
  return mc;
}

CrossingReport synthetic(std::array<MeasureCrossings, 6> m) {
  CrossingReport r;
  r.measures = std::move(m);
  return r;
}

}  // namespace

TEST_CASE("sweep starts from the initial state") {
  const auto r = run(row("fig1_ad_nm").config);
  const auto& v0 = r.trajectory.values.front();
  CHECK(r.trajectory.times.front() == 0.0);
  CHECK_THAT(v0.fidelity, WithinAbs(1.0, 1e-14));
  CHECK_THAT(v0.bell, WithinAbs(2.0 * std::sqrt(2.0), 1e-14));
  CHECK_THAT(v0.concurrence, WithinAbs(1.0, 1e-13));
  CHECK(v0.tau_qsl == 0.0);
  CHECK(r.trajectory.times.size() == 2000);
  CHECK(r.trajectory.times.back() == 40.0);
}

TEST_CASE("Werner state under amplitude damping at t = 0") {
  const auto r = sweep(row("fig11_werner_ad_m").config.sweep);
  const auto& v0 = r.values.front();
  CHECK_THAT(v0.concurrence, WithinAbs(0.85, 1e-12));
  CHECK_THAT(v0.bell, WithinAbs(2.0 * std::sqrt(2.0) * 0.9, 1e-12));
  CHECK_THAT(v0.fidelity, WithinAbs(0.95, 1e-12));
}

TEST_CASE("phase damping never raises concurrence") {
  for (const char* id : {"fig4_pd_m", "fig4_pd"}) {
    const auto t = sweep(row(id).config.sweep);
    for (std::size_t i = 1; i < t.values.size(); ++i)
      CHECK(t.values[i].concurrence <= t.values[i - 1].concurrence + 1e-12);
  }
}

TEST_CASE("Werner weight scan finds the textbook thresholds") {
  const auto rc = werner_scan_config();
  const auto r = run(rc);
  auto onset = [&](Measure m) { return first_event(r.crossings[m], Direction::Revival); };
  CHECK_THAT(onset(Measure::Entanglement), WithinAbs(1.0 / 3.0, 1e-6));
  CHECK_THAT(onset(Measure::Teleportation), WithinAbs(1.0 / 3.0, 1e-6));
  CHECK_THAT(onset(Measure::Steering3), WithinAbs(1.0 / std::sqrt(3.0), 1e-6));
  CHECK_THAT(onset(Measure::Steering2), WithinAbs(1.0 / std::sqrt(2.0), 1e-6));
  CHECK_THAT(onset(Measure::Bell), WithinAbs(1.0 / std::sqrt(2.0), 1e-6));
  CHECK_THAT(onset(Measure::FidelityLhv), WithinAbs(0.74, 1e-6));
  for (const auto& m : r.crossings.measures) CHECK_FALSE(m.initially_alive);
}

TEST_CASE("Markovian amplitude damping death times") {
  const auto r = run(row("fig2_ad_m").config);
  auto death = [&](Measure m) { return first_event(r.crossings[m], Direction::Death); };
  CHECK_THAT(death(Measure::Bell), WithinAbs(std::log(2.0), 1e-6));
  CHECK_THAT(death(Measure::Steering2), WithinAbs(std::log(2.0), 1e-6));
  CHECK_THAT(death(Measure::Steering3), WithinAbs(-std::log(std::sqrt(2.0) - 1.0), 1e-6));
  CHECK_THAT(death(Measure::Teleportation), WithinAbs(-std::log(3.0 - 2.0 * std::sqrt(2.0)), 1e-6));
  CHECK(std::isinf(death(Measure::Entanglement)));
  CHECK(count(r.crossings, Direction::Revival) == 0);
  CHECK(r.verdict.classification == "decay");
  CHECK(r.verdict.decay_order_ok);
}

TEST_CASE("hierarchy verdict on hand-built reports") {
  SECTION("ordered deaths pass") {
    const auto v = verify_hierarchy(synthetic({dies_at(1), dies_at(2), dies_at(3), dies_at(4), dies_at(5), never_dies()}));
    CHECK(v.decay_order_ok);
    CHECK_FALSE(v.revival_order_ok.has_value());
    CHECK(v.classification == "decay");
  }
  SECTION("a stronger measure outliving a weaker one is flagged") {
    const auto v = verify_hierarchy(synthetic({dies_at(1), dies_at(3), dies_at(2), dies_at(4), dies_at(5), dies_at(6)}));
    CHECK_FALSE(v.decay_order_ok);
    REQUIRE(v.violations.size() == 1);
    CHECK(v.violations[0].stronger == Measure::Bell);
    CHECK(v.violations[0].weaker == Measure::Steering2);
  }
  SECTION("ties within tolerance pass") {
    const auto v =
        verify_hierarchy(synthetic({dies_at(1), dies_at(2 + 5e-9), dies_at(2), dies_at(4), dies_at(5), dies_at(6)}));
    CHECK(v.decay_order_ok);
  }
  SECTION("a never-dying strong measure above a dying weak one fails") {
    const auto v = verify_hierarchy(synthetic({dies_at(1), dies_at(2), dies_at(3), dies_at(4), never_dies(), dies_at(6)}));
    CHECK_FALSE(v.decay_order_ok);
  }
  SECTION("revival of a stronger measure before a weaker one fails") {
    auto bell = dies_at(1);
    bell.events.push_back({3, Direction::Revival});
    auto ent = dies_at(2);
    ent.events.push_back({4, Direction::Revival});
    auto v = verify_hierarchy(synthetic({dies_at(0.5), bell, dies_at(1.2), dies_at(1.4), dies_at(1.6), ent}));
    CHECK(v.decay_order_ok);
    REQUIRE(v.revival_order_ok.has_value());
    CHECK_FALSE(*v.revival_order_ok);
    CHECK(v.classification == "both");

    ent.events[1].time = 2.5;
    auto s2 = dies_at(1.2), s3 = dies_at(1.4), tel = dies_at(1.6);
    for (auto* m : {&s2, &s3, &tel}) m->events.push_back({2.8, Direction::Revival});
    v = verify_hierarchy(synthetic({dies_at(0.5), bell, s2, s3, tel, ent}));
    CHECK(*v.revival_order_ok);
  }
  SECTION("initially dead measures die at t0") {
    auto dead = never_dies();
    dead.initially_alive = false;
    const auto v = verify_hierarchy(synthetic({dead, dies_at(1), dies_at(2), dies_at(3), dies_at(4), dies_at(5)}), 0.0);
    CHECK(v.decay_order_ok);
    const auto w = verify_hierarchy(synthetic({dies_at(1), dead, dies_at(2), dies_at(3), dies_at(4), dies_at(5)}), 0.0);
    CHECK_FALSE(w.decay_order_ok);  // Bell dead from the start, fidelity later
  }
}

TEST_CASE("speed limit turning points") {
  const DensityMatrix rho0 = testing_support::bell();
  CHECK(qsl_turning_points(testing_support::family(K::AmplitudeDamping, R::Markovian), rho0, 15.0, 1500).empty());
  CHECK(qsl_turning_points(testing_support::family(K::PhaseDamping, R::Markovian), rho0, 40.0, 2000).empty());
  CHECK(qsl_turning_points(testing_support::family(K::PhaseDamping, R::NonMarkovian), rho0, 40.0, 2000).empty());

  const auto tp = qsl_turning_points(testing_support::family(K::AmplitudeDamping, R::NonMarkovian), rho0, 40.0, 2000);
  REQUIRE_FALSE(tp.empty());
  const auto r = run(row("fig1_ad_nm").config);
  const double revival = first_event(r.crossings[Measure::Entanglement], Direction::Revival);
  CHECK(std::abs(tp.front() - revival) <= 40.0 / 2000);
}

TEST_CASE("crossing times are grid independent") {
  for (const char* id : {"fig1_ad_nm", "fig8_rtn_nm", "fig6_dp_nm"}) {
    RunConfig coarse = row(id).config, fine = coarse;
    coarse.sweep.measures.qsl = fine.sweep.measures.qsl = false;
    fine.sweep.n_points = 2 * coarse.sweep.n_points;
    const auto a = run(coarse), b = run(fine);
    for (std::size_t m = 0; m < 6; ++m) {
      const auto& ea = a.crossings.measures[m].events;
      const auto& eb = b.crossings.measures[m].events;
      REQUIRE(ea.size() == eb.size());
      for (std::size_t k = 0; k < ea.size(); ++k) {
        CHECK(ea[k].direction == eb[k].direction);
        CHECK_THAT(ea[k].time, WithinAbs(eb[k].time, 1e-7));
      }
    }
  }
}

TEST_CASE("deaths and revivals alternate") {
  for (const auto& sr : scenario_rows()) {
    const auto r = run(sr.config);
    for (const auto& m : r.crossings.measures) {
      Direction expect = m.initially_alive ? Direction::Death : Direction::Revival;
      double last = -1.0;
      for (const auto& e : m.events) {
        CHECK(e.direction == expect);
        CHECK(e.time >= last);
        last = e.time;
        expect = expect == Direction::Death ? Direction::Revival : Direction::Death;
      }
    }
  }
}

TEST_CASE("threaded sweeps are bitwise identical") {
  SweepConfig cfg = row("fig8_rtn_nm").config.sweep;
  const auto a = sweep(cfg);
  cfg.threads = 3;
  const auto b = sweep(cfg);
  REQUIRE(a.values.size() == b.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    CHECK(std::memcmp(&a.values[i], &b.values[i], sizeof(MeasureVector)) == 0);
  }
}

TEST_CASE("sweep failures name the grid time") {
  SweepConfig cfg = row("fig6_dp_nm").config.sweep;
  cfg.family->params.gamma_vec = {5.0, 5.0, 5.0};
  try {
    sweep(cfg);
    FAIL("expected a failure");
  } catch (const SweepFailure& e) {
    CHECK(e.time() > 0.0);
    CHECK_FALSE(e.invalid_input());
    CHECK(std::string(e.what()).find("grid time") != std::string::npos);
  }
}

TEST_CASE("revival expectations") {
  SECTION("Markovian-like phase damping on a fine grid") {
    RunConfig rc = row("fig4_pd").config;
    rc.sweep.n_points = 4000;
    CHECK(count(run(rc).crossings, Direction::Revival) == 0);
  }
  SECTION("Werner state") {
    auto revives = [](const char* id) {
      return !std::isinf(first_event(run(row(id).config).crossings[Measure::Entanglement], Direction::Revival));
    };
    CHECK(revives("fig12_werner_ad_nm"));
    CHECK(revives("fig14_werner_rtn_nm"));
    CHECK_FALSE(revives("fig11_werner_ad_m"));
  }
}

TEST_CASE("sweep configuration is validated") {
  SweepConfig cfg = row("fig1_ad_nm").config.sweep;
  cfg.n_points = 1;
  CHECK_THROWS_AS(sweep(cfg), InvalidArgument);
  cfg = row("fig1_ad_nm").config.sweep;
  cfg.t_max = -1.0;
  CHECK_THROWS_AS(sweep(cfg), InvalidArgument);
  cfg = werner_scan_config().sweep;
  cfg.t_max = 1.5;
  CHECK_THROWS_AS(sweep(cfg), InvalidArgument);
  cfg = werner_scan_config().sweep;
  cfg.initial_state = PureStateSpec{1.0, 0.0};
  CHECK_THROWS_AS(sweep(cfg), InvalidArgument);
}
