// Evolve a Bell state under non-Markovian amplitude damping, print a few
// measures, then locate the threshold crossings.

#include <cstdio>

#include "qcorr/qcorr.hpp"

int main() {
  using namespace qcorr;

  ChannelFamily ad;
  ad.kind = ChannelKind::AmplitudeDamping;
  ad.regime = Regime::NonMarkovian;
  ad.params.gamma = 1.0;
  ad.params.Gamma = 0.1;

  const DensityMatrix bell = make_pure({1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2});
  for (double t : {0.0, 2.0, 8.0, 12.0}) {
    const MeasureVector m = evaluate_measures(evolve(ad, t, bell, NoiseSides::First));
    std::printf("t=%5.1f  F=%.4f  B=%.4f  S2=%.4f  S3=%.4f  C=%.4f\n", t, m.fidelity, m.bell, m.s2, m.s3,
                m.concurrence);
  }

  SweepConfig cfg;
  cfg.family = ad;
  cfg.t_max = 40.0;
  cfg.measures.qsl = false;
  const Trajectory traj = sweep(cfg);
  const CrossingReport report = find_crossings(traj, Thresholds{}, cfg);
  for (Measure m : kChainOrder) {
    std::printf("%-14s", to_string(m).c_str());
    for (const auto& e : report[m].events) std::printf(" %s@%.4f", to_string(e.direction).c_str(), e.time);
    std::printf("\n");
  }
  std::printf("verdict: %s\n", verify_hierarchy(report).classification.c_str());
}
