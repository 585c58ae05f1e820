#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace qcorr;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using testing_support::all_families;
using testing_support::family;
using K = ChannelKind;
using R = Regime;

TEST_CASE("memory kernels start at one") {
  for (const auto& f : all_families())
    for (double k : memory_kernel(f, 0.0)) CHECK(k == 1.0);
}

TEST_CASE("non-Markovian amplitude damping kernel matches its closed form") {
  const auto f = family(K::AmplitudeDamping, R::NonMarkovian);
  for (double t : {0.3, 1.0, 7.5, 20.0}) {
    const double d = std::sqrt(2.0 * 1.0 * 0.1 - 0.01);
    const double g = std::cos(d * t / 2.0) + (0.1 / d) * std::sin(d * t / 2.0);
    CHECK_THAT(memory_kernel(f, t)[0], WithinAbs(std::exp(-0.1 * t) * g * g, 1e-14));
  }
}

TEST_CASE("Markovian and dephasing kernels match their closed forms") {
  for (double t : {0.0, 0.4, 3.0, 25.0}) {
    CHECK_THAT(memory_kernel(family(K::AmplitudeDamping, R::Markovian), t)[0], WithinRel(std::exp(-t), 1e-14));
    CHECK_THAT(memory_kernel(family(K::PhaseDamping, R::Markovian), t)[0], WithinRel(std::exp(-t / 2.0), 1e-14));
    const double pd = std::exp(-0.5 * (t + (std::exp(-0.1 * t) - 1.0) / 0.1));
    CHECK_THAT(memory_kernel(family(K::PhaseDamping, R::NonMarkovian), t)[0], WithinRel(pd, 1e-13));
  }
}

TEST_CASE("random telegraph kernel in both regimes") {
  // a/gamma = 40: underdamped, frequency gamma sqrt((2a/gamma)^2 - 1)
  const auto nm = family(K::RandomTelegraph, R::NonMarkovian);
  const double w = std::sqrt(80.0 * 80.0 - 1.0);
  for (double t : {0.01, 0.5, 2.0})
    CHECK_THAT(memory_kernel(nm, t)[0], WithinAbs(std::exp(-t) * (std::cos(w * t) + std::sin(w * t) / w), 1e-13));

  // a/gamma = 0.25: overdamped, hyperbolic continuation
  const auto m = family(K::RandomTelegraph, R::Markovian);
  const double v = std::sqrt(1.0 - 0.25);
  for (double t : {0.01, 0.5, 2.0, 9.0})
    CHECK_THAT(memory_kernel(m, t)[0], WithinAbs(std::exp(-t) * (std::cosh(v * t) + std::sinh(v * t) / v), 1e-13));
}

TEST_CASE("kernel shapes") {
  auto samples = [](const ChannelFamily& f, double t_max, int n) {
    std::vector<double> out;
    for (double t : uniform_grid(t_max, n)) out.push_back(memory_kernel(f, t)[0]);
    return out;
  };
  auto monotone_decreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] > v[i - 1]) return false;
    return true;
  };
  CHECK(monotone_decreasing(samples(family(K::AmplitudeDamping, R::Markovian), 40.0, 2000)));
  CHECK_FALSE(monotone_decreasing(samples(family(K::AmplitudeDamping, R::NonMarkovian), 40.0, 2000)));
  CHECK(monotone_decreasing(samples(family(K::PhaseDamping, R::NonMarkovian), 40.0, 2000)));

  const auto rtn_nm = samples(family(K::RandomTelegraph, R::NonMarkovian), 5.0, 2000);
  CHECK(*std::min_element(rtn_nm.begin(), rtn_nm.end()) < 0.0);
  const auto rtn_m = samples(family(K::RandomTelegraph, R::Markovian), 5.0, 2000);
  CHECK(monotone_decreasing(rtn_m));
  CHECK(rtn_m.back() > 0.0);
}

TEST_CASE("kernel derivatives vanish at t = 0 for the oscillator kernels") {
  CHECK(kernel_jets(family(K::AmplitudeDamping, R::NonMarkovian), 0.0)[0].d1 == 0.0);
  CHECK(kernel_jets(family(K::RandomTelegraph, R::NonMarkovian), 0.0)[0].d1 == 0.0);
  const auto e = kraus_derivative_at(family(K::AmplitudeDamping, R::NonMarkovian), 0.0);
  CHECK(hs_norm(e[0]) == 0.0);
}

TEST_CASE("negative time is rejected") {
  for (const auto& f : all_families()) {
    CHECK_THROWS_AS(kraus_at(f, -1e-3), InvalidArgument);
    CHECK_THROWS_AS(memory_kernel(f, -1.0), InvalidArgument);
  }
}

TEST_CASE("completeness on a dense grid") {
  for (const auto& f : all_families())
    for (double t : uniform_grid(10.0, 1000)) CHECK(completeness_defect(kraus_at(f, t)) <= 1e-10);
}

TEST_CASE("every family is the identity channel at t = 0") {
  sampling::Rng rng(3);
  for (const auto& f : all_families())
    for (int i = 0; i < 10; ++i) {
      const DensityMatrix rho = sampling::random_mixed(rng);
      for (auto sides : {NoiseSides::First, NoiseSides::Both})
        CHECK(testing_support::max_abs_diff(evolve(f, 0.0, rho, sides).matrix(), rho.matrix()) < 1e-12);
    }
}

TEST_CASE("Markovian amplitude damping approaches full decay") {
  const auto k = kraus_at(family(K::AmplitudeDamping, R::Markovian), 60.0).operators;
  CHECK(hs_norm(k[0] - Mat2::diagonal({1.0, 0.0})) < 1e-12);
  CHECK(hs_norm(k[1] - Mat2::from_rows({0.0, 1.0, 0.0, 0.0})) < 1e-12);
  const DensityMatrix out = apply_one_sided(kraus_at(family(K::AmplitudeDamping, R::Markovian), 60.0),
                                            make_pure({0.0, 1.0}));
  CHECK_THAT(out(1, 1).real(), WithinAbs(1.0, 1e-12));  // |11> -> |01>
}

TEST_CASE("depolarizing weights at t = 0") {
  const auto k = kraus_at(family(K::Depolarizing, R::NonMarkovian), 0.0).operators;
  REQUIRE(k.size() == 4);
  CHECK(hs_norm(k[0] - Mat2::identity()) < 1e-15);
  for (std::size_t i = 1; i < 4; ++i) CHECK(hs_norm(k[i]) < 1e-15);
}

TEST_CASE("depolarizing weights that go negative raise a CP violation") {
  ChannelFamily f;
  f.kind = K::Depolarizing;
  f.regime = R::Markovian;
  f.params.gamma_vec = {0.01, 1.0, 1.0};
  f.params.Gamma_vec = {1.0, 1000.0, 1000.0};
  CHECK_NOTHROW(f.validate());
  CHECK_NOTHROW(kraus_at(f, 0.0));
  CHECK_THROWS_AS(kraus_at(f, 1.0), CpViolation);
}

TEST_CASE("global line width switch") {
  auto f = family(K::Depolarizing, R::NonMarkovian);
  f.params.dp_line_width = DepolarizingLineWidth::Global;
  f.params.Gamma = 1.0;
  const auto a = memory_kernel(f, 2.0), b = memory_kernel(family(K::Depolarizing, R::NonMarkovian), 2.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK_THAT(a[i], WithinAbs(b[i], 1e-15));
  f.params.Gamma = 2.0;
  CHECK(memory_kernel(f, 2.0)[0] != b[0]);
}

TEST_CASE("literal phase damping operators break completeness") {
  auto f = family(K::PhaseDamping, R::NonMarkovian);
  f.params.literal_pd_sqrt = true;
  CHECK_NOTHROW(kraus_at(f, 0.0));
  CHECK_THROWS_AS(kraus_at(f, 5.0), NumericalFailure);
}

TEST_CASE("parameter validation") {
  auto ad = family(K::AmplitudeDamping, R::NonMarkovian);
  ad.params.Gamma = 2.5;  // 2 gamma Gamma - Gamma^2 < 0
  CHECK_THROWS_AS(ad.validate(), InvalidArgument);
  ad.params.Gamma = -0.1;
  CHECK_THROWS_AS(ad.validate(), InvalidArgument);

  auto rtn = family(K::RandomTelegraph, R::Markovian);
  rtn.params.a = 2.0;
  CHECK_THROWS_AS(rtn.validate(), InvalidArgument);
  rtn.regime = R::NonMarkovian;
  CHECK_NOTHROW(rtn.validate());
  rtn.params.a = 0.3;
  CHECK_THROWS_AS(rtn.validate(), InvalidArgument);

  auto dp = family(K::Depolarizing, R::NonMarkovian);
  dp.params.gamma_vec[1] = 0.0;
  CHECK_THROWS_AS(dp.validate(), InvalidArgument);
}

TEST_CASE("analytic Kraus derivatives match central differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> time(0.05, 5.0);
  for (const auto& f : all_families()) {
    const double h = 1e-6 / f.params.gamma;
    int checked = 0;
    for (int i = 0; i < 40; ++i) {
      const double t = time(rng);
      const auto a = kraus_derivative_at(f, t);
      const auto up = kraus_at(f, t + h).operators, dn = kraus_at(f, t - h).operators;
      for (std::size_t j = 0; j < a.size(); ++j)
        for (std::size_t r = 0; r < 2; ++r)
          for (std::size_t c = 0; c < 2; ++c) {
            const double fd = ((up[j](r, c) - dn[j](r, c)) / (2.0 * h)).real();
            const double an = a[j](r, c).real();
            if (std::abs(an) <= 1e-3) continue;
            CHECK_THAT(fd, WithinRel(an, 1e-6));
            ++checked;
          }
    }
    CHECK(checked > 40);
  }
}

TEST_CASE("forward difference at t = 0") {
  for (const auto& f : all_families()) {
    std::vector<Mat2> a;
    try {
      a = kraus_derivative_at(f, 0.0);
    } catch (const DerivativeSingularity&) {
      continue;  // sqrt branch point with a non-zero rate: no derivative exists
    }
    const double h = 1e-8 / std::max(f.params.gamma, 2.0 * f.params.a);
    const auto up = kraus_at(f, h).operators, at = kraus_at(f, 0.0).operators;
    for (std::size_t j = 0; j < a.size(); ++j)
      CHECK(hs_norm((up[j] - at[j]) * (1.0 / h) - a[j]) < 1e-4 * std::max(1.0, hs_norm(a[j])));
  }
  CHECK_THROWS_AS(kraus_derivative_at(family(K::AmplitudeDamping, R::Markovian), 0.0), DerivativeSingularity);
}

TEST_CASE("amplitude damping on a Bell state") {
  const auto f = family(K::AmplitudeDamping, R::Markovian);
  for (double t : {0.2, 1.0, 3.0}) {
    const double p = std::exp(-t);
    const auto d = pauli_decompose(evolve(f, t, testing_support::bell(), NoiseSides::First));
    CHECK_THAT(d.t[0][0], WithinAbs(std::sqrt(p), 1e-14));
    CHECK_THAT(d.t[1][1], WithinAbs(-std::sqrt(p), 1e-14));
    CHECK_THAT(d.t[2][2], WithinAbs(p, 1e-14));
  }
}

TEST_CASE("one- and two-sided application") {
  sampling::Rng rng(8);
  const KrausSet identity{{Mat2::identity()}, 0.0};
  for (const auto& f : all_families()) {
    const KrausSet k = kraus_at(f, 1.3);
    for (int i = 0; i < 20; ++i) {
      const DensityMatrix rho = sampling::random_mixed(rng);
      CHECK(testing_support::max_abs_diff(apply_one_sided(identity, rho).matrix(), rho.matrix()) < 1e-15);
      CHECK(testing_support::max_abs_diff(apply_two_sided(identity, identity, rho).matrix(), rho.matrix()) < 1e-15);
      CHECK(testing_support::max_abs_diff(apply_two_sided(k, identity, rho).matrix(),
                                          apply_one_sided(k, rho).matrix()) < 1e-14);
      const DensityMatrix both = apply_two_sided(k, k, rho);
      CHECK_THAT(both.matrix().trace().real(), WithinAbs(1.0, 1e-12));
      CHECK(hermitian_eig(both.matrix()).values[3] >= -1e-10);
    }
  }
}
