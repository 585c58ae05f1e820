#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace qcorr;
using Catch::Matchers::WithinAbs;

namespace {
void check_t_diagonal(const PauliDecomposition& d, double a, double b, double c, double tol) {
  const std::array<double, 3> diag{a, b, c};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK_THAT(d.r[i], WithinAbs(0.0, tol));
    CHECK_THAT(d.s[i], WithinAbs(0.0, tol));
    for (std::size_t j = 0; j < 3; ++j) CHECK_THAT(d.t[i][j], WithinAbs(i == j ? diag[i] : 0.0, tol));
  }
}
}  // namespace

TEST_CASE("make_pure") {
  const DensityMatrix bell = make_pure({1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)});
  CHECK_THAT(bell.purity(), WithinAbs(1.0, 1e-14));
  CHECK(testing_support::max_abs_diff(bell.matrix(), projector(bell_vector(BellState::PhiPlus))) < 1e-15);

  const DensityMatrix product = make_pure({1.0, 0.0});
  CHECK(product.matrix() == Mat4::diagonal({1.0, 0.0, 0.0, 0.0}));

  CHECK_THAT(concurrence(make_pure({0.6, 0.8})), WithinAbs(0.96, 1e-12));
  CHECK_THAT(concurrence(make_pure({cplx(0.0, 0.6), cplx(0.8, 0.0)})), WithinAbs(0.96, 1e-12));

  CHECK_THROWS_AS(make_pure({1.0, 0.1}), InvalidArgument);
  CHECK_NOTHROW(make_pure({1.0 + 1e-11, 0.0}));
}

TEST_CASE("make_werner") {
  CHECK(testing_support::max_abs_diff(make_werner({1.0, BellState::PhiPlus}).matrix(),
                                      projector(bell_vector(BellState::PhiPlus))) < 1e-15);
  CHECK(testing_support::max_abs_diff(make_werner({0.0, BellState::PsiMinus}).matrix(), 0.25 * Mat4::identity()) <
        1e-15);

  for (double p : {0.0, 0.2, 0.9, 1.0}) {
    const auto e = hermitian_eig(make_werner({p, BellState::PsiPlus}).matrix());
    CHECK_THAT(e.values[0], WithinAbs((1.0 + 3.0 * p) / 4.0, 1e-14));
    for (std::size_t i = 1; i < 4; ++i) CHECK_THAT(e.values[i], WithinAbs((1.0 - p) / 4.0, 1e-14));
  }
  CHECK_THROWS_AS(make_werner({1.1, BellState::PhiPlus}), InvalidArgument);
  CHECK_THROWS_AS(make_werner({-0.1, BellState::PhiPlus}), InvalidArgument);
}

TEST_CASE("every Bell state is a valid pure state") {
  for (auto b : {BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus}) {
    const auto rho = DensityMatrix::from_matrix(projector(bell_vector(b)));
    CHECK_THAT(rho.purity(), WithinAbs(1.0, 1e-14));
    CHECK_THAT(concurrence(rho), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("DensityMatrix validation") {
  CHECK_THROWS_AS(DensityMatrix::from_matrix(0.5 * Mat4::identity()), NotAState);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(Mat4::diagonal({1.2, -0.2, 0.0, 0.0})), NotAState);
  Mat4 skew = 0.25 * Mat4::identity();
  skew(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(skew), NotAState);
  Mat4 nan = 0.25 * Mat4::identity();
  nan(2, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(DensityMatrix::from_matrix(nan), NotAState);
  CHECK_NOTHROW(DensityMatrix::from_matrix(Mat4::diagonal({1.0 + 1e-11, -1e-11, 0.0, 0.0})));
}

TEST_CASE("pauli_decompose") {
  check_t_diagonal(pauli_decompose(testing_support::bell()), 1.0, -1.0, 1.0, 1e-15);
  check_t_diagonal(pauli_decompose(maximally_mixed()), 0.0, 0.0, 0.0, 1e-15);
  for (double p : {0.1, 0.5, 0.9}) check_t_diagonal(pauli_decompose(make_werner({p, BellState::PhiPlus})), p, -p, p, 1e-15);

  // Bloch vectors of |00>
  const auto d = pauli_decompose(make_pure({1.0, 0.0}));
  CHECK_THAT(d.r[2], WithinAbs(1.0, 1e-15));
  CHECK_THAT(d.s[2], WithinAbs(1.0, 1e-15));
  CHECK_THAT(d.t[2][2], WithinAbs(1.0, 1e-15));
}

TEST_CASE("Bloch component sums vanish on Bell states") {
  for (auto b : {BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus}) {
    const auto sums = bloch_component_sums(pauli_decompose(DensityMatrix::from_matrix(projector(bell_vector(b)))));
    CHECK_THAT(sums[0], WithinAbs(0.0, 1e-15));
    CHECK_THAT(sums[1], WithinAbs(0.0, 1e-15));
  }
}

TEST_CASE("pauli_reconstruct") {
  CHECK(testing_support::max_abs_diff(pauli_reconstruct({}).matrix(), 0.25 * Mat4::identity()) < 1e-15);

  PauliDecomposition d;
  d.t[0][0] = 1.0;
  d.t[1][1] = -1.0;
  d.t[2][2] = 1.0;
  CHECK(testing_support::max_abs_diff(pauli_reconstruct(d).matrix(), testing_support::bell().matrix()) < 1e-15);

  PauliDecomposition bad;
  bad.t[2][2] = -3.0;
  CHECK_THROWS_AS(pauli_reconstruct(bad), NotAState);

  sampling::Rng rng(42);
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix rho = sampling::random_mixed(rng);
    const auto dec = pauli_decompose(rho);
    CHECK(hs_norm(pauli_reconstruct(dec).matrix() - rho.matrix()) < 1e-12);
    double rn = 0.0, sn = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      rn += dec.r[k] * dec.r[k];
      sn += dec.s[k] * dec.s[k];
      for (std::size_t l = 0; l < 3; ++l) CHECK(std::abs(dec.t[k][l]) <= 1.0 + 1e-10);
    }
    CHECK(std::sqrt(rn) <= 1.0 + 1e-10);
    CHECK(std::sqrt(sn) <= 1.0 + 1e-10);
  }
}
