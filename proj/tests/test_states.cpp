#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "qrealism/density.hpp"
#include "qrealism/states.hpp"

using namespace qrealism;
using testutil::max_abs_diff;

namespace {

CMatrix<4> projector(const CVector<4>& v) { return v * v.adjoint(); }

}  // namespace

TEST_CASE("Bell states") {
  SECTION("phi- is (|00> - |11>)/sqrt(2)") {
    CVector<4> v = CVector<4>::Zero();
    v(0) = 1.0 / std::sqrt(2.0);
    v(3) = -1.0 / std::sqrt(2.0);
    REQUIRE(max_abs_diff<4>(bell_state(BellLabel::PhiMinus).matrix(), projector(v)) < 1e-15);
  }
  SECTION("psi- is (|01> - |10>)/sqrt(2)") {
    CVector<4> v = CVector<4>::Zero();
    v(1) = 1.0 / std::sqrt(2.0);
    v(2) = -1.0 / std::sqrt(2.0);
    REQUIRE(max_abs_diff<4>(bell_state(BellLabel::PsiMinus).matrix(), projector(v)) < 1e-15);
  }
  SECTION("every label is pure, maximally entangled, and mutually orthogonal") {
    const BellLabel labels[] = {BellLabel::PhiMinus, BellLabel::PhiPlus, BellLabel::PsiMinus,
                                BellLabel::PsiPlus};
    for (BellLabel a : labels) {
      const DensityMatrix<4> rho = bell_state(a);
      REQUIRE(von_neumann_entropy(rho) == Catch::Approx(0.0).margin(1e-12));
      REQUIRE(max_abs_diff<2>(partial_trace(rho.matrix(), Subsystem::A),
                              CMatrix<2>::Identity() / 2.0) < 1e-14);
      REQUIRE(max_abs_diff<2>(partial_trace(rho.matrix(), Subsystem::B),
                              CMatrix<2>::Identity() / 2.0) < 1e-14);
      REQUIRE(mutual_information(rho) == Catch::Approx(2.0 * std::log(2.0)).margin(1e-10));
      for (BellLabel b : labels) {
        const double overlap = (rho.matrix() * bell_state(b).matrix()).trace().real();
        REQUIRE(overlap == Catch::Approx(a == b ? 1.0 : 0.0).margin(1e-12));
      }
    }
  }
  SECTION("label strings round-trip") {
    for (BellLabel l : {BellLabel::PhiMinus, BellLabel::PhiPlus, BellLabel::PsiMinus,
                        BellLabel::PsiPlus})
      REQUIRE(bell_label_from_string(to_string(l)) == l);
    REQUIRE_THROWS_AS(bell_label_from_string("sigma+"), std::invalid_argument);
  }
}

TEST_CASE("Werner states") {
  SECTION("mu=1 is the Bell state, mu=0 is maximally mixed") {
    REQUIRE(max_abs_diff<4>(werner_state(1.0).matrix(), bell_state(BellLabel::PhiMinus).matrix()) <
            1e-15);
    REQUIRE(max_abs_diff<4>(werner_state(0.0).matrix(), CMatrix<4>::Identity() / 4.0) < 1e-15);
  }
  SECTION("mu=1/2 spectrum is {5/8, 1/8, 1/8, 1/8}") {
    const RVector<4> lam = eigenvalues_hermitian<4>(werner_state(0.5).matrix());
    REQUIRE(lam(0) == Catch::Approx(0.625).margin(1e-13));
    for (int i = 1; i < 4; ++i) REQUIRE(lam(i) == Catch::Approx(0.125).margin(1e-13));
  }
  SECTION("general spectrum is {(1+3mu)/4, (1-mu)/4 x3} with I/2 marginals") {
    for (double mu : {0.1, 0.4, 0.9}) {
      const RVector<4> lam = eigenvalues_hermitian<4>(werner_state(mu).matrix());
      REQUIRE(lam(0) == Catch::Approx((1.0 + 3.0 * mu) / 4.0).margin(1e-13));
      REQUIRE(lam(3) == Catch::Approx((1.0 - mu) / 4.0).margin(1e-13));
      REQUIRE(max_abs_diff<2>(partial_trace(werner_state(mu).matrix(), Subsystem::A),
                              CMatrix<2>::Identity() / 2.0) < 1e-14);
    }
  }
  SECTION("parameter outside [0,1] is rejected") {
    REQUIRE_THROWS_AS(werner_state(-0.01), std::invalid_argument);
    REQUIRE_THROWS_AS(werner_state(1.01), std::invalid_argument);
  }
  SECTION("invariant under the twirl U (x) sigma_z conj(U) sigma_z") {
    // The phi- projector is stabilized by U (x) W with W = sigma_z conj(U)
    // sigma_z, which lifts to an exact symmetry of every Werner state.
    auto engine = testutil::rng(41);
    for (int trial = 0; trial < 50; ++trial) {
      const CMatrix<2> u = testutil::random_unitary2(engine);
      const CMatrix<2> w = sigma_z() * u.conjugate() * sigma_z();
      const CMatrix<4> v = tensor(u, w);
      for (double mu : {0.3, 0.8}) {
        const CMatrix<4> rho = werner_state(mu).matrix();
        REQUIRE(max_abs_diff<4>(v * rho * v.adjoint(), rho) < 1e-10);
      }
    }
  }
}

TEST_CASE("observable bases and projectors") {
  SECTION("computational basis") {
    const auto [plus, minus] = observable_projectors(ObservableBasis::computational());
    CMatrix<2> p0 = CMatrix<2>::Zero(), p1 = CMatrix<2>::Zero();
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    REQUIRE(max_abs_diff<2>(plus, p0) < 1e-15);
    REQUIRE(max_abs_diff<2>(minus, p1) < 1e-15);
  }
  SECTION("theta=pi/2, phi=0 gives the sigma_x eigenprojectors") {
    const auto [plus, minus] = observable_projectors(ObservableBasis(std::numbers::pi / 2, 0.0));
    CMatrix<2> expected_plus;
    expected_plus << 0.5, 0.5, 0.5, 0.5;
    CMatrix<2> expected_minus;
    expected_minus << 0.5, -0.5, -0.5, 0.5;
    REQUIRE(max_abs_diff<2>(plus, expected_plus) < 1e-14);
    REQUIRE(max_abs_diff<2>(minus, expected_minus) < 1e-14);
  }
  SECTION("theta=pi/2, phi=pi/2 gives the sigma_y eigenprojectors") {
    const auto [plus, minus] =
        observable_projectors(ObservableBasis(std::numbers::pi / 2, std::numbers::pi / 2));
    REQUIRE(max_abs_diff<2>(plus - minus, sigma_y()) < 1e-14);
  }
  SECTION("projector algebra on random bases") {
    auto engine = testutil::rng(42);
    for (int trial = 0; trial < 100; ++trial) {
      const auto [plus, minus] = observable_projectors(testutil::random_basis(engine));
      REQUIRE(max_abs_diff<2>(plus + minus, CMatrix<2>::Identity()) < 1e-12);
      REQUIRE(max_abs_diff<2>(plus * plus, plus) < 1e-12);
      REQUIRE(max_abs_diff<2>(minus * minus, minus) < 1e-12);
      REQUIRE(max_abs_diff<2>(plus * minus, CMatrix<2>::Zero()) < 1e-12);
    }
  }
  SECTION("antipodal parameters swap the projectors") {
    auto engine = testutil::rng(43);
    for (int trial = 0; trial < 50; ++trial) {
      const ObservableBasis basis = testutil::random_basis(engine);
      const ObservableBasis antipode(std::numbers::pi - basis.theta(),
                                     basis.phi() + std::numbers::pi);
      const auto [plus, minus] = observable_projectors(basis);
      const auto [aplus, aminus] = observable_projectors(antipode);
      REQUIRE(max_abs_diff<2>(aplus, minus) < 1e-12);
      REQUIRE(max_abs_diff<2>(aminus, plus) < 1e-12);
    }
  }
  SECTION("pauli factory bases match their named projectors") {
    const auto [xp, xm] = observable_projectors(ObservableBasis::pauli_x());
    REQUIRE(max_abs_diff<2>(xp - xm, sigma_x()) < 1e-14);
    const auto [yp, ym] = observable_projectors(ObservableBasis::pauli_y());
    REQUIRE(max_abs_diff<2>(yp - ym, sigma_y()) < 1e-14);
  }
}

TEST_CASE("state specifiers") {
  SECTION("bell and werner specs parse") {
    REQUIRE(max_abs_diff<4>(parse_state_spec("bell:phi-").matrix(),
                            bell_state(BellLabel::PhiMinus).matrix()) == 0.0);
    REQUIRE(max_abs_diff<4>(parse_state_spec("werner:0.75").matrix(),
                            werner_state(0.75).matrix()) == 0.0);
  }
  SECTION("unknown specs are rejected") {
    REQUIRE_THROWS_AS(parse_state_spec("bell:phi"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_state_spec("werner:2"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_state_spec("ghz:0"), std::invalid_argument);
  }
  SECTION("is_state_spec distinguishes specs from paths") {
    REQUIRE(is_state_spec("bell:psi+"));
    REQUIRE(is_state_spec("werner:0.1"));
    REQUIRE_FALSE(is_state_spec("states/rho.json"));
  }
}
