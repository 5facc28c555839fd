#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

#include "helpers.hpp"
#include "qrealism/channels.hpp"
#include "qrealism/io.hpp"
#include "qrealism/quantifiers.hpp"
#include "qrealism/tomography.hpp"

using namespace qrealism;
using testutil::max_abs_diff;

TEST_CASE("standard measurement settings") {
  const std::vector<TomographySetting> settings = standard_settings();
  SECTION("36 informationally complete settings") {
    REQUIRE(settings.size() == 36);
    REQUIRE(settings_rank(settings) == 16);
  }
  SECTION("first setting projects onto |00>") {
    REQUIRE(settings[0].basis_a == "H");
    REQUIRE(settings[0].basis_b == "H");
    CMatrix<4> p00 = CMatrix<4>::Zero();
    p00(0, 0) = 1.0;
    REQUIRE(max_abs_diff<4>(settings[0].joint, p00) < 1e-15);
  }
  SECTION("every projector is a Hermitian rank-1 idempotent") {
    for (const TomographySetting& s : settings) {
      REQUIRE(is_hermitian<4>(s.joint));
      REQUIRE(max_abs_diff<4>(s.joint * s.joint, s.joint) < 1e-12);
      REQUIRE(s.joint.trace().real() == Catch::Approx(1.0).margin(1e-12));
      REQUIRE(max_abs_diff<4>(s.joint, tensor(s.projector_a, s.projector_b)) == 0.0);
    }
  }
  SECTION("the set resolves nine times the identity") {
    CMatrix<4> sum = CMatrix<4>::Zero();
    for (const TomographySetting& s : settings) sum += s.joint;
    REQUIRE(max_abs_diff<4>(sum, 9.0 * CMatrix<4>::Identity()) < 1e-12);
  }
  SECTION("unknown polarization labels are rejected") {
    REQUIRE_THROWS_AS(make_setting("H", "Q"), std::invalid_argument);
  }
}

TEST_CASE("count simulation") {
  const std::vector<TomographySetting> settings = standard_settings();
  SECTION("frequencies converge to the Born probabilities") {
    const DensityMatrix<4> rho = werner_state(0.5);
    const CountsTable table = simulate_counts(rho, settings, 16000.0, 625.0, 8001);
    const std::vector<double> p = born_probabilities(rho.matrix(), settings);
    double total = 0.0;
    for (double n : table.counts) total += n;
    for (std::size_t i = 0; i < settings.size(); ++i) {
      if (p[i] < 0.01) continue;
      const double freq = table.counts[i] / total;
      REQUIRE(std::abs(freq - p[i] / 9.0) / (p[i] / 9.0) < 0.01);
    }
  }
  SECTION("orthogonal settings never click") {
    CMatrix<4> p00 = CMatrix<4>::Zero();
    p00(0, 0) = 1.0;
    const auto rho = DensityMatrix<4>::from_matrix(p00);
    const CountsTable table = simulate_counts(rho, settings, 16.0, 625.0, 8002);
    for (std::size_t i = 0; i < settings.size(); ++i) {
      if (settings[i].basis_a == "V" && settings[i].basis_b == "V")
        REQUIRE(table.counts[i] == 0.0);
      if (settings[i].basis_a == "H" && settings[i].basis_b == "H")
        REQUIRE(table.counts[i] > 0.0);
    }
  }
  SECTION("seeded streams are reproducible and independent") {
    const DensityMatrix<4> rho = werner_state(0.8);
    const CountsTable a = simulate_counts(rho, settings, 16.0, 625.0, 8003);
    const CountsTable b = simulate_counts(rho, settings, 16.0, 625.0, 8003);
    const CountsTable c = simulate_counts(rho, settings, 16.0, 625.0, 8004);
    REQUIRE(a.counts == b.counts);
    REQUIRE(a.counts != c.counts);
  }
  SECTION("invalid acquisition parameters are rejected") {
    REQUIRE_THROWS_AS(simulate_counts(werner_state(0.5), settings, 0.0, 625.0, 1),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(expected_counts(werner_state(0.5), settings, 16.0, -1.0),
                      std::invalid_argument);
  }
}

TEST_CASE("linear inversion") {
  const std::vector<TomographySetting> settings = standard_settings();
  SECTION("exact counts reproduce the state") {
    auto engine = testutil::rng(90);
    for (int trial = 0; trial < 10; ++trial) {
      const DensityMatrix<4> rho = testutil::random_density<4>(engine);
      const CountsTable table = expected_counts(rho, settings, 16.0, 625.0);
      REQUIRE(max_abs_diff<4>(linear_inversion(table), rho.matrix()) < 1e-9);
    }
    const CountsTable mixed = expected_counts(werner_state(0.0), settings, 16.0, 625.0);
    REQUIRE(max_abs_diff<4>(linear_inversion(mixed), CMatrix<4>::Identity() / 4.0) < 1e-12);
  }
  SECTION("noisy counts land near the state after projection") {
    const DensityMatrix<4> rho = werner_state(0.5);
    int good = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const CountsTable table =
          simulate_counts(rho, settings, 16.0, 625.0, 9000 + static_cast<std::uint64_t>(trial));
      const DensityMatrix<4> hat = project_to_physical(linear_inversion(table));
      if (fidelity(hat, rho) >= 0.98) ++good;
    }
    REQUIRE(good >= 190);
  }
  SECTION("zero or incomplete data is rejected") {
    CountsTable zeros;
    zeros.settings = settings;
    zeros.counts.assign(36, 0.0);
    zeros.exposure_s = 16.0;
    REQUIRE_THROWS_AS(linear_inversion(zeros), std::invalid_argument);

    std::vector<TomographySetting> truncated(settings.begin(), settings.begin() + 15);
    REQUIRE(settings_rank(truncated) < 16);
    CountsTable small;
    small.settings = truncated;
    small.counts.assign(15, 100.0);
    small.exposure_s = 16.0;
    REQUIRE_THROWS_AS(linear_inversion(small), std::invalid_argument);
  }
}

TEST_CASE("projection to the physical set") {
  SECTION("valid states are fixed points") {
    auto engine = testutil::rng(91);
    for (int trial = 0; trial < 10; ++trial) {
      const DensityMatrix<4> rho = testutil::random_density<4>(engine);
      REQUIRE(max_abs_diff<4>(project_to_physical(rho.matrix()).matrix(), rho.matrix()) < 1e-12);
    }
  }
  SECTION("a negative eigenvalue is clipped onto the simplex") {
    CMatrix<4> x = CMatrix<4>::Zero();
    x(0, 0) = 1.1;
    x(1, 1) = -0.1;
    const DensityMatrix<4> p = project_to_physical(x);
    REQUIRE(p.matrix()(0, 0).real() == Catch::Approx(1.0).margin(1e-12));
    for (int k = 1; k < 4; ++k)
      REQUIRE(std::abs(p.matrix()(k, k)) < 1e-12);
  }
  SECTION("output is always a valid state") {
    auto engine = testutil::rng(92);
    for (int trial = 0; trial < 20; ++trial) {
      CMatrix<4> noise = CMatrix<4>::Zero();
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) noise(r, c) = testutil::random_gaussian(engine);
      const CMatrix<4> x =
          testutil::random_density<4>(engine).matrix() + 0.2 * hermitize<4>(noise);
      const DensityMatrix<4> p = project_to_physical(hermitize<4>(x / x.trace().real()));
      REQUIRE_NOTHROW(DensityMatrix<4>::from_matrix(p.matrix()));
    }
  }
  SECTION("projection never moves away from any physical state") {
    auto engine = testutil::rng(93);
    for (int trial = 0; trial < 20; ++trial) {
      CMatrix<4> noise = CMatrix<4>::Zero();
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) noise(r, c) = testutil::random_gaussian(engine);
      CMatrix<4> x = testutil::random_density<4>(engine).matrix() + 0.3 * hermitize<4>(noise);
      x = hermitize<4>(x / x.trace().real());
      const CMatrix<4> projected = project_to_physical(x).matrix();
      for (int k = 0; k < 3; ++k) {
        const DensityMatrix<4> sigma = testutil::random_density<4>(engine);
        REQUIRE(frobenius_distance<4>(projected, sigma.matrix()) <=
                frobenius_distance<4>(x, sigma.matrix()) + 1e-12);
      }
    }
  }
  SECTION("non-Hermitian input is rejected") {
    CMatrix<4> x = CMatrix<4>::Identity() / 4.0;
    x(0, 1) = complexd(0.1, 0.0);  // no conjugate partner
    REQUIRE_THROWS_AS(project_to_physical(x), std::invalid_argument);
  }
}

TEST_CASE("maximum-likelihood reconstruction") {
  const std::vector<TomographySetting> settings = standard_settings();
  SECTION("exact counts are a fixed point: reconstruction is lossless") {
    const ObservableBasis comp = ObservableBasis::computational();
    for (double mu : {0.0, 0.5, 1.0}) {
      for (double eps : {0.0, 0.5, 1.0}) {
        const DensityMatrix<4> rho = monitoring(werner_state(mu), comp, eps);
        const CountsTable table = expected_counts(rho, settings, 16.0, 625.0);
        const ReconstructionResult r = mle_reconstruct(table);
        REQUIRE(r.converged);
        REQUIRE(fidelity(r.rho_hat, rho) >= 1.0 - 1e-9);
        REQUIRE(max_abs_diff<4>(r.rho_hat.matrix(), rho.matrix()) < 1e-6);
      }
    }
  }
  SECTION("likelihood never falls below the projected warm start") {
    const DensityMatrix<4> rho = werner_state(0.7);
    for (int trial = 0; trial < 20; ++trial) {
      const CountsTable table =
          simulate_counts(rho, settings, 16.0, 625.0, 9500 + static_cast<std::uint64_t>(trial));
      const ReconstructionResult mle = mle_reconstruct(table);
      const ReconstructionResult warm = reconstruct_linear(table);
      REQUIRE(mle.loglik >= poisson_loglik(table, warm.rho_hat) - 1e-9);
    }
  }
  SECTION("noisy Bell-state tomography is accurate") {
    const DensityMatrix<4> bell = bell_state(BellLabel::PhiMinus);
    int good = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const CountsTable table =
          simulate_counts(bell, settings, 16.0, 625.0, 9700 + static_cast<std::uint64_t>(trial));
      const ReconstructionResult r = mle_reconstruct(table);
      if (fidelity(r.rho_hat, bell) >= 0.99) ++good;
    }
    REQUIRE(good >= 190);
  }
  SECTION("iteration caps are reported as non-convergence") {
    const CountsTable table = simulate_counts(werner_state(0.5), settings, 16.0, 625.0, 9600);
    MleOptions strict;
    strict.max_iter = 1;
    const ReconstructionResult r = mle_reconstruct(table, strict);
    REQUIRE_FALSE(r.converged);
    REQUIRE(r.iterations == 1);
  }
  SECTION("the dispatcher tags each method") {
    const CountsTable table = simulate_counts(werner_state(0.5), settings, 16.0, 625.0, 9601);
    REQUIRE(reconstruct(table, ReconstructionMethod::LinearInversion).method ==
            ReconstructionMethod::LinearInversion);
    REQUIRE(reconstruct(table, ReconstructionMethod::Projected).method ==
            ReconstructionMethod::Projected);
    REQUIRE(reconstruct(table, ReconstructionMethod::Mle).method == ReconstructionMethod::Mle);
    REQUIRE(to_string(ReconstructionMethod::Mle) == "mle");
    REQUIRE(std::isnan(reconstruct(table, ReconstructionMethod::Projected).loglik));
  }
}

TEST_CASE("bootstrap error bars") {
  const std::vector<TomographySetting> settings = standard_settings();
  const ObservableBasis comp = ObservableBasis::computational();
  const QuantifierSpec spec = {
      {"irrealism", [&](const DensityMatrix<4>& rho) { return irrealism(rho, comp); }}};
  SECTION("seeded resampling is reproducible") {
    const CountsTable table = simulate_counts(werner_state(0.5), settings, 16.0, 625.0, 9800);
    const auto a = bootstrap_errorbars(table, 12, 4242, spec);
    const auto b = bootstrap_errorbars(table, 12, 4242, spec);
    REQUIRE(a.size() == 1);
    REQUIRE(a[0].name == "irrealism");
    REQUIRE(a[0].mean == b[0].mean);
    REQUIRE(a[0].stddev == b[0].stddev);
  }
  SECTION("error bars shrink like one over the square root of the exposure") {
    std::vector<double> exposures = {16.0, 160.0, 1600.0};
    std::vector<double> sigmas;
    for (double t : exposures) {
      const CountsTable table = simulate_counts(werner_state(0.5), settings, t, 625.0, 9801);
      sigmas.push_back(bootstrap_errorbars(table, 24, 4243, spec)[0].stddev);
    }
    const double slope = (std::log(sigmas[2]) - std::log(sigmas[0])) /
                         (std::log(exposures[2]) - std::log(exposures[0]));
    REQUIRE(slope == Catch::Approx(-0.5).margin(0.1));
    REQUIRE(sigmas[2] < 1e-2);
  }
  SECTION("argument validation") {
    const CountsTable table = simulate_counts(werner_state(0.5), settings, 16.0, 625.0, 9802);
    REQUIRE_THROWS_AS(bootstrap_errorbars(table, 1, 1, spec), std::invalid_argument);
    REQUIRE_THROWS_AS(bootstrap_errorbars(table, 8, 1, QuantifierSpec{}), std::invalid_argument);
  }
}

TEST_CASE("counts tables on disk") {
  const std::vector<TomographySetting> settings = standard_settings();
  SECTION("CSV round trip preserves the table") {
    const CountsTable table = simulate_counts(werner_state(0.6), settings, 16.0, 625.0, 9900);
    const CountsTable back = counts_from_csv(counts_to_csv(table), "roundtrip");
    REQUIRE(back.settings.size() == table.settings.size());
    REQUIRE(back.counts == table.counts);
    REQUIRE(back.exposure_s == table.exposure_s);
    REQUIRE(back.rate_hz == 0.0);  // the CSV does not carry a rate
    for (std::size_t i = 0; i < table.settings.size(); ++i) {
      REQUIRE(back.settings[i].label == table.settings[i].label);
      REQUIRE(max_abs_diff<4>(back.settings[i].joint, table.settings[i].joint) == 0.0);
    }
  }
  SECTION("malformed rows carry file and line context") {
    const std::string header = "setting_label,basis_a,basis_b,exposure_s,counts\n";
    REQUIRE_THROWS_WITH(counts_from_csv(header + "H⊗H,H,H,16\n", "bad.csv"),
                        Catch::Matchers::ContainsSubstring("bad.csv:2"));
    REQUIRE_THROWS_WITH(counts_from_csv(header + "Q⊗H,Q,H,16,10\n", "bad.csv"),
                        Catch::Matchers::ContainsSubstring("unknown basis label"));
    REQUIRE_THROWS_WITH(counts_from_csv(header + "H⊗H,H,H,16,-3\n", "bad.csv"),
                        Catch::Matchers::ContainsSubstring("nonnegative"));
    REQUIRE_THROWS_WITH(
        counts_from_csv(header + "H⊗H,H,H,16,10\nH⊗V,H,V,17,10\n", "bad.csv"),
        Catch::Matchers::ContainsSubstring("exposure differs"));
    REQUIRE_THROWS_AS(counts_from_csv("", "empty.csv"), std::runtime_error);
  }
}
