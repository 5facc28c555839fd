#pragma once

// Entropic quantifiers for monitored bipartite states: irrealism and realism,
// realism variation under monitoring, one-way (weak) quantum discord with its
// basis minimization, the discord-irrealism gap, the complementarity bound,
// and the closed-form expressions for monitored Werner states.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qrealism/channels.hpp"
#include "qrealism/density.hpp"
#include "qrealism/optimize.hpp"
#include "qrealism/states.hpp"

namespace qrealism {

inline constexpr double kLn2 = std::numbers::ln2;

// i_A(rho) = S(Phi_A(rho)) - S(rho); zero iff rho is already A-diagonal,
// at most ln 2 for a qubit observable.
inline double irrealism(const DensityMatrix<4>& rho, const ObservableBasis& basis,
                        Subsystem sub = Subsystem::A) {
  const auto [pp, pm] = observable_projectors(basis);
  const double s_phi = entropy_of_matrix<4>(detail::phi_map_raw(rho.matrix(), pp, pm, sub));
  const double s = von_neumann_entropy(rho);
  return std::clamp(s_phi - s, 0.0, kLn2);
}

inline double irrealism_local(const DensityMatrix<2>& rho, const ObservableBasis& basis) {
  const auto [pp, pm] = observable_projectors(basis);
  const double s_phi = entropy_of_eigenvalues(
      eigenvalues_hermitian2(detail::phi_map_raw2(rho.matrix(), pp, pm)));
  const double s = entropy_of_matrix2(rho.matrix());
  return std::clamp(s_phi - s, 0.0, kLn2);
}

inline double realism(const DensityMatrix<4>& rho, const ObservableBasis& basis,
                      Subsystem sub = Subsystem::A) {
  return kLn2 - irrealism(rho, basis, sub);
}

// Delta R(A) = S(M_A^eps(rho)) - S(rho); non-negative, equals the irrealism
// at eps = 1 and zero at eps = 0.
inline double delta_realism(const DensityMatrix<4>& rho, const ObservableBasis& basis, double eps,
                            Subsystem sub = Subsystem::A) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("delta_realism: eps must lie in [0,1]");
  const auto [pp, pm] = observable_projectors(basis);
  const CMatrix<4> monitored =
      (1.0 - eps) * rho.matrix() + eps * detail::phi_map_raw(rho.matrix(), pp, pm, sub);
  return std::max(0.0, entropy_of_matrix<4>(monitored) - von_neumann_entropy(rho));
}

// Same variation evaluated on the reduced state of the monitored subsystem:
// the local-coherence share of the realism change.
inline double local_coherence_variation(const DensityMatrix<4>& rho, const ObservableBasis& basis,
                                        double eps, Subsystem sub = Subsystem::A) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("local_coherence_variation: eps must lie in [0,1]");
  const auto [pp, pm] = observable_projectors(basis);
  const CMatrix<2> local = partial_trace(rho.matrix(), sub);
  const CMatrix<2> monitored = (1.0 - eps) * local + eps * detail::phi_map_raw2(local, pp, pm);
  return std::max(0.0, entropy_of_eigenvalues(eigenvalues_hermitian2(monitored)) -
                           entropy_of_matrix2(local));
}

// I(rho) - I(M_A^eps(rho)) at a fixed basis: mutual information destroyed by
// a strength-eps monitoring, before minimization.
inline double weak_discord_unminimized(const DensityMatrix<4>& rho, const ObservableBasis& basis,
                                       double eps, Subsystem sub = Subsystem::A) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("weak_discord_unminimized: eps must lie in [0,1]");
  // I - I∘M = DeltaR(rho) - DeltaR(rho_local): the unmonitored marginal drops
  // out, so two entropy differences suffice.
  return delta_realism(rho, basis, eps, sub) - local_coherence_variation(rho, basis, eps, sub);
}

struct MinimizationResult {
  double value = 0.0;
  ObservableBasis argmin = ObservableBasis::computational();
  long evaluations = 0;
  bool converged = false;
};

// min over (theta, phi) of I(rho) - I(M_A^eps(rho)). Coarse grid to locate
// the basin, Nelder-Mead to polish; non-convergence is flagged, never
// silently dropped.
inline MinimizationResult weak_discord(const DensityMatrix<4>& rho, double eps,
                                       Subsystem sub = Subsystem::A,
                                       const MinimizeOptions& opts = {}) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("weak_discord: eps must lie in [0,1]");
  const CMatrix<4>& m = rho.matrix();
  const CMatrix<2> local = partial_trace(m, sub);
  const double s_joint = entropy_of_matrix<4>(m);
  const double s_local = entropy_of_eigenvalues(eigenvalues_hermitian2(local));

  auto objective = [&](double theta, double phi) {
    const ObservableBasis basis(theta, phi);
    const auto [pp, pm] = observable_projectors(basis);
    const CMatrix<4> monitored = (1.0 - eps) * m + eps * detail::phi_map_raw(m, pp, pm, sub);
    const CMatrix<2> monitored_local =
        (1.0 - eps) * local + eps * detail::phi_map_raw2(local, pp, pm);
    const double joint_gain = entropy_of_matrix<4>(monitored) - s_joint;
    const double local_gain =
        entropy_of_eigenvalues(eigenvalues_hermitian2(monitored_local)) - s_local;
    return joint_gain - local_gain;
  };

  const Minimum2d min = minimize_over_sphere(objective, opts);
  MinimizationResult result;
  result.value = min.value > -1e-12 && min.value < 0.0 ? 0.0 : min.value;
  result.argmin = ObservableBasis(min.arg[0], min.arg[1]);
  result.evaluations = min.evaluations;
  result.converged = min.converged;
  return result;
}

// Quantum discord: the eps -> 1 (projective) limit of the weak discord.
inline MinimizationResult discord(const DensityMatrix<4>& rho, Subsystem sub = Subsystem::A,
                                  const MinimizeOptions& opts = {}) {
  return weak_discord(rho, 1.0, sub, opts);
}

// i_A(rho) - i_A(rho_local); an upper witness for the discord at any basis.
inline double discord_irrealism_gap(const DensityMatrix<4>& rho, const ObservableBasis& basis,
                                    Subsystem sub = Subsystem::A) {
  return irrealism(rho, basis, sub) - irrealism_local(reduced_state(rho, sub), basis);
}

struct ComplementarityReport {
  double realism_a = 0.0;
  double realism_a_prime = 0.0;
  double lhs = 0.0;    // realism_a + realism_a_prime
  double rhs = 0.0;    // ln d_A + S(rho_local) - I(rho)
  double slack = 0.0;  // rhs - lhs
  bool pure = false;
  double rhs_pure_form = std::numeric_limits<double>::quiet_NaN();  // ln d_A - E(psi)
};

// Realism trade-off for two maximally incompatible observables. Requires
// orthogonal Bloch vectors within 1e-9.
inline ComplementarityReport complementarity_check(const DensityMatrix<4>& rho,
                                                   const ObservableBasis& basis_a,
                                                   const ObservableBasis& basis_a_prime,
                                                   Subsystem sub = Subsystem::A) {
  if (std::abs(basis_a.bloch().dot(basis_a_prime.bloch())) > 1e-9)
    throw std::invalid_argument(
        "complementarity_check: observables are not maximally incompatible "
        "(Bloch vectors must be orthogonal within 1e-9)");
  ComplementarityReport report;
  report.realism_a = realism(rho, basis_a, sub);
  report.realism_a_prime = realism(rho, basis_a_prime, sub);
  report.lhs = report.realism_a + report.realism_a_prime;
  const double s_local = entropy_of_eigenvalues(
      eigenvalues_hermitian2(partial_trace(rho.matrix(), sub)));
  report.rhs = kLn2 + s_local - mutual_information(rho);
  report.slack = report.rhs - report.lhs;
  const RVector<4> lam = eigenvalues_hermitian<4>(rho.matrix());
  report.pure = lam(0) >= 1.0 - detail::kPureTol;
  if (report.pure) report.rhs_pure_form = kLn2 - s_local;
  return report;
}

// Spectrum of M_A^eps(rho^mu) for any measured direction:
// {(1-mu)/4, (1-mu)/4, (1+3mu-2 mu eps)/4, (1-mu+2 mu eps)/4}.
inline std::array<double, 4> werner_monitored_eigenvalues(double mu, double eps) {
  if (!(mu >= 0.0 && mu <= 1.0) || !(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("werner_monitored_eigenvalues: arguments must lie in [0,1]");
  return {(1.0 - mu) / 4.0, (1.0 - mu) / 4.0, (1.0 + 3.0 * mu - 2.0 * mu * eps) / 4.0,
          (1.0 - mu + 2.0 * mu * eps) / 4.0};
}

// Closed form for Delta R(A) on Werner states:
//   (1/4) sum_{i=-1}^{1} sum_{j=0}^{1} (-1)^j lam_ij ln lam_ij,
//   lam_ij = 1 + mu (1 + 2 i (1 - j eps)).
inline double werner_delta_realism_closed_form(double mu, double eps) {
  if (!(mu >= 0.0 && mu <= 1.0) || !(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("werner_delta_realism_closed_form: arguments must lie in [0,1]");
  double sum = 0.0;
  for (int i = -1; i <= 1; ++i) {
    for (int j = 0; j <= 1; ++j) {
      const double lam = 1.0 + mu * (1.0 + 2.0 * i * (1.0 - j * eps));
      if (lam > kEntropyTol) sum += (j == 0 ? 1.0 : -1.0) * lam * std::log(lam);
    }
  }
  return 0.25 * sum;
}

// One row of quantifier diagnostics for a fixed basis and strength.
struct QuantifierReport {
  double irrealism = 0.0;
  double realism = 0.0;
  double delta_realism = 0.0;
  double weak_discord_unmin = 0.0;
  double local_coherence_variation = 0.0;
  double bound_eps_times_irrealism = 0.0;
  ObservableBasis basis = ObservableBasis::computational();
  double eps = 0.0;
};

inline QuantifierReport quantifier_report(const DensityMatrix<4>& rho,
                                          const ObservableBasis& basis, double eps,
                                          Subsystem sub = Subsystem::A) {
  QuantifierReport r;
  r.irrealism = irrealism(rho, basis, sub);
  r.realism = kLn2 - r.irrealism;
  r.delta_realism = delta_realism(rho, basis, eps, sub);
  r.local_coherence_variation = local_coherence_variation(rho, basis, eps, sub);
  r.weak_discord_unmin = r.delta_realism - r.local_coherence_variation;
  r.bound_eps_times_irrealism = eps * r.irrealism;
  r.basis = basis;
  r.eps = eps;
  return r;
}

}  // namespace qrealism
