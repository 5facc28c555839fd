#pragma once

// Coincidence-count tomography: simulate Poisson shot noise for the standard
// 36-setting polarization measurement set, reconstruct density matrices by
// linear inversion / physical projection / maximum likelihood, and attach
// bootstrap error bars to derived quantifiers.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrealism/density.hpp"
#include "qrealism/linalg.hpp"
#include "qrealism/parallel.hpp"
#include "qrealism/rng.hpp"

namespace qrealism {

struct TomographySetting {
  CMatrix<2> projector_a;
  CMatrix<2> projector_b;
  CMatrix<4> joint;  // projector_a ⊗ projector_b, precomputed
  std::string label;
  std::string basis_a;
  std::string basis_b;
};

namespace detail {

inline CVector<2> polarization_ket(const std::string& name) {
  const double s = 1.0 / std::sqrt(2.0);
  if (name == "H") return CVector<2>(1.0, 0.0);
  if (name == "V") return CVector<2>(0.0, 1.0);
  if (name == "D") return CVector<2>(s, s);
  if (name == "A") return CVector<2>(s, -s);
  if (name == "R") return CVector<2>(s, complexd(0.0, s));
  if (name == "L") return CVector<2>(s, complexd(0.0, -s));
  throw std::invalid_argument("polarization_ket: unknown basis label '" + name + "'");
}

}  // namespace detail

inline TomographySetting make_setting(const std::string& basis_a, const std::string& basis_b) {
  const CVector<2> ka = detail::polarization_ket(basis_a);
  const CVector<2> kb = detail::polarization_ket(basis_b);
  TomographySetting s;
  s.projector_a = ka * ka.adjoint();
  s.projector_b = kb * kb.adjoint();
  s.joint = tensor(s.projector_a, s.projector_b);
  s.basis_a = basis_a;
  s.basis_b = basis_b;
  s.label = basis_a + "⊗" + basis_b;
  return s;
}

// All 36 products of single-qubit Pauli eigenstate projections per side:
// {H, V} (σ_z), {D, A} (σ_x), {R, L} (σ_y).
inline std::vector<TomographySetting> standard_settings() {
  static const char* const kBases[6] = {"H", "V", "D", "A", "R", "L"};
  std::vector<TomographySetting> settings;
  settings.reserve(36);
  for (const char* a : kBases)
    for (const char* b : kBases) settings.push_back(make_setting(a, b));
  return settings;
}

struct CountsTable {
  std::vector<TomographySetting> settings;
  // Integer-valued when drawn by the simulator; real-valued entries represent
  // the infinite-count limit (exact expected counts) used by noiseless checks.
  std::vector<double> counts;
  double exposure_s = 0.0;
  double rate_hz = 0.0;  // 0 = unknown (e.g. ingested from CSV, which omits it)
};

inline void validate_counts(const CountsTable& table) {
  if (table.settings.empty()) throw std::invalid_argument("CountsTable: no settings");
  if (table.counts.size() != table.settings.size())
    throw std::invalid_argument("CountsTable: counts/settings size mismatch");
  for (double n : table.counts)
    if (!(n >= 0.0)) throw std::invalid_argument("CountsTable: counts must be nonnegative");
  if (!(table.exposure_s > 0.0))
    throw std::invalid_argument("CountsTable: exposure must be positive");
}

inline std::vector<double> born_probabilities(const CMatrix<4>& rho,
                                              const std::vector<TomographySetting>& settings) {
  std::vector<double> p(settings.size());
  for (std::size_t i = 0; i < settings.size(); ++i)
    p[i] = std::max(0.0, (rho * settings[i].joint).trace().real());
  return p;
}

// Counts drawn as independent Poisson variates with mean rate·exposure·p_i.
// Each setting owns a generator stream derived from (seed, setting index), so
// the table is bit-identical across runs and thread counts.
inline CountsTable simulate_counts(const DensityMatrix<4>& rho,
                                   const std::vector<TomographySetting>& settings,
                                   double exposure_s, double rate_hz, std::uint64_t seed) {
  if (!(exposure_s > 0.0) || !(rate_hz > 0.0))
    throw std::invalid_argument("simulate_counts: exposure and rate must be positive");
  CountsTable table;
  table.settings = settings;
  table.exposure_s = exposure_s;
  table.rate_hz = rate_hz;
  table.counts.resize(settings.size());
  const std::vector<double> p = born_probabilities(rho.matrix(), settings);
  for (std::size_t i = 0; i < settings.size(); ++i) {
    const double mean = rate_hz * exposure_s * p[i];
    if (mean <= 0.0) {
      table.counts[i] = 0.0;
    } else {
      std::mt19937_64 engine = make_engine(seed, i);
      table.counts[i] = static_cast<double>(std::poisson_distribution<long long>(mean)(engine));
    }
  }
  return table;
}

// Exact expected counts (the infinite-count limit of simulate_counts).
inline CountsTable expected_counts(const DensityMatrix<4>& rho,
                                   const std::vector<TomographySetting>& settings,
                                   double exposure_s, double rate_hz) {
  if (!(exposure_s > 0.0) || !(rate_hz > 0.0))
    throw std::invalid_argument("expected_counts: exposure and rate must be positive");
  CountsTable table;
  table.settings = settings;
  table.exposure_s = exposure_s;
  table.rate_hz = rate_hz;
  const std::vector<double> p = born_probabilities(rho.matrix(), settings);
  table.counts.resize(settings.size());
  for (std::size_t i = 0; i < settings.size(); ++i)
    table.counts[i] = rate_hz * exposure_s * p[i];
  return table;
}

namespace detail {

inline const std::array<CMatrix<4>, 16>& pauli_product_basis() {
  static const std::array<CMatrix<4>, 16> basis = [] {
    const std::array<CMatrix<2>, 4> sigma = {identity2(), sigma_x(), sigma_y(), sigma_z()};
    std::array<CMatrix<4>, 16> b;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) b[4 * i + j] = tensor(sigma[i], sigma[j]);
    return b;
  }();
  return basis;
}

// Design matrix D_ik = Tr[Π_i B_k] mapping Pauli coordinates to setting
// probabilities; real because both factors are Hermitian.
inline Eigen::MatrixXd design_matrix(const std::vector<TomographySetting>& settings) {
  const auto& basis = pauli_product_basis();
  Eigen::MatrixXd d(static_cast<Eigen::Index>(settings.size()), 16);
  for (std::size_t i = 0; i < settings.size(); ++i)
    for (int k = 0; k < 16; ++k)
      d(static_cast<Eigen::Index>(i), k) = (settings[i].joint * basis[k]).trace().real();
  return d;
}

}  // namespace detail

inline int settings_rank(const std::vector<TomographySetting>& settings) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::design_matrix(settings));
  svd.setThreshold(1e-10);
  return static_cast<int>(svd.rank());
}

// Least-squares fit of Tr[X Π_i] to the scale-normalized frequencies
// 9·n_i/Σn (the overcomplete set satisfies Σ_i Π_i = 9·1, so probabilities
// sum to 9 exactly and no count rate is needed). Hermitian and unit trace by
// construction; possibly non-PSD under shot noise.
inline CMatrix<4> linear_inversion(const CountsTable& table) {
  validate_counts(table);
  double total = 0.0;
  for (double n : table.counts) total += n;
  if (!(total > 0.0)) throw std::invalid_argument("linear_inversion: all counts are zero");

  const Eigen::MatrixXd d = detail::design_matrix(table.settings);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  if (svd.rank() < 16)
    throw std::invalid_argument("linear_inversion: settings do not span the operator space");

  Eigen::VectorXd f(static_cast<Eigen::Index>(table.counts.size()));
  for (std::size_t i = 0; i < table.counts.size(); ++i)
    f(static_cast<Eigen::Index>(i)) = 9.0 * table.counts[i] / total;
  const Eigen::VectorXd x = svd.solve(f);

  const auto& basis = detail::pauli_product_basis();
  CMatrix<4> out = CMatrix<4>::Zero();
  for (int k = 0; k < 16; ++k) out += x(k) * basis[k];
  out = hermitize<4>(out);
  const double tr = out.trace().real();
  if (!(std::abs(tr) > 1e-12))
    throw std::invalid_argument("linear_inversion: reconstructed trace is zero");
  return out / tr;
}

// Closest unit-trace PSD matrix in Frobenius norm: Euclidean projection of
// the spectrum onto the probability simplex, eigenvectors unchanged.
inline DensityMatrix<4> project_to_physical(const CMatrix<4>& x) {
  if (!is_hermitian<4>(x)) throw std::invalid_argument("project_to_physical: input not Hermitian");
  const Spectrum<4> spec = eig_hermitian<4>(hermitize<4>(x));
  std::array<double, 4> lam{spec.eigenvalues(0), spec.eigenvalues(1), spec.eigenvalues(2),
                            spec.eigenvalues(3)};  // already descending
  double tau = 0.0, cumulative = 0.0;
  for (int k = 0; k < 4; ++k) {
    cumulative += lam[k];
    const double candidate = (cumulative - 1.0) / (k + 1);
    if (lam[k] - candidate > 0.0) tau = candidate;
  }
  CMatrix<4> out = CMatrix<4>::Zero();
  for (int k = 0; k < 4; ++k) {
    const double p = std::max(0.0, lam[k] - tau);
    if (p > 0.0) out += p * (spec.eigenvectors.col(k) * spec.eigenvectors.col(k).adjoint());
  }
  return DensityMatrix<4>::from_matrix(hermitize<4>(out));
}

// Poisson log-likelihood of the counts with the overall intensity scale
// profiled out (Σ_i p_i = 9 fixes it at Σn/9); factorial terms dropped. Only
// differences between states are meaningful.
inline double poisson_loglik(const CountsTable& table, const DensityMatrix<4>& rho) {
  validate_counts(table);
  const std::vector<double> p = born_probabilities(rho.matrix(), table.settings);
  double total = 0.0;
  for (double n : table.counts) total += n;
  double ll = 0.0;
  for (std::size_t i = 0; i < table.counts.size(); ++i) {
    if (table.counts[i] <= 0.0) continue;
    if (p[i] <= 0.0) return -std::numeric_limits<double>::infinity();
    ll += table.counts[i] * std::log(p[i]);
  }
  if (total > 0.0) ll += total * std::log(total / 9.0) - total;
  return ll;
}

enum class ReconstructionMethod { LinearInversion, Projected, Mle };

inline std::string to_string(ReconstructionMethod m) {
  switch (m) {
    case ReconstructionMethod::LinearInversion: return "linear-inversion";
    case ReconstructionMethod::Projected: return "projected";
    case ReconstructionMethod::Mle: return "mle";
  }
  throw std::logic_error("to_string: bad ReconstructionMethod");
}

struct MleOptions {
  double tol = 1e-10;   // stop when the log-likelihood improves by less
  int max_iter = 10000;  // hard cap; hitting it flags non-convergence
};

struct ReconstructionResult {
  DensityMatrix<4> rho_hat = DensityMatrix<4>::unchecked(CMatrix<4>::Identity() / 4.0);
  ReconstructionMethod method = ReconstructionMethod::Mle;
  double loglik = std::numeric_limits<double>::quiet_NaN();  // mle only
  double residual = 0.0;  // rms of Tr[ρ̂ Π_i] − normalized frequency
  bool converged = true;
  int iterations = 0;
};

namespace detail {

inline double rms_residual(const CountsTable& table, const CMatrix<4>& rho) {
  const std::vector<double> p = born_probabilities(rho, table.settings);
  double total = 0.0;
  for (double n : table.counts) total += n;
  if (!(total > 0.0)) return 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < table.counts.size(); ++i) {
    const double diff = p[i] - 9.0 * table.counts[i] / total;
    ss += diff * diff;
  }
  return std::sqrt(ss / static_cast<double>(table.counts.size()));
}

}  // namespace detail

inline ReconstructionResult reconstruct_linear(const CountsTable& table) {
  ReconstructionResult r;
  r.method = ReconstructionMethod::Projected;
  const CMatrix<4> x = linear_inversion(table);
  r.rho_hat = project_to_physical(x);
  r.residual = detail::rms_residual(table, r.rho_hat.matrix());
  return r;
}

// Iterative RρR maximum-likelihood reconstruction, warm-started from the
// projected linear inversion. Likelihood ascent is enforced by damping any
// step that would decrease it; stopping is by likelihood improvement.
inline ReconstructionResult mle_reconstruct(const CountsTable& table, const MleOptions& opts = {}) {
  validate_counts(table);
  double total = 0.0;
  for (double n : table.counts) total += n;
  if (!(total > 0.0)) throw std::invalid_argument("mle_reconstruct: all counts are zero");

  CMatrix<4> rho = project_to_physical(linear_inversion(table)).matrix();
  // If the warm start assigns zero probability to an observed outcome, pull
  // it slightly toward the maximally mixed state to restore full support.
  {
    const std::vector<double> p = born_probabilities(rho, table.settings);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (table.counts[i] > 0.0 && p[i] < 1e-12) {
        rho = 0.99 * rho + 0.01 * CMatrix<4>::Identity() / 4.0;
        break;
      }
    }
  }

  auto loglik_of = [&](const CMatrix<4>& m) {
    const std::vector<double> p = born_probabilities(m, table.settings);
    double ll = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (table.counts[i] <= 0.0) continue;
      if (p[i] <= 0.0) return -std::numeric_limits<double>::infinity();
      ll += table.counts[i] * std::log(p[i]);
    }
    return ll;
  };

  double ll = loglik_of(rho);
  ReconstructionResult r;
  r.method = ReconstructionMethod::Mle;
  r.converged = false;
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    const std::vector<double> p = born_probabilities(rho, table.settings);
    CMatrix<4> rop = CMatrix<4>::Zero();
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (table.counts[i] <= 0.0) continue;
      rop += (table.counts[i] / std::max(p[i], 1e-300)) * table.settings[i].joint;
    }
    rop /= total;
    CMatrix<4> step = hermitize<4>(rop * rho * rop);
    const double step_tr = step.trace().real();
    if (!(step_tr > 0.0)) break;  // degenerate; keep current iterate, flagged
    step /= step_tr;

    double ll_next = loglik_of(step);
    // Damp toward the current iterate if the full step overshoots.
    double alpha = 1.0;
    CMatrix<4> next = step;
    while (ll_next < ll && alpha > 1e-9) {
      alpha *= 0.5;
      next = hermitize<4>((1.0 - alpha) * rho + alpha * step);
      ll_next = loglik_of(next);
    }
    if (ll_next < ll) break;  // no ascent direction left; flagged below
    const double gain = ll_next - ll;
    rho = next;
    ll = ll_next;
    if (gain < opts.tol) {
      r.converged = true;
      ++iter;
      break;
    }
  }
  r.iterations = iter;
  r.rho_hat = DensityMatrix<4>::from_matrix(rho);
  r.loglik = poisson_loglik(table, r.rho_hat);
  r.residual = detail::rms_residual(table, r.rho_hat.matrix());
  return r;
}

inline ReconstructionResult reconstruct(const CountsTable& table,
                                        ReconstructionMethod method = ReconstructionMethod::Mle,
                                        const MleOptions& opts = {}) {
  switch (method) {
    case ReconstructionMethod::LinearInversion: {
      ReconstructionResult r;
      r.method = ReconstructionMethod::LinearInversion;
      const CMatrix<4> x = linear_inversion(table);
      // Linear inversion may be non-PSD; report the projected state but keep
      // the raw residual of the unprojected solution.
      r.rho_hat = project_to_physical(x);
      r.residual = detail::rms_residual(table, x);
      return r;
    }
    case ReconstructionMethod::Projected: return reconstruct_linear(table);
    case ReconstructionMethod::Mle: return mle_reconstruct(table, opts);
  }
  throw std::logic_error("reconstruct: bad ReconstructionMethod");
}

// Named quantifier functions evaluated on each bootstrap reconstruction.
using QuantifierSpec = std::vector<std::pair<std::string, std::function<double(const DensityMatrix<4>&)>>>;

struct QuantifierStat {
  std::string name;
  double mean = 0.0;
  double stddev = 0.0;
};

// Poisson-parametric bootstrap: resample counts around the observed values,
// re-reconstruct, re-evaluate the quantifiers. Trials own generator streams
// keyed by (seed, trial index) and run in parallel deterministically.
inline std::vector<QuantifierStat> bootstrap_errorbars(
    const CountsTable& table, int n_resamples, std::uint64_t seed, const QuantifierSpec& spec,
    ReconstructionMethod method = ReconstructionMethod::Mle, const MleOptions& opts = {}) {
  validate_counts(table);
  if (n_resamples < 2) throw std::invalid_argument("bootstrap_errorbars: need >= 2 resamples");
  if (spec.empty()) throw std::invalid_argument("bootstrap_errorbars: empty quantifier spec");

  std::vector<std::vector<double>> values(static_cast<std::size_t>(n_resamples),
                                          std::vector<double>(spec.size()));
  parallel_for(static_cast<std::size_t>(n_resamples), [&](std::size_t t) {
    std::mt19937_64 engine = make_engine(seed, t);
    CountsTable resampled = table;
    for (std::size_t i = 0; i < table.counts.size(); ++i) {
      const double mean = table.counts[i];
      resampled.counts[i] =
          mean > 0.0 ? static_cast<double>(std::poisson_distribution<long long>(mean)(engine))
                     : 0.0;
    }
    const ReconstructionResult rec = reconstruct(resampled, method, opts);
    for (std::size_t q = 0; q < spec.size(); ++q)
      values[t][q] = spec[q].second(rec.rho_hat);
  });

  std::vector<QuantifierStat> stats(spec.size());
  for (std::size_t q = 0; q < spec.size(); ++q) {
    double mean = 0.0;
    for (int t = 0; t < n_resamples; ++t) mean += values[static_cast<std::size_t>(t)][q];
    mean /= n_resamples;
    double ss = 0.0;
    for (int t = 0; t < n_resamples; ++t) {
      const double d = values[static_cast<std::size_t>(t)][q] - mean;
      ss += d * d;
    }
    stats[q].name = spec[q].first;
    stats[q].mean = mean;
    stats[q].stddev = std::sqrt(ss / (n_resamples - 1));
  }
  return stats;
}

}  // namespace qrealism
