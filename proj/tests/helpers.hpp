#pragma once

// Shared test utilities: seeded generators for states, unitaries, and bases,
// plus independent hand-rolled oracles used to cross-check library results.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "qrealism/density.hpp"
#include "qrealism/linalg.hpp"
#include "qrealism/states.hpp"

namespace testutil {

using qrealism::CMatrix;
using qrealism::complexd;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline complexd random_gaussian(std::mt19937_64& engine) {
  std::normal_distribution<double> n(0.0, 1.0);
  return complexd(n(engine), n(engine));
}

// Haar-ish 2x2 unitary: QR of a Ginibre matrix with the R diagonal phased out.
inline CMatrix<2> random_unitary2(std::mt19937_64& engine) {
  CMatrix<2> g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = random_gaussian(engine);
  Eigen::HouseholderQR<CMatrix<2>> qr(g);
  CMatrix<2> q = qr.householderQ();
  const CMatrix<2> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int j = 0; j < 2; ++j) {
    const complexd d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

// Ginibre construction: G G† / Tr, with column count controlling the rank.
template <int N>
qrealism::DensityMatrix<N> random_density(std::mt19937_64& engine, int rank = N) {
  Eigen::Matrix<complexd, N, Eigen::Dynamic> g(N, rank);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = random_gaussian(engine);
  CMatrix<N> m = g * g.adjoint();
  m /= m.trace().real();
  return qrealism::DensityMatrix<N>::from_matrix(qrealism::hermitize<N>(m));
}

inline qrealism::ObservableBasis random_basis(std::mt19937_64& engine) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double theta = std::acos(2.0 * u(engine) - 1.0);
  const double phi = 2.0 * std::numbers::pi * u(engine);
  return qrealism::ObservableBasis(theta, phi);
}

// Independent partial trace: explicit index contraction over |a⟩⊗|b⟩ ↦ 2a+b.
inline CMatrix<2> partial_trace_oracle(const CMatrix<4>& rho, qrealism::Subsystem keep) {
  CMatrix<2> out = CMatrix<2>::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        if (keep == qrealism::Subsystem::A)
          out(i, j) += rho(2 * i + k, 2 * j + k);
        else
          out(i, j) += rho(2 * k + i, 2 * k + j);
      }
    }
  }
  return out;
}

template <int N>
double max_abs_diff(const CMatrix<N>& a, const CMatrix<N>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testutil
