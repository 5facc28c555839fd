#pragma once

// Dense complex linear algebra for 2- and 4-dimensional Hermitian operators:
// Pauli matrices, Kronecker products, partial traces, and a deterministic
// Hermitian eigendecomposition (descending eigenvalues, fixed phases).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace qrealism {

using complexd = std::complex<double>;

template <int N>
using CMatrix = Eigen::Matrix<complexd, N, N>;
template <int N>
using CVector = Eigen::Matrix<complexd, N, 1>;
template <int N>
using RVector = Eigen::Matrix<double, N, 1>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kEigRoundTripTol = 1e-10;

// Which half of the two-qubit system an operation acts on. A is the first
// tensor factor (mode 1), B the second (mode 2).
enum class Subsystem { A, B };

inline const char* to_string(Subsystem s) { return s == Subsystem::A ? "A" : "B"; }

inline const CMatrix<2>& identity2() {
  static const CMatrix<2> m = CMatrix<2>::Identity();
  return m;
}

inline const CMatrix<2>& sigma_x() {
  static const CMatrix<2> m = (CMatrix<2>() << 0, 1, 1, 0).finished();
  return m;
}

inline const CMatrix<2>& sigma_y() {
  static const CMatrix<2> m =
      (CMatrix<2>() << 0, complexd(0, -1), complexd(0, 1), 0).finished();
  return m;
}

inline const CMatrix<2>& sigma_z() {
  static const CMatrix<2> m = (CMatrix<2>() << 1, 0, 0, -1).finished();
  return m;
}

template <int N>
double max_abs(const CMatrix<N>& m) {
  return m.cwiseAbs().maxCoeff();
}

template <int N>
bool is_hermitian(const CMatrix<N>& m, double tol = kHermitianTol) {
  return max_abs<N>(m - m.adjoint()) <= tol * std::max(1.0, max_abs<N>(m));
}

template <int N>
CMatrix<N> hermitize(const CMatrix<N>& m) {
  return 0.5 * (m + m.adjoint());
}

template <int N>
bool is_unitary(const CMatrix<N>& u, double tol = kHermitianTol) {
  return max_abs<N>(u.adjoint() * u - CMatrix<N>::Identity()) <= tol;
}

// Kronecker product, a acting on the first factor.
template <int N, int M>
Eigen::Matrix<complexd, N * M, N * M> tensor(const CMatrix<N>& a, const CMatrix<M>& b) {
  Eigen::Matrix<complexd, N * M, N * M> out;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) out.template block<M, M>(i * M, j * M) = a(i, j) * b;
  return out;
}

// Lift a one-qubit operator to the two-qubit space on the given subsystem.
inline CMatrix<4> embed(const CMatrix<2>& op, Subsystem sub) {
  return sub == Subsystem::A ? tensor<2, 2>(op, identity2()) : tensor<2, 2>(identity2(), op);
}

// Trace out the complement of `keep`. Basis ordering is |a⟩⊗|b⟩ ↦ 2a+b.
inline CMatrix<2> partial_trace(const CMatrix<4>& rho, Subsystem keep) {
  CMatrix<2> out = CMatrix<2>::Zero();
  if (keep == Subsystem::A) {
    for (int a = 0; a < 2; ++a)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int b = 0; b < 2; ++b) out(a, a2) += rho(2 * a + b, 2 * a2 + b);
  } else {
    for (int b = 0; b < 2; ++b)
      for (int b2 = 0; b2 < 2; ++b2)
        for (int a = 0; a < 2; ++a) out(b, b2) += rho(2 * a + b, 2 * a + b2);
  }
  return out;
}

// Eigensystem of a Hermitian operator. Eigenvalues descending; each
// eigenvector's largest-magnitude entry is made real positive so repeated
// runs produce identical columns.
template <int N>
struct Spectrum {
  RVector<N> eigenvalues;
  CMatrix<N> eigenvectors;  // orthonormal columns, spectrum order

  CMatrix<N> reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
  }
};

template <int N>
Spectrum<N> eig_hermitian(const CMatrix<N>& h) {
  if (!is_hermitian<N>(h))
    throw std::invalid_argument("eig_hermitian: input is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<CMatrix<N>> solver(hermitize<N>(h));
  Spectrum<N> spec;
  // Eigen returns ascending order; flip to descending.
  for (int k = 0; k < N; ++k) {
    spec.eigenvalues(k) = solver.eigenvalues()(N - 1 - k);
    spec.eigenvectors.col(k) = solver.eigenvectors().col(N - 1 - k);
  }
  for (int k = 0; k < N; ++k) {
    int pivot = 0;
    double best = -1.0;
    for (int i = 0; i < N; ++i) {
      const double mag = std::abs(spec.eigenvectors(i, k));
      if (mag > best + 1e-15) {
        best = mag;
        pivot = i;
      }
    }
    const complexd p = spec.eigenvectors(pivot, k);
    if (std::abs(p) > 0) spec.eigenvectors.col(k) *= std::conj(p) / std::abs(p);
  }
  return spec;
}

// Eigenvalues only (descending); skips the phase bookkeeping.
template <int N>
RVector<N> eigenvalues_hermitian(const CMatrix<N>& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix<N>> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

// Closed form for the 2x2 case; trace/determinant only.
inline Eigen::Vector2d eigenvalues_hermitian2(const CMatrix<2>& h) {
  const double half_trace = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double d = 0.5 * (h(0, 0).real() - h(1, 1).real());
  const double r = std::sqrt(d * d + std::norm(h(0, 1)));
  return {half_trace + r, half_trace - r};
}

template <int N>
double frobenius_norm(const CMatrix<N>& m) {
  return m.norm();
}

template <int N>
double frobenius_distance(const CMatrix<N>& a, const CMatrix<N>& b) {
  return (a - b).norm();
}

}  // namespace qrealism
