#pragma once

// Density operators and their entropic functionals. All entropies are in
// nats; the qubit ceiling is ln 2.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qrealism/linalg.hpp"

namespace qrealism {

inline constexpr double kTraceTol = 1e-12;
// Eigenvalues below this are treated as exact zeros inside matrix functions
// (ln, sqrt) and support tests.
inline constexpr double kSupportTol = 1e-12;
// 0·ln 0 cutoff for entropy sums.
inline constexpr double kEntropyTol = 1e-15;

// Trace-one positive-semidefinite Hermitian operator on a 2- or 4-dimensional
// space. `from_matrix` validates and clamps eigenvalues in [-1e-10, 0) to
// zero; reconstruction noise routinely produces such dust.
template <int N>
class DensityMatrix {
 public:
  static DensityMatrix from_matrix(const CMatrix<N>& m) {
    if (!is_hermitian<N>(m))
      throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-12");
    if (std::abs(m.trace().real() - 1.0) > kTraceTol || std::abs(m.trace().imag()) > kTraceTol)
      throw std::invalid_argument("DensityMatrix: trace differs from 1 beyond 1e-12");
    Spectrum<N> spec = eig_hermitian<N>(m);
    const double lam_min = spec.eigenvalues(N - 1);
    if (lam_min < -kPsdTol)
      throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond -1e-10");
    if (lam_min < 0.0) {
      RVector<N> lam = spec.eigenvalues.cwiseMax(0.0);
      lam /= lam.sum();
      CMatrix<N> rebuilt =
          hermitize<N>(spec.eigenvectors * lam.asDiagonal() * spec.eigenvectors.adjoint());
      return DensityMatrix(rebuilt);
    }
    return DensityMatrix(hermitize<N>(m));
  }

  // Trusted constructor for operations that preserve validity by algebra
  // (convex mixtures of unitary conjugations, partial traces). The invariant
  // tests exercise these paths.
  static DensityMatrix unchecked(const CMatrix<N>& m) { return DensityMatrix(m); }

  const CMatrix<N>& matrix() const { return m_; }
  static constexpr int dim() { return N; }

 private:
  explicit DensityMatrix(const CMatrix<N>& m) : m_(m) {}
  CMatrix<N> m_;
};

using Density2 = DensityMatrix<2>;
using Density4 = DensityMatrix<4>;

inline DensityMatrix<2> reduced_state(const DensityMatrix<4>& rho, Subsystem keep) {
  return DensityMatrix<2>::unchecked(hermitize<2>(partial_trace(rho.matrix(), keep)));
}

template <typename Vec>
double entropy_of_eigenvalues(const Vec& lam) {
  double s = 0.0;
  for (int i = 0; i < lam.size(); ++i) {
    const double x = lam(i);
    if (x > kEntropyTol) s -= x * std::log(x);
  }
  return std::max(0.0, s);
}

// S(H) for a Hermitian matrix assumed PSD/trace-one up to numerical dust.
// Hot path for the discord minimizer; skips DensityMatrix construction.
template <int N>
double entropy_of_matrix(const CMatrix<N>& h) {
  return entropy_of_eigenvalues(eigenvalues_hermitian<N>(h));
}

inline double entropy_of_matrix2(const CMatrix<2>& h) {
  return entropy_of_eigenvalues(eigenvalues_hermitian2(h));
}

template <int N>
double von_neumann_entropy(const DensityMatrix<N>& rho) {
  return entropy_of_matrix<N>(rho.matrix());
}

// S(rho||sigma) in nats; +inf when supp(rho) is not contained in supp(sigma).
template <int N>
double relative_entropy(const DensityMatrix<N>& rho, const DensityMatrix<N>& sigma) {
  const Spectrum<N> srho = eig_hermitian<N>(rho.matrix());
  const Spectrum<N> ssig = eig_hermitian<N>(sigma.matrix());

  double tr_rho_ln_rho = 0.0;
  for (int i = 0; i < N; ++i) {
    const double x = srho.eigenvalues(i);
    if (x > kEntropyTol) tr_rho_ln_rho += x * std::log(x);
  }
  double tr_rho_ln_sig = 0.0;
  for (int j = 0; j < N; ++j) {
    const double s = ssig.eigenvalues(j);
    const double mass =
        (ssig.eigenvectors.col(j).adjoint() * rho.matrix() * ssig.eigenvectors.col(j))(0).real();
    if (s > kSupportTol) {
      tr_rho_ln_sig += mass * std::log(s);
    } else if (mass > kSupportTol) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return std::max(0.0, tr_rho_ln_rho - tr_rho_ln_sig);
}

// I_{A:B} = S(rho_A) + S(rho_B) - S(rho); equals S(rho || rho_A ⊗ rho_B).
inline double mutual_information(const DensityMatrix<4>& rho) {
  const double sa = entropy_of_matrix2(partial_trace(rho.matrix(), Subsystem::A));
  const double sb = entropy_of_matrix2(partial_trace(rho.matrix(), Subsystem::B));
  return std::max(0.0, sa + sb - von_neumann_entropy(rho));
}

namespace detail {

// Rank-1 detection threshold for the pure-state fidelity fast path.
inline constexpr double kPureTol = 1e-9;

template <int N>
CMatrix<N> matrix_sqrt_psd(const CMatrix<N>& h) {
  Spectrum<N> spec = eig_hermitian<N>(h);
  RVector<N> lam = spec.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return spec.eigenvectors * lam.asDiagonal() * spec.eigenvectors.adjoint();
}

}  // namespace detail

// Uhlmann fidelity F = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2. When either
// argument is pure this reduces to <psi|other|psi>.
template <int N>
double fidelity(const DensityMatrix<N>& rho, const DensityMatrix<N>& sigma) {
  const Spectrum<N> srho = eig_hermitian<N>(rho.matrix());
  if (srho.eigenvalues(0) >= 1.0 - detail::kPureTol) {
    const auto psi = srho.eigenvectors.col(0);
    const double f = (psi.adjoint() * sigma.matrix() * psi)(0).real();
    return std::clamp(f, 0.0, 1.0);
  }
  const Spectrum<N> ssig = eig_hermitian<N>(sigma.matrix());
  if (ssig.eigenvalues(0) >= 1.0 - detail::kPureTol) {
    const auto psi = ssig.eigenvectors.col(0);
    const double f = (psi.adjoint() * rho.matrix() * psi)(0).real();
    return std::clamp(f, 0.0, 1.0);
  }
  const CMatrix<N> root = detail::matrix_sqrt_psd<N>(rho.matrix());
  const CMatrix<N> inner = hermitize<N>(root * sigma.matrix() * root);
  RVector<N> lam = eigenvalues_hermitian<N>(inner).cwiseMax(0.0);
  const double tr = lam.cwiseSqrt().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

}  // namespace qrealism
