#pragma once

// Bell states, Werner states, and parametrized qubit observables.
// Polarization encoding is fixed project-wide as H -> |0>, V -> |1>.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "qrealism/density.hpp"
#include "qrealism/linalg.hpp"

namespace qrealism {

enum class BellLabel { PhiMinus, PhiPlus, PsiMinus, PsiPlus };

inline const char* to_string(BellLabel label) {
  switch (label) {
    case BellLabel::PhiMinus: return "phi-";
    case BellLabel::PhiPlus: return "phi+";
    case BellLabel::PsiMinus: return "psi-";
    case BellLabel::PsiPlus: return "psi+";
  }
  throw std::invalid_argument("bad BellLabel");
}

inline BellLabel bell_label_from_string(const std::string& s) {
  if (s == "phi-") return BellLabel::PhiMinus;
  if (s == "phi+") return BellLabel::PhiPlus;
  if (s == "psi-") return BellLabel::PsiMinus;
  if (s == "psi+") return BellLabel::PsiPlus;
  throw std::invalid_argument("unknown Bell label: " + s);
}

inline CVector<4> bell_vector(BellLabel label) {
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  CVector<4> v = CVector<4>::Zero();
  switch (label) {
    case BellLabel::PhiMinus: v(0) = inv_sqrt2; v(3) = -inv_sqrt2; break;
    case BellLabel::PhiPlus:  v(0) = inv_sqrt2; v(3) = inv_sqrt2; break;
    case BellLabel::PsiMinus: v(1) = inv_sqrt2; v(2) = -inv_sqrt2; break;
    case BellLabel::PsiPlus:  v(1) = inv_sqrt2; v(2) = inv_sqrt2; break;
  }
  return v;
}

inline DensityMatrix<4> bell_state(BellLabel label) {
  const CVector<4> v = bell_vector(label);
  return DensityMatrix<4>::unchecked(v * v.adjoint());
}

// rho^mu = (1-mu) I/4 + mu |phi-><phi-|, eigenvalues {(1+3mu)/4, (1-mu)/4 x3}.
inline DensityMatrix<4> werner_state(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0))
    throw std::invalid_argument("werner_state: mu must lie in [0,1]");
  const CMatrix<4> m = (1.0 - mu) * 0.25 * CMatrix<4>::Identity() +
                       mu * bell_state(BellLabel::PhiMinus).matrix();
  return DensityMatrix<4>::unchecked(m);
}

// A qubit measurement direction (theta, phi). Eigenstates
//   |+> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
//   |-> = sin(theta/2)|0> - e^{i phi} cos(theta/2)|1>
// Arbitrary real angles are canonicalized through the Bloch vector, which
// leaves the projector pair unchanged.
class ObservableBasis {
 public:
  ObservableBasis(double theta, double phi) {
    const double nx = std::sin(theta) * std::cos(phi);
    const double ny = std::sin(theta) * std::sin(phi);
    const double nz = std::cos(theta);
    theta_ = std::acos(std::clamp(nz, -1.0, 1.0));
    phi_ = std::atan2(ny, nx);
    if (phi_ < 0.0) phi_ += 2.0 * std::numbers::pi;
    if (std::abs(nx) < 1e-15 && std::abs(ny) < 1e-15) phi_ = 0.0;
  }

  static ObservableBasis computational() { return {0.0, 0.0}; }
  static ObservableBasis pauli_x() { return {0.5 * std::numbers::pi, 0.0}; }
  static ObservableBasis pauli_y() { return {0.5 * std::numbers::pi, 0.5 * std::numbers::pi}; }

  double theta() const { return theta_; }
  double phi() const { return phi_; }

  Eigen::Vector3d bloch() const {
    return {std::sin(theta_) * std::cos(phi_), std::sin(theta_) * std::sin(phi_),
            std::cos(theta_)};
  }

  CVector<2> plus_ket() const {
    CVector<2> v;
    v(0) = std::cos(0.5 * theta_);
    v(1) = std::polar(std::sin(0.5 * theta_), phi_);
    return v;
  }

  CVector<2> minus_ket() const {
    CVector<2> v;
    v(0) = std::sin(0.5 * theta_);
    v(1) = -std::polar(std::cos(0.5 * theta_), phi_);
    return v;
  }

  bool is_computational(double tol = 1e-12) const {
    return theta_ <= tol || theta_ >= std::numbers::pi - tol;
  }

 private:
  double theta_;
  double phi_;
};

// Orthogonal rank-1 projectors A+ and A- with A+ + A- = I.
inline std::pair<CMatrix<2>, CMatrix<2>> observable_projectors(const ObservableBasis& basis) {
  const CVector<2> p = basis.plus_ket();
  const CVector<2> m = basis.minus_ket();
  return {p * p.adjoint(), m * m.adjoint()};
}

// CLI-facing state specifiers: "bell:phi-", "werner:0.75".
inline DensityMatrix<4> parse_state_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("state spec must look like bell:<label> or werner:<mu>: " + spec);
  const std::string kind = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  if (kind == "bell") return bell_state(bell_label_from_string(arg));
  if (kind == "werner") {
    std::size_t used = 0;
    double mu = 0.0;
    try {
      mu = std::stod(arg, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad werner parameter: " + arg);
    }
    if (used != arg.size()) throw std::invalid_argument("bad werner parameter: " + arg);
    return werner_state(mu);
  }
  throw std::invalid_argument("unknown state family: " + kind);
}

inline bool is_state_spec(const std::string& s) {
  return s.rfind("bell:", 0) == 0 || s.rfind("werner:", 0) == 0;
}

}  // namespace qrealism
