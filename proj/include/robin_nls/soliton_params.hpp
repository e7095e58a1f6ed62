#pragma once

#include <cmath>

#include "robin_nls/types.hpp"

namespace robin_nls {

/// Parameters of the stationary one-soliton u_s(x,t) = e^{i omega t} u_s0(x).
///
/// Focusing solitons are parametrized by (omega, phi), defocusing ones by
/// (omega, alpha). Everything else (Robin parameter, pole, residue) is derived.
class SolitonParams {
 public:
  static SolitonParams focusing(Real omega, Real phi) {
    if (!(omega > 0)) throw Error(ErrorKind::Validation, "omega must be positive");
    SolitonParams p;
    p.sign_ = Sign::Focusing;
    p.omega_ = omega;
    p.phi_ = phi;
    return p;
  }

  static SolitonParams defocusing(Real omega, Real alpha) {
    if (!(omega > 0)) throw Error(ErrorKind::Validation, "omega must be positive");
    if (!(alpha > 0)) throw Error(ErrorKind::Validation, "alpha must be positive");
    SolitonParams p;
    p.sign_ = Sign::Defocusing;
    p.omega_ = omega;
    p.alpha_ = alpha;
    return p;
  }

  Sign sign() const { return sign_; }
  Real lambda() const { return as_real(sign_); }
  Real omega() const { return omega_; }
  Real phi() const { return phi_; }

  /// Boundary amplitude |u_s(0,t)|; for the focusing family alpha = sqrt(omega) sech(phi).
  Real alpha() const {
    return sign_ == Sign::Defocusing ? alpha_ : std::sqrt(omega_) / std::cosh(phi_);
  }

  /// Robin parameter q_s = -u_s0'(0)/u_s0(0).
  Real q() const {
    const Real sw = std::sqrt(omega_);
    return sign_ == Sign::Focusing ? sw * std::tanh(phi_) : std::sqrt(alpha_ * alpha_ + omega_);
  }

  Real rho1() const { return std::sqrt(omega_) / 2.0; }
  Complex xi1() const { return {0.0, rho1()}; }

  /// Residue constant of the pole at xi1.
  Complex c1() const {
    const Real sw = std::sqrt(omega_);
    if (sign_ == Sign::Focusing) return -I_unit * sw * std::exp(-phi_);
    return I_unit * alpha_ * sw / (std::sqrt(alpha_ * alpha_ + omega_) + sw);
  }

  /// Initial profile u_s0(x).
  Real profile(Real x) const {
    const Real sw = std::sqrt(omega_);
    if (sign_ == Sign::Focusing) return sw / std::cosh(sw * x + phi_);
    // Written with e^{-x sqrt(omega)} factored out so that large x does not overflow.
    const Real s = std::sqrt(alpha_ * alpha_ + omega_) + sw;
    const Real em = std::exp(-x * sw);
    const Real denom = alpha_ * alpha_ * (1.0 - em * em) + 2.0 * sw * s;
    return 2.0 * alpha_ * sw * s * em / denom;
  }

  Complex solution(Real x, Real t) const { return std::exp(I_unit * (omega_ * t)) * profile(x); }

  /// Closed-form spectral functions of u_s0.
  Complex a(Complex k) const { return (2.0 * k + I_unit * q()) / (2.0 * k + I_unit * std::sqrt(omega_)); }

  Complex b(Complex k) const {
    const Real qq = q();
    const Real rad = sign_ == Sign::Focusing ? omega_ - qq * qq : qq * qq - omega_;
    return -I_unit * std::sqrt(std::max(rad, 0.0)) / (2.0 * k + I_unit * std::sqrt(omega_));
  }

  Complex delta(Complex k) const {
    const Real sw = std::sqrt(omega_);
    return (2.0 * k - I_unit * sw) * (2.0 * k + I_unit * q()) / (2.0 * k + I_unit * sw);
  }

 private:
  SolitonParams() = default;

  Sign sign_ = Sign::Focusing;
  Real omega_ = 1.0;
  Real phi_ = 0.0;
  Real alpha_ = 0.0;
};

}  // namespace robin_nls
