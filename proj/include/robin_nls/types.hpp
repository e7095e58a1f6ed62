#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace robin_nls {

using Real = double;
using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

inline constexpr Complex I_unit{0.0, 1.0};
inline constexpr Real pi = std::numbers::pi;

/// Failure categories shared by every module. The CLI maps them onto exit codes.
enum class ErrorKind {
  Validation,
  NonDecayingTail,
  StepUnderflow,
  DeltaVanishes,
  MissingReflection,
  RealZero,
  PhaseJump,
  TailPhase,
  CountMismatch,
  NotSimple,
  AZero,
  DomainError,
  PoleEvaluation,
  SingularSystem,
  SingularW,
  ReflectionTail,
  SolitonDenominator,
  NonConvergence,
  BoundaryContamination,
  RegimeMismatch,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return "Validation";
    case ErrorKind::NonDecayingTail: return "NonDecayingTail";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::DeltaVanishes: return "DeltaVanishes";
    case ErrorKind::MissingReflection: return "MissingReflection";
    case ErrorKind::RealZero: return "RealZero";
    case ErrorKind::PhaseJump: return "PhaseJump";
    case ErrorKind::TailPhase: return "TailPhase";
    case ErrorKind::CountMismatch: return "CountMismatch";
    case ErrorKind::NotSimple: return "NotSimple";
    case ErrorKind::AZero: return "AZero";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::PoleEvaluation: return "PoleEvaluation";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::SingularW: return "SingularW";
    case ErrorKind::ReflectionTail: return "ReflectionTail";
    case ErrorKind::SolitonDenominator: return "SolitonDenominator";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::BoundaryContamination: return "BoundaryContamination";
    case ErrorKind::RegimeMismatch: return "RegimeMismatch";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Sign of the nonlinearity: +1 defocusing, -1 focusing.
enum class Sign : int { Focusing = -1, Defocusing = 1 };

inline Real as_real(Sign s) { return static_cast<Real>(static_cast<int>(s)); }

inline Sign sign_from_int(int v) {
  if (v == 1) return Sign::Defocusing;
  if (v == -1) return Sign::Focusing;
  throw Error(ErrorKind::Validation, "lambda must be +1 or -1, got " + std::to_string(v));
}

/// Numerical tolerances. Defaults are the reference values; all are overridable
/// from a tolerance file.
struct Tolerances {
  Real tail_tol = 1e-10;
  Real unit_tol = 1e-8;
  Real conv_tol = 1e-7;
  Real singular_tol = 1e-9;
  Real zero_sep = 1e-3;
  Real loc_tol = 1e-8;
  // |a(xi)| below this marks a common zero of a and Delta. Looser than
  // singular_tol because a(xi) carries the Jost discretization error.
  Real a_zero_tol = 1e-6;
  Real mass_tol = 1e-7;
  Real energy_tol = 1e-6;
  Real reflect_tol = 1e-4;
  int max_refinements = 6;

  void validate() const {
    auto positive = [](Real v, const char* name) {
      if (!(v > 0)) throw Error(ErrorKind::Validation, std::string(name) + " must be positive");
    };
    positive(tail_tol, "tail_tol");
    positive(unit_tol, "unit_tol");
    positive(conv_tol, "conv_tol");
    positive(singular_tol, "singular_tol");
    positive(zero_sep, "zero_sep");
    positive(loc_tol, "loc_tol");
    positive(a_zero_tol, "a_zero_tol");
    positive(mass_tol, "mass_tol");
    positive(energy_tol, "energy_tol");
    positive(reflect_tol, "reflect_tol");
    if (max_refinements < 1) throw Error(ErrorKind::Validation, "max_refinements must be >= 1");
  }
};

/// theta(x, t, k) = k x + 2 k^2 t, the phase of the RH jump.
inline Complex theta(Real x, Real t, Complex k) { return k * x + 2.0 * k * k * t; }

struct PhasePoint {
  Real x = 0;
  Real t = 0;
  Complex k{};

  Complex phase() const { return theta(x, t, k); }
};

}  // namespace robin_nls
