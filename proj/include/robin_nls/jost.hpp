#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

#include "robin_nls/profile.hpp"
#include "robin_nls/types.hpp"

namespace robin_nls {

/// Second column psi(0, k) = (b(k), a(k)) of the Jost solution.
struct JostColumn {
  Complex psi1{};
  Complex psi2{1.0, 0.0};
};

namespace detail {

// Minimal 2x2 complex matrix; the integrator inner loop avoids Eigen's
// expression machinery for speed.
struct M2 {
  Complex a, b, c, d;  // [[a, b], [c, d]]
};


// sinh(z)/z, with a series near the origin.
inline Complex sinhc(Complex z) {
  const Complex z2 = z * z;
  if (std::abs(z2) < 1e-6) return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
  return std::sinh(z) / z;
}

/// exp of a 2x2 matrix via the Cayley-Hamilton closed form.
inline M2 expm(const M2& m) {
  const Complex s = 0.5 * (m.a + m.d);
  const Complex h = 0.5 * (m.a - m.d);
  const Complex delta = std::sqrt(h * h + m.b * m.c);
  const Complex es = std::exp(s);
  const Complex ch = std::cosh(delta);
  const Complex sc = sinhc(delta);
  return {es * (ch + sc * h), es * sc * m.b, es * sc * m.c, es * (ch - sc * h)};
}

}  // namespace detail

/// Fixed-resolution integrator for the x-part ODE of the second Jost column,
///
///   psi1' = -2ik psi1 + u0 psi2,   psi2' = lambda conj(u0) psi1,
///
/// marched from x = L (psi = (0,1)) down to x = 0 with the fourth-order
/// two-point Gauss Magnus scheme. The constant part -2ik sigma is exponentiated
/// exactly, so the e^{-2ik(x-x')} oscillation costs nothing in accuracy.
/// Each grid cell is split into `substeps` Magnus steps; u0 at the Gauss nodes
/// is taken from the profile's cubic interpolant.
class JostSolver {
 public:
  JostSolver(const InitialProfile& profile, int substeps) : lambda_(profile.lambda()), substeps_(substeps) {
    if (substeps < 1) throw Error(ErrorKind::Validation, "substeps must be >= 1");
    const std::size_t steps = profile.intervals() * static_cast<std::size_t>(substeps);
    step_ = profile.h() / substeps;
    nodes_.resize(steps);
    constexpr Real c_lo = 0.5 - 0.28867513459481288225;  // 1/2 - sqrt(3)/6
    constexpr Real c_hi = 0.5 + 0.28867513459481288225;
    // Step j (counted from the right end) goes from x_a = L - j H to x_a - H.
    const Real length = profile.length();
    for (std::size_t j = 0; j < steps; ++j) {
      const Real xa = length - static_cast<Real>(j) * step_;
      nodes_[j] = {profile.value_at(xa - c_lo * step_), profile.value_at(xa - c_hi * step_)};
    }
    zero_ = profile.is_zero();
  }

  int substeps() const { return substeps_; }
  Real step() const { return step_; }

  JostColumn solve(Complex k) const {
    if (zero_) return {};
    Complex p1{0.0, 0.0};
    Complex p2{1.0, 0.0};
    const Real tau = -step_;
    const Complex dk = -2.0 * I_unit * k;
    constexpr Real comm = 0.14433756729740644113;  // sqrt(3)/12
    const Complex diag = tau * dk;
    for (const auto& [u1, u2] : nodes_) {
      const Complex v1 = lambda_ * std::conj(u1);
      const Complex v2 = lambda_ * std::conj(u2);
      // Omega = tau/2 (A1 + A2) + sqrt(3)/12 tau^2 [A2, A1],  A = [[dk, u], [v, 0]].
      // [A2, A1] = [[u2 v1 - u1 v2, dk (u1 - u2)], [dk (v2 - v1), u1 v2 - u2 v1]].
      const Complex t2 = comm * tau * tau;
      const Complex cross = u2 * v1 - u1 * v2;
      const detail::M2 omega{diag + t2 * cross, 0.5 * tau * (u1 + u2) + t2 * dk * (u1 - u2),
                       0.5 * tau * (v1 + v2) + t2 * dk * (v2 - v1), -t2 * cross};
      // |e^{tr Omega}| = |e^{tau dk}| <= 1 for Im k >= 0 since tau < 0.
      const auto e = detail::expm(omega);
      const Complex n1 = e.a * p1 + e.b * p2;
      const Complex n2 = e.c * p1 + e.d * p2;
      p1 = n1;
      p2 = n2;
    }
    return {p1, p2};
  }

 private:
  Real lambda_;
  int substeps_;
  Real step_ = 0;
  bool zero_ = false;
  std::vector<std::array<Complex, 2>> nodes_;
};

/// Grid-converged Jost solver: doubles the Magnus substeps until two successive
/// resolutions agree to conv_tol. Resolution levels are built lazily and cached;
/// the object is safe to share between threads, and copies share the cache.
class AdaptiveJost {
 public:
  explicit AdaptiveJost(const InitialProfile& profile, Tolerances tol = {})
      : profile_(profile), tol_(tol), cache_(std::make_shared<Cache>()) {
    cache_->levels.resize(static_cast<std::size_t>(tol.max_refinements) + 1);
  }

  const InitialProfile& profile() const { return profile_; }
  const Tolerances& tolerances() const { return tol_; }

  const JostSolver& level(int l) const {
    if (l < 0 || l > tol_.max_refinements)
      throw Error(ErrorKind::StepUnderflow, "requested refinement level beyond max_refinements");
    std::lock_guard lock(cache_->mutex);
    auto& slot = cache_->levels[static_cast<std::size_t>(l)];
    if (!slot) slot = std::make_unique<JostSolver>(profile_, 1 << l);
    return *slot;
  }

  struct Result {
    JostColumn column;
    int level = 0;
    Real change = 0;
  };

  Result solve(Complex k) const {
    if (k.imag() < 0) throw Error(ErrorKind::Validation, "Jost column requires Im k >= 0");
    if (profile_.is_zero()) return {JostColumn{}, 0, 0.0};
    JostColumn prev = level(0).solve(k);
    for (int l = 1; l <= tol_.max_refinements; ++l) {
      const JostColumn cur = level(l).solve(k);
      const Real change = std::hypot(std::abs(cur.psi1 - prev.psi1), std::abs(cur.psi2 - prev.psi2));
      if (change <= tol_.conv_tol) return {cur, l, change};
      prev = cur;
    }
    throw Error(ErrorKind::StepUnderflow, "Jost solve did not converge within max_refinements");
  }

 private:
  InitialProfile profile_;
  Tolerances tol_;
  // Shared between copies: the levels depend only on the profile.
  struct Cache {
    std::mutex mutex;
    std::vector<std::unique_ptr<JostSolver>> levels;
  };
  std::shared_ptr<Cache> cache_;
};

/// psi(0, k) for the given profile, converged to tol.conv_tol under grid refinement.
inline JostColumn solve_jost(const InitialProfile& profile, Complex k, const Tolerances& tol = {}) {
  return AdaptiveJost(profile, tol).solve(k).column;
}

}  // namespace robin_nls
