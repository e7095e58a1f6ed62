#pragma once

#include <cmath>
#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "robin_nls/soliton_params.hpp"
#include "robin_nls/types.hpp"

namespace robin_nls {

/// Sampled initial datum u0 on x_i = i h, i = 0..N, together with the sign of
/// the nonlinearity and the Robin parameter q.
class InitialProfile {
 public:
  InitialProfile(std::vector<Complex> samples, Real h, Sign sign, Real q,
                 Real tail_tol = Tolerances{}.tail_tol)
      : samples_(std::move(samples)), h_(h), sign_(sign), q_(q) {
    if (!(h_ > 0)) throw Error(ErrorKind::Validation, "grid spacing h must be positive");
    if (samples_.size() < 3) throw Error(ErrorKind::Validation, "profile needs N >= 2 (at least 3 samples)");
    if (q_ == 0.0) throw Error(ErrorKind::Validation, "q = 0 is not supported: Delta(0) vanishes");
    if (!std::isfinite(q_)) throw Error(ErrorKind::Validation, "q must be finite");
    for (const auto& s : samples_)
      if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw Error(ErrorKind::Validation, "profile samples must be finite");
    if (std::abs(samples_.back()) > tail_tol)
      throw Error(ErrorKind::NonDecayingTail,
                  "|u0(L)| = " + std::to_string(std::abs(samples_.back())) + " exceeds tail_tol");
  }

  /// Samples an analytic profile on [0, L] with spacing h (L is rounded up to a multiple of h).
  static InitialProfile from_function(const std::function<Complex(Real)>& u0, Real h, Real length,
                                      Sign sign, Real q, Real tail_tol = Tolerances{}.tail_tol) {
    if (!(h > 0) || !(length > 0)) throw Error(ErrorKind::Validation, "h and L must be positive");
    const auto n = static_cast<std::size_t>(std::ceil(length / h - 1e-9));
    std::vector<Complex> s(n + 1);
    for (std::size_t i = 0; i <= n; ++i) s[i] = u0(static_cast<Real>(i) * h);
    return InitialProfile(std::move(s), h, sign, q, tail_tol);
  }

  static InitialProfile soliton(const SolitonParams& p, Real h = 1.0 / 128, Real length = 32.0,
                                Real scale = 1.0) {
    return from_function([&](Real x) { return Complex(scale * p.profile(x)); }, h, length, p.sign(), p.q());
  }

  static InitialProfile gaussian(Real amplitude, Sign sign, Real q, Real h = 1.0 / 128,
                                 Real length = 12.0) {
    return from_function([=](Real x) { return Complex(amplitude * std::exp(-x * x)); }, h, length, sign, q);
  }

  static InitialProfile zero(Sign sign, Real q, Real h = 1.0 / 16, Real length = 4.0) {
    return from_function([](Real) { return Complex{}; }, h, length, sign, q);
  }

  std::span<const Complex> samples() const { return samples_; }
  std::size_t intervals() const { return samples_.size() - 1; }
  Real h() const { return h_; }
  Real length() const { return h_ * static_cast<Real>(intervals()); }
  Sign sign() const { return sign_; }
  Real lambda() const { return as_real(sign_); }
  Real q() const { return q_; }

  bool is_zero() const {
    for (const auto& s : samples_)
      if (s != Complex{}) return false;
    return true;
  }

  /// u0 at an arbitrary x in [0, L] by local cubic Lagrange interpolation.
  Complex value_at(Real x) const {
    const std::size_t n = intervals();
    if (x <= 0) return samples_.front();
    if (x >= length()) return samples_.back();
    const Real s = x / h_;
    if (n < 3) {
      const auto c = std::min(static_cast<std::size_t>(s), n - 1);
      const Real f = s - static_cast<Real>(c);
      return (1.0 - f) * samples_[c] + f * samples_[c + 1];
    }
    auto cell = static_cast<std::size_t>(s);
    if (cell >= n) cell = n - 1;
    // Four-point stencil around the cell, shifted at the edges.
    std::size_t first = cell == 0 ? 0 : cell - 1;
    if (first + 3 > n) first = n - 3;
    const Real xi = s - static_cast<Real>(first);
    Complex acc{};
    for (int j = 0; j < 4; ++j) {
      Real w = 1.0;
      for (int m = 0; m < 4; ++m)
        if (m != j) w *= (xi - m) / static_cast<Real>(j - m);
      acc += w * samples_[first + static_cast<std::size_t>(j)];
    }
    return acc;
  }

  /// Same data with every sample multiplied by `factor`.
  InitialProfile scaled(Real factor) const {
    std::vector<Complex> s(samples_);
    for (auto& v : s) v *= factor;
    return InitialProfile(std::move(s), h_, sign_, q_);
  }

 private:
  std::vector<Complex> samples_;
  Real h_;
  Sign sign_;
  Real q_;
};

}  // namespace robin_nls
