#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "robin_nls/jost.hpp"
#include "robin_nls/parallel.hpp"
#include "robin_nls/profile.hpp"
#include "robin_nls/types.hpp"

namespace robin_nls {

/// a, b, Delta (and r, Delta_a, Delta_b where defined) at one spectral point.
struct SpectralSample {
  Complex k{};
  Complex a{1.0, 0.0};
  Complex b{};
  Complex delta{};
  std::optional<Complex> r;
  std::optional<Complex> delta_a;
  std::optional<Complex> delta_b;
  bool delta_vanishes = false;

  bool is_real() const { return k.imag() == 0.0; }
};

/// Delta(k) = (2k - iq) a(k) conj(a(-conj k)) + lambda (2k + iq) b(k) conj(b(-conj k)).
inline Complex assemble_delta(Complex k, Real q, Real lambda, const JostColumn& at_k,
                              const JostColumn& at_mirror) {
  return (2.0 * k - I_unit * q) * at_k.psi2 * std::conj(at_mirror.psi2) +
         lambda * (2.0 * k + I_unit * q) * at_k.psi1 * std::conj(at_mirror.psi1);
}

enum class OnVanishingDelta { Throw, Flag };

/// Builds a sample from the Jost columns at k and at -conj(k).
inline SpectralSample assemble_sample(Complex k, Real q, Real lambda, const JostColumn& at_k,
                                      const JostColumn& at_mirror, const Tolerances& tol,
                                      OnVanishingDelta policy = OnVanishingDelta::Throw) {
  SpectralSample s;
  s.k = k;
  s.a = at_k.psi2;
  s.b = at_k.psi1;
  s.delta = assemble_delta(k, q, lambda, at_k, at_mirror);
  const Complex minus = 2.0 * k - I_unit * q;
  const Complex plus = 2.0 * k + I_unit * q;
  if (std::abs(minus) > tol.singular_tol) s.delta_a = s.delta / minus;
  if (std::abs(plus) > tol.singular_tol) s.delta_b = s.delta / plus;
  if (s.is_real()) {
    if (std::abs(s.delta) < tol.singular_tol) {
      s.delta_vanishes = true;
      if (policy == OnVanishingDelta::Throw)
        throw Error(ErrorKind::DeltaVanishes, "Delta(k) vanishes at real k = " + std::to_string(k.real()));
    } else {
      // Real k: a(-k), b(-k) are the mirror column.
      s.r = (minus * std::conj(at_k.psi1 * at_mirror.psi2) + plus * std::conj(at_k.psi2 * at_mirror.psi1)) /
            s.delta;
    }
  }
  return s;
}

/// Spectral functions of one profile. Either grid-converged (adaptive) or
/// pinned to a fixed Jost resolution; the fixed mode makes Delta an exactly
/// analytic function of k, which contour integrals and Cauchy derivatives rely on.
class SpectralEvaluator {
 public:
  explicit SpectralEvaluator(const InitialProfile& profile, Tolerances tol = {})
      : jost_(profile, tol), tol_(tol) {}

  const InitialProfile& profile() const { return jost_.profile(); }
  const Tolerances& tolerances() const { return tol_; }
  Real q() const { return profile().q(); }
  Real lambda() const { return profile().lambda(); }

  /// Pins all later evaluations to Jost refinement level `level` (-1 = adaptive).
  void pin_level(int level) { pinned_ = level; }
  int pinned_level() const { return pinned_; }

  /// Converged refinement level at k; used to choose a pinned level.
  int converged_level(Complex k) const { return jost_.solve(k).level; }

  JostColumn column(Complex k) const {
    if (k.imag() < 0) throw Error(ErrorKind::Validation, "spectral functions need Im k >= 0");
    if (pinned_ >= 0) return jost_.level(pinned_).solve(k);
    return jost_.solve(k).column;
  }

  Complex a(Complex k) const { return column(k).psi2; }
  Complex b(Complex k) const { return column(k).psi1; }

  Complex delta(Complex k) const {
    const Complex mirror = -std::conj(k);
    return assemble_delta(k, q(), lambda(), column(k), column(mirror));
  }

  SpectralSample sample(Complex k, OnVanishingDelta policy = OnVanishingDelta::Throw) const {
    const Complex mirror = -std::conj(k);
    return assemble_sample(k, q(), lambda(), column(k), column(mirror), tol_, policy);
  }

 private:
  AdaptiveJost jost_;
  Tolerances tol_;
  int pinned_ = -1;
};

/// a, b, Delta, r and Delta_a/Delta_b at one k with Im k >= 0.
inline SpectralSample spectral_sample(const InitialProfile& profile, Complex k, const Tolerances& tol = {}) {
  if (k.imag() < 0) throw Error(ErrorKind::Validation, "spectral_sample requires Im k >= 0");
  return SpectralEvaluator(profile, tol).sample(k);
}

/// Real-line samples of the spectral functions plus the identity checks run on them.
struct SpectralTable {
  Real q = 0;
  Real lambda = 1;
  std::vector<Real> k_grid;
  std::vector<SpectralSample> samples;
  Real k_max = 0;

  // Recorded invariant diagnostics.
  Real max_unit_deviation = 0;      // max | |a|^2 - lambda |b|^2 - 1 |
  Real max_symmetry_deviation = 0;  // max | conj(Delta(-k)) + Delta(k) |
  Real max_rdelta_deviation = 0;    // max | (1 - lambda |r|^2) - |Delta_a|^{-2} |
  Real large_k_constant = 0;        // C with |a(k) - 1| <= C / |k| on |k| >= 4
  bool has_vanishing_delta = false;

  std::size_t size() const { return samples.size(); }

  Real max_abs_r() const {
    Real m = 0;
    for (const auto& s : samples)
      if (s.r) m = std::max(m, std::abs(*s.r));
    return m;
  }
};

/// Validates that the grid is strictly increasing and symmetric about 0; returns
/// mirror[i] = index of -k_grid[i].
inline std::vector<std::size_t> mirror_indices(const std::vector<Real>& grid) {
  const std::size_t n = grid.size();
  if (n == 0) throw Error(ErrorKind::Validation, "k_grid is empty");
  for (std::size_t i = 1; i < n; ++i)
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorKind::Validation, "k_grid must be strictly increasing");
  const Real scale = std::max(std::abs(grid.front()), std::abs(grid.back()));
  std::vector<std::size_t> mirror(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    if (std::abs(grid[i] + grid[j]) > 1e-12 * std::max(scale, 1.0))
      throw Error(ErrorKind::Validation, "k_grid must be symmetric about 0");
    mirror[i] = j;
  }
  return mirror;
}

inline std::vector<Real> uniform_grid(Real k_max, std::size_t nodes) {
  if (nodes < 2 || !(k_max > 0)) throw Error(ErrorKind::Validation, "uniform grid needs >= 2 nodes and k_max > 0");
  std::vector<Real> g(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    g[i] = -k_max + 2.0 * k_max * static_cast<Real>(i) / static_cast<Real>(nodes - 1);
  }
  // Exact symmetry; the formula above can be off by an ulp.
  for (std::size_t i = 0; i < nodes / 2; ++i) g[nodes - 1 - i] = -g[i];
  if (nodes % 2 == 1) g[nodes / 2] = 0.0;
  return g;
}

/// Samples a, b, Delta, r on a symmetric real grid. Each node needs one Jost
/// solve; the mirror node -k reuses it for the conjugate factors.
inline SpectralTable build_table(const InitialProfile& profile, const std::vector<Real>& k_grid,
                                 const Tolerances& tol = {}, unsigned threads = 0) {
  const auto mirror = mirror_indices(k_grid);
  const std::size_t n = k_grid.size();
  SpectralEvaluator eval(profile, tol);
  std::vector<JostColumn> cols(n);
  parallel_for(n, threads, [&](std::size_t i) { cols[i] = eval.column(Complex(k_grid[i], 0.0)); });

  SpectralTable t;
  t.q = profile.q();
  t.lambda = profile.lambda();
  t.k_grid = k_grid;
  t.k_max = std::max(std::abs(k_grid.front()), std::abs(k_grid.back()));
  t.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex k(k_grid[i], 0.0);
    auto& s = t.samples[i];
    s = assemble_sample(k, t.q, t.lambda, cols[i], cols[mirror[i]], tol, OnVanishingDelta::Flag);
    t.has_vanishing_delta = t.has_vanishing_delta || s.delta_vanishes;
    const Real unit = std::norm(s.a) - t.lambda * std::norm(s.b) - 1.0;
    t.max_unit_deviation = std::max(t.max_unit_deviation, std::abs(unit));
    if (s.r && s.delta_a) {
      const Real lhs = 1.0 - t.lambda * std::norm(*s.r);
      t.max_rdelta_deviation = std::max(t.max_rdelta_deviation, std::abs(lhs - 1.0 / std::norm(*s.delta_a)));
    }
    if (std::abs(k_grid[i]) >= 4.0)
      t.large_k_constant = std::max(t.large_k_constant, std::abs(s.a - 1.0) * std::abs(k_grid[i]));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Real dev = std::abs(std::conj(t.samples[mirror[i]].delta) + t.samples[i].delta);
    t.max_symmetry_deviation = std::max(t.max_symmetry_deviation, dev);
  }
  return t;
}

/// Jump matrix v(x,t,k) = [[1 - lambda|r|^2, conj(r) e^{-2i theta}], [-lambda r e^{2i theta}, 1]].
inline Mat2 eval_jump_matrix(const SpectralSample& sample, Real lambda, Real x, Real t) {
  if (!sample.r) throw Error(ErrorKind::MissingReflection, "sample has no reflection coefficient");
  if (!sample.is_real()) throw Error(ErrorKind::Validation, "jump matrix is defined on the real line only");
  const Complex r = *sample.r;
  const Complex e = std::exp(2.0 * I_unit * theta(x, t, sample.k));
  Mat2 v;
  v << 1.0 - lambda * std::norm(r), std::conj(r) / e, -lambda * r * e, 1.0;
  return v;
}

}  // namespace robin_nls
