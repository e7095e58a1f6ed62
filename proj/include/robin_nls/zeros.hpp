#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <deque>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "robin_nls/spectral.hpp"
#include "robin_nls/types.hpp"

namespace robin_nls {

struct SpectralZero {
  Complex xi{};
  Complex c{};
  bool simple = true;
  bool a_nonzero = true;
  bool has_residue = false;
};

/// Zeros xi_j of Delta in the upper half-plane with their residue constants.
struct DiscreteSpectrum {
  std::vector<SpectralZero> zeros;
  std::vector<std::string> diagnostics;

  std::size_t count() const { return zeros.size(); }

  /// Zeros that generate poles of the RH problem (common zeros of a and Delta are dropped).
  std::vector<std::pair<Complex, Complex>> pole_data() const {
    std::vector<std::pair<Complex, Complex>> out;
    for (const auto& z : zeros)
      if (z.a_nonzero && z.has_residue) out.emplace_back(z.xi, z.c);
    return out;
  }
};

/// Winding number of Delta_a (q < 0) or Delta_b (q > 0) along the real grid,
/// which equals the number of zeros of Delta in the upper half-plane: the
/// normalizing factor's zero lies in the lower half-plane in either case.
inline int count_zeros(const SpectralTable& table) {
  if (table.has_vanishing_delta) throw Error(ErrorKind::RealZero, "Delta vanishes on the real grid");
  if (table.samples.size() < 2) throw Error(ErrorKind::Validation, "table too small for a winding count");
  const bool use_a = table.q < 0;
  std::vector<Real> phase;
  phase.reserve(table.samples.size());
  for (const auto& s : table.samples) {
    const auto& f = use_a ? s.delta_a : s.delta_b;
    if (!f) throw Error(ErrorKind::RealZero, "normalized Delta undefined on the real grid");
    phase.push_back(std::arg(*f));
  }
  Real total = 0;
  for (std::size_t i = 1; i < phase.size(); ++i) {
    Real inc = std::remainder(phase[i] - phase[i - 1], 2.0 * pi);
    if (std::abs(inc) >= pi / 2)
      throw Error(ErrorKind::PhaseJump, "phase increment of " + std::to_string(inc) + " near k = " +
                                            std::to_string(table.k_grid[i]) + "; refine the grid");
    total += inc;
  }
  // Both normalized functions tend to 1 at infinity; the closing arc adds
  // minus the end phases.
  constexpr Real tail_limit = pi / 16;
  if (std::abs(phase.front()) >= tail_limit || std::abs(phase.back()) >= tail_limit)
    throw Error(ErrorKind::TailPhase, "normalized Delta has not settled near 1 at the grid ends; raise k_max");
  const Real winding = (total - phase.back() + phase.front()) / (2.0 * pi);
  const auto n = static_cast<int>(std::lround(winding));
  if (n < 0) throw Error(ErrorKind::PhaseJump, "negative winding number");
  return n;
}

/// Axis-aligned rectangle [re_lo, re_hi] x [im_lo, im_hi] in the closed upper half-plane.
struct SearchRegion {
  Real re_lo = -4, re_hi = 4, im_lo = 0, im_hi = 4;

  static SearchRegion for_kmax(Real k_max) { return {-k_max / 2, k_max / 2, 0.0, k_max / 2}; }

  bool contains(Complex z, Real margin = 0) const {
    return z.real() >= re_lo - margin && z.real() <= re_hi + margin && z.imag() >= im_lo - margin &&
           z.imag() <= im_hi + margin;
  }
  Real diameter() const { return std::hypot(re_hi - re_lo, im_hi - im_lo); }
};

namespace detail {

/// Delta evaluations memoized by k; boxes share edges during bisection.
class DeltaCache {
 public:
  explicit DeltaCache(const SpectralEvaluator& eval) : eval_(eval) {}

  Complex operator()(Complex k) {
    const std::pair<Real, Real> key{k.real(), k.imag()};
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const Complex v = eval_.delta(k);
    cache_.emplace(key, v);
    return v;
  }

  const SpectralEvaluator& evaluator() const { return eval_; }

 private:
  const SpectralEvaluator& eval_;
  std::map<std::pair<Real, Real>, Complex> cache_;
};

struct ContourResult {
  int count = 0;
  Real winding = 0;
  std::array<Complex, 3> moments{};  // (1/2 pi i) oint k^m Delta'/Delta dk, m = 0, 1, 2
};

/// Argument principle and low moments over the boundary of `box`, traversed
/// counterclockwise. Edges are sampled adaptively so that log Delta changes by
/// less than 0.2 between neighbours; the moments use integration by parts,
///   oint k^m dL = z0^m (2 pi i N) - m oint k^{m-1} L dk,
/// with L the continuous logarithm along the polyline starting at z0.
inline ContourResult box_contour(DeltaCache& delta, const SearchRegion& box, int min_per_edge = 16,
                                 int max_points = 20000) {
  const std::array<Complex, 5> corners{Complex(box.re_lo, box.im_lo), Complex(box.re_hi, box.im_lo),
                                       Complex(box.re_hi, box.im_hi), Complex(box.re_lo, box.im_hi),
                                       Complex(box.re_lo, box.im_lo)};
  std::vector<Complex> pts;
  std::vector<Complex> vals;
  for (int e = 0; e < 4; ++e) {
    // Initial uniform points on the edge, then bisect coarse segments.
    std::deque<std::pair<Complex, Complex>> pending;
    std::vector<std::pair<Complex, Complex>> edge;
    for (int i = 0; i <= min_per_edge; ++i) {
      const Complex z = corners[e] + (corners[e + 1] - corners[e]) * (static_cast<Real>(i) / min_per_edge);
      edge.emplace_back(z, delta(z));
    }
    std::size_t i = 0;
    while (i + 1 < edge.size()) {
      const auto& [z0, f0] = edge[i];
      const auto& [z1, f1] = edge[i + 1];
      if (f0 == Complex{} || f1 == Complex{})
        throw Error(ErrorKind::RealZero, "Delta vanishes on the search contour");
      const Complex dl = std::log(f1 / f0);
      if (std::abs(dl) > 0.2 && std::abs(z1 - z0) > 1e-9 && edge.size() < static_cast<std::size_t>(max_points)) {
        const Complex zm = 0.5 * (z0 + z1);
        const Complex fm = delta(zm);
        edge.insert(edge.begin() + static_cast<std::ptrdiff_t>(i) + 1, {zm, fm});
        continue;
      }
      ++i;
    }
    for (std::size_t j = 0; j + 1 < edge.size(); ++j) {
      pts.push_back(edge[j].first);
      vals.push_back(edge[j].second);
    }
  }
  pts.push_back(pts.front());
  vals.push_back(vals.front());

  // Continuous logarithm along the polyline.
  std::vector<Complex> logs(pts.size());
  logs[0] = std::log(vals[0]);
  for (std::size_t j = 1; j < pts.size(); ++j) logs[j] = logs[j - 1] + std::log(vals[j] / vals[j - 1]);
  const Complex jump = logs.back() - logs.front();
  ContourResult res;
  res.winding = jump.imag() / (2.0 * pi);
  res.count = static_cast<int>(std::lround(res.winding));
  if (std::abs(res.winding - res.count) > 0.1)
    throw Error(ErrorKind::PhaseJump, "contour winding is not close to an integer");

  Complex int_l{}, int_kl{};
  for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
    const Complex dk = pts[j + 1] - pts[j];
    int_l += 0.5 * (logs[j] + logs[j + 1]) * dk;
    int_kl += 0.5 * (pts[j] * logs[j] + pts[j + 1] * logs[j + 1]) * dk;
  }
  const Complex z0 = pts.front();
  const Complex two_pi_i = 2.0 * pi * I_unit;
  const Real n = res.count;
  res.moments[0] = n;
  res.moments[1] = n * z0 - int_l / two_pi_i;
  res.moments[2] = n * z0 * z0 - 2.0 * int_kl / two_pi_i;
  return res;
}

}  // namespace detail

/// Delta'(z) from the n-point trapezoid rule on the circle |k - z| = radius.
template <typename F>
Complex cauchy_derivative(F&& f, Complex z, Real radius, int points = 8) {
  Complex acc{};
  for (int j = 0; j < points; ++j) {
    const Complex w = std::polar(1.0, 2.0 * pi * j / points);
    acc += f(z + radius * w) / w;
  }
  return acc / (static_cast<Real>(points) * radius);
}

/// Radius used for Cauchy derivatives at a zero: min(Im xi, zero_sep) / 2.
inline Real derivative_radius(Complex xi, const Tolerances& tol) { return std::min(xi.imag(), tol.zero_sep) / 2.0; }

/// Evaluator pinned to the Jost resolution that is converged over `region`.
inline SpectralEvaluator make_contour_evaluator(const InitialProfile& profile, const SearchRegion& region,
                                                const Tolerances& tol = {}) {
  SpectralEvaluator eval(profile, tol);
  int level = 0;
  const Real mid = 0.5 * (region.re_lo + region.re_hi);
  for (Complex k : {Complex(mid, 0.5 * (region.im_lo + region.im_hi)), Complex(region.re_lo, region.im_hi),
                    Complex(region.re_hi, region.im_hi), Complex(region.re_hi, region.im_lo),
                    Complex(mid, std::max(region.im_lo, 1e-3))}) {
    level = std::max(level, eval.converged_level(k));
  }
  eval.pin_level(level);
  return eval;
}

/// Newton polish of a simple zero of Delta. For lambda = 1 the iterate is kept on
/// the imaginary axis, where the symmetry of Delta places the zero.
inline Complex polish_zero(const SpectralEvaluator& eval, Complex z, const Tolerances& tol, int max_iter = 60) {
  const bool imaginary_axis = eval.lambda() > 0;
  if (imaginary_axis) z = Complex(0.0, z.imag());
  auto delta = [&](Complex k) { return eval.delta(k); };
  for (int it = 0; it < max_iter; ++it) {
    if (!(z.imag() > 0)) throw Error(ErrorKind::NonConvergence, "Newton iterate left the upper half-plane");
    const Complex f = delta(z);
    const Complex df = cauchy_derivative(delta, z, derivative_radius(z, tol));
    if (df == Complex{}) throw Error(ErrorKind::NotSimple, "vanishing derivative at a zero of Delta");
    Complex step = f / df;
    // Damp steps that would jump out of the half-plane.
    while (z.imag() - step.imag() <= 0) step *= 0.5;
    z -= step;
    if (imaginary_axis) z = Complex(0.0, z.imag());
    if (std::abs(step) <= tol.loc_tol * std::max(1.0, std::abs(z))) {
      const Complex fz = delta(z);
      const Complex dfz = cauchy_derivative(delta, z, derivative_radius(z, tol));
      if (std::abs(fz) <= tol.loc_tol * std::abs(dfz)) return z;
    }
  }
  throw Error(ErrorKind::NonConvergence, "Newton iteration for a zero of Delta did not converge");
}

/// Locates `count` zeros of Delta inside `region` by recursive bisection with
/// contour moments, followed by Newton polishing. Residues are left empty.
inline DiscreteSpectrum locate_zeros(const SpectralEvaluator& eval, int count, const SearchRegion& region,
                                     const Tolerances& tol = {}) {
  DiscreteSpectrum spec;
  if (count < 0) throw Error(ErrorKind::Validation, "negative zero count");
  if (count == 0) return spec;
  detail::DeltaCache cache(eval);
  std::vector<Complex> found;
  std::vector<SearchRegion> work{region};
  int boxes = 0;
  while (!work.empty()) {
    const SearchRegion box = work.back();
    work.pop_back();
    if (++boxes > 200) throw Error(ErrorKind::CountMismatch, "zero isolation did not terminate");
    const auto res = detail::box_contour(cache, box);
    if (res.count == 0) continue;

    bool accepted = false;
    if (res.count <= 2) {
      std::vector<Complex> seeds;
      if (res.count == 1) {
        seeds.push_back(res.moments[1]);
      } else {
        // z^2 - s1 z + (s1^2 - s2)/2 = 0 has the two zeros as roots.
        const Complex s1 = res.moments[1], s2 = res.moments[2];
        const Complex disc = std::sqrt(2.0 * s2 - s1 * s1);
        if (std::abs(disc) < tol.zero_sep && box.diameter() < 10 * tol.zero_sep)
          throw Error(ErrorKind::NotSimple, "two zeros closer than zero_sep (multiplicity >= 2?)");
        seeds.push_back(0.5 * (s1 + disc));
        seeds.push_back(0.5 * (s1 - disc));
      }
      std::vector<Complex> polished;
      try {
        for (Complex s : seeds) {
          if (!(s.imag() > 0)) s = Complex(s.real(), 0.5 * (box.im_lo + box.im_hi));
          const Complex z = polish_zero(eval, s, tol);
          if (!box.contains(z, 1e-12)) throw Error(ErrorKind::NonConvergence, "polished zero left its box");
          polished.push_back(z);
        }
        if (polished.size() == 2 && std::abs(polished[0] - polished[1]) < tol.zero_sep)
          throw Error(ErrorKind::NonConvergence, "seeds converged to the same zero");
        accepted = true;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NonConvergence) throw;
      }
      if (accepted) found.insert(found.end(), polished.begin(), polished.end());
    }
    if (accepted) continue;

    if (box.diameter() < tol.zero_sep) {
      if (res.count >= 2) throw Error(ErrorKind::NotSimple, "cluster of zeros below zero_sep");
      throw Error(ErrorKind::NonConvergence, "could not isolate a zero of Delta");
    }
    // Off-centre split so that symmetric configurations (zeros on iR) never
    // sit on a cut.
    constexpr Real frac = 0.4615;
    SearchRegion a = box, b = box;
    if (box.re_hi - box.re_lo >= box.im_hi - box.im_lo) {
      const Real cut = box.re_lo + frac * (box.re_hi - box.re_lo);
      a.re_hi = cut;
      b.re_lo = cut;
    } else {
      const Real cut = box.im_lo + frac * (box.im_hi - box.im_lo);
      a.im_hi = cut;
      b.im_lo = cut;
    }
    work.push_back(a);
    work.push_back(b);
  }
  std::sort(found.begin(), found.end(), [](Complex x, Complex y) { return x.imag() > y.imag(); });
  if (static_cast<int>(found.size()) != count)
    throw Error(ErrorKind::CountMismatch, "located " + std::to_string(found.size()) + " zeros, expected " +
                                              std::to_string(count));
  for (std::size_t i = 0; i < found.size(); ++i) {
    SpectralZero z;
    z.xi = found[i];
    for (std::size_t j = 0; j < found.size(); ++j) {
      if (i != j && std::abs(found[i] - found[j]) < tol.zero_sep) {
        z.simple = false;
        spec.diagnostics.push_back("NotSimple: zeros closer than zero_sep are indeterminate");
      }
    }
    spec.zeros.push_back(z);
  }
  return spec;
}

inline DiscreteSpectrum locate_zeros(const InitialProfile& profile, int count, const SearchRegion& region,
                                     const Tolerances& tol = {}) {
  const auto eval = make_contour_evaluator(profile, region, tol);
  return locate_zeros(eval, count, region, tol);
}

/// c_j = -lambda conj(b(-conj xi_j)) (2 xi_j + i q) / (a(xi_j) Delta'(xi_j)).
/// A zero shared with a(k) is flagged (AZero) and excluded from the pole data.
/// `radius_scale` multiplies the Cauchy derivative radius.
inline DiscreteSpectrum residue_constants(const SpectralEvaluator& eval, DiscreteSpectrum spectrum,
                                          const Tolerances& tol = {}, Real radius_scale = 1.0) {
  const Real lambda = eval.lambda();
  const Real q = eval.q();
  auto delta = [&](Complex k) { return eval.delta(k); };
  for (auto& z : spectrum.zeros) {
    const JostColumn at_xi = eval.column(z.xi);
    const JostColumn at_mirror = eval.column(-std::conj(z.xi));
    const Complex a = at_xi.psi2;
    if (std::abs(a) <= tol.a_zero_tol) {
      z.a_nonzero = false;
      z.has_residue = false;
      spectrum.diagnostics.push_back("AZero: a(xi) vanishes at xi = (" + std::to_string(z.xi.real()) + ", " +
                                     std::to_string(z.xi.imag()) + "); zero dropped from the pole list");
      continue;
    }
    const Complex d_delta = cauchy_derivative(delta, z.xi, radius_scale * derivative_radius(z.xi, tol));
    z.c = -lambda * std::conj(at_mirror.psi1) * (2.0 * z.xi + I_unit * q) / (a * d_delta);
    if (std::abs(z.c) <= tol.singular_tol)
      spectrum.diagnostics.push_back("residue constant vanishes at a zero of Delta");
    z.has_residue = true;
  }
  return spectrum;
}

inline DiscreteSpectrum residue_constants(const InitialProfile& profile, DiscreteSpectrum spectrum,
                                          const SearchRegion& region, const Tolerances& tol = {}) {
  const auto eval = make_contour_evaluator(profile, region, tol);
  return residue_constants(eval, std::move(spectrum), tol);
}

/// count -> locate -> residues with one pinned evaluator.
inline DiscreteSpectrum discrete_spectrum(const InitialProfile& profile, const SpectralTable& table,
                                          const Tolerances& tol = {}) {
  const int m = count_zeros(table);
  const auto region = SearchRegion::for_kmax(table.k_max);
  const auto eval = make_contour_evaluator(profile, region, tol);
  return residue_constants(eval, locate_zeros(eval, m, region, tol), tol);
}

}  // namespace robin_nls
