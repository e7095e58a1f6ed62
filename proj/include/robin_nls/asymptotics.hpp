#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/interpolators/makima.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include "robin_nls/soliton_params.hpp"
#include "robin_nls/soliton_rh.hpp"
#include "robin_nls/spectral.hpp"
#include "robin_nls/types.hpp"
#include "robin_nls/zeros.hpp"

namespace robin_nls {

/// log Gamma(z) for complex z, continuous away from the non-positive integers.
/// Stirling series at Re z >= 15 plus the downward recurrence.
inline Complex log_gamma(Complex z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw Error(ErrorKind::DomainError, "log Gamma has a pole at non-positive integers");
  Complex shift{};
  while (z.real() < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  // Bernoulli terms B_{2n} / (2n (2n-1) z^{2n-1}), n = 1..7.
  constexpr double coef[] = {1.0 / 12,        -1.0 / 360,        1.0 / 1260,    -1.0 / 1680,
                             1.0 / 1188,      -691.0 / 360360,   1.0 / 156};
  Complex series{};
  Complex p = inv;
  for (double c : coef) {
    series += c * p;
    p *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi) + series - shift;
}

/// nu(y) = ln(1 - lambda |y|^2) / (2 pi).
inline Real nu_of(Complex y, Real lambda) {
  const Real s = 1.0 - lambda * std::norm(y);
  if (!(s > 0)) throw Error(ErrorKind::DomainError, "1 - lambda |r|^2 must be positive");
  return std::log(s) / (2.0 * pi);
}

/// beta(y) = sqrt|nu| e^{i(pi/4 - arg y - arg Gamma(i nu))}; zero when y = 0.
inline Complex beta_of(Complex y, Real lambda) {
  if (y == Complex{}) return {};
  const Real nu = nu_of(y, lambda);
  if (nu == 0.0) return {};
  const Real arg_gamma = log_gamma(Complex(0.0, nu)).imag();
  return std::sqrt(std::abs(nu)) * std::exp(I_unit * (pi / 4 - std::arg(y) - arg_gamma));
}

/// r(s) on the real half-line (-inf, 0] used by the steepest-descent formulas.
///
/// Beyond the left end k_lo the reflection is modelled by the algebraic decay
/// ln(1 - lambda|r(s)|^2) ~ g(k_lo) (k_lo/s)^2 typical of half-line data with
/// u0(0) != 0; the tail is integrated in closed variable form.
class ReflectionFunction {
 public:
  /// r identically zero on the whole line.
  ReflectionFunction() : fn_([](Real) { return Complex{}; }), k_lo_(-std::numeric_limits<Real>::infinity()), zero_(true) {}

  ReflectionFunction(std::function<Complex(Real)> fn, Real k_lo, Real lambda) : fn_(std::move(fn)), k_lo_(k_lo) {
    if (!(k_lo_ < 0)) throw Error(ErrorKind::Validation, "reflection domain must extend to negative k");
    g_lo_ = g_of(fn_(k_lo_), lambda);
  }

  /// Cubic interpolant of the table's reflection coefficient. Fails with
  /// ReflectionTail if ln(1 - lambda|r|^2) at the left edge exceeds tail_tol.
  static ReflectionFunction from_table(const SpectralTable& table, Real tail_tol = 1e-3) {
    const auto& k = table.k_grid;
    const std::size_t n = k.size();
    if (n < 4) throw Error(ErrorKind::Validation, "table too small for interpolation");
    std::vector<Real> re(n), im(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!table.samples[i].r) throw Error(ErrorKind::MissingReflection, "table has a node without r");
      re[i] = table.samples[i].r->real();
      im[i] = table.samples[i].r->imag();
    }
    const Real step = (k.back() - k.front()) / static_cast<Real>(n - 1);
    bool uniform = true;
    for (std::size_t i = 1; i < n && uniform; ++i)
      uniform = std::abs(k[i] - k[i - 1] - step) <= 1e-9 * step;
    std::function<Complex(Real)> fn;
    if (uniform) {
      using Spline = boost::math::interpolators::cardinal_cubic_b_spline<Real>;
      auto sr = std::make_shared<Spline>(re.data(), n, k.front(), step);
      auto si = std::make_shared<Spline>(im.data(), n, k.front(), step);
      fn = [sr, si](Real s) { return Complex((*sr)(s), (*si)(s)); };
    } else {
      using Makima = boost::math::interpolators::makima<std::vector<Real>>;
      auto mr = std::make_shared<Makima>(std::vector<Real>(k), std::move(re));
      auto mi = std::make_shared<Makima>(std::vector<Real>(k), std::move(im));
      fn = [mr, mi](Real s) { return Complex((*mr)(s), (*mi)(s)); };
    }
    ReflectionFunction out(std::move(fn), k.front(), table.lambda);
    out.k_hi_ = k.back();
    out.knots_ = k;
    if (std::abs(out.g_lo_) > tail_tol)
      throw Error(ErrorKind::ReflectionTail, "reflection not negligible at the table edge; raise k_max");
    return out;
  }

  static ReflectionFunction zero() { return {}; }

  Complex operator()(Real s) const {
    if (zero_) return {};
    if (s < k_lo_ || (k_hi_ && s > *k_hi_)) throw Error(ErrorKind::Validation, "r requested outside its domain");
    return fn_(s);
  }

  Real k_lo() const { return k_lo_; }
  bool is_zero() const { return zero_; }
  Real tail_value() const { return g_lo_; }
  /// Interpolation nodes; the interpolant is only piecewise smooth across them.
  const std::vector<Real>& knots() const { return knots_; }

  static Real g_of(Complex r, Real lambda) {
    const Real s = 1.0 - lambda * std::norm(r);
    if (!(s > 0)) throw Error(ErrorKind::DomainError, "1 - lambda |r|^2 must be positive");
    return std::log(s);
  }

 private:
  std::function<Complex(Real)> fn_;
  Real k_lo_;
  std::optional<Real> k_hi_;
  std::vector<Real> knots_;
  Real g_lo_ = 0;
  bool zero_ = false;
};

/// Reflection coefficient plus pole data: everything the long-time formulas read.
struct ScatteringData {
  Real lambda = 1;
  Real q = 1;
  ReflectionFunction r;
  std::vector<std::pair<Complex, Complex>> poles;

  static ScatteringData from(const SpectralTable& table, const DiscreteSpectrum& spectrum) {
    return {table.lambda, table.q, ReflectionFunction::from_table(table), spectrum.pole_data()};
  }

  static ScatteringData reflectionless(Real lambda, Real q, std::vector<std::pair<Complex, Complex>> poles) {
    return {lambda, q, ReflectionFunction::zero(), std::move(poles)};
  }

  static ScatteringData from_soliton(const SolitonParams& p) {
    return reflectionless(p.lambda(), p.q(), {{p.xi1(), p.c1()}});
  }
};

namespace detail {

/// Panels for int_a^b: broken at the knots, at most 1/8 wide, and graded
/// towards Re k so that each panel is no wider than half its distance to k.
inline std::vector<Real> panels(Real a, Real b, const std::vector<Real>& knots, std::optional<Complex> k = {}) {
  std::vector<Real> cuts{a};
  for (Real x : knots)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::vector<Real> out{a};
  auto refine = [&](auto&& self, Real lo, Real hi, int depth) -> void {
    Real limit = 0.125;
    if (k) {
      const Real nearest = std::clamp(k->real(), lo, hi);
      limit = std::min(limit, 0.5 * std::abs(Complex(nearest) - *k));
    }
    if (hi - lo > limit && depth < 60) {
      const Real mid = 0.5 * (lo + hi);
      self(self, lo, mid, depth + 1);
      self(self, mid, hi, depth + 1);
    } else {
      out.push_back(hi);
    }
  };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i]) refine(refine, cuts[i], cuts[i + 1], 0);
  return out;
}

/// 10-point Gauss-Legendre on each panel.
template <typename F>
Complex integrate(F&& f, const std::vector<Real>& cuts) {
  using GL = boost::math::quadrature::gauss<Real, 10>;
  Complex acc{};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Real lo = cuts[i], hi = cuts[i + 1];
    const Real half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    const auto& x = GL::abscissa();
    const auto& w = GL::weights();
    Complex part{};
    for (std::size_t j = 0; j < x.size(); ++j) {
      part += x[j] == 0.0 ? w[j] * f(mid) : w[j] * (f(mid - half * x[j]) + f(mid + half * x[j]));
    }
    acc += half * part;
  }
  return acc;
}

template <typename F>
Complex integrate(F&& f, Real a, Real b) {
  if (!(b > a)) return {};
  return integrate(std::forward<F>(f), panels(a, b, {}));
}

}  // namespace detail

/// int_{-inf}^{k0} ln(1 - lambda|r(s)|^2) / (s - k) ds for Im k != 0.
inline Complex cauchy_log_integral(const ScatteringData& data, Real k0, Complex k) {
  const auto& r = data.r;
  if (r.is_zero()) return {};
  const Real lo = r.k_lo();
  if (k0 < lo) throw Error(ErrorKind::Validation, "k0 lies left of the reflection domain");
  auto g = [&](Real s) { return ReflectionFunction::g_of(r(s), data.lambda); };
  Complex body = k0 > lo ? detail::integrate([&](Real s) { return g(s) / (s - k); }, detail::panels(lo, k0, r.knots(), k))
                         : Complex{};
  // Tail: s = lo / v, g(s) = g_lo v^2.
  const Real g_lo = r.tail_value();
  if (g_lo != 0.0) {
    body += detail::integrate([&](Real v) { return Complex(g_lo * std::abs(lo) * v) / (lo - k * v); }, 0.0, 1.0);
  }
  return body;
}

/// delta(zeta, k) = exp[(1/2 pi i) int_{-inf}^{k0} ln(1 - lambda|r|^2)/(s - k) ds].
inline Complex delta_function(const ScatteringData& data, Real k0, Complex k) {
  if (k.imag() == 0.0) throw Error(ErrorKind::Validation, "delta is evaluated off the real line");
  return std::exp(cauchy_log_integral(data, k0, k) / (2.0 * pi * I_unit));
}

/// chi(zeta, k0) = -(1/2 pi i) int_{-inf}^{k0} ln(k0 - s) d ln(1 - lambda|r(s)|^2).
/// Integrated by parts on [k_lo, k0] with the logarithmic endpoint subtracted:
///   int ln(k0-s) dg = ln(k0-k_lo)(g(k0)-g(k_lo)) + int (g(s)-g(k0))/(k0-s) ds.
inline Complex chi_function(const ScatteringData& data, Real k0) {
  const auto& r = data.r;
  if (r.is_zero()) return {};
  const Real lo = r.k_lo();
  if (k0 < lo) throw Error(ErrorKind::Validation, "k0 lies left of the reflection domain");
  auto g = [&](Real s) { return ReflectionFunction::g_of(r(s), data.lambda); };
  const Real g0 = g(k0);
  const Real g_lo = r.tail_value();
  Real total = 0;
  if (k0 > lo) {
    total = std::log(k0 - lo) * (g0 - g_lo) +
            detail::integrate([&](Real s) { return Complex(s == k0 ? 0.0 : (g(s) - g0) / (k0 - s)); },
                              detail::panels(lo, k0, r.knots()))
                .real();
  }
  if (g_lo != 0.0) {
    // s = lo / v, dg = 2 g_lo v dv and ln(k0 - lo/v) = ln(k0 v - lo) - ln v;
    // the ln v part integrates to -1/4 in closed form.
    total += 2.0 * g_lo *
             (detail::integrate([&](Real v) { return Complex(v * std::log(k0 * v - lo)); }, 0.0, 1.0).real() + 0.25);
  }
  return -Complex(total) / (2.0 * pi * I_unit);
}

struct AsymptoticCoefficients {
  Real x = 0, t = 0;
  Real zeta = 0;
  Real k0 = 0;
  Complex r_k0{};
  Real nu = 0;
  Complex beta{};
  Complex chi{};
  Complex delta0{1.0, 0.0};
  Complex Phi_k0{};
  std::optional<Complex> d1;

  /// (8t)^{i nu}.
  Complex power_8t() const { return std::exp(I_unit * nu * std::log(8.0 * t)); }
};

inline AsymptoticCoefficients coefficients(const ScatteringData& data, Real x, Real t) {
  if (!(t > 0)) throw Error(ErrorKind::Validation, "asymptotics need t > 0");
  if (!(x >= 0)) throw Error(ErrorKind::Validation, "asymptotics need x >= 0");
  AsymptoticCoefficients c;
  c.x = x;
  c.t = t;
  c.zeta = x / t;
  c.k0 = -c.zeta / 4.0;
  c.r_k0 = data.r(c.k0);
  c.nu = nu_of(c.r_k0, data.lambda);
  c.beta = beta_of(c.r_k0, data.lambda);
  c.chi = chi_function(data, c.k0);
  c.delta0 = std::exp(I_unit * c.nu / 2.0 * std::log(8.0 * t)) * std::exp(c.chi);
  c.Phi_k0 = -4.0 * I_unit * c.k0 * c.k0;
  if (data.poles.size() == 1) {
    const auto [xi, cc] = data.poles.front();
    c.d1 = cc * std::exp(2.0 * I_unit * theta(x, t, xi)) / (xi - std::conj(xi));
  }
  return c;
}

inline AsymptoticCoefficients coefficients(const SpectralTable& table, const DiscreteSpectrum& spectrum, Real x,
                                           Real t) {
  return coefficients(ScatteringData::from(table, spectrum), x, t);
}

enum class Regime { DefocusingQNeg, DefocusingQPos, Focusing };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::DefocusingQNeg: return "defocusing_qneg";
    case Regime::DefocusingQPos: return "defocusing_qpos";
    case Regime::Focusing: return "focusing";
  }
  return "unknown";
}

inline Regime regime_from_string(std::string_view s) {
  if (s == "defocusing_qneg") return Regime::DefocusingQNeg;
  if (s == "defocusing_qpos") return Regime::DefocusingQPos;
  if (s == "focusing") return Regime::Focusing;
  throw Error(ErrorKind::Validation, "unknown regime '" + std::string(s) + "'");
}

/// Regime implied by the sign of the nonlinearity and of q.
inline Regime regime_for(Real lambda, Real q) {
  if (lambda < 0) return Regime::Focusing;
  return q < 0 ? Regime::DefocusingQNeg : Regime::DefocusingQPos;
}

struct AsymptoticProfile {
  Regime regime = Regime::DefocusingQNeg;
  Real x = 0, t = 0;
  Complex u_sol{};
  Complex u_rad1{};
  Complex u_rad2{};
  Complex u_rad{};
  Complex total{};
  Real error_order = 0.75;
};

/// Leading radiation term for lambda = 1, q < 0: no solitons.
inline AsymptoticProfile asymp_defocusing_qneg(const ScatteringData& data, const AsymptoticCoefficients& c) {
  if (data.lambda != 1.0 || !(data.q < 0) || !data.poles.empty())
    throw Error(ErrorKind::RegimeMismatch, "defocusing_qneg needs lambda = 1, q < 0 and no zeros of Delta");
  AsymptoticProfile p;
  p.regime = Regime::DefocusingQNeg;
  p.x = c.x;
  p.t = c.t;
  // 2i lim k (m_reg)_12 of the local model in m_reg_leading; r sits in the
  // jump with the opposite sign to the usual line convention.
  p.u_rad = -c.beta * c.power_8t() * std::exp(2.0 * c.chi) * std::exp(4.0 * I_unit * c.t * c.k0 * c.k0);
  p.total = p.u_rad / std::sqrt(2.0 * c.t);
  return p;
}

inline AsymptoticProfile asymp_defocusing_qneg(const ScatteringData& data, Real x, Real t) {
  return asymp_defocusing_qneg(data, coefficients(data, x, t));
}

namespace detail {

/// Leading behaviour of the pole-free solution off the real line,
///   m_reg(k) ~ (I + Y m1 Y^{-1} / ((k0 - k) sqrt(8t))) delta(k)^{sigma3},
/// Y = e^{-t Phi sigma3 / 2} delta0^{sigma3}, m1 = i [[0, -beta], [lambda conj(beta), 0]].
inline Mat2 m_reg_leading(const ScatteringData& data, const AsymptoticCoefficients& c, Complex beta, Complex k) {
  const Complex dk = delta_function(data, c.k0, k);
  const Complex y = std::exp(-c.t * c.Phi_k0) * c.delta0 * c.delta0;  // Y11 / Y22
  Mat2 n = Mat2::Zero();
  n(0, 1) = -I_unit * beta * y;
  n(1, 0) = I_unit * data.lambda * std::conj(beta) / y;
  Mat2 m = Mat2::Identity() + n / ((c.k0 - k) * std::sqrt(8.0 * c.t));
  m.col(0) *= dk;
  m.col(1) /= dk;
  return m;
}

}  // namespace detail

/// Soliton plus radiation for lambda = 1, q > 0 with one imaginary zero.
///
/// The pole is restored by a Darboux transformation of the regular solution,
/// u = u_reg + 2i (B1)_12. u_sol dresses the O(1) part delta^{sigma3} and
/// u_rad2 is the O(t^{-1/2}) remainder of the dressing.
inline AsymptoticProfile asymp_defocusing_qpos(const ScatteringData& data, const AsymptoticCoefficients& c,
                                               Real singular_tol = Tolerances{}.singular_tol) {
  if (data.lambda != 1.0 || !(data.q > 0) || data.poles.size() != 1)
    throw Error(ErrorKind::RegimeMismatch, "defocusing_qpos needs lambda = 1, q > 0 and exactly one zero");
  const auto [xi, c1] = data.poles.front();
  if (!(xi.imag() > 0)) throw Error(ErrorKind::Validation, "zero must lie in the upper half-plane");
  const Real lambda = data.lambda;
  const Real t = c.t;
  const Complex d1 = *c.d1;
  const Complex dxi = delta_function(data, c.k0, xi);
  const Real denom = lambda * std::norm(d1) - std::norm(dxi) * std::norm(dxi);
  if (std::abs(denom) < singular_tol)
    throw Error(ErrorKind::SolitonDenominator, "soliton denominator lambda|d1|^2 - |delta|^4 vanishes");
  const Complex r_reg = c.r_k0 * (c.k0 - xi) / (c.k0 - std::conj(xi));
  const Complex beta_reg = beta_of(r_reg, lambda);

  auto shift = [&](const Mat2& at_xi, const Mat2& at_xibar) {
    return darboux_dress(xi, c1, lambda, at_xi, at_xibar, c.x, t, 0.0).u_shift();
  };
  const Complex dxibar = delta_function(data, c.k0, std::conj(xi));
  Mat2 m0_xi = Mat2::Zero(), m0_xibar = Mat2::Zero();
  m0_xi(0, 0) = dxi;
  m0_xi(1, 1) = 1.0 / dxi;
  m0_xibar(0, 0) = dxibar;
  m0_xibar(1, 1) = 1.0 / dxibar;

  AsymptoticProfile p;
  p.regime = Regime::DefocusingQPos;
  p.x = c.x;
  p.t = t;
  p.u_sol = shift(m0_xi, m0_xibar);
  const Complex dressed = shift(detail::m_reg_leading(data, c, beta_reg, xi),
                                detail::m_reg_leading(data, c, beta_reg, std::conj(xi)));
  // u_reg = 2i lim k (m_reg)_12 of the same local model.
  p.u_rad1 = -beta_reg * std::exp(-t * c.Phi_k0) * c.delta0 * c.delta0 / std::sqrt(2.0);
  p.u_rad2 = (dressed - p.u_sol) * std::sqrt(t);
  p.u_rad = p.u_rad1 + p.u_rad2;
  p.total = p.u_sol + p.u_rad / std::sqrt(t);
  return p;
}

inline AsymptoticProfile asymp_defocusing_qpos(const ScatteringData& data, Real x, Real t) {
  return asymp_defocusing_qpos(data, coefficients(data, x, t));
}

/// Stationary-soliton parameters (omega~, alpha~) and phase gamma with
/// u_sol(x,t) = e^{-i gamma} u_s(x,t; alpha~, omega~).
struct EquivalentSoliton {
  Real omega = 0;
  Real alpha = 0;
  Real gamma = 0;

  SolitonParams params() const { return SolitonParams::defocusing(omega, alpha); }
  Complex operator()(Real x, Real t) const { return std::exp(-I_unit * gamma) * params().solution(x, t); }
};

inline EquivalentSoliton equivalent_soliton(const ScatteringData& data, Real x, Real t) {
  if (data.poles.size() != 1) throw Error(ErrorKind::RegimeMismatch, "equivalent soliton needs one zero");
  const auto [xi, c1] = data.poles.front();
  const Real k0 = -x / (4.0 * t);
  const Complex dxi = delta_function(data, k0, xi);
  const Complex cs = c1 / (dxi * dxi);
  EquivalentSoliton e;
  e.omega = (-4.0 * xi * xi).real();
  const Real cs2 = std::norm(cs);
  if (!(e.omega > cs2)) throw Error(ErrorKind::SolitonDenominator, "omega~ <= |c_s|^2");
  e.alpha = 2.0 * e.omega * std::sqrt(cs2) / (e.omega - cs2);
  e.gamma = std::arg(cs) - pi / 2;
  return e;
}

/// Soliton window bookkeeping of the focusing formula for zeta in [0, K].
struct FocusingWindow {
  std::vector<std::size_t> in_window;  // Z(I): Re xi in [-K/2, 0]
  std::vector<std::size_t> left;       // Z^-(I): Re xi < -K/2
  std::vector<std::size_t> box;        // -K/2 <= Re xi < k0
};

inline FocusingWindow focusing_window(const std::vector<std::pair<Complex, Complex>>& poles, Real k0, Real K) {
  FocusingWindow w;
  for (std::size_t j = 0; j < poles.size(); ++j) {
    const Real re = poles[j].first.real();
    if (re < -K / 2) w.left.push_back(j);
    else if (re <= 0.0) w.in_window.push_back(j);
    if (re >= -K / 2 && re < k0) w.box.push_back(j);
  }
  return w;
}

/// Modified data sigma^_d: c^_j = c_j prod_{Z^-} ((xi_j - xi_l)/(xi_j - conj xi_l))^2 delta(zeta, xi_j)^{-2}.
inline std::vector<std::pair<Complex, Complex>> modified_residues(const ScatteringData& data, Real k0, Real K) {
  if (data.lambda != -1.0) throw Error(ErrorKind::RegimeMismatch, "modified residues are defined for lambda = -1");
  if (!(K > 0)) throw Error(ErrorKind::Validation, "K must be positive");
  const auto w = focusing_window(data.poles, k0, K);
  std::vector<std::pair<Complex, Complex>> out;
  for (auto j : w.in_window) {
    const auto [xi, cj] = data.poles[j];
    Complex prod{1.0, 0.0};
    for (auto l : w.left) {
      const Complex xl = data.poles[l].first;
      const Complex f = (xi - xl) / (xi - std::conj(xl));
      prod *= f * f;
    }
    // exp(-(1/pi i) int g/(s - xi)) = delta(zeta, xi)^{-2}
    const Complex factor = std::exp(-cauchy_log_integral(data, k0, xi) / (pi * I_unit));
    out.emplace_back(xi, cj * prod * factor);
  }
  return out;
}

inline AsymptoticProfile asymp_focusing(const ScatteringData& data, const AsymptoticCoefficients& c, Real K) {
  if (data.lambda != -1.0) throw Error(ErrorKind::RegimeMismatch, "focusing asymptotics need lambda = -1");
  if (!(K > 0)) throw Error(ErrorKind::Validation, "K must be positive");
  if (c.zeta > K) throw Error(ErrorKind::RegimeMismatch, "zeta = x/t lies outside [0, K]");
  const Real k0 = c.k0;
  const auto w = focusing_window(data.poles, k0, K);
  const ReflectionlessData hat(data.lambda, modified_residues(data, k0, K));

  // Box indices are positions inside the modified data, which keeps the window order.
  RenormalizedBox box;
  for (std::size_t i = 0; i < w.in_window.size(); ++i)
    for (auto j : w.box)
      if (w.in_window[i] == j) box.indices.push_back(i);

  AsymptoticProfile p;
  p.regime = Regime::Focusing;
  p.x = c.x;
  p.t = c.t;
  const auto sol = solve_reflectionless(hat, c.x, c.t);
  p.u_sol = sol.u();
  Real box_arg = 0;
  for (auto j : w.box) box_arg += std::arg(k0 - data.poles[j].first);
  // chi is imaginary here, so the unimodular phase factor is e^{2 chi}.
  const Complex alpha = c.beta * std::exp(2.0 * c.chi - 4.0 * I_unit * box_arg);
  if (alpha != Complex{}) {
    const Mat2 mb = solve_renormalized(hat, box, c.x, c.t, Complex(k0, 0.0));
    const Real phase = c.x * c.x / (4.0 * c.t) + c.nu * std::log(8.0 * c.t);
    p.u_rad = mb(0, 0) * mb(0, 0) * alpha * std::exp(I_unit * phase) +
              mb(0, 1) * mb(0, 1) * std::conj(alpha) * std::exp(-I_unit * phase);
  }
  p.total = p.u_sol + p.u_rad / std::sqrt(2.0 * c.t);
  return p;
}

inline AsymptoticProfile asymp_focusing(const ScatteringData& data, Real x, Real t, Real K) {
  return asymp_focusing(data, coefficients(data, x, t), K);
}

/// Dispatches on the regime; checks it is consistent with (lambda, q).
inline AsymptoticProfile asymptotic_profile(Regime regime, const ScatteringData& data, Real x, Real t, Real K = 4.0) {
  if (regime != regime_for(data.lambda, data.q))
    throw Error(ErrorKind::RegimeMismatch, std::string("regime ") + std::string(to_string(regime)) +
                                               " is inconsistent with lambda and q");
  const auto c = coefficients(data, x, t);
  switch (regime) {
    case Regime::DefocusingQNeg: return asymp_defocusing_qneg(data, c);
    case Regime::DefocusingQPos: return asymp_defocusing_qpos(data, c);
    case Regime::Focusing: return asymp_focusing(data, c, K);
  }
  throw Error(ErrorKind::Validation, "unknown regime");
}

}  // namespace robin_nls
