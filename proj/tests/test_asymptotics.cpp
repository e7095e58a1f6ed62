#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "robin_nls/asymptotics.hpp"
#include "robin_nls/soliton_params.hpp"
#include "support.hpp"

using namespace robin_nls;
using robin_nls::testing::fails_with;

namespace {

std::function<Complex(Real)> gaussian_r(Real amp) {
  return [amp](Real s) { return Complex(amp * std::exp(-s * s / 2), 0.3 * amp * s * std::exp(-s * s / 2)); };
}

ScatteringData synthetic(Real lambda, Real q, Real amp, std::vector<std::pair<Complex, Complex>> poles = {}) {
  return {lambda, q, ReflectionFunction(gaussian_r(amp), -12.0, lambda), std::move(poles)};
}

// Midpoint rule for int_{-12}^{k0} f(s) ds; the integrands here are smooth.
Complex midpoint(const std::function<Complex(Real)>& f, Real k0, long n = 400000) {
  const Real lo = -12, h = (k0 - lo) / static_cast<Real>(n);
  Complex acc{};
  for (long i = 0; i < n; ++i) acc += f(lo + (static_cast<Real>(i) + 0.5) * h);
  return acc * h;
}

}  // namespace

TEST(LogGamma, RealAxis) {
  for (Real x : {0.3, 1.0, 4.5, 20.0}) EXPECT_NEAR(log_gamma(x).real(), std::lgamma(x), 1e-13);
  EXPECT_TRUE(fails_with(ErrorKind::DomainError, [] { log_gamma(-2.0); }));
}

TEST(LogGamma, ImaginaryAxisModulus) {
  for (Real y : {0.05, -0.3, 2.0}) {
    const Real got = std::exp(2 * log_gamma(Complex(0, y)).real());
    EXPECT_NEAR(got / (pi / (std::abs(y) * std::sinh(pi * std::abs(y)))), 1.0, 1e-12);
  }
}

TEST(LogGamma, Reflection) {
  // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
  const Complex z(0.3, 0.7);
  const Complex lhs = std::exp(log_gamma(z) + log_gamma(1.0 - z));
  EXPECT_NEAR(std::abs(lhs - pi / std::sin(pi * z)), 0.0, 1e-12);
}

TEST(Coefficients, BetaModulus) {
  for (Real lambda : {1.0, -1.0})
    for (Complex y : {Complex(0.3, 0.1), Complex(-0.2, 0.5)}) {
      EXPECT_NEAR(std::abs(beta_of(y, lambda)), std::sqrt(std::abs(nu_of(y, lambda))), 1e-14);
    }
  EXPECT_EQ(beta_of(0.0, 1.0), Complex(0.0));
  EXPECT_TRUE(fails_with(ErrorKind::DomainError, [] { nu_of(1.0, 1.0); }));
}

TEST(Coefficients, ChiAgainstMidpointOracle) {
  // chi = -(1/2 pi i) int_{-inf}^{k0} ln(k0 - s) g'(s) ds; the log singularity is split off exactly.
  for (Real lambda : {1.0, -1.0}) {
    const auto data = synthetic(lambda, -1.0, 0.5);
    const auto r = gaussian_r(0.5);
    for (Real k0 : {-0.5, -1.3}) {
      auto gp = [&](Real s) {
        const Real ds = 1e-5;
        return (ReflectionFunction::g_of(r(s + ds), lambda) - ReflectionFunction::g_of(r(s - ds), lambda)) / (2 * ds);
      };
      const Real g0 = gp(k0), len = k0 + 12;
      const Complex smooth = midpoint([&](Real s) { return Complex(std::log(k0 - s) * (gp(s) - g0)); }, k0);
      const Complex oracle = -(smooth + g0 * (len * std::log(len) - len)) / (2 * pi * I_unit);
      EXPECT_NEAR(std::abs(chi_function(data, k0) - oracle), 0.0, 1e-9) << "lambda " << lambda << " k0 " << k0;
    }
  }
}

TEST(Coefficients, DeltaSymmetry) {
  // delta(k) conj(delta(conj k)) = 1 off the cut.
  const auto data = synthetic(1.0, -1.0, 0.4);
  for (Complex k : {Complex(0.2, 0.5), Complex(-1.0, 0.3), Complex(-2.0, -0.7)})
    EXPECT_NEAR(std::abs(delta_function(data, -0.4, k) * std::conj(delta_function(data, -0.4, std::conj(k))) - 1.0), 0.0,
                1e-10);
  EXPECT_EQ(delta_function(ScatteringData::reflectionless(1.0, -1.0, {}), -0.4, Complex(0.1, 0.2)), Complex(1.0));
}

TEST(Coefficients, ReflectionDomain) {
  const ReflectionFunction r(gaussian_r(0.1), -4.0, 1.0);
  EXPECT_TRUE(fails_with(ErrorKind::Validation, [&] { r(-5.0); }));
  EXPECT_TRUE(fails_with(ErrorKind::Validation, [] { ReflectionFunction(gaussian_r(0.1), 1.0, 1.0); }));
}

TEST(Focusing, ModifiedResiduesAgainstOracle) {
  const Complex xi(-0.3, 0.5), far_left(-3.0, 0.4);
  const auto data = synthetic(-1.0, 1.0, 0.6, {{xi, Complex(1.0, 0.0)}, {far_left, Complex(0.0, 2.0)}});
  const Real k0 = -0.2, K = 4;
  const auto w = focusing_window(data.poles, k0, K);
  ASSERT_EQ(w.in_window.size(), 1u);
  ASSERT_EQ(w.left.size(), 1u);
  const auto hat = modified_residues(data, k0, K);
  ASSERT_EQ(hat.size(), 1u);
  const auto r = gaussian_r(0.6);
  const Complex integral =
      midpoint([&](Real s) { return ReflectionFunction::g_of(r(s), -1.0) / (s - xi); }, k0);
  const Complex blaschke = std::pow((xi - far_left) / (xi - std::conj(far_left)), 2);
  const Complex oracle = blaschke * std::exp(-integral / (pi * I_unit));
  EXPECT_NEAR(std::abs(hat[0].second - oracle), 0.0, 1e-8);
}

TEST(Degeneration, ReflectionlessRegimes) {
  for (const auto& p : {SolitonParams::defocusing(1, 1), SolitonParams::focusing(1, 0.5), SolitonParams::focusing(1.3, -0.5)}) {
    const auto d = ScatteringData::from_soliton(p);
    for (Real x : {0.0, 1.0, 3.0})
      for (Real t : {0.5, 4.0, 30.0}) {
        const auto pr = asymptotic_profile(regime_for(p.lambda(), p.q()), d, x, t, 10.0);
        EXPECT_LE(std::abs(pr.total - p.solution(x, t)), 1e-10);
      }
  }
  const auto none = ScatteringData::reflectionless(1.0, -1.0, {});
  for (Real x : {0.0, 5.0}) EXPECT_EQ(asymptotic_profile(Regime::DefocusingQNeg, none, x, 3.0).total, Complex(0.0));
}

TEST(Degeneration, EquivalentSoliton) {
  const auto p = SolitonParams::defocusing(1.5, 0.8);
  const auto d = ScatteringData::from_soliton(p);
  const auto eq = equivalent_soliton(d, 2.0, 3.0);
  EXPECT_NEAR(eq.omega, 1.5, 1e-12);
  EXPECT_NEAR(eq.alpha, 0.8, 1e-12);
  EXPECT_NEAR(std::abs(eq(2.0, 3.0) - p.solution(2.0, 3.0)), 0.0, 1e-12);
}

TEST(FarField, RadiationModulus) {
  // Where no soliton is felt the modulus reduces to sqrt(|nu| / 2t).
  const Real t = 50;
  const auto qneg = synthetic(1.0, -1.0, 0.4);
  const auto foc = synthetic(-1.0, 1.0, 0.4);
  for (Real zeta : {1.2, 2.0, 3.0}) {
    const Real x = zeta * t;
    const Complex r = gaussian_r(0.4)(-zeta / 4);
    EXPECT_NEAR(std::abs(asymp_defocusing_qneg(qneg, x, t).total), std::sqrt(std::abs(nu_of(r, 1.0)) / (2 * t)), 1e-12);
    EXPECT_NEAR(std::abs(asymp_focusing(foc, x, t, 4.0).total), std::sqrt(std::abs(nu_of(r, -1.0)) / (2 * t)), 1e-12);
  }
}

TEST(FarField, SolitonDressingUndoesTheBlaschkeRotation) {
  // Far to the right of the soliton the q > 0 field approaches the q < 0 formula
  // built from r(k0) itself, with an O(1/t) discrepancy.
  const Complex xi(0.0, 0.5);
  const auto qpos = synthetic(1.0, 2.0, 0.4, {{xi, I_unit / (std::sqrt(2.0) + 1.0)}});
  auto mismatch = [&](Real zeta, Real t) {
    const auto c = coefficients(qpos, zeta * t, t);
    const auto pos = asymp_defocusing_qpos(qpos, c);
    const Complex plain = -beta_of(c.r_k0, 1.0) * c.power_8t() * std::exp(2.0 * c.chi) *
                          std::exp(4.0 * I_unit * t * c.k0 * c.k0) / std::sqrt(2 * t);
    return std::abs(pos.total / plain - 1.0);
  };
  for (Real zeta : {1.2, 2.0}) {
    const Real e1 = mismatch(zeta, 200), e2 = mismatch(zeta, 800);
    EXPECT_LE(e1, 2e-4);
    EXPECT_NEAR(e1 / e2, 4.0, 0.2);
  }
}

TEST(Regimes, Mismatch) {
  const auto d = ScatteringData::from_soliton(SolitonParams::defocusing(1, 1));
  EXPECT_TRUE(fails_with(ErrorKind::RegimeMismatch, [&] { asymptotic_profile(Regime::Focusing, d, 1.0, 1.0); }));
  const auto f = ScatteringData::from_soliton(SolitonParams::focusing(1, 0.5));
  EXPECT_TRUE(fails_with(ErrorKind::RegimeMismatch, [&] { asymp_focusing(f, 50.0, 1.0, 4.0); }));
  EXPECT_TRUE(fails_with(ErrorKind::Validation, [&] { coefficients(f, 1.0, 0.0); }));
  EXPECT_EQ(regime_from_string(to_string(Regime::DefocusingQPos)), Regime::DefocusingQPos);
  EXPECT_TRUE(fails_with(ErrorKind::Validation, [] { regime_from_string("bogus"); }));
}
