#include <gtest/gtest.h>

#include <cmath>

#include "robin_nls/pde.hpp"
#include "robin_nls/soliton_params.hpp"
#include "support.hpp"

using namespace robin_nls;
using robin_nls::testing::fails_with;

TEST(Pde, LinearRobinBoundState) {
  // With the cubic term off, e^{-qx} e^{i q^2 t} is an exact Robin mode.
  const Real q = 1.0;
  auto s = make_state([&](Real x) { return Complex(std::exp(-q * x)); }, Sign::Focusing, q, 0.01, 0.002, 30);
  SimOptions opt;
  opt.linear = true;
  Real err = 0;
  evolve(s, 2.0, {}, opt, 100, [&](const SimState& st) {
    for (std::size_t j = 0; j < st.u.size(); j += 50)
      err = std::max(err, std::abs(st.u[j] - std::exp(I_unit * q * q * st.t) * std::exp(-q * st.x(j))));
  });
  EXPECT_LE(err, 1e-4);
}

TEST(Pde, FocusingSolitonIsStationary) {
  const auto p = SolitonParams::focusing(1, 0.5);
  auto s = make_state([&](Real x) { return Complex(p.profile(x)); }, p.sign(), p.q(), 0.01, 0.001, 40);
  Real err = 0;
  const auto tr = evolve(s, 2.0, {}, {}, 100, [&](const SimState& st) {
    for (std::size_t j = 0; j < st.u.size(); j += 10) err = std::max(err, std::abs(std::abs(st.u[j]) - p.profile(st.x(j))));
  });
  EXPECT_LE(err, 1e-4);
  EXPECT_LE(tr.max_mass_drift(), 1e-9);
  EXPECT_LE(tr.max_energy_drift(), 1e-9);
}

TEST(Pde, DefocusingBoundaryTracking) {
  // The phase at the wall is the most resolution-sensitive quantity; dx = 0.005 keeps it within 1e-3.
  const auto p = SolitonParams::defocusing(1, 1);
  auto s = make_state([&](Real x) { return Complex(p.profile(x)); }, p.sign(), p.q(), 0.005, 0.001, 30);
  Real err = 0;
  evolve(s, 2.0, {}, {}, 100,
         [&](const SimState& st) { err = std::max(err, std::abs(st.u[0] - p.alpha() * std::exp(I_unit * p.omega() * st.t))); });
  EXPECT_LE(err, 1e-3);
}

TEST(Pde, RobinConditionHolds) {
  const auto p = SolitonParams::defocusing(1.3, 0.7);
  auto s = make_state([&](Real x) { return Complex(0.8 * p.profile(x)); }, p.sign(), p.q(), 0.005, 0.002, 30);
  const auto tr = evolve(s, 1.0, {0.5, 1.0});
  for (const auto& st : tr.snapshots) {
    const Complex ux0 = (-3.0 * st.u[0] + 4.0 * st.u[1] - st.u[2]) / (2 * st.dx);
    EXPECT_LE(std::abs(ux0 + st.q * st.u[0]), 1e-3 * std::abs(st.u[0]));
  }
}

TEST(Pde, ConservesMassAndEnergy) {
  for (Sign sign : {Sign::Focusing, Sign::Defocusing}) {
    auto s = make_state([](Real x) { return Complex(1.2 * std::exp(-x * x), 0.4 * x * std::exp(-x * x)); }, sign, -0.7,
                        0.02, 0.005, 60);
    SimOptions opt;
    opt.check_boundary = false;
    const auto tr = evolve(s, 3.0, {}, opt, 20);
    EXPECT_LE(tr.max_mass_drift(), 1e-9);
    EXPECT_LE(tr.max_energy_drift(), 1e-9);
  }
}

TEST(Pde, SnapshotsOnRequest) {
  auto s = make_state([](Real x) { return Complex(std::exp(-x * x)); }, Sign::Focusing, 1.0, 0.05, 0.01, 20);
  const auto tr = evolve(s, 1.0, {1.0, 0.25, 0.5});
  ASSERT_EQ(tr.snapshots.size(), 3u);
  EXPECT_NEAR(tr.snapshots[0].t, 0.25, 1e-12);
  EXPECT_NEAR(tr.snapshots[2].t, 1.0, 1e-12);
}

TEST(Pde, BoundaryContaminationIsDetected) {
  auto s = make_state([](Real x) { return Complex(std::exp(-x * x)); }, Sign::Defocusing, -1.0, 0.05, 0.01, 6);
  EXPECT_TRUE(fails_with(ErrorKind::BoundaryContamination, [&] { evolve(s, 10.0); }));
}

TEST(Pde, RejectsBadGrids) {
  const auto prof = InitialProfile::gaussian(0.3, Sign::Focusing, 1.0);
  EXPECT_TRUE(fails_with(ErrorKind::Validation, [&] { make_state(prof, 0.0, 0.01, 10); }));
  EXPECT_TRUE(fails_with(ErrorKind::Validation, [&] { make_state(prof, 0.1, 0.01, 0.1); }));
  EXPECT_TRUE(fails_with(ErrorKind::Validation, [&] { evolve(make_state(prof, 0.1, 0.01, 10), -1.0); }));
}

TEST(Pde, NonConvergenceIsReported) {
  auto s = make_state([](Real x) { return Complex(3.0 * std::exp(-x * x)); }, Sign::Focusing, 1.0, 0.05, 0.5, 20);
  SimOptions opt;
  opt.max_iterations = 2;
  EXPECT_TRUE(fails_with(ErrorKind::NonConvergence, [&] { step(s, opt); }));
}
