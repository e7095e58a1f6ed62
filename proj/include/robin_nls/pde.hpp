#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "robin_nls/profile.hpp"
#include "robin_nls/types.hpp"

namespace robin_nls {

/// Field on x_j = j dx, j = 0..N, with u_N = 0 held by the Dirichlet wall at L_sim.
struct SimState {
  std::vector<Complex> u;
  Real dx = 0.01;
  Real t = 0;
  Real dt = 1e-3;
  Real lambda = 1;
  Real q = 1;
  Real mass = 0;
  Real energy = 0;

  std::size_t intervals() const { return u.size() - 1; }
  Real length() const { return dx * static_cast<Real>(intervals()); }
  Real x(std::size_t j) const { return dx * static_cast<Real>(j); }

  /// Linear interpolation of the field at x (zero beyond the wall).
  Complex value_at(Real xq) const {
    if (xq <= 0) return u.front();
    const Real s = xq / dx;
    const auto j = static_cast<std::size_t>(s);
    if (j >= intervals()) return u.back();
    const Real f = s - static_cast<Real>(j);
    return (1.0 - f) * u[j] + f * u[j + 1];
  }
};

/// Discrete mass sum w_j |u_j|^2 with trapezoid weights (w_0 = dx/2).
inline Real discrete_mass(const SimState& s) {
  Real m = 0.5 * std::norm(s.u.front());
  for (std::size_t j = 1; j < s.u.size(); ++j) m += std::norm(s.u[j]);
  return m * s.dx;
}

/// Discrete energy sum |u_{j+1}-u_j|^2/dx + lambda sum w_j |u_j|^4 - q |u_0|^2.
inline Real discrete_energy(const SimState& s) {
  Real grad = 0;
  for (std::size_t j = 0; j + 1 < s.u.size(); ++j) grad += std::norm(s.u[j + 1] - s.u[j]);
  Real quart = 0.5 * std::norm(s.u.front()) * std::norm(s.u.front());
  for (std::size_t j = 1; j < s.u.size(); ++j) quart += std::norm(s.u[j]) * std::norm(s.u[j]);
  return grad / s.dx + s.lambda * quart * s.dx - s.q * std::norm(s.u.front());
}

struct SimOptions {
  Real fixed_point_tol = 1e-12;
  int max_iterations = 20;
  bool linear = false;            // drop the cubic term
  Real reflect_tol = Tolerances{}.reflect_tol;
  Real probe_fraction = 0.05;     // BoundaryContamination probe at L_sim (1 - probe_fraction)
  bool check_boundary = true;
};

/// Initial state on [0, L_sim] from a sampled profile; the profile is
/// interpolated onto the simulation grid and zero-extended past its length.
inline SimState make_state(const InitialProfile& profile, Real dx, Real dt, Real length) {
  if (!(dx > 0) || !(dt > 0) || !(length > 2 * dx))
    throw Error(ErrorKind::Validation, "dx, dt and L_sim must be positive with L_sim > 2 dx");
  SimState s;
  const auto n = static_cast<std::size_t>(std::llround(length / dx));
  s.u.resize(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    const Real x = dx * static_cast<Real>(j);
    s.u[j] = x <= profile.length() ? profile.value_at(x) : Complex{};
  }
  s.u[n] = 0.0;
  s.dx = dx;
  s.dt = dt;
  s.lambda = profile.lambda();
  s.q = profile.q();
  s.mass = discrete_mass(s);
  s.energy = discrete_energy(s);
  return s;
}

inline SimState make_state(std::function<Complex(Real)> u0, Sign sign, Real q, Real dx, Real dt, Real length) {
  if (!(dx > 0) || !(dt > 0) || !(length > 2 * dx))
    throw Error(ErrorKind::Validation, "dx, dt and L_sim must be positive with L_sim > 2 dx");
  SimState s;
  const auto n = static_cast<std::size_t>(std::llround(length / dx));
  s.u.resize(n + 1);
  for (std::size_t j = 0; j < n; ++j) s.u[j] = u0(dx * static_cast<Real>(j));
  s.u[n] = 0.0;
  s.dx = dx;
  s.dt = dt;
  s.lambda = as_real(sign);
  s.q = q;
  s.mass = discrete_mass(s);
  s.energy = discrete_energy(s);
  return s;
}

/// Default wall position max(40, 8 sqrt(t_final)).
inline Real default_sim_length(Real t_final) { return std::max(40.0, 8.0 * std::sqrt(t_final)); }

namespace detail {

/// Solves the tridiagonal system with sub-diagonal a, diagonal b, super-diagonal c.
inline void thomas(const std::vector<Complex>& a, std::vector<Complex>& b, const std::vector<Complex>& c,
                   std::vector<Complex>& d) {
  const std::size_t n = b.size();
  for (std::size_t i = 1; i < n; ++i) {
    const Complex w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  d[n - 1] /= b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

}  // namespace detail

/// One Crank-Nicolson step of i u_t + u_xx - 2 lambda |u|^2 u = 0,
///
///   i (u^{n+1} - u^n)/dt + D w - lambda (|u^{n+1}|^2 + |u^n|^2) w = 0,  w = (u^{n+1} + u^n)/2,
///
/// with the Robin ghost point u_{-1} = u_1 + 2 dx q u_0 in the first row of D.
/// The cubic coefficient is lagged and iterated to a fixed point.
inline SimState step(const SimState& s, const SimOptions& opt = {}) {
  const std::size_t n = s.intervals();  // unknowns 0..n-1
  if (n < 2) throw Error(ErrorKind::Validation, "grid too small");
  const Real inv_dx2 = 1.0 / (s.dx * s.dx);
  const Complex idt = I_unit * s.dt;
  std::vector<Complex> next(s.u);
  std::vector<Complex> sub(n), diag(n), sup(n), rhs(n);
  bool converged = false;
  for (int it = 0; it < opt.max_iterations; ++it) {
    // (2 - i dt D + i dt lambda rho) w = 2 u^n
    for (std::size_t j = 0; j < n; ++j) {
      const Real rho = opt.linear ? 0.0 : std::norm(next[j]) + std::norm(s.u[j]);
      diag[j] = 2.0 + idt * (2.0 * inv_dx2) + idt * s.lambda * rho;
      sub[j] = -idt * inv_dx2;
      sup[j] = -idt * inv_dx2;
      rhs[j] = 2.0 * s.u[j];
    }
    diag[0] -= idt * (2.0 * s.dx * s.q * inv_dx2);
    sup[0] = -idt * (2.0 * inv_dx2);
    sub[0] = 0.0;
    sup[n - 1] = 0.0;
    detail::thomas(sub, diag, sup, rhs);
    Real change = 0, scale = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const Complex v = 2.0 * rhs[j] - s.u[j];
      change = std::max(change, std::abs(v - next[j]));
      scale = std::max(scale, std::abs(v));
      next[j] = v;
    }
    if (opt.linear || change <= opt.fixed_point_tol * std::max(scale, 1.0)) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error(ErrorKind::NonConvergence, "Crank-Nicolson fixed point did not converge");
  next[n] = 0.0;
  SimState out = s;
  out.u = std::move(next);
  out.t = s.t + s.dt;
  out.mass = discrete_mass(out);
  out.energy = discrete_energy(out);
  if (opt.check_boundary) {
    const auto probe = static_cast<std::size_t>(static_cast<Real>(n) * (1.0 - opt.probe_fraction));
    if (std::abs(out.u[probe]) > opt.reflect_tol)
      throw Error(ErrorKind::BoundaryContamination,
                  "|u| = " + std::to_string(std::abs(out.u[probe])) + " near the wall at t = " + std::to_string(out.t));
  }
  return out;
}

struct ConservedRecord {
  Real t = 0;
  Real mass = 0;
  Real energy = 0;
};

struct Trajectory {
  std::vector<SimState> snapshots;
  std::vector<ConservedRecord> log;

  Real max_mass_drift() const {
    Real m = 0;
    for (const auto& r : log) m = std::max(m, std::abs(r.mass - log.front().mass) / std::abs(log.front().mass));
    return m;
  }
  Real max_energy_drift() const {
    Real m = 0;
    const Real ref = std::max(std::abs(log.front().energy), 1e-300);
    for (const auto& r : log) m = std::max(m, std::abs(r.energy - log.front().energy) / ref);
    return m;
  }
};

/// Marches to t_final; snapshots at each requested time (rounded to the step
/// grid) and a conserved-quantity record every `log_every` steps. An optional
/// observer sees every state.
inline Trajectory evolve(SimState state, Real t_final, std::vector<Real> snap_times = {}, const SimOptions& opt = {},
                         int log_every = 1, const std::function<void(const SimState&)>& observer = {}) {
  if (!(t_final >= state.t)) throw Error(ErrorKind::Validation, "t_final must not precede the current time");
  std::sort(snap_times.begin(), snap_times.end());
  const auto total = static_cast<long long>(std::llround((t_final - state.t) / state.dt));
  Trajectory tr;
  tr.log.push_back({state.t, state.mass, state.energy});
  std::size_t next_snap = 0;
  const Real t0 = state.t;
  auto take_snapshots = [&](long long k) {
    while (next_snap < snap_times.size() &&
           std::llround((snap_times[next_snap] - t0) / state.dt) <= k) {
      tr.snapshots.push_back(state);
      ++next_snap;
    }
  };
  take_snapshots(0);
  if (observer) observer(state);
  for (long long k = 1; k <= total; ++k) {
    state = step(state, opt);
    state.t = t0 + static_cast<Real>(k) * state.dt;
    if (k % log_every == 0 || k == total) tr.log.push_back({state.t, state.mass, state.energy});
    take_snapshots(k);
    if (observer) observer(state);
  }
  if (snap_times.empty()) tr.snapshots.push_back(state);
  return tr;
}

}  // namespace robin_nls
