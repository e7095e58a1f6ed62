#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "robin_nls/asymptotics.hpp"
#include "robin_nls/io.hpp"
#include "robin_nls/parallel.hpp"
#include "robin_nls/pde.hpp"
#include "robin_nls/profile.hpp"
#include "robin_nls/spectral.hpp"
#include "robin_nls/types.hpp"
#include "robin_nls/zeros.hpp"

namespace robin_nls {

/// Residual measure: the complex field or only its modulus.
enum class Metric { Complex, Modulus };

inline std::string_view to_string(Metric m) { return m == Metric::Complex ? "complex" : "modulus"; }

inline Metric metric_from_string(std::string_view s) {
  if (s == "complex") return Metric::Complex;
  if (s == "modulus") return Metric::Modulus;
  throw Error(ErrorKind::Validation, "unknown metric '" + std::string(s) + "'");
}

struct CompareConfig {
  Regime regime = Regime::DefocusingQNeg;
  Real t0 = 16;
  // PDE resolution; length 0 picks 12 t_max so no reflection returns.
  Real dx = 0.05;
  Real dt = 0.01;
  Real length = 0;
  bool check_boundary = false;
  // x-grid x_j = zeta_max t j / (points - 1) at each ladder time.
  Real zeta_max = 2;
  std::size_t points = 401;
  // Spectral table.
  Real k_max = 16;
  std::size_t k_nodes = 1025;
  Real K = 4;
  // Thresholds: fitted exponent for the radiation regime, absolute bound otherwise.
  Real min_exponent = 0.6;
  Real max_error = 1e-3;
  Metric metric = Metric::Complex;
  unsigned threads = 0;
  Tolerances tol{};

  std::vector<Real> ladder() const { return {t0, 2 * t0, 4 * t0}; }
  void validate() const {
    if (!(t0 > 0) || !(dx > 0) || !(dt > 0) || !(zeta_max > 0) || points < 2 || !(k_max > 0) || k_nodes < 4 ||
        !(K > 0) || length < 0)
      throw Error(ErrorKind::Validation, "compare settings must be positive");
    tol.validate();
  }
};

struct ComparisonReport {
  std::string regime;
  std::string metric;
  std::vector<Real> t;
  std::vector<Real> error;          // E(t) under the chosen metric
  std::vector<Real> complex_error;  // sup |u_pde - u_pred|
  std::vector<Real> modulus_error;  // sup ||u_pde| - |u_pred||
  std::vector<Real> modulus_ratio;  // relative L2 mismatch of |u_pde| against |u_pred|
  Real exponent = 0;                // p in E ~ C t^{-p}
  std::string criterion;            // "exponent" or "absolute"
  Real threshold = 0;
  bool pass = false;
  int zeros = 0;
  Real max_mass_drift = 0;
  Real max_energy_drift = 0;

  friend bool operator==(const ComparisonReport&, const ComparisonReport&) = default;
};

/// Least-squares slope of ln E against ln t, negated.
inline Real fit_exponent(const std::vector<Real>& t, const std::vector<Real>& e) {
  if (t.size() != e.size() || t.size() < 2) throw Error(ErrorKind::Validation, "fit needs at least two points");
  const auto n = static_cast<Real>(t.size());
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Real x = std::log(t[i]);
    const Real y = std::log(std::max(e[i], std::numeric_limits<Real>::min()));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline Json report_to_json(const ComparisonReport& r) {
  return {{"regime", r.regime},
          {"metric", r.metric},
          {"t", r.t},
          {"E", r.error},
          {"E_complex", r.complex_error},
          {"E_modulus", r.modulus_error},
          {"modulus_ratio", r.modulus_ratio},
          {"p", r.exponent},
          {"criterion", r.criterion},
          {"threshold", r.threshold},
          {"pass", r.pass},
          {"M", r.zeros},
          {"max_mass_drift", r.max_mass_drift},
          {"max_energy_drift", r.max_energy_drift}};
}

inline ComparisonReport report_from_json(const Json& j) {
  const std::string root = "report";
  auto reals = [&](const char* key) {
    const auto& a = detail::field(j, key, root);
    if (!a.is_array()) throw Error(ErrorKind::Validation, root + "." + key + ": expected an array");
    std::vector<Real> out;
    for (std::size_t i = 0; i < a.size(); ++i)
      out.push_back(detail::number(a[i], root + "." + key + "[" + std::to_string(i) + "]"));
    return out;
  };
  auto text = [&](const char* key) {
    const auto& v = detail::field(j, key, root);
    if (!v.is_string()) throw Error(ErrorKind::Validation, root + "." + key + ": expected a string");
    return v.get<std::string>();
  };
  ComparisonReport r;
  r.regime = text("regime");
  r.metric = text("metric");
  r.t = reals("t");
  r.error = reals("E");
  r.complex_error = reals("E_complex");
  r.modulus_error = reals("E_modulus");
  r.modulus_ratio = reals("modulus_ratio");
  r.exponent = detail::number_field(j, "p", root);
  r.criterion = text("criterion");
  r.threshold = detail::number_field(j, "threshold", root);
  const auto& pass = detail::field(j, "pass", root);
  if (!pass.is_boolean()) throw Error(ErrorKind::Validation, root + ".pass: expected a boolean");
  r.pass = pass.get<bool>();
  r.zeros = static_cast<int>(detail::number_field(j, "M", root));
  r.max_mass_drift = detail::number_field(j, "max_mass_drift", root);
  r.max_energy_drift = detail::number_field(j, "max_energy_drift", root);
  return r;
}

/// Scattering data of a profile: table, zero census, residues.
inline ScatteringData scattering_data(const InitialProfile& profile, Real k_max, std::size_t nodes,
                                      const Tolerances& tol = {}, unsigned threads = 0) {
  const auto table = build_table(profile, uniform_grid(k_max, nodes), tol, threads);
  return ScatteringData::from(table, discrete_spectrum(profile, table, tol));
}

/// PDE against the regime's long-time formula on the ladder {t0, 2t0, 4t0}.
inline ComparisonReport run_compare(const InitialProfile& profile, const CompareConfig& cfg) {
  cfg.validate();
  if (cfg.regime != regime_for(profile.lambda(), profile.q()))
    throw Error(ErrorKind::RegimeMismatch, std::string("regime ") + std::string(to_string(cfg.regime)) +
                                               " is inconsistent with lambda = " + format_real(profile.lambda()) +
                                               ", q = " + format_real(profile.q()));
  const auto data = scattering_data(profile, cfg.k_max, cfg.k_nodes, cfg.tol, cfg.threads);
  const auto times = cfg.ladder();
  const Real t_max = times.back();
  const Real length = cfg.length > 0 ? cfg.length : std::max(default_sim_length(t_max), 12.0 * t_max);
  SimOptions opt;
  opt.check_boundary = cfg.check_boundary;
  opt.reflect_tol = cfg.tol.reflect_tol;
  const auto tr = evolve(make_state(profile, cfg.dx, cfg.dt, length), t_max, times, opt, 100);

  ComparisonReport rep;
  rep.regime = std::string(to_string(cfg.regime));
  rep.metric = std::string(to_string(cfg.metric));
  rep.zeros = static_cast<int>(data.poles.size());
  rep.max_mass_drift = tr.max_mass_drift();
  rep.max_energy_drift = tr.max_energy_drift();
  for (const auto& snap : tr.snapshots) {
    const Real t = snap.t;
    std::vector<Complex> pred(cfg.points);
    parallel_for(cfg.points, cfg.threads, [&](std::size_t j) {
      const Real x = cfg.zeta_max * t * static_cast<Real>(j) / static_cast<Real>(cfg.points - 1);
      pred[j] = asymptotic_profile(cfg.regime, data, x, t, cfg.K).total;
    });
    Real e_c = 0, e_m = 0, num = 0, den = 0;
    for (std::size_t j = 0; j < cfg.points; ++j) {
      const Real x = cfg.zeta_max * t * static_cast<Real>(j) / static_cast<Real>(cfg.points - 1);
      const Complex u = snap.value_at(x);
      const Real dm = std::abs(u) - std::abs(pred[j]);
      e_c = std::max(e_c, std::abs(u - pred[j]));
      e_m = std::max(e_m, std::abs(dm));
      num += dm * dm;
      den += std::norm(pred[j]);
    }
    rep.t.push_back(t);
    rep.complex_error.push_back(e_c);
    rep.modulus_error.push_back(e_m);
    rep.modulus_ratio.push_back(den > 0 ? std::sqrt(num / den) : 0.0);
    rep.error.push_back(cfg.metric == Metric::Complex ? e_c : e_m);
  }
  rep.exponent = fit_exponent(rep.t, rep.error);
  if (cfg.regime == Regime::DefocusingQNeg) {
    rep.criterion = "exponent";
    rep.threshold = cfg.min_exponent;
    rep.pass = rep.exponent >= cfg.min_exponent;
  } else {
    rep.criterion = "absolute";
    rep.threshold = cfg.max_error;
    rep.pass = *std::max_element(rep.error.begin(), rep.error.end()) <= cfg.max_error;
  }
  return rep;
}

}  // namespace robin_nls
