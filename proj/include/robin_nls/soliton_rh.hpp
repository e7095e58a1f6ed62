#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "robin_nls/soliton_params.hpp"
#include "robin_nls/types.hpp"

namespace robin_nls {

/// u_s(x,t) = e^{i omega t} u_s0(x) for x >= 0.
inline Complex stationary_soliton(const SolitonParams& p, Real x, Real t) {
  if (!(x >= 0)) throw Error(ErrorKind::DomainError, "the stationary soliton is evaluated on x >= 0 only");
  return p.solution(x, t);
}

/// Closed-form RH solution of the one-soliton problem with xi1 = i rho1.
inline Mat2 one_soliton_m(Real lambda, Real rho, Complex c, Real x, Real t, Complex k) {
  const Complex xi(0.0, rho);
  if (std::abs(k - xi) < 1e-12 || std::abs(k - std::conj(xi)) < 1e-12)
    throw Error(ErrorKind::PoleEvaluation, "k is within 1e-12 of a pole");
  const Real c2 = std::norm(c);
  const Real e4 = std::exp(-4.0 * rho * x);
  const Real e2 = std::exp(-2.0 * rho * x);
  const Real denom = 4.0 * rho * rho - lambda * c2 * e4;
  if (denom == 0.0) throw Error(ErrorKind::SingularSystem, "one-soliton denominator vanishes");
  const Complex phase = std::exp(I_unit * (4.0 * rho * rho * t));
  const Complex kp = k + I_unit * rho;
  const Complex km = k - I_unit * rho;
  Mat2 m;
  m(0, 0) = 1.0 - 2.0 * I_unit * lambda * rho * c2 * e4 / (km * denom);
  m(1, 1) = 1.0 + 2.0 * I_unit * lambda * rho * c2 * e4 / (kp * denom);
  m(0, 1) = 4.0 * lambda * rho * rho * std::conj(c) * e2 * phase / (kp * denom);
  m(1, 0) = 4.0 * rho * rho * c * e2 * std::conj(phase) / (km * denom);
  return m;
}

inline Mat2 one_soliton_m(const SolitonParams& p, Real x, Real t, Complex k) {
  return one_soliton_m(p.lambda(), p.rho1(), p.c1(), x, t, k);
}

/// Discrete scattering data {(xi_j, c_j)} of a reflectionless RH problem.
class ReflectionlessData {
 public:
  ReflectionlessData(Real lambda, std::vector<std::pair<Complex, Complex>> poles) : lambda_(lambda), poles_(std::move(poles)) {
    if (lambda_ != 1.0 && lambda_ != -1.0) throw Error(ErrorKind::Validation, "lambda must be +1 or -1");
    for (std::size_t j = 0; j < poles_.size(); ++j) {
      if (!(poles_[j].first.imag() > 0)) throw Error(ErrorKind::Validation, "poles must lie in the upper half-plane");
      if (poles_[j].second == Complex{}) throw Error(ErrorKind::Validation, "residue constants must be nonzero");
      for (std::size_t l = 0; l < j; ++l)
        if (poles_[j].first == poles_[l].first) throw Error(ErrorKind::Validation, "poles must be distinct");
    }
  }

  static ReflectionlessData from_soliton(const SolitonParams& p) { return {p.lambda(), {{p.xi1(), p.c1()}}}; }

  Real lambda() const { return lambda_; }
  std::size_t size() const { return poles_.size(); }
  Complex xi(std::size_t j) const { return poles_[j].first; }
  Complex c(std::size_t j) const { return poles_[j].second; }
  const std::vector<std::pair<Complex, Complex>>& poles() const { return poles_; }

 private:
  Real lambda_;
  std::vector<std::pair<Complex, Complex>> poles_;
};

/// m(k) = I + sum_j [alpha_j, 0]/(k - xi_j) + sum_j [0, beta_j]/(k - conj xi_j) at fixed (x,t).
class ReflectionlessSolution {
 public:
  ReflectionlessSolution(std::vector<Complex> xi, std::vector<Vec2> alpha, std::vector<Vec2> beta)
      : xi_(std::move(xi)), alpha_(std::move(alpha)), beta_(std::move(beta)) {}

  std::size_t size() const { return xi_.size(); }
  const Vec2& residue_first(std::size_t j) const { return alpha_[j]; }
  const Vec2& residue_second(std::size_t j) const { return beta_[j]; }

  /// 2i lim k m_12.
  Complex u() const {
    Complex s{};
    for (const auto& b : beta_) s += b(0);
    return 2.0 * I_unit * s;
  }

  /// First column; analytic except at the xi_j.
  Vec2 first_column(Complex k) const {
    Vec2 v(1.0, 0.0);
    for (std::size_t j = 0; j < xi_.size(); ++j) {
      check_pole(k, xi_[j]);
      v += alpha_[j] / (k - xi_[j]);
    }
    return v;
  }

  /// Second column; analytic except at the conj(xi_j).
  Vec2 second_column(Complex k) const {
    Vec2 v(0.0, 1.0);
    for (std::size_t j = 0; j < xi_.size(); ++j) {
      check_pole(k, std::conj(xi_[j]));
      v += beta_[j] / (k - std::conj(xi_[j]));
    }
    return v;
  }

  Mat2 operator()(Complex k) const {
    Mat2 m;
    m.col(0) = first_column(k);
    m.col(1) = second_column(k);
    return m;
  }

 private:
  static void check_pole(Complex k, Complex pole) {
    if (std::abs(k - pole) < 1e-12) throw Error(ErrorKind::PoleEvaluation, "k is within 1e-12 of a pole");
  }

  std::vector<Complex> xi_;
  std::vector<Vec2> alpha_;
  std::vector<Vec2> beta_;
};

/// Solves the residue conditions
///   alpha_j = C_j [m(xi_j)]_2,          C_j = c_j e^{2i theta(xi_j)},
///   beta_j  = D_j [m(conj xi_j)]_1,     D_j = lambda conj(c_j) e^{-2i theta(conj xi_j)},
/// as one 2M x 2M system with two right-hand sides (one per vector component).
inline ReflectionlessSolution solve_reflectionless(const ReflectionlessData& data, Real x, Real t,
                                                   Real singular_tol = Tolerances{}.singular_tol) {
  const std::size_t m = data.size();
  std::vector<Complex> xi(m);
  for (std::size_t j = 0; j < m; ++j) xi[j] = data.xi(j);
  if (m == 0) return {xi, {}, {}};
  const auto n = static_cast<Eigen::Index>(2 * m);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n, 2);
  for (std::size_t j = 0; j < m; ++j) {
    const Complex cj = data.c(j) * std::exp(2.0 * I_unit * theta(x, t, xi[j]));
    const Complex dj = data.lambda() * std::conj(data.c(j)) * std::exp(-2.0 * I_unit * theta(x, t, std::conj(xi[j])));
    const auto rj = static_cast<Eigen::Index>(j);
    const auto rm = static_cast<Eigen::Index>(m + j);
    for (std::size_t l = 0; l < m; ++l) {
      a(rj, static_cast<Eigen::Index>(m + l)) = -cj / (xi[j] - std::conj(xi[l]));
      a(rm, static_cast<Eigen::Index>(l)) = -dj / (std::conj(xi[j]) - xi[l]);
    }
    rhs(rj, 1) = cj;
    rhs(rm, 0) = dj;
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
  lu.setThreshold(singular_tol);
  if (!lu.isInvertible()) throw Error(ErrorKind::SingularSystem, "reflectionless residue system is singular");
  const Eigen::MatrixXcd sol = lu.solve(rhs);
  std::vector<Vec2> alpha(m), beta(m);
  for (std::size_t j = 0; j < m; ++j) {
    alpha[j] = sol.row(static_cast<Eigen::Index>(j)).transpose();
    beta[j] = sol.row(static_cast<Eigen::Index>(m + j)).transpose();
  }
  return {xi, alpha, beta};
}

/// u_sol(x,t) for the reflectionless data.
inline Complex soliton_u(const ReflectionlessData& data, Real x, Real t) {
  return solve_reflectionless(data, x, t).u();
}

/// Index set of poles whose Blaschke factor is moved to the other side.
struct RenormalizedBox {
  std::vector<std::size_t> indices;

  Complex a_box(const ReflectionlessData& data, Complex k) const {
    Complex v{1.0, 0.0};
    for (auto j : indices) v *= (k - data.xi(j)) / (k - std::conj(data.xi(j)));
    return v;
  }
};

/// m_box(k) = m_sol(k) a_box(k)^{sigma_3}.
inline Mat2 solve_renormalized(const ReflectionlessData& data, const RenormalizedBox& box, Real x, Real t,
                               Complex k) {
  for (auto j : box.indices)
    if (j >= data.size()) throw Error(ErrorKind::Validation, "box index out of range");
  Mat2 m = solve_reflectionless(data, x, t)(k);
  const Complex ab = box.a_box(data, k);
  m.col(0) *= ab;
  m.col(1) /= ab;
  return m;
}

/// Darboux data that restores the pole pair (xi1, conj xi1) on top of a regular RH solution.
struct DressingState {
  Complex xi1{};
  Complex d1{};
  Mat2 W1 = Mat2::Identity();
  Mat2 B1 = Mat2::Zero();

  /// Shift 2i (B1)_12 added to the regular solution.
  Complex u_shift() const { return 2.0 * I_unit * B1(0, 1); }

  /// 2i (xi1 - conj xi1) W11 W12 / (|W11|^2 - lambda |W12|^2); equals u_shift() when m_reg has the RH symmetry.
  Complex u_shift_symmetric(Real lambda) const {
    return 2.0 * I_unit * (xi1 - std::conj(xi1)) * W1(0, 0) * W1(0, 1) /
           (std::norm(W1(0, 0)) - lambda * std::norm(W1(0, 1)));
  }

  /// Residuals of (xi1 + B1) m_reg(xi1)(1, -d1)^T = 0 and (conj xi1 + B1) m_reg(conj xi1)(-lambda conj d1, 1)^T = 0.
  Real residual(const Mat2& m_reg_xi, const Mat2& m_reg_xibar, Real lambda) const {
    const Vec2 v1 = m_reg_xi * Vec2(1.0, -d1);
    const Vec2 v2 = m_reg_xibar * Vec2(-lambda * std::conj(d1), 1.0);
    const Vec2 r1 = (xi1 * Mat2::Identity() + B1) * v1;
    const Vec2 r2 = (std::conj(xi1) * Mat2::Identity() + B1) * v2;
    return std::max(r1.norm(), r2.norm());
  }
};

inline DressingState darboux_dress(Complex xi1, Complex c1, Real lambda, const Mat2& m_reg_xi, const Mat2& m_reg_xibar,
                                   Real x, Real t, Real singular_tol = Tolerances{}.singular_tol) {
  if (!(xi1.imag() > 0)) throw Error(ErrorKind::Validation, "xi1 must lie in the upper half-plane");
  if (c1 == Complex{}) throw Error(ErrorKind::Validation, "c1 must be nonzero");
  DressingState s;
  s.xi1 = xi1;
  s.d1 = c1 * std::exp(2.0 * I_unit * theta(x, t, xi1)) / (xi1 - std::conj(xi1));
  s.W1.col(0) = m_reg_xi * Vec2(1.0, -s.d1);
  s.W1.col(1) = m_reg_xibar * Vec2(-lambda * std::conj(s.d1), 1.0);
  const Complex det = s.W1.determinant();
  if (std::abs(det) < singular_tol) throw Error(ErrorKind::SingularW, "Darboux matrix W1 is singular");
  Mat2 diag = Mat2::Zero();
  diag(0, 0) = xi1;
  diag(1, 1) = std::conj(xi1);
  s.B1 = -s.W1 * diag * s.W1.inverse();
  return s;
}

/// |m11(0,t,-i beta)|^2 - lambda |m21(0,t,-i beta)|^2 for the reflectionless data.
inline Real delta_determinant(const ReflectionlessData& data, Real t, Real beta) {
  const Vec2 col = solve_reflectionless(data, 0.0, t).first_column(Complex(0.0, -beta));
  return std::norm(col(0)) - data.lambda() * std::norm(col(1));
}

/// beta = q/2 or -q/2 according to which of a(-iq/2), b(iq/2) vanishes.
template <typename AFn, typename BFn>
Real delta_beta(Real q, AFn&& a, BFn&& b, Real tol = Tolerances{}.a_zero_tol) {
  if (q > 0) return std::abs(b(Complex(0.0, q / 2))) > tol ? -q / 2 : q / 2;
  return std::abs(a(Complex(0.0, -q / 2))) > tol ? q / 2 : -q / 2;
}

}  // namespace robin_nls
