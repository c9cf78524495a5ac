#pragma once

#include <duet/ops.hpp>

#include <functional>

namespace duet {

using HamiltonianFn = std::function<Matrix(double)>;

struct SchrodingerResult {
  Vector state;
  double norm_drift;  // |(final norm) - (initial norm)|
};

struct LindbladResult {
  Matrix rho;
  double trace_drift;
  double min_eigenvalue;  // diagnostic; mild negativity is integration noise
};

namespace detail {
inline int step_count(double t_final, double dt) {
  if (t_final < 0.0 || dt <= 0.0)
    throw std::invalid_argument("integrator: need t_final >= 0 and dt > 0");
  return std::max(1, int(std::ceil(t_final / dt - 1e-12)));
}
}  // namespace detail

// Fixed-step RK4 for i d psi/dt = H(t) psi. No renormalization anywhere:
// norm drift is the error signal. Drift beyond 1e-6 throws; callers wanting
// the usual 1e-8 behavior pick dt accordingly. The sample callback, when
// set, fires at t = 0, after every step, at t_final.
inline SchrodingerResult evolve_schrodinger(
    const HamiltonianFn& h, Vector psi, double t_final, double dt,
    const std::function<void(double, const Vector&)>& sample = nullptr) {
  const double n0 = psi.norm();
  if (t_final == 0.0) {
    if (sample) sample(0.0, psi);
    return {psi, 0.0};
  }
  const int steps = detail::step_count(t_final, dt);
  const double h_step = t_final / steps;
  if (sample) sample(0.0, psi);
  double t = 0.0;
  for (int s = 0; s < steps; ++s) {
    Matrix h_mid = h(t + 0.5 * h_step);  // shared by the two middle stages
    Vector k1 = -iu * (h(t) * psi);
    Vector k2 = -iu * (h_mid * Vector(psi + 0.5 * h_step * k1));
    Vector k3 = -iu * (h_mid * Vector(psi + 0.5 * h_step * k2));
    Vector k4 = -iu * (h(t + h_step) * Vector(psi + h_step * k3));
    psi += (h_step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = (s + 1 == steps) ? t_final : t + h_step;
    if (sample) sample(t, psi);
  }
  double drift = std::abs(psi.norm() - n0);
  if (drift > 1e-6)
    throw std::runtime_error("evolve_schrodinger: norm drift " +
                             std::to_string(drift) + ", step too coarse");
  return {psi, drift};
}

struct CollapseOp {
  Matrix op;
  double rate;  // >= 0
};

// Fixed-step RK4 for the standard-form master equation
//   d rho/dt = -i[H, rho] + sum_k (rate_k/2)(2 L rho L+ - L+L rho - rho L+L).
// Constant H per call; protocols switch H between segments. Trace drift
// beyond 1e-6 throws.
inline LindbladResult evolve_lindblad(
    const Matrix& h, const std::vector<CollapseOp>& collapse, Matrix rho,
    double t_final, double dt,
    const std::function<void(double, const Matrix&)>& sample = nullptr) {
  require_hermitian(h, "evolve_lindblad");
  for (const auto& c : collapse)
    if (c.rate < 0.0)
      throw std::invalid_argument("evolve_lindblad: negative rate");

  struct Pre {
    Matrix l, ldl;  // L and (rate/2) L+L
    double rate;
  };
  std::vector<Pre> pre;
  for (const auto& c : collapse) {
    if (c.rate == 0.0) continue;
    pre.push_back({c.op, Matrix(0.5 * c.rate * c.op.adjoint() * c.op), c.rate});
  }

  auto rhs = [&](const Matrix& r) {
    Matrix d = -iu * (h * r - r * h);
    for (const auto& c : pre)
      d += c.rate * (c.l * r * c.l.adjoint()) - c.ldl * r - r * c.ldl;
    return d;
  };

  const double tr0 = rho.trace().real();
  if (t_final > 0.0) {
    const int steps = detail::step_count(t_final, dt);
    const double h_step = t_final / steps;
    if (sample) sample(0.0, rho);
    double t = 0.0;
    for (int s = 0; s < steps; ++s) {
      Matrix k1 = rhs(rho);
      Matrix k2 = rhs(rho + 0.5 * h_step * k1);
      Matrix k3 = rhs(rho + 0.5 * h_step * k2);
      Matrix k4 = rhs(rho + h_step * k3);
      rho += (h_step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t = (s + 1 == steps) ? t_final : t + h_step;
      if (sample) sample(t, rho);
    }
  } else if (sample) {
    sample(0.0, rho);
  }
  double drift = std::abs(rho.trace().real() - tr0);
  if (drift > 1e-6)
    throw std::runtime_error("evolve_lindblad: trace drift " +
                             std::to_string(drift));
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (rho + rho.adjoint())),
                                           Eigen::EigenvaluesOnly);
  return {rho, drift, es.eigenvalues().minCoeff()};
}

}  // namespace duet
