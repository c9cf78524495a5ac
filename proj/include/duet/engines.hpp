#pragma once

#include <duet/gates.hpp>
#include <duet/integrators.hpp>

#include <algorithm>

namespace duet {

// How a schedule is executed.
//   Analytic    closed-form gates, the fastest tier
//   FiniteDrive closed-form gates, except rotations and flips act on every
//               occupation cell with the exact detuned Rabi unitary of a
//               finite-amplitude drive; captures selectivity leakage while
//               staying analytic
//   Expm        exact exponential of each segment generator; the oracle the
//               closed forms are tested against
//   Rk4         fixed-step integration of the same generators
//   Rk4TwoMode  integration of the two-mode exchange model with the qubit
//               frequency switched per segment and the selective drive kept
//               as an explicit rotating term; honest about off-resonant
//               leakage, so only meaningful when the mode splittings are
//               actually dispersive
enum class Engine { Analytic, FiniteDrive, Expm, Rk4, Rk4TwoMode };

namespace detail {
// Gershgorin bound on the spectral radius; sets integration steps.
inline double spectral_bound(const Matrix& h) {
  Eigen::MatrixXd a = h.cwiseAbs();
  return a.rowwise().sum().maxCoeff();
}

inline double pick_dt(double bound, double dt_factor) {
  double floor_rate = std::max(bound, 1e-6);
  return 2.0 * pi / (dt_factor * floor_rate);
}
}  // namespace detail

inline Vector run_schedule(const SystemParams& p, const PulseSchedule& sched,
                           Vector psi, const HilbertSpace& space, Engine engine,
                           double dt_factor = 40.0) {
  if (psi.size() != space.dim())
    throw std::invalid_argument("run_schedule: state does not fit the space");

  if (engine == Engine::Analytic) {
    for (const auto& seg : sched.segments)
      psi = segment_gate(p, seg, space) * psi;
    return psi;
  }
  if (engine == Engine::FiniteDrive) {
    for (const auto& seg : sched.segments) {
      bool driven = seg.kind == SegmentKind::Rotation ||
                    seg.kind == SegmentKind::QubitFlip;
      psi = (driven ? finite_drive_rotation_gate(p, seg, space)
                    : segment_gate(p, seg, space)) *
            psi;
    }
    return psi;
  }
  if (engine == Engine::Expm) {
    for (const auto& seg : sched.segments) {
      if (seg.duration == 0.0) continue;
      Matrix h = ideal_segment_hamiltonian(p, seg, space);
      psi = propagator_exact(h, seg.duration) * psi;
    }
    return psi;
  }
  if (engine == Engine::Rk4) {
    for (const auto& seg : sched.segments) {
      if (seg.duration == 0.0) continue;
      Matrix h = ideal_segment_hamiltonian(p, seg, space);
      double dt = detail::pick_dt(detail::spectral_bound(h), dt_factor);
      psi = evolve_schrodinger([&h](double) { return h; }, psi, seg.duration, dt)
                .state;
    }
    return psi;
  }

  // Two-mode model. Statics are cached; only the drive phase is per-step.
  Matrix seg_op = embed(sigma_eg(), space, 0);
  double t_abs = 0.0;
  for (const auto& seg : sched.segments) {
    if (seg.duration == 0.0) continue;
    double omega_z = 0.0;
    bool driven = false;
    double drive_freq = 0.0;
    switch (seg.kind) {
      case SegmentKind::TransferMode1:
        omega_z = p.omega_b1;
        break;
      case SegmentKind::TransferMode2:
        omega_z = p.omega_b2;
        break;
      case SegmentKind::Rotation:
        if (seg.alpha != 0.0)
          throw std::invalid_argument(
              "run_schedule: the two-mode engine cannot realize a diagonal "
              "rotation phase");
        omega_z = p.omega_z_sel;
        driven = true;
        drive_freq = selective_drive_frequency(p, seg.delta_n);
        break;
      case SegmentKind::QubitFlip:
        omega_z = p.omega_z_sel;
        driven = true;
        drive_freq = selective_drive_frequency(p, 0);
        break;
      case SegmentKind::Idle:
        omega_z = p.omega_z_idle;
        break;
    }
    Matrix h_static = two_mode_effective(p, omega_z, space);
    double half_amp = driven ? seg.theta / seg.duration : 0.0;
    HamiltonianFn h = [&](double tau) {
      if (!driven) return h_static;
      Complex ph =
          half_amp * std::exp(-iu * (drive_freq * (t_abs + tau) + seg.beta));
      return Matrix(h_static + ph * seg_op +
                    std::conj(ph) * Matrix(seg_op.adjoint()));
    };
    double bound = detail::spectral_bound(h_static) + half_amp + drive_freq;
    double dt = detail::pick_dt(bound, dt_factor);
    psi = evolve_schrodinger(h, psi, seg.duration, dt).state;
    t_abs += seg.duration;
  }
  return psi;
}

// Damping rates in the bus-eliminated frame. Each constituent keeps its
// intrinsic rate gamma and inherits a share of the cavity loss kappa scaled
// by its hybridization with the bus.
struct DampingRates {
  double qubit, mode1, mode2;
};

inline DampingRates damping_rates(const SystemParams& p) {
  auto frac = [&](double g) { return (g / p.Delta) * (g / p.Delta); };
  return {p.gamma + p.kappa * frac(p.g_c),
          p.gamma + p.kappa * frac(std::sqrt(p.N1) * p.g_m1),
          p.gamma + p.kappa * frac(std::sqrt(p.N2) * p.g_m2)};
}

// Open-system execution on the ideal-tier generators. Identity shifts in a
// generator commute with everything and are dropped. Idle segments factor
// exactly into diagonal phases times qubit-frame damping, because every
// collapse operator is an eigenoperator of a diagonal generator; they are
// integrated with the cheap factored form.
inline Matrix run_schedule_lindblad(const SystemParams& p,
                                    const PulseSchedule& sched, Matrix rho,
                                    const HilbertSpace& space,
                                    double dt_factor = 40.0) {
  if (rho.rows() != space.dim() || rho.cols() != space.dim())
    throw std::invalid_argument(
        "run_schedule_lindblad: state does not fit the space");
  auto rates = damping_rates(p);
  std::vector<CollapseOp> collapse;
  if (rates.qubit > 0.0)
    collapse.push_back({embed(sigma_eg().adjoint(), space, 0), rates.qubit});
  if (rates.mode1 > 0.0)
    collapse.push_back({embed(annihilation(space.dims[1]), space, 1), rates.mode1});
  if (rates.mode2 > 0.0)
    collapse.push_back({embed(annihilation(space.dims[2]), space, 2), rates.mode2});
  double rate_sum = rates.qubit + rates.mode1 + rates.mode2;

  for (const auto& seg : sched.segments) {
    if (seg.duration == 0.0) continue;
    if (seg.kind == SegmentKind::Idle) {
      Vector ph(space.dim());
      for (int i = 0; i < space.dim(); ++i) {
        auto ix = space.unravel(i);
        double w = (ix[0] == 0 ? p.omega_z_idle : 0.0) + p.omega_b1 * ix[1] +
                   p.omega_b2 * ix[2];
        ph(i) = std::exp(-iu * w * seg.duration);
      }
      rho = ph.asDiagonal() * rho * ph.conjugate().asDiagonal();
      if (!collapse.empty()) {
        int occ = *std::max_element(space.dims.begin(), space.dims.end());
        double dt = detail::pick_dt(rate_sum * occ, dt_factor);
        rho = evolve_lindblad(Matrix::Zero(space.dim(), space.dim()), collapse,
                              rho, seg.duration, dt)
                  .rho;
      }
      continue;
    }
    Matrix h = ideal_segment_hamiltonian(p, seg, space);
    double shift = h.trace().real() / double(space.dim());
    h -= shift * Matrix::Identity(space.dim(), space.dim());
    int occ = *std::max_element(space.dims.begin(), space.dims.end());
    double dt = detail::pick_dt(detail::spectral_bound(h) + rate_sum * occ,
                                dt_factor);
    rho = evolve_lindblad(h, collapse, rho, seg.duration, dt).rho;
  }
  return rho;
}

}  // namespace duet
