#pragma once

#include <duet/hamiltonians.hpp>
#include <duet/ops.hpp>
#include <duet/schedule.hpp>

namespace duet {

namespace detail {
inline void require_two_mode(const HilbertSpace& s, const char* who) {
  if (s.factors() != 3 || s.dims[0] != 2)
    throw std::invalid_argument(std::string(who) +
                                ": expects (qubit, mode 1, mode 2) factors");
}
}  // namespace detail

// Resonant exchange with one mode. Doublets {|e,n>, |g,n+1>} of the driven
// mode mix with angle g sqrt(n+1) t; everything, spectators included, picks
// up the common scalar exp(-i omega_b t). The top excited level has no
// partner inside the truncation and only sees the scalar.
inline Matrix transfer_gate(const SystemParams& p, int mode, double t,
                            const HilbertSpace& space) {
  detail::require_two_mode(space, "transfer_gate");
  if (mode != 1 && mode != 2)
    throw std::invalid_argument("transfer_gate: mode must be 1 or 2");
  double g = mode == 1 ? p.g1 : p.g2;
  double wb = mode == 1 ? p.omega_b1 : p.omega_b2;
  int d = space.dims[mode];
  int d_spec = space.dims[mode == 1 ? 2 : 1];
  Complex scalar = std::exp(-iu * wb * t);
  Matrix u = scalar * Matrix::Identity(space.dim(), space.dim());
  auto idx = [&](int q, int n, int s) {
    return mode == 1 ? space.index({q, n, s}) : space.index({q, s, n});
  };
  for (int s = 0; s < d_spec; ++s) {
    for (int n = 0; n + 1 < d; ++n) {
      double ang = g * std::sqrt(n + 1.0) * t;
      int e_lo = idx(0, n, s), g_hi = idx(1, n + 1, s);
      u(e_lo, e_lo) = scalar * std::cos(ang);
      u(g_hi, g_hi) = scalar * std::cos(ang);
      u(e_lo, g_hi) = scalar * (-iu) * std::sin(ang);
      u(g_hi, e_lo) = scalar * (-iu) * std::sin(ang);
    }
  }
  return u;
}

// Number-selective qubit rotation. Every occupation pair (n1, n2) with
// n1 - n2 = delta_n gets the cell unitary
//   [ e^{-i alpha} cos(theta)        -i e^{-i beta} sin(theta) ]
//   [ -i e^{i beta} sin(theta)        e^{i alpha} cos(theta)   ]
// in its (e, g) basis; all other occupations are untouched.
inline Matrix rotation_gate(int delta_n, double theta, double alpha,
                            double beta, const HilbertSpace& space) {
  detail::require_two_mode(space, "rotation_gate");
  Complex uc = std::exp(-iu * alpha) * std::cos(theta);
  Complex lc = std::exp(iu * alpha) * std::cos(theta);
  Complex us = -iu * std::exp(-iu * beta) * std::sin(theta);
  Complex ls = -iu * std::exp(iu * beta) * std::sin(theta);
  Matrix u = Matrix::Identity(space.dim(), space.dim());
  for (int n1 = 0; n1 < space.dims[1]; ++n1) {
    int n2 = n1 - delta_n;
    if (n2 < 0 || n2 >= space.dims[2]) continue;
    int e = space.index({0, n1, n2}), g = space.index({1, n1, n2});
    u(e, e) = uc;
    u(g, g) = lc;
    u(e, g) = us;
    u(g, e) = ls;
  }
  return u;
}

// Qubit rotation with no number selectivity: every occupation cell gets the
// same (alpha = 0) cell unitary. Models a drive strong enough that the
// occupation-dependent frequency spread is negligible.
inline Matrix qubit_flip_gate(double theta, double beta,
                              const HilbertSpace& space) {
  detail::require_two_mode(space, "qubit_flip_gate");
  Complex c = std::cos(theta);
  Complex us = -iu * std::exp(-iu * beta) * std::sin(theta);
  Complex ls = -iu * std::exp(iu * beta) * std::sin(theta);
  Matrix u = Matrix::Identity(space.dim(), space.dim());
  for (int n1 = 0; n1 < space.dims[1]; ++n1) {
    for (int n2 = 0; n2 < space.dims[2]; ++n2) {
      int e = space.index({0, n1, n2}), g = space.index({1, n1, n2});
      u(e, e) = c;
      u(g, g) = c;
      u(e, g) = us;
      u(g, e) = ls;
    }
  }
  return u;
}

// Number-selective rotation executed at finite drive amplitude. Every
// occupation cell sees the exact detuned Rabi unitary for a drive tuned to
// the segment's class: the targeted class (detuning zero) gets precisely the
// ideal cell unitary, every other class leaks with probability bounded by
// (omega / detuning)^2. Expressed in the same bookkeeping frame as
// rotation_gate, so the zero-amplitude limit is the identity. Flips drive
// the class-0 frequency with no selectivity intended; the same formula
// covers them. Diagonal-phase rotations have no single-drive realization.
inline Matrix finite_drive_rotation_gate(const SystemParams& p,
                                         const PulseSegment& seg,
                                         const HilbertSpace& space) {
  detail::require_two_mode(space, "finite_drive_rotation_gate");
  if (seg.alpha != 0.0)
    throw std::invalid_argument(
        "finite_drive_rotation_gate: rotations with a diagonal phase cannot "
        "be driven by a single tone");
  if (seg.duration == 0.0)
    return Matrix::Identity(space.dim(), space.dim());
  double tau = seg.duration;
  double omega = 2.0 * seg.theta / tau;
  int dn = seg.kind == SegmentKind::QubitFlip ? 0 : seg.delta_n;
  double drive = selective_drive_frequency(p, dn);
  double s1 = p.g1 * p.g1 / p.delta1;
  double s2 = p.g2 * p.g2 / p.delta2;
  Matrix u = Matrix::Identity(space.dim(), space.dim());
  for (int n1 = 0; n1 < space.dims[1]; ++n1) {
    for (int n2 = 0; n2 < space.dims[2]; ++n2) {
      double wq = p.omega_z_sel + s1 * (2.0 * n1 + 1.0) + s2 * (2.0 * n2 + 1.0);
      double del = drive - wq;
      double w = std::hypot(omega, del);
      double half = 0.5 * w * tau;
      // exp(-i tau [(omega/2)(cos b sx + sin b sy) - (del/2) sz]) times the
      // frame phase diag(e^{-i del tau/2}, e^{+i del tau/2}); sinc keeps the
      // resonant zero-amplitude corner finite.
      double c = std::cos(half);
      double s = w > 0.0 ? std::sin(half) / w : 0.5 * tau;
      Complex fe = std::exp(-iu * 0.5 * del * tau);
      int e = space.index({0, n1, n2}), g = space.index({1, n1, n2});
      u(e, e) = fe * (c + iu * s * del);
      u(e, g) = fe * (-iu) * s * omega * std::exp(-iu * seg.beta);
      u(g, e) = std::conj(fe) * (-iu) * s * omega * std::exp(iu * seg.beta);
      u(g, g) = std::conj(fe) * (c - iu * s * del);
    }
  }
  return u;
}

// Free precession with the qubit parked at omega_z_idle: a pure diagonal
// phase. This is the knob protocols use to line relative phases up.
inline Matrix idle_gate(const SystemParams& p, double tau,
                        const HilbertSpace& space) {
  detail::require_two_mode(space, "idle_gate");
  Matrix u = Matrix::Zero(space.dim(), space.dim());
  for (int i = 0; i < space.dim(); ++i) {
    auto ix = space.unravel(i);
    double w = (ix[0] == 0 ? p.omega_z_idle : 0.0) + p.omega_b1 * ix[1] +
               p.omega_b2 * ix[2];
    u(i, i) = std::exp(-iu * w * tau);
  }
  return u;
}

// Generator whose exact exponential reproduces the closed-form gate of the
// segment, scalar phase included. Rotations with alpha != 0 have no static
// generator of this form and are rejected.
inline Matrix ideal_segment_hamiltonian(const SystemParams& p,
                                        const PulseSegment& seg,
                                        const HilbertSpace& space) {
  detail::require_two_mode(space, "ideal_segment_hamiltonian");
  int dim = space.dim();
  switch (seg.kind) {
    case SegmentKind::TransferMode1:
    case SegmentKind::TransferMode2: {
      int mode = seg.kind == SegmentKind::TransferMode1 ? 1 : 2;
      double g = mode == 1 ? p.g1 : p.g2;
      double wb = mode == 1 ? p.omega_b1 : p.omega_b2;
      Matrix b = embed(annihilation(space.dims[mode]), space, mode);
      Matrix ex = embed(sigma_eg(), space, 0) * b;
      return wb * Matrix::Identity(dim, dim) + g * (ex + Matrix(ex.adjoint()));
    }
    case SegmentKind::Rotation: {
      if (seg.alpha != 0.0)
        throw std::invalid_argument(
            "ideal_segment_hamiltonian: rotations with a diagonal phase have "
            "no static generator");
      if (seg.duration == 0.0) return Matrix::Zero(dim, dim);
      double half_amp = seg.theta / seg.duration;  // = omega_s / 2
      Matrix h = Matrix::Zero(dim, dim);
      Complex up = half_amp * std::exp(-iu * seg.beta);  // e row, g column
      for (int n1 = 0; n1 < space.dims[1]; ++n1) {
        int n2 = n1 - seg.delta_n;
        if (n2 < 0 || n2 >= space.dims[2]) continue;
        int e = space.index({0, n1, n2}), g = space.index({1, n1, n2});
        h(e, g) = up;
        h(g, e) = std::conj(up);
      }
      return h;
    }
    case SegmentKind::QubitFlip: {
      if (seg.duration == 0.0) return Matrix::Zero(dim, dim);
      double half_amp = seg.theta / seg.duration;
      Complex up = half_amp * std::exp(-iu * seg.beta);
      Matrix h = Matrix::Zero(dim, dim);
      for (int n1 = 0; n1 < space.dims[1]; ++n1) {
        for (int n2 = 0; n2 < space.dims[2]; ++n2) {
          int e = space.index({0, n1, n2}), g = space.index({1, n1, n2});
          h(e, g) = up;
          h(g, e) = std::conj(up);
        }
      }
      return h;
    }
    case SegmentKind::Idle: {
      Matrix h = Matrix::Zero(dim, dim);
      for (int i = 0; i < dim; ++i) {
        auto ix = space.unravel(i);
        h(i, i) = (ix[0] == 0 ? p.omega_z_idle : 0.0) + p.omega_b1 * ix[1] +
                  p.omega_b2 * ix[2];
      }
      return h;
    }
  }
  throw std::logic_error("ideal_segment_hamiltonian: unknown segment kind");
}

// Closed-form gate of one segment.
inline Matrix segment_gate(const SystemParams& p, const PulseSegment& seg,
                           const HilbertSpace& space) {
  switch (seg.kind) {
    case SegmentKind::TransferMode1:
      return transfer_gate(p, 1, seg.duration, space);
    case SegmentKind::TransferMode2:
      return transfer_gate(p, 2, seg.duration, space);
    case SegmentKind::Rotation:
      return rotation_gate(seg.delta_n, seg.theta, seg.alpha, seg.beta, space);
    case SegmentKind::QubitFlip:
      return qubit_flip_gate(seg.theta, seg.beta, space);
    case SegmentKind::Idle:
      return idle_gate(p, seg.duration, space);
  }
  throw std::logic_error("segment_gate: unknown segment kind");
}

}  // namespace duet
