#pragma once

#include <duet/ops.hpp>
#include <duet/params.hpp>

namespace duet {

inline Matrix sigma_eg() {  // |e><g|, basis order (e, g)
  Matrix s = Matrix::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

inline Matrix sigma_z_half() {  // (|e><e| - |g><g|)/2
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = 0.5;
  s(1, 1) = -0.5;
  return s;
}

inline Matrix sigma_ee() {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = 1.0;
  return s;
}

inline Matrix sigma_x() {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 1) = 1.0;
  s(1, 0) = 1.0;
  return s;
}

// Rotating-frame model with the bus still present, one ensemble. Factors
// (qubit, collective mode, cavity); every term carries the common detuning
// phase exp(i Delta t). Hermitian for all t by construction.
inline Matrix full_hamiltonian(const SystemParams& p, double t,
                               const HilbertSpace& space) {
  if (space.factors() != 3 || space.dims[0] != 2)
    throw std::invalid_argument(
        "full_hamiltonian: expects (qubit, mode, cavity) factors");
  Matrix seg = embed(sigma_eg(), space, 0);
  Matrix b = embed(annihilation(space.dims[1]), space, 1);
  Matrix a = embed(annihilation(space.dims[2]), space, 2);
  Complex ph = std::exp(iu * p.Delta * t);
  Matrix h = p.g_c * seg * a * ph + p.Omega * seg * ph +
             std::sqrt(p.N1) * p.g_m1 * b.adjoint() * a * ph;
  return h + Matrix(h.adjoint());
}

// Exchange model after bus elimination, one ensemble, factors (qubit, mode).
inline Matrix effective_jc(const SystemParams& p, const HilbertSpace& space) {
  if (space.factors() != 2 || space.dims[0] != 2)
    throw std::invalid_argument("effective_jc: expects (qubit, mode) factors");
  auto d = derive(p, 1);
  Matrix b = embed(annihilation(space.dims[1]), space, 1);
  Matrix seg = embed(sigma_eg(), space, 0);
  Matrix ex = seg * b;  // absorb a mode quantum, excite the qubit
  Matrix h = d.omega_z * embed(sigma_z_half(), space, 0) +
             d.omega_b * Matrix(b.adjoint() * b) +
             d.g_eff * (ex + Matrix(ex.adjoint()));
  return h;
}

// Two-mode exchange model, factors (qubit, mode 1, mode 2). The qubit
// frequency is the knob protocols switch segment by segment, so it is an
// explicit argument rather than a params field.
inline Matrix two_mode_effective(const SystemParams& p, double omega_z,
                                 const HilbertSpace& space) {
  if (space.factors() != 3 || space.dims[0] != 2)
    throw std::invalid_argument(
        "two_mode_effective: expects (qubit, mode 1, mode 2) factors");
  Matrix b1 = embed(annihilation(space.dims[1]), space, 1);
  Matrix b2 = embed(annihilation(space.dims[2]), space, 2);
  Matrix seg = embed(sigma_eg(), space, 0);
  Matrix ex1 = seg * b1, ex2 = seg * b2;
  return omega_z * embed(sigma_z_half(), space, 0) +
         p.omega_b1 * Matrix(b1.adjoint() * b1) +
         p.omega_b2 * Matrix(b2.adjoint() * b2) +
         p.g1 * (ex1 + Matrix(ex1.adjoint())) +
         p.g2 * (ex2 + Matrix(ex2.adjoint()));
}

// Strong-drive frame: with the Rabi drive dominating both detunings and
// couplings, the qubit enters through sigma_x only and the modes are driven
// conditionally. Factors (qubit, mode 1, mode 2).
inline Matrix strong_driving_effective(const SystemParams& p, double t,
                                       const HilbertSpace& space) {
  if (space.factors() != 3 || space.dims[0] != 2)
    throw std::invalid_argument(
        "strong_driving_effective: expects (qubit, mode 1, mode 2) factors");
  Matrix b1 = embed(annihilation(space.dims[1]), space, 1);
  Matrix b2 = embed(annihilation(space.dims[2]), space, 2);
  Matrix sx = embed(sigma_x(), space, 0);
  Matrix half = 0.5 * sx *
                (p.g1 * b1 * std::exp(-iu * p.delta1 * t) +
                 p.g2 * b2 * std::exp(-iu * p.delta2 * t));
  return half + Matrix(half.adjoint());
}

}  // namespace duet
