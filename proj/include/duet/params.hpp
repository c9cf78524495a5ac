#pragma once

#include <duet/types.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

namespace duet {

// All frequencies are quoted in units of the enhanced transfer coupling of
// ensemble 1 (g1 = 1 at the reference point); times in its inverse.
//
// Microscopic fields describe the cavity-mediated model: qubit and ensembles
// couple to a common far-detuned bus mode, all with the same detuning Delta.
// The effective fields describe the two-mode exchange frame obtained after
// the bus is eliminated. resolve_effective() fills the latter from the
// former; configs that set effective fields directly may skip it.
struct SystemParams {
  // microscopic
  double g_c = 10.0;      // qubit-bus coupling
  double g_m1 = 0.1;      // per-spin coupling, ensemble 1
  double g_m2 = 0.1;      // per-spin coupling, ensemble 2
  double N1 = 1e4;        // spin count, ensemble 1
  double N2 = 1e4;        // spin count, ensemble 2 (resolve_effective may adjust)
  double Omega = 1.0;     // classical drive amplitude
  double Delta = 100.0;   // common detuning from the bus

  // selective-rotation stage
  double Omega_s = 5.0;   // Rabi amplitude of the number-selective drive
  double lambda = 50.0;   // per-quantum dispersive shift, g1^2/delta1

  // effective two-mode frame
  double omega_b1 = 1.0;
  double omega_b2 = 51.0 / 49.0;
  double g1 = 1.0;
  double g2 = std::sqrt(51.0 / 49.0);
  double delta1 = 0.02;        // omega_z_sel - omega_b1
  double delta2 = -51.0 / 2450.0;  // omega_z_sel - omega_b2
  double omega_z_sel = 1.02;   // parked qubit frequency during rotations
  double omega_z_idle = 3.0;   // parked qubit frequency during pauses

  // dissipation rates
  double kappa = 0.0;  // cavity
  double gamma = 0.0;  // qubit and collective modes
};

struct DerivedParams {
  double omega_z;  // qubit Stark-shifted frequency, 2 Omega^2/Delta + g_c^2/Delta
  double omega_b;  // collective-mode frequency, N g_m^2 / Delta
  double g_eff;    // exchange coupling, sqrt(N) g_m g_c / Delta
};

inline DerivedParams derive(const SystemParams& p, int ensemble) {
  double gm = ensemble == 1 ? p.g_m1 : p.g_m2;
  double n = ensemble == 1 ? p.N1 : p.N2;
  if (ensemble != 1 && ensemble != 2)
    throw std::invalid_argument("derive: ensemble must be 1 or 2");
  return {2.0 * p.Omega * p.Omega / p.Delta + p.g_c * p.g_c / p.Delta,
          n * gm * gm / p.Delta, std::sqrt(n) * gm * p.g_c / p.Delta};
}

// Fills the effective-frame fields from the microscopic ones. Ensemble 1 sets
// the scale; ensemble 2's spin count is adjusted so both modes see the same
// per-quantum shift magnitude lambda from the parked qubit (the matching the
// selective drive requires). The parked frequency sits above mode 1 by
// delta1 = g1^2/lambda and below mode 2 by |delta2| = g2^2/lambda.
inline void resolve_effective(SystemParams& p) {
  auto d1 = derive(p, 1);
  p.omega_b1 = d1.omega_b;
  p.g1 = d1.g_eff;
  p.delta1 = p.g1 * p.g1 / p.lambda;
  p.omega_z_sel = p.omega_b1 + p.delta1;
  // omega_b2 solves omega_b2 = omega_z_sel + g2^2/lambda with
  // g2^2 = omega_b2 * g_c^2/Delta, a linear fixed point.
  double r = p.g_c * p.g_c / p.Delta / p.lambda;
  if (r >= 1.0)
    throw std::invalid_argument("resolve_effective: lambda too small, no mode-2 placement");
  p.omega_b2 = p.omega_z_sel / (1.0 - r);
  p.N2 = p.omega_b2 * p.Delta / (p.g_m2 * p.g_m2);
  p.g2 = std::sqrt(p.N2) * p.g_m2 * p.g_c / p.Delta;
  p.delta2 = p.omega_z_sel - p.omega_b2;
}

// Dispersive-validity ratios; ratios below 10 draw a warning. Returns the
// warnings so callers can route them (the CLI prints to stderr).
inline std::vector<std::string> validity_warnings(const SystemParams& p) {
  std::vector<std::string> w;
  auto check = [&](double ratio, const std::string& what) {
    if (ratio < 10.0) {
      std::ostringstream os;
      os << "validity: " << what << " = " << ratio << " (want >= 10)";
      w.push_back(os.str());
    }
  };
  check(std::abs(p.Delta) / p.g_c, "|Delta|/g_c");
  check(std::abs(p.Delta) / (std::sqrt(p.N1) * p.g_m1), "|Delta|/(sqrt(N1) g_m1)");
  check(std::abs(p.Delta) / (std::sqrt(p.N2) * p.g_m2), "|Delta|/(sqrt(N2) g_m2)");
  if (p.Omega != 0.0) check(std::abs(p.Delta) / p.Omega, "|Delta|/Omega");
  if (p.Omega_s >= p.lambda) {
    std::ostringstream os;
    os << "validity: |Omega_s| = " << p.Omega_s << " must stay below lambda = "
       << p.lambda << " for number-selective rotations";
    w.push_back(os.str());
  }
  for (double sep : {std::abs(p.omega_z_idle - p.omega_b1),
                     std::abs(p.omega_z_idle - p.omega_b2)}) {
    if (sep < 0.1) {
      w.push_back("validity: idle parking frequency within 0.1 of a mode; pauses lose selectivity");
      break;
    }
  }
  return w;
}

// Stark-shifted resonance of the qubit when the modes hold (n_b1, n_b2)
// quanta. Errors out unless the per-quantum shifts of the two modes cancel
// pairwise, i.e. g1^2/delta1 = -g2^2/delta2 to 1e-9 relative.
inline double selective_drive_frequency(const SystemParams& p, int n_b1,
                                        int n_b2) {
  double s1 = p.g1 * p.g1 / p.delta1;
  double s2 = p.g2 * p.g2 / p.delta2;
  if (std::abs(s1 + s2) > 1e-9 * std::abs(s1)) {
    std::ostringstream os;
    os << "selective_drive_frequency: shift mismatch, g1^2/delta1 = " << s1
       << " vs -g2^2/delta2 = " << -s2;
    throw std::invalid_argument(os.str());
  }
  return p.omega_z_sel + s1 * (2 * n_b1 + 1) + s2 * (2 * n_b2 + 1);
}

// Same resonance indexed by the occupation difference dn = n_b1 - n_b2; the
// occupation-sum contributions cancel under shift matching.
inline double selective_drive_frequency(const SystemParams& p, int dn) {
  selective_drive_frequency(p, 0, 0);  // validates matching
  return p.omega_z_sel + 2.0 * (p.g1 * p.g1 / p.delta1) * dn;
}

}  // namespace duet
