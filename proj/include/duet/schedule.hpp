#pragma once

#include <duet/types.hpp>

#include <sstream>

namespace duet {

// One control segment. Exactly one knob is active at a time: the qubit is
// parked on a mode (transfer), parked far away while a number-selective
// drive runs (rotation), driven hard enough to flip regardless of mode
// occupation (qubit flip), or parked far away with no drive (idle).
enum class SegmentKind { TransferMode1, TransferMode2, Rotation, QubitFlip, Idle };

struct PulseSegment {
  SegmentKind kind;
  double duration = 0.0;
  // rotation-only fields
  int delta_n = 0;     // occupation-difference class the drive addresses
  double theta = 0.0;  // rotation angle, duration * Omega_s / 2
  double alpha = 0.0;  // diagonal phase; generators only support 0
  double beta = 0.0;   // rotation axis azimuth
};

namespace detail {
inline void require_duration(double t, const char* who) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument(std::string(who) + ": duration must be finite and >= 0");
}
}  // namespace detail

inline PulseSegment transfer1(double t) {
  detail::require_duration(t, "transfer1");
  return {SegmentKind::TransferMode1, t};
}

inline PulseSegment transfer2(double t) {
  detail::require_duration(t, "transfer2");
  return {SegmentKind::TransferMode2, t};
}

// Rotation duration follows the pulse-area convention: a drive of amplitude
// omega_s applied for time t rotates by theta = omega_s * t / 2, so a full
// flip (theta = pi/2) is an area-pi pulse lasting pi / omega_s.
inline PulseSegment rotation(int delta_n, double theta, double beta,
                             double omega_s) {
  if (!(theta >= 0.0) || !std::isfinite(theta))
    throw std::invalid_argument("rotation: theta must be finite and >= 0");
  if (!(omega_s > 0.0))
    throw std::invalid_argument("rotation: omega_s must be > 0");
  PulseSegment s{SegmentKind::Rotation, 2.0 * theta / omega_s};
  s.delta_n = delta_n;
  s.theta = theta;
  s.beta = beta;
  return s;
}

// Non-selective qubit rotation: same pulse, driven hard and fast so every
// occupation class rotates together.
inline PulseSegment qubit_flip(double theta, double beta, double omega_s) {
  if (!(theta >= 0.0) || !std::isfinite(theta))
    throw std::invalid_argument("qubit_flip: theta must be finite and >= 0");
  if (!(omega_s > 0.0))
    throw std::invalid_argument("qubit_flip: omega_s must be > 0");
  PulseSegment s{SegmentKind::QubitFlip, 2.0 * theta / omega_s};
  s.theta = theta;
  s.beta = beta;
  return s;
}

inline PulseSegment idle(double tau) {
  detail::require_duration(tau, "idle");
  return {SegmentKind::Idle, tau};
}

struct PulseSchedule {
  std::vector<PulseSegment> segments;

  double total_duration() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.duration;
    return t;
  }
  std::size_t count(SegmentKind k) const {
    std::size_t n = 0;
    for (const auto& s : segments) n += (s.kind == k);
    return n;
  }
};

inline std::string describe(const PulseSegment& s) {
  std::ostringstream os;
  switch (s.kind) {
    case SegmentKind::TransferMode1:
      os << "transfer1(t=" << s.duration << ")";
      break;
    case SegmentKind::TransferMode2:
      os << "transfer2(t=" << s.duration << ")";
      break;
    case SegmentKind::Rotation:
      os << "rotation(dn=" << s.delta_n << ", theta=" << s.theta
         << ", beta=" << s.beta << ")";
      break;
    case SegmentKind::QubitFlip:
      os << "qubit_flip(theta=" << s.theta << ", beta=" << s.beta << ")";
      break;
    case SegmentKind::Idle:
      os << "idle(t=" << s.duration << ")";
      break;
  }
  return os.str();
}

}  // namespace duet
