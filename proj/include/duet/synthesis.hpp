#pragma once

#include <duet/engines.hpp>

#include <limits>
#include <random>

namespace duet {

// Joint two-mode target amplitudes on the ground-qubit manifold; entry
// (n1, n2) multiplies |g, n1, n2>.
struct TargetState {
  Matrix c;

  explicit TargetState(Matrix grid) : c(std::move(grid)) {
    if (c.rows() < 1 || c.cols() < 1)
      throw std::invalid_argument("TargetState: empty grid");
    if (std::abs(std::sqrt(c.squaredNorm()) - 1.0) > 1e-12)
      throw std::invalid_argument("TargetState: amplitudes must be normalized");
  }
  int n1() const { return int(c.rows()) - 1; }
  int n2() const { return int(c.cols()) - 1; }
};

inline TargetState random_target(int n1, int n2, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Matrix c(n1 + 1, n2 + 1);
  for (int a = 0; a <= n1; ++a)
    for (int b = 0; b <= n2; ++b) c(a, b) = Complex(n01(rng), n01(rng));
  c /= std::sqrt(c.squaredNorm());
  return TargetState(c);
}

// Equal magnitudes, seeded random phases: the benchmark family used when a
// concrete target is needed but only its size is specified.
inline TargetState random_phase_target(int n1, int n2, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
  Matrix c(n1 + 1, n2 + 1);
  double a0 = 1.0 / std::sqrt((n1 + 1.0) * (n2 + 1.0));
  for (int a = 0; a <= n1; ++a)
    for (int b = 0; b <= n2; ++b) c(a, b) = a0 * std::exp(iu * u(rng));
  return TargetState(c);
}

// One guard level per mode: the algorithm never populates it, and the gates
// stay exact because the top excited doublet partner is present.
inline HilbertSpace synthesis_space(int n1, int n2) {
  return HilbertSpace{2, n1 + 2, n2 + 2};
}

inline Vector embed_target(const TargetState& t, const HilbertSpace& space) {
  if (space.factors() != 3 || space.dims[0] != 2 ||
      space.dims[1] < t.n1() + 1 || space.dims[2] < t.n2() + 1)
    throw std::invalid_argument("embed_target: target does not fit the space");
  Vector psi = Vector::Zero(space.dim());
  for (int a = 0; a <= t.n1(); ++a)
    for (int b = 0; b <= t.n2(); ++b)
      psi(space.index({1, a, b})) = t.c(a, b);
  return psi;
}

// ---------------------------------------------------------------------------
// timing solver

enum class TrigKind { Sin, Cos };

struct TrigTerm {
  double weight;
  double coefficient;
  TrigKind kind;
};

// One scalar constraint: sum_i weight_i * trig_i(coefficient_i * t) = 0.
struct TrigCondition {
  std::vector<TrigTerm> terms;
};

inline TrigCondition sin_zero(double c) { return {{{1.0, c, TrigKind::Sin}}}; }
inline TrigCondition cos_zero(double c) { return {{{1.0, c, TrigKind::Cos}}}; }
// sin(cs t) = cos(cc t), expressed as a zero condition
inline TrigCondition sin_cos_equal(double cs, double cc) {
  return {{{1.0, cs, TrigKind::Sin}, {-1.0, cc, TrigKind::Cos}}};
}

struct TimingSolution {
  double duration;
  double residual;
};

namespace detail {
template <class F>
double golden_min(F f, double a, double b, int iters = 160) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}
}  // namespace detail

// Smallest-residual duration in [0, window_pis * pi]: dense scan (1e4 points
// per pi), then golden-section refinement of every local basin. Near-equal
// residuals resolve to the shorter duration.
inline TimingSolution solve_timing(const std::vector<TrigCondition>& conditions,
                                   double window_pis) {
  if (conditions.empty())
    throw std::invalid_argument("solve_timing: needs at least one condition");
  for (const auto& c : conditions) {
    if (c.terms.empty())
      throw std::invalid_argument("solve_timing: condition has no terms");
    for (const auto& t : c.terms)
      if (!(t.coefficient > 0.0) || !std::isfinite(t.coefficient))
        throw std::invalid_argument("solve_timing: coefficients must be > 0");
  }
  if (!(window_pis > 0.0))
    throw std::invalid_argument("solve_timing: empty search window");

  auto residual = [&](double t) {
    double s = 0.0;
    for (const auto& c : conditions) {
      double v = 0.0;
      for (const auto& term : c.terms) {
        double x = term.coefficient * t;
        v += term.weight *
             (term.kind == TrigKind::Sin ? std::sin(x) : std::cos(x));
      }
      s += v * v;
    }
    return std::sqrt(s);
  };

  double window = window_pis * pi;
  long n = long(std::ceil(window_pis * 1e4));
  double h = window / double(n);
  std::vector<double> vals(std::size_t(n) + 1);
  for (long k = 0; k <= n; ++k) vals[std::size_t(k)] = residual(k * h);

  TimingSolution best{0.0, std::numeric_limits<double>::infinity()};
  for (long k = 0; k <= n; ++k) {
    bool lo = k == 0 || vals[std::size_t(k)] <= vals[std::size_t(k) - 1];
    bool hi = k == n || vals[std::size_t(k)] <= vals[std::size_t(k) + 1];
    if (!(lo && hi)) continue;
    double a = std::max(0.0, (k - 1) * h), b = std::min(window, (k + 1) * h);
    double t = detail::golden_min(residual, a, b);
    double r = residual(t);
    if (r < best.residual - 1e-12 ||
        (std::abs(r - best.residual) <= 1e-12 && t < best.duration))
      best = {t, r};
  }
  return best;
}

// ---------------------------------------------------------------------------
// schedule synthesis

// Budgeted duration for an (n1, n2) grid: one full-transfer resonant segment
// per emptied cell plus an area-pi pulse per rotation slot. The rotation
// budget counts (n1+1)(n2+1) slots; the emitted schedule always uses one
// fewer, since the ground cell needs no final fold.
inline double predicted_total_time(int n1, int n2, const SystemParams& p) {
  double t = (n1 + 1.0) * (n2 + 1.0) * pi / p.Omega_s;
  for (int j = 1; j <= n1; ++j) t += pi / (2.0 * std::sqrt(double(j)) * p.g1);
  double m2 = 0.0;
  for (int j = 1; j <= n2; ++j) m2 += pi / (2.0 * std::sqrt(double(j)) * p.g2);
  return t + (n1 + 1.0) * m2;
}

struct SynthesisReport {
  PulseSchedule schedule;
  double predicted_time = 0.0;   // budget formula above (protocols: their own)
  double worst_case_time = 0.0;  // emitted segments at worst-case durations
  double achieved_fidelity = 0.0;
  double inverse_residual = 0.0;
  std::vector<double> step_residuals;
  bool starts_excited = false;  // some protocols begin from |e, 0, 0>
};

inline Vector initial_state(const SynthesisReport& rep,
                            const HilbertSpace& space) {
  return basis_state(space, {rep.starts_excited ? 0 : 1, 0, 0});
}

// Disassemble the target to |g,0,0> cell by cell (rows top-down, columns
// right-to-left, then the bottom row leftward), recording the adjoint of
// every operation; the forward schedule is the reversed list. Every angle
// comes from the tracked numerical state, so earlier inexactness never
// compounds silently.
inline SynthesisReport synthesize(const TargetState& target,
                                  const SystemParams& p) {
  int n1 = target.n1(), n2 = target.n2();
  HilbertSpace space = synthesis_space(n1, n2);
  Vector psi = embed_target(target, space);

  SynthesisReport rep;
  std::vector<PulseSegment> inv;
  const double ztol = 1e-14;

  auto amp = [&](int q, int a, int b) { return psi(space.index({q, a, b})); };
  auto apply_inverse = [&](const PulseSegment& seg, double worst) {
    psi = Matrix(segment_gate(p, seg, space).adjoint()) * psi;
    inv.push_back(seg);
    rep.worst_case_time += worst;
  };

  // Empty |g, gn1, gn2> into its resonant partner |e, en1, en2>. If the
  // partner already holds amplitude, an idle first walks the doublet's
  // relative phase to the value the transfer needs.
  auto empty_cell = [&](int mode, int en1, int en2, int gn1, int gn2,
                        int quanta) {
    Complex e0 = amp(0, en1, en2), g0 = amp(1, gn1, gn2);
    if (std::abs(g0) <= ztol) {
      rep.step_residuals.push_back(std::abs(g0));
      return;
    }
    if (std::abs(e0) > ztol) {
      double rate = (mode == 1 ? p.omega_b1 : p.omega_b2) - p.omega_z_idle;
      if (std::abs(rate) < 1e-9)
        throw std::runtime_error(
            "synthesize: idle parking is degenerate with the driven mode, so "
            "doublet phases cannot be aligned");
      double cur = std::arg(g0 * std::conj(e0));
      double tau = std::fmod((-0.5 * pi - cur) / rate, 2.0 * pi / std::abs(rate));
      if (tau < 0.0) tau += 2.0 * pi / std::abs(rate);
      if (tau > 1e-12) apply_inverse(idle(tau), 0.0);
      e0 = amp(0, en1, en2);
      g0 = amp(1, gn1, gn2);
    }
    double g_cpl = (mode == 1 ? p.g1 : p.g2) * std::sqrt(double(quanta));
    double phi =
        std::abs(e0) > ztol ? std::atan2(std::abs(g0), std::abs(e0)) : 0.5 * pi;
    apply_inverse(mode == 1 ? transfer1(phi / g_cpl) : transfer2(phi / g_cpl),
                  0.5 * pi / g_cpl);
    rep.step_residuals.push_back(std::abs(amp(1, gn1, gn2)));
  };

  // Fold |e, a, b> onto |g, a, b> with a class-selective rotation. Cleared
  // cells of the same class (rows >= row_guard) must be empty or the pulse
  // would repopulate them.
  auto merge_cell = [&](int a, int b, int row_guard) {
    Complex e0 = amp(0, a, b);
    if (std::abs(e0) <= ztol) {
      rep.step_residuals.push_back(std::abs(e0));
      return;
    }
    int dn = a - b;
    for (int x = 0; x < space.dims[1]; ++x) {
      int y = x - dn;
      if (y < row_guard || y >= space.dims[2]) continue;
      if (x == a && y == b) continue;
      if (std::abs(amp(0, x, y)) > 1e-12 || std::abs(amp(1, x, y)) > 1e-12) {
        std::ostringstream os;
        os << "synthesize: rotation on class " << dn << " while folding cell ("
           << a << ", " << b << ") would disturb populated cell (" << x << ", "
           << y << ")";
        throw std::runtime_error(os.str());
      }
    }
    Complex g0 = amp(1, a, b);
    double theta = std::atan2(std::abs(e0), std::abs(g0));
    double arg_g = std::abs(g0) > ztol ? std::arg(g0) : 0.0;
    double beta = arg_g - std::arg(e0) - 0.5 * pi;
    apply_inverse(rotation(dn, theta, beta, p.Omega_s), pi / p.Omega_s);
    rep.step_residuals.push_back(std::abs(amp(0, a, b)));
  };

  for (int j = n2; j >= 1; --j)
    for (int k = n1; k >= 0; --k) {
      empty_cell(2, k, j - 1, k, j, j);
      merge_cell(k, j - 1, j);
    }
  for (int k = n1; k >= 1; --k) {
    empty_cell(1, k - 1, 0, k, 0, k);
    merge_cell(k - 1, 0, 1);
  }

  // amplitude stranded anywhere but |g,0,0> (norm drift excluded)
  psi(space.index({1, 0, 0})) = 0.0;
  rep.inverse_residual = psi.norm();
  rep.predicted_time = predicted_total_time(n1, n2, p);
  rep.schedule.segments.assign(inv.rbegin(), inv.rend());

  Vector fwd = run_schedule(p, rep.schedule, basis_state(space, {1, 0, 0}),
                            space, Engine::Analytic);
  rep.achieved_fidelity =
      std::norm((embed_target(target, space).adjoint() * fwd).value());
  return rep;
}

}  // namespace duet
