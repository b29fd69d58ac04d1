#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rmpp/model.hpp"

namespace rmpp {

/// Uniformly sampled deterministic path; times[i] = i * dt.
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  ModelParams params{};
  double dt = 0.0;
  /// Number of components projected back to 0 after a step overshot.
  std::size_t clamp_events = 0;
};

/// One classical RK4 step for an arbitrary autonomous planar field.
template <class Field>
State rk4_step(const Field& f, const State& x, double h) {
  const DriftVector k1 = f(x);
  const DriftVector k2 = f(State{x.n + 0.5 * h * k1.dn, x.p + 0.5 * h * k1.dp});
  const DriftVector k3 = f(State{x.n + 0.5 * h * k2.dn, x.p + 0.5 * h * k2.dp});
  const DriftVector k4 = f(State{x.n + h * k3.dn, x.p + h * k3.dp});
  return {x.n + h / 6.0 * (k1.dn + 2.0 * k2.dn + 2.0 * k3.dn + k4.dn),
          x.p + h / 6.0 * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp)};
}

/// Fixed-step RK4 over [0, t_end] with floor(t_end/dt) steps. Negative
/// components are clamped to 0 and counted. Throws std::domain_error for bad
/// arguments and IntegrationBlowup on a non-finite state.
Trajectory integrate(const ModelParams& params, const State& x0, double t_end, double dt = 1e-3);

struct FieldSample {
  State at;
  DriftVector v;
};

/// Drift on a uniform resolution x resolution grid including both bounds.
/// Row-major: index = row * resolution + col, rows step P upward from p_min,
/// columns step N from n_min.
std::vector<FieldSample> vector_field_grid(const ModelParams& params, double n_min, double n_max,
                                           double p_min, double p_max, std::size_t resolution);

struct AsymptoticVerdict {
  enum class Kind { ConvergedToEquilibrium, LimitCycle, Undecided };

  Kind kind = Kind::Undecided;
  State point{};     ///< equilibrium estimate (ConvergedToEquilibrium)
  double period = 0.0;
  State box_min{};   ///< window bounding box (LimitCycle)
  State box_max{};
  std::string diagnostics;
};

std::string_view to_string(AsymptoticVerdict::Kind kind);

/// Inspects the trailing tail_fraction of the trajectory: a window whose range
/// is below 1e-6 in both components is an equilibrium; otherwise the period is
/// estimated from upward crossings of N through its window mean and accepted as
/// a limit cycle when the last five intervals agree to 1e-3 relative.
AsymptoticVerdict detect_asymptotics(const Trajectory& traj, double tail_fraction = 0.2);

}  // namespace rmpp
