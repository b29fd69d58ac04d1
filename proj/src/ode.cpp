#include "rmpp/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rmpp/errors.hpp"

namespace rmpp {

Trajectory integrate(const ModelParams& params, const State& x0, double t_end, double dt) {
  params.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::domain_error("integrate: dt must be positive");
  if (!(t_end >= dt) || !std::isfinite(t_end)) throw std::domain_error("integrate: need t_end >= dt");
  if (!x0.in_closed_quadrant()) throw std::domain_error("integrate: x0 outside the closed quadrant");

  // Tolerate t_end/dt landing a hair below an integer.
  const auto steps = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
  Trajectory traj;
  traj.params = params;
  traj.dt = dt;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(x0);

  const auto field = [&params](const State& x) { return drift(params, x); };
  State x = x0;
  for (std::size_t i = 1; i <= steps; ++i) {
    x = rk4_step(field, x, dt);
    if (!std::isfinite(x.n) || !std::isfinite(x.p)) {
      throw IntegrationBlowup("integrate: non-finite state at step " + std::to_string(i), i - 1);
    }
    if (x.n < 0.0) { x.n = 0.0; ++traj.clamp_events; }
    if (x.p < 0.0) { x.p = 0.0; ++traj.clamp_events; }
    traj.times.push_back(static_cast<double>(i) * dt);
    traj.states.push_back(x);
  }
  return traj;
}

std::vector<FieldSample> vector_field_grid(const ModelParams& params, double n_min, double n_max,
                                           double p_min, double p_max, std::size_t resolution) {
  if (resolution < 2) throw std::domain_error("vector_field_grid: resolution must be >= 2");
  if (!(n_min < n_max) || !(p_min < p_max)) {
    throw std::domain_error("vector_field_grid: bounds must be ordered");
  }
  const double last = static_cast<double>(resolution - 1);
  std::vector<FieldSample> out;
  out.reserve(resolution * resolution);
  for (std::size_t row = 0; row < resolution; ++row) {
    const double p = row + 1 == resolution ? p_max : p_min + (p_max - p_min) * row / last;
    for (std::size_t col = 0; col < resolution; ++col) {
      const double n = col + 1 == resolution ? n_max : n_min + (n_max - n_min) * col / last;
      const State at{n, p};
      out.push_back({at, drift(params, at)});
    }
  }
  return out;
}

std::string_view to_string(AsymptoticVerdict::Kind kind) {
  switch (kind) {
    case AsymptoticVerdict::Kind::ConvergedToEquilibrium: return "converged_to_equilibrium";
    case AsymptoticVerdict::Kind::LimitCycle: return "limit_cycle";
    case AsymptoticVerdict::Kind::Undecided: return "undecided";
  }
  return "unknown";
}

AsymptoticVerdict detect_asymptotics(const Trajectory& traj, double tail_fraction) {
  const std::size_t total = traj.states.size();
  if (total < 1000 || traj.times.size() != total) {
    throw ContractViolation("detect_asymptotics: trajectory needs at least 1000 samples");
  }
  if (!(tail_fraction > 0.0 && tail_fraction <= 0.5)) {
    throw ContractViolation("detect_asymptotics: tail_fraction must be in (0, 0.5]");
  }

  const auto window = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(total)));
  const std::size_t first = total - window;

  State lo = traj.states[first];
  State hi = lo;
  double sum_n = 0.0;
  double sum_p = 0.0;
  for (std::size_t i = first; i < total; ++i) {
    const State& x = traj.states[i];
    lo = {std::min(lo.n, x.n), std::min(lo.p, x.p)};
    hi = {std::max(hi.n, x.n), std::max(hi.p, x.p)};
    sum_n += x.n;
    sum_p += x.p;
  }
  const State mean{sum_n / window, sum_p / window};

  AsymptoticVerdict out;
  std::ostringstream diag;
  diag.precision(10);
  diag << "window [" << traj.times[first] << ", " << traj.times.back() << "], range (" << hi.n - lo.n
       << ", " << hi.p - lo.p << ")";

  if (hi.n - lo.n < 1e-6 && hi.p - lo.p < 1e-6) {
    const DriftVector f = drift(traj.params, mean);
    const double residual = std::hypot(f.dn, f.dp);
    diag << "; drift residual at window mean " << residual;
    if (residual < 1e-8) {
      out.kind = AsymptoticVerdict::Kind::ConvergedToEquilibrium;
      out.point = mean;
    } else {
      diag << " exceeds 1e-8, still settling";
    }
    out.diagnostics = diag.str();
    return out;
  }

  // Upward crossings of N through the window mean, linearly interpolated.
  std::vector<double> crossings;
  for (std::size_t i = first + 1; i < total; ++i) {
    const double a = traj.states[i - 1].n;
    const double b = traj.states[i].n;
    if (a < mean.n && b >= mean.n) {
      const double frac = (mean.n - a) / (b - a);
      crossings.push_back(traj.times[i - 1] + frac * (traj.times[i] - traj.times[i - 1]));
    }
  }
  diag << "; " << crossings.size() << " upward crossings";
  constexpr std::size_t kIntervals = 5;
  if (crossings.size() < kIntervals + 1) {
    out.diagnostics = diag.str();
    return out;
  }

  double imin = crossings.back() - crossings[crossings.size() - 2];
  double imax = imin;
  double isum = 0.0;
  for (std::size_t j = crossings.size() - kIntervals; j < crossings.size(); ++j) {
    const double d = crossings[j] - crossings[j - 1];
    imin = std::min(imin, d);
    imax = std::max(imax, d);
    isum += d;
  }
  const double period = isum / kIntervals;
  const double spread = (imax - imin) / period;
  diag << "; period " << period << ", relative spread " << spread;
  if (period > 0.0 && spread <= 1e-3) {
    out.kind = AsymptoticVerdict::Kind::LimitCycle;
    out.period = period;
    out.box_min = lo;
    out.box_max = hi;
  }
  out.diagnostics = diag.str();
  return out;
}

}  // namespace rmpp
