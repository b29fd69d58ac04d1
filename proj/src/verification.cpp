#include "rmpp/verification.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rmpp/errors.hpp"

namespace rmpp {

State GridSpec::point(std::size_t row, std::size_t col) const {
  const double steps = static_cast<double>(resolution);
  const double n = col + 1 == resolution ? n_max : n_min + (n_max - n_min) * (col + 1) / steps;
  const double p = row + 1 == resolution ? p_max : p_min + (p_max - p_min) * (row + 1) / steps;
  return {n, p};
}

void GridSpec::validate() const {
  if (resolution < 1) throw std::domain_error("grid resolution must be >= 1");
  if (!(n_min < n_max) || !(p_min < p_max) || !std::isfinite(n_max) || !std::isfinite(p_max)) {
    throw std::domain_error("grid bounds must be finite and ordered");
  }
  if (n_min < 0.0 || p_min < 0.0) throw std::domain_error("grid must lie in the closed quadrant");
}

double monotonicity_constant(const ModelParams& params) {
  params.validate();
  return (5.0 + 6.0 * params.m + params.c) / 4.0 + 1.0 / (2.0 * params.k);
}

double moment_constant(const ModelParams& params, double p) {
  params.validate();
  if (!(p >= 2.0)) throw std::domain_error("moment constant requires p >= 2");
  return 1.0 + params.m + (p - 1.0) / 4.0 * (1.0 + 2.0 * params.m + params.c) +
         (p - 1.0) / (2.0 * params.k);
}

double lyapunov_constant(const ModelParams& params, double alpha) {
  params.validate();
  if (!(alpha > 2.0)) throw std::domain_error("Lyapunov constant requires alpha > 2");
  const double a = alpha;
  const double m = params.m;
  const double c = params.c;
  const double k = params.k;
  return 3.0 * a + 5.0 * a * m / 2.0 + a * c / 2.0 + a / k +
         a * (a - 1.0) * (1.0 + 2.0 / k + 2.0 * m + c);
}

BoundConstants bound_constants(const ModelParams& params, double p, double alpha) {
  return {monotonicity_constant(params), moment_constant(params, p), lyapunov_constant(params, alpha),
          alpha};
}

namespace {

template <class Slack>
VerificationReport scan_grid(std::string name, const GridSpec& grid, Slack&& slack) {
  VerificationReport rep;
  rep.inequality_name = std::move(name);
  rep.grid = grid;
  bool first = true;
  for (std::size_t row = 0; row < grid.resolution; ++row) {
    for (std::size_t col = 0; col < grid.resolution; ++col) {
      const State x = grid.point(row, col);
      const double s = slack(x);
      ++rep.evaluated;
      // Strict comparison keeps the lowest row-major index on ties.
      if (first || s > rep.worst_slack) {
        rep.worst_slack = s;
        rep.worst_point = x;
        first = false;
      }
    }
  }
  rep.pass = rep.worst_slack <= 0.0;
  return rep;
}

}  // namespace

VerificationReport check_generator_inequality(const ModelParams& params, double alpha,
                                              const GridSpec& grid,
                                              std::optional<double> constant_override) {
  const double c_lyap = constant_override.value_or(lyapunov_constant(params, alpha));
  const ScalarField v = lyapunov_candidate(alpha);
  grid.validate();
  if (!(grid.n_min > 0.0) || !(grid.p_min > 0.0)) {
    throw std::domain_error("generator check needs strictly positive grid bounds");
  }
  std::ostringstream name;
  name << "generator: L V <= " << c_lyap << " V, V = (1+N^2+P^2)^" << alpha;
  return scan_grid(name.str(), grid, [&](const State& x) {
    return generator_apply(params, v, x) - c_lyap * v.value(x);
  });
}

double monotonicity_slack(const ModelParams& params, const State& x, double constant) {
  const DriftVector mu = drift(params, x);
  const DiffusionDiagonal g = diffusion(params, x);
  const double lhs = x.n * mu.dn + x.p * mu.dp + 0.5 * (g.g11 * g.g11 + g.g22 * g.g22);
  return lhs - constant * (1.0 + x.n * x.n + x.p * x.p);
}

VerificationReport check_monotonicity(const ModelParams& params, const GridSpec& grid,
                                      std::optional<double> constant_override) {
  const double c_mono = constant_override.value_or(monotonicity_constant(params));
  grid.validate();
  std::ostringstream name;
  name << "monotonicity: x.mu + |sigma|_F^2/2 <= " << c_mono << " (1+|x|^2)";
  return scan_grid(name.str(), grid,
                   [&](const State& x) { return monotonicity_slack(params, x, c_mono); });
}

double moment_bound(const ModelParams& params, const State& x0, double p, double t) {
  if (!(p > 0.0)) throw std::domain_error("moment bound requires p > 0");
  const double r2 = x0.n * x0.n + x0.p * x0.p;
  if (p < 2.0) {
    return std::pow(1.0 + r2, p / 2.0) * std::exp(p * monotonicity_constant(params) * t);
  }
  return std::pow(2.0, (p - 2.0) / 2.0) * (1.0 + std::pow(r2, p / 2.0)) *
         std::exp(p * moment_constant(params, p) * t);
}

VerificationReport check_moment_bound(const MomentSeries& stats, const ModelParams& params,
                                      const State& x0, double p) {
  if (!(p > 0.0)) throw std::domain_error("moment check requires p > 0");
  if (stats.p != p) throw ContractViolation("moment check: p does not match the series");
  if (stats.times.empty() || stats.times.size() != stats.values.size()) {
    throw ContractViolation("moment check: malformed series");
  }
  VerificationReport rep;
  std::ostringstream name;
  name << "moment: E|X_t|^" << p << " <= growth bound";
  rep.inequality_name = name.str();
  rep.worst_point = x0;
  for (std::size_t i = 0; i < stats.times.size(); ++i) {
    const double s = stats.values[i] - moment_bound(params, x0, p, stats.times[i]);
    ++rep.evaluated;
    if (i == 0 || s > rep.worst_slack) {
      rep.worst_slack = s;
      rep.worst_time = stats.times[i];
    }
  }
  rep.pass = rep.worst_slack <= 0.0;
  return rep;
}

}  // namespace rmpp
