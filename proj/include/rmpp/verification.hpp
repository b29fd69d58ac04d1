#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "rmpp/ensemble.hpp"
#include "rmpp/model.hpp"

namespace rmpp {

/// Lower-open uniform grid (n_min, n_max] x (p_min, p_max] with `resolution`
/// points per axis: n_i = n_min + (i+1)(n_max - n_min)/resolution.
struct GridSpec {
  double n_min = 1e-3;
  double n_max = 10.0;
  double p_min = 1e-3;
  double p_max = 10.0;
  std::size_t resolution = 200;

  State point(std::size_t row, std::size_t col) const;
  void validate() const;
};

/// Default grid of the generator check, (1e-3, 10]^2 at 200 x 200.
inline GridSpec default_generator_grid() { return {1e-3, 10.0, 1e-3, 10.0, 200}; }
/// Default grid of the monotonicity check, (0, 10]^2 at 200 x 200.
inline GridSpec default_monotonicity_grid() { return {0.0, 10.0, 0.0, 10.0, 200}; }

/// Outcome of a grid certification of lhs <= rhs. The worst point is the
/// first in row-major order attaining the maximum slack.
struct VerificationReport {
  std::string inequality_name;
  GridSpec grid;
  State worst_point{};
  double worst_slack = 0.0;   ///< max(lhs - rhs)
  double worst_time = 0.0;    ///< moment checks only: time of the worst slack
  bool pass = false;
  std::size_t evaluated = 0;
};

// Naming: the generator-inequality constant (the one multiplying V in
// L V <= C V) is `lyapunov_constant`; the monotonicity constant that also
// bounds the Lyapunov exponent is `monotonicity_constant`. They are not
// interchangeable.

struct BoundConstants {
  double c_mono;
  double c_moment_p;
  double c_lyap;
  double alpha;
};

/// (5 + 6m + c)/4 + 1/(2k).
double monotonicity_constant(const ModelParams& params);

/// 1 + m + (p-1)/4 (1 + 2m + c) + (p-1)/(2k), p >= 2.
double moment_constant(const ModelParams& params, double p);

/// 3a + 5am/2 + ac/2 + a/k + a(a-1)(1 + 2/k + 2m + c), a > 2.
double lyapunov_constant(const ModelParams& params, double alpha);

BoundConstants bound_constants(const ModelParams& params, double p, double alpha);

/// L V <= c_lyap V for V = (1 + N^2 + P^2)^alpha on an interior grid.
/// `constant_override` replaces c_lyap (used to check that the harness can fail).
VerificationReport check_generator_inequality(const ModelParams& params, double alpha,
                                              const GridSpec& grid,
                                              std::optional<double> constant_override = {});

/// x.mu(x) + 1/2 ||sigma(x)||_F^2 - constant (1 + ||x||^2) at one point.
double monotonicity_slack(const ModelParams& params, const State& x, double constant);

/// x.mu(x) + 1/2 ||sigma(x)||_F^2 <= c_mono (1 + ||x||^2) on a grid in the
/// closed quadrant.
VerificationReport check_monotonicity(const ModelParams& params, const GridSpec& grid,
                                      std::optional<double> constant_override = {});

/// Moment growth bound for a deterministic start x0:
///   p < 2:  (1 + |x0|^2)^(p/2) exp(p c_mono t)
///   p >= 2: 2^((p-2)/2) (1 + |x0|^p) exp(p c_moment_p t)
double moment_bound(const ModelParams& params, const State& x0, double p, double t);

/// Worst slack of the Monte Carlo moments against moment_bound over all
/// recorded times.
VerificationReport check_moment_bound(const MomentSeries& stats, const ModelParams& params,
                                      const State& x0, double p);

}  // namespace rmpp
