#pragma once

// Rosenzweig-MacArthur predator-prey model with demographic noise.
//
// Nondimensional deterministic system
//   dN/dt = N(1 - N/k) - mNP/(1+N)
//   dP/dt = -cP + mNP/(1+N)
// and its stochastic extension dX = mu(X) dt + sigma(X) dB with the diagonal
// diffusion
//   sigma_11 = sqrt(N(1 + N/k) + mNP/(1+N)),  sigma_22 = sqrt(cP + mNP/(1+N)).

#include <array>
#include <functional>

namespace rmpp {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<Vec2, 2>;

/// Dimensional parameters of the original model (all strictly positive).
struct RawParams {
  double r;      ///< intrinsic prey growth rate, 1/time
  double K;      ///< carrying capacity, density
  double s;      ///< predator search rate, area/time
  double tau;    ///< handling time
  double c_raw;  ///< predator death rate, 1/time
  double d_raw;  ///< conversion efficiency
};

/// Nondimensional parameter triple (m, c, k). Every entry must be positive.
struct ModelParams {
  double m;
  double c;
  double k;

  /// Throws std::domain_error unless m, c, k are finite and positive.
  void validate() const;
  bool operator==(const ModelParams&) const = default;
};

/// Point in the closed positive quadrant.
struct State {
  double n = 0.0;
  double p = 0.0;

  bool interior() const { return n > 0.0 && p > 0.0; }
  bool in_closed_quadrant() const { return n >= 0.0 && p >= 0.0; }
  bool operator==(const State&) const = default;
};

struct DriftVector {
  double dn;
  double dp;
};

/// Diagonal of sigma; the off-diagonal entries are identically zero.
struct DiffusionDiagonal {
  double g11;
  double g22;
};

/// A C^2 scalar field with analytic derivatives.
struct ScalarField {
  std::function<double(const State&)> value;
  std::function<Vec2(const State&)> gradient;
  std::function<Mat2(const State&)> hessian;
};

struct Nondimensionalization {
  ModelParams params;
  double prey_scale;      ///< X: N_raw = X * n
  double predator_scale;  ///< Y: P_raw = Y * p
  double time_scale;      ///< t_raw = time_scale * t
};

/// Maps (r, K, s, tau, c, d) to (m, c, k) together with the scale factors.
Nondimensionalization nondimensionalize(const RawParams& raw);

/// Right-hand side of the dimensional model.
DriftVector raw_drift(const RawParams& raw, const State& x);

DriftVector drift(const ModelParams& params, const State& x);

/// Throws std::domain_error for a state outside the closed quadrant.
DiffusionDiagonal diffusion(const ModelParams& params, const State& x);

/// Infinitesimal generator L v = mu . grad v + 1/2 tr(sigma sigma^T hess v)
/// at an interior point.
double generator_apply(const ModelParams& params, const ScalarField& v, const State& x);

/// V(N, P) = (1 + N^2 + P^2)^alpha, alpha > 2.
ScalarField lyapunov_candidate(double alpha);

}  // namespace rmpp
