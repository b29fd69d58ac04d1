#include "rmpp/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rmpp {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

// Holling type-II interaction term mNP/(1+N).
double predation(const ModelParams& params, const State& x) {
  return params.m * x.n * x.p / (1.0 + x.n);
}

}  // namespace

void ModelParams::validate() const {
  if (!positive_finite(m) || !positive_finite(c) || !positive_finite(k)) {
    throw std::domain_error("model parameters must be positive and finite (m=" + std::to_string(m) +
                            ", c=" + std::to_string(c) + ", k=" + std::to_string(k) + ")");
  }
}

Nondimensionalization nondimensionalize(const RawParams& raw) {
  for (double v : {raw.r, raw.K, raw.s, raw.tau, raw.c_raw, raw.d_raw}) {
    if (!positive_finite(v)) {
      throw std::domain_error("raw parameters must all be positive and finite");
    }
  }
  // Space scaling first: s*tau*X = 1, Y = d*X, m = d/tau, k = K/X.
  const double X = 1.0 / (raw.s * raw.tau);
  const double Y = raw.d_raw * X;
  const double m_space = raw.d_raw / raw.tau;
  const double k = raw.K / X;
  // Then time scaling t' = r t, which divides m and c by r.
  Nondimensionalization out;
  out.params = ModelParams{m_space / raw.r, raw.c_raw / raw.r, k};
  out.prey_scale = X;
  out.predator_scale = Y;
  out.time_scale = 1.0 / raw.r;
  return out;
}

DriftVector raw_drift(const RawParams& raw, const State& x) {
  const double kill = raw.s * x.n * x.p / (1.0 + raw.s * raw.tau * x.n);
  return {raw.r * x.n * (1.0 - x.n / raw.K) - kill, -raw.c_raw * x.p + raw.d_raw * kill};
}

DriftVector drift(const ModelParams& params, const State& x) {
  const double h = predation(params, x);
  return {x.n * (1.0 - x.n / params.k) - h, -params.c * x.p + h};
}

DiffusionDiagonal diffusion(const ModelParams& params, const State& x) {
  if (!(x.n >= 0.0) || !(x.p >= 0.0)) {
    throw std::domain_error("diffusion evaluated outside the closed quadrant");
  }
  const double h = predation(params, x);
  return {std::sqrt(x.n * (1.0 + x.n / params.k) + h), std::sqrt(params.c * x.p + h)};
}

double generator_apply(const ModelParams& params, const ScalarField& v, const State& x) {
  if (!x.interior()) {
    throw std::domain_error("generator evaluated outside the open quadrant");
  }
  const DriftVector mu = drift(params, x);
  const DiffusionDiagonal g = diffusion(params, x);
  const Vec2 grad = v.gradient(x);
  const Mat2 hess = v.hessian(x);
  // a = sigma sigma^T is diagonal, so the mixed partials drop out.
  return mu.dn * grad[0] + mu.dp * grad[1] +
         0.5 * (g.g11 * g.g11 * hess[0][0] + g.g22 * g.g22 * hess[1][1]);
}

ScalarField lyapunov_candidate(double alpha) {
  if (!(alpha > 2.0) || !std::isfinite(alpha)) {
    throw std::domain_error("Lyapunov candidate requires alpha > 2");
  }
  ScalarField v;
  v.value = [alpha](const State& x) {
    return std::pow(1.0 + x.n * x.n + x.p * x.p, alpha);
  };
  v.gradient = [alpha](const State& x) -> Vec2 {
    const double u = 1.0 + x.n * x.n + x.p * x.p;
    const double w = 2.0 * alpha * std::pow(u, alpha - 1.0);
    return {w * x.n, w * x.p};
  };
  v.hessian = [alpha](const State& x) -> Mat2 {
    const double u = 1.0 + x.n * x.n + x.p * x.p;
    const double first = 2.0 * alpha * std::pow(u, alpha - 1.0);
    const double second = 4.0 * alpha * (alpha - 1.0) * std::pow(u, alpha - 2.0);
    const double off = second * x.n * x.p;
    return {Vec2{first + second * x.n * x.n, off}, Vec2{off, first + second * x.p * x.p}};
  };
  return v;
}

}  // namespace rmpp
