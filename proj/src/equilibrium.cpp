#include "rmpp/equilibrium.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rmpp/errors.hpp"

namespace rmpp {

std::string_view to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::Origin: return "origin";
    case EquilibriumKind::PreyOnly: return "prey_only";
    case EquilibriumKind::Coexistence: return "coexistence";
  }
  return "unknown";
}

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::Saddle: return "saddle";
    case Stability::Sink: return "sink";
    case Stability::Source: return "source";
    case Stability::NonHyperbolic: return "non_hyperbolic";
  }
  return "unknown";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::PredatorExtinct_mLEc: return "predator_extinct_m_le_c";
    case Verdict::PredatorExtinct_kBound: return "predator_extinct_k_bound";
    case Verdict::CoexistencePossible: return "coexistence_possible";
  }
  return "unknown";
}

bool coexistence_exists(const ModelParams& params) {
  return params.m > params.c && params.k * (params.m - params.c) - params.c > kCollisionTolerance;
}

std::vector<Equilibrium> find_equilibria(const ModelParams& params) {
  params.validate();
  std::vector<Equilibrium> out;
  out.push_back(classify(params, {State{0.0, 0.0}, EquilibriumKind::Origin, {}, {}}));
  out.push_back(classify(params, {State{params.k, 0.0}, EquilibriumKind::PreyOnly, {}, {}}));
  if (coexistence_exists(params)) {
    const double gap = params.m - params.c;
    const State k3{params.c / gap, (params.k * gap - params.c) / (params.k * gap * gap)};
    out.push_back(classify(params, {k3, EquilibriumKind::Coexistence, {}, {}}));
  }
  return out;
}

Mat2 jacobian(const ModelParams& params, const State& x) {
  const double q = 1.0 + x.n;
  const double dn_prey = params.m * x.p / (q * q);
  const double response = params.m * x.n / q;
  return {Vec2{1.0 - 2.0 * x.n / params.k - dn_prey, -response},
          Vec2{dn_prey, -params.c + response}};
}

std::pair<std::complex<double>, std::complex<double>> eigenvalues(const Mat2& a) {
  const double half_tr = 0.5 * (a[0][0] + a[1][1]);
  const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  const double disc = half_tr * half_tr - det;
  if (disc >= 0.0) {
    // Larger-magnitude root first, the other from the product to avoid cancellation.
    const double big = half_tr + std::copysign(std::sqrt(disc), half_tr);
    const double small = big != 0.0 ? det / big : 0.0;
    return {std::complex<double>(big, 0.0), std::complex<double>(small, 0.0)};
  }
  const double im = std::sqrt(-disc);
  return {std::complex<double>(half_tr, im), std::complex<double>(half_tr, -im)};
}

Stability classify_eigenvalues(const std::pair<std::complex<double>, std::complex<double>>& ev) {
  const double r1 = ev.first.real();
  const double r2 = ev.second.real();
  if (std::abs(r1) <= kHyperbolicityTolerance || std::abs(r2) <= kHyperbolicityTolerance) {
    return Stability::NonHyperbolic;
  }
  if (r1 < 0.0 && r2 < 0.0) return Stability::Sink;
  if (r1 > 0.0 && r2 > 0.0) return Stability::Source;
  return Stability::Saddle;
}

Stability classify_trace_det(const Mat2& a) {
  const double tr = a[0][0] + a[1][1];
  const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  constexpr double tol = kHyperbolicityTolerance;
  // A real eigenvalue near zero makes det small relative to the trace.
  if (std::abs(det) <= tol * (std::abs(tr) + tol)) return Stability::NonHyperbolic;
  if (det < 0.0) return Stability::Saddle;
  if (std::abs(tr) <= 2.0 * tol) return Stability::NonHyperbolic;
  return tr < 0.0 ? Stability::Sink : Stability::Source;
}

Equilibrium classify(const ModelParams& params, Equilibrium e) {
  const DriftVector f = drift(params, e.point);
  const double residual = std::hypot(f.dn, f.dp);
  if (!(residual < 1e-10)) {
    std::ostringstream msg;
    msg << "classify: (" << e.point.n << ", " << e.point.p
        << ") is not an equilibrium, drift residual " << residual;
    throw ContractViolation(msg.str());
  }
  e.eigenvalues = eigenvalues(jacobian(params, e.point));
  e.classification = classify_eigenvalues(e.eigenvalues);
  return e;
}

double hopf_threshold(double m, double c) {
  if (!(m > c) || !(c > 0.0)) {
    throw std::domain_error("Hopf threshold requires m > c > 0");
  }
  return (m + c) / (m - c);
}

ExtinctionVerdict extinction_check(const ModelParams& params) {
  params.validate();
  std::ostringstream why;
  if (params.m <= params.c) {
    why << "m = " << params.m << " <= c = " << params.c
        << ": dP/dt <= (m - c) P <= 0, so the predator dies out";
    return {Verdict::PredatorExtinct_mLEc, why.str()};
  }
  const double margin = params.k * (params.m - params.c) - params.c;
  if (margin <= kCollisionTolerance) {
    why << "k(m - c) = " << params.k * (params.m - params.c) << " <= c = " << params.c
        << ": N <= k keeps mN/(1+N) <= c, so the predator dies out";
    if (std::abs(margin) <= kCollisionTolerance) {
      why << " (boundary case: the coexistence point collides with (k, 0))";
    }
    return {Verdict::PredatorExtinct_kBound, why.str()};
  }
  why << "m > c and k(m - c) > c: coexistence equilibrium exists in the open quadrant";
  return {Verdict::CoexistencePossible, why.str()};
}

TraceIdentity trace_identity_check(const ModelParams& params) {
  params.validate();
  if (!coexistence_exists(params)) {
    throw std::domain_error("trace identity needs the coexistence equilibrium (m > c, k(m-c) > c)");
  }
  const double gap = params.m - params.c;
  const State k3{params.c / gap, (params.k * gap - params.c) / (params.k * gap * gap)};
  const Mat2 j = jacobian(params, k3);
  const double n_star = k3.n;
  return {(1.0 + n_star) * (j[0][0] + j[1][1]),
          (2.0 * n_star / params.k) * ((params.k - 1.0) / 2.0 - n_star)};
}

}  // namespace rmpp
