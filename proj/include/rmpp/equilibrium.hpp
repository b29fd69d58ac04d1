#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rmpp/model.hpp"

namespace rmpp {

enum class EquilibriumKind { Origin, PreyOnly, Coexistence };

enum class Stability { Saddle, Sink, Source, NonHyperbolic };

std::string_view to_string(EquilibriumKind kind);
std::string_view to_string(Stability s);

struct Equilibrium {
  State point;
  EquilibriumKind kind = EquilibriumKind::Origin;
  Stability classification = Stability::NonHyperbolic;
  std::pair<std::complex<double>, std::complex<double>> eigenvalues;
};

enum class Verdict { PredatorExtinct_mLEc, PredatorExtinct_kBound, CoexistencePossible };

std::string_view to_string(Verdict v);

struct ExtinctionVerdict {
  Verdict verdict;
  std::string rationale;
};

/// Real parts within this distance of zero are classified NonHyperbolic.
inline constexpr double kHyperbolicityTolerance = 1e-9;

/// |k(m-c) - c| at or below this is treated as the K2/K3 collision (no K3).
inline constexpr double kCollisionTolerance = 1e-12;

/// True when m > c and k(m-c) > c, i.e. the coexistence point lies in D.
bool coexistence_exists(const ModelParams& params);

/// K1 = (0,0), K2 = (k,0) and, when it exists, the closed-form K3, each classified.
std::vector<Equilibrium> find_equilibria(const ModelParams& params);

Mat2 jacobian(const ModelParams& params, const State& x);

/// Eigenvalues of a real 2x2 matrix from its characteristic polynomial.
std::pair<std::complex<double>, std::complex<double>> eigenvalues(const Mat2& a);

/// Classification from eigenvalue real parts.
Stability classify_eigenvalues(const std::pair<std::complex<double>, std::complex<double>>& ev);

/// Classification from the signs of trace and determinant only.
Stability classify_trace_det(const Mat2& a);

/// Fills eigenvalues and classification. Throws ContractViolation when the
/// point is not an equilibrium (drift residual >= 1e-10).
Equilibrium classify(const ModelParams& params, Equilibrium e);

/// k at which K3 changes from sink to source: (m+c)/(m-c). Requires m > c.
double hopf_threshold(double m, double c);

ExtinctionVerdict extinction_check(const ModelParams& params);

/// Both sides of (1+N*) tr J(K3) = (2N*/k)((k-1)/2 - N*).
struct TraceIdentity {
  double lhs;
  double rhs;
};

TraceIdentity trace_identity_check(const ModelParams& params);

}  // namespace rmpp
