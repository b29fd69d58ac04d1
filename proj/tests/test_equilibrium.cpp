#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "rmpp/equilibrium.hpp"
#include "rmpp/errors.hpp"

using namespace rmpp;

namespace {

const ModelParams kPara1{3.0, 1.0, 3.0};
const ModelParams kPara2{3.0, 1.0, 1.5};

// Log-uniform draws in [0.1, 10]^3 rejected until K3 exists.
std::vector<ModelParams> coexistence_draws(std::size_t count, std::uint32_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
  std::vector<ModelParams> out;
  while (out.size() < count) {
    const ModelParams p{std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng))};
    if (p.m > p.c && p.k * (p.m - p.c) > p.c) out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("equilibria of the limit-cycle parameter set") {
  const auto eqs = find_equilibria(kPara1);
  REQUIRE(eqs.size() == 3);
  CHECK(eqs[0].kind == EquilibriumKind::Origin);
  CHECK(eqs[0].point == State{0.0, 0.0});
  CHECK(eqs[1].kind == EquilibriumKind::PreyOnly);
  CHECK(eqs[1].point == State{3.0, 0.0});
  CHECK(eqs[2].kind == EquilibriumKind::Coexistence);
  CHECK(std::abs(eqs[2].point.n - 0.5) <= 1e-15);
  CHECK(std::abs(eqs[2].point.p - 5.0 / 12.0) <= 1e-15);
  for (const auto& e : eqs) {
    const auto f = drift(kPara1, e.point);
    CHECK(std::hypot(f.dn, f.dp) <= 1e-12);
  }
}

TEST_CASE("no coexistence point when m <= c") {
  const auto eqs = find_equilibria({1.0, 2.0, 5.0});
  REQUIRE(eqs.size() == 2);
  CHECK(eqs[1].point == State{5.0, 0.0});
}

TEST_CASE("coexistence point for the sink parameter set") {
  const auto eqs = find_equilibria(kPara2);
  REQUIRE(eqs.size() == 3);
  CHECK(std::abs(eqs[2].point.n - 0.5) <= 1e-15);
  CHECK(std::abs(eqs[2].point.p - 1.0 / 3.0) <= 1e-15);
}

TEST_CASE("K2/K3 collision reports K3 absent") {
  // k(m - c) = c exactly: k = 0.5 with m = 3, c = 1.
  const ModelParams p{3.0, 1.0, 0.5};
  CHECK(find_equilibria(p).size() == 2);
  const auto v = extinction_check(p);
  CHECK(v.verdict == Verdict::PredatorExtinct_kBound);
  CHECK(v.rationale.find("collides") != std::string::npos);
}

TEST_CASE("jacobian matches the displayed matrices") {
  const Mat2 j1 = jacobian(kPara1, {0.0, 0.0});
  CHECK(j1[0][0] == 1.0);
  CHECK(j1[0][1] == 0.0);
  CHECK(j1[1][0] == 0.0);
  CHECK(j1[1][1] == -1.0);
  const Mat2 j2 = jacobian(kPara1, {3.0, 0.0});
  CHECK(j2[0][0] == doctest::Approx(-1.0));
  CHECK(j2[0][1] == doctest::Approx(-9.0 / 4.0));
  CHECK(j2[1][0] == 0.0);
  CHECK(j2[1][1] == doctest::Approx(9.0 / 4.0 - 1.0));
}

TEST_CASE("jacobian agrees with central differences of the drift") {
  const double h = 1e-6;
  for (const State x : {State{1.0, 1.0}, State{0.3, 2.2}, State{4.0, 0.1}}) {
    const Mat2 j = jacobian(kPara1, x);
    const auto fn_p = drift(kPara1, {x.n + h, x.p});
    const auto fn_m = drift(kPara1, {x.n - h, x.p});
    const auto fp_p = drift(kPara1, {x.n, x.p + h});
    const auto fp_m = drift(kPara1, {x.n, x.p - h});
    CHECK(std::abs(j[0][0] - (fn_p.dn - fn_m.dn) / (2 * h)) <= 1e-6);
    CHECK(std::abs(j[1][0] - (fn_p.dp - fn_m.dp) / (2 * h)) <= 1e-6);
    CHECK(std::abs(j[0][1] - (fp_p.dn - fp_m.dn) / (2 * h)) <= 1e-6);
    CHECK(std::abs(j[1][1] - (fp_p.dp - fp_m.dp) / (2 * h)) <= 1e-6);
  }
}

TEST_CASE("classification of the reference parameter sets") {
  const auto e1 = find_equilibria(kPara1);
  CHECK(e1[0].classification == Stability::Saddle);
  CHECK(e1[1].classification == Stability::Saddle);
  CHECK(e1[2].classification == Stability::Source);
  const auto e2 = find_equilibria(kPara2);
  CHECK(e2[2].classification == Stability::Sink);
  // Hopf point: zero trace.
  const auto eh = find_equilibria({3.0, 1.0, 2.0});
  CHECK(eh[2].classification == Stability::NonHyperbolic);
}

TEST_CASE("classify rejects non-equilibria") {
  Equilibrium e{State{1.0, 1.0}, EquilibriumKind::Coexistence, {}, {}};
  CHECK_THROWS_AS(classify(kPara1, e), ContractViolation);
}

TEST_CASE("hopf threshold") {
  CHECK(hopf_threshold(3.0, 1.0) == 2.0);
  for (double c : {0.1, 0.7, 2.5}) CHECK(hopf_threshold(2.0 * c, c) == doctest::Approx(3.0));
  CHECK_THROWS_AS(hopf_threshold(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(hopf_threshold(0.5, 1.0), std::domain_error);
}

TEST_CASE("extinction verdicts") {
  CHECK(extinction_check({1.0, 2.0, 5.0}).verdict == Verdict::PredatorExtinct_mLEc);
  CHECK(extinction_check({1.0, 1.0, 5.0}).verdict == Verdict::PredatorExtinct_mLEc);
  CHECK(extinction_check({3.0, 1.0, 0.4}).verdict == Verdict::PredatorExtinct_kBound);
  CHECK(extinction_check(kPara1).verdict == Verdict::CoexistencePossible);
  CHECK_FALSE(extinction_check(kPara1).rationale.empty());
}

TEST_CASE("trace identity") {
  const auto t1 = trace_identity_check(kPara1);
  CHECK(std::abs(t1.lhs - 1.0 / 6.0) <= 1e-12);
  CHECK(std::abs(t1.rhs - 1.0 / 6.0) <= 1e-12);
  const auto th = trace_identity_check({3.0, 1.0, 2.0});
  CHECK(std::abs(th.lhs) <= 1e-12);
  CHECK(std::abs(th.rhs) <= 1e-12);
  const auto t2 = trace_identity_check(kPara2);
  CHECK(std::abs(t2.lhs + 1.0 / 6.0) <= 1e-12);
  CHECK(std::abs(t2.rhs + 1.0 / 6.0) <= 1e-12);
  CHECK_THROWS_AS(trace_identity_check({1.0, 2.0, 5.0}), std::domain_error);
}

TEST_CASE("random draws: sign rule, saddles, determinant, identity, two classifiers") {
  std::size_t hyperbolic = 0;
  for (const ModelParams& p : coexistence_draws(1000, 7)) {
    const auto eqs = find_equilibria(p);
    REQUIRE(eqs.size() == 3);
    CHECK(eqs[0].classification == Stability::Saddle);
    CHECK(eqs[1].classification == Stability::Saddle);
    const Equilibrium& k3 = eqs[2];
    const Mat2 j = jacobian(p, k3.point);
    CHECK(j[0][0] * j[1][1] - j[0][1] * j[1][0] > 0.0);

    const auto ti = trace_identity_check(p);
    CHECK(std::abs(ti.lhs - ti.rhs) <= 1e-12);

    CHECK(classify_trace_det(j) == k3.classification);
    if (k3.classification == Stability::NonHyperbolic) continue;
    ++hyperbolic;
    const double gap = (p.k - 1.0) / 2.0 - k3.point.n;
    CHECK(k3.classification == (gap > 0.0 ? Stability::Source : Stability::Sink));
  }
  CHECK(hyperbolic > 990);
}
