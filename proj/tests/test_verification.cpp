#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rmpp/ensemble.hpp"
#include "rmpp/errors.hpp"
#include "rmpp/verification.hpp"

using namespace rmpp;

namespace {

const ModelParams kPara1{3.0, 1.0, 3.0};
const ModelParams kPara2{3.0, 1.0, 1.5};

}  // namespace

TEST_CASE("monotonicity constant") {
  CHECK(monotonicity_constant(kPara1) == doctest::Approx(37.0 / 6.0));
  CHECK(monotonicity_constant(kPara2) == doctest::Approx(19.0 / 3.0));
  CHECK(monotonicity_constant({1e-12, 1e-12, 1e12}) == doctest::Approx(1.25));
}

TEST_CASE("moment constant") {
  CHECK(moment_constant(kPara1, 2.0) == doctest::Approx(37.0 / 6.0));
  const ModelParams q{1.7, 0.4, 2.2};
  CHECK(moment_constant(q, 2.0) ==
        doctest::Approx(1 + q.m + (1 + 2 * q.m + q.c) / 4 + 1 / (2 * q.k)));
  CHECK(moment_constant(kPara1, 4.0) == doctest::Approx(1 + 3 + 0.75 * 8 + 0.5));
  CHECK_THROWS_AS(moment_constant(kPara1, 1.5), std::domain_error);
}

TEST_CASE("lyapunov constant") {
  CHECK(lyapunov_constant(kPara1, 3.0) == doctest::Approx(86.0));
  CHECK(lyapunov_constant(kPara2, 3.0) == doctest::Approx(91.0));
  CHECK_THROWS_AS(lyapunov_constant(kPara1, 2.0), std::domain_error);
  double prev = lyapunov_constant(kPara1, 2.01);
  for (double a = 2.1; a < 8.0; a += 0.1) {
    const double next = lyapunov_constant(kPara1, a);
    CHECK(next > prev);
    prev = next;
  }
  const BoundConstants bc = bound_constants(kPara1, 2.0, 3.0);
  CHECK(bc.c_mono == monotonicity_constant(kPara1));
  CHECK(bc.c_lyap == lyapunov_constant(kPara1, 3.0));
  CHECK(bc.alpha == 3.0);
}

TEST_CASE("grid geometry") {
  const GridSpec g{0.0, 10.0, 1.0, 3.0, 4};
  CHECK(g.point(0, 0) == State{2.5, 1.5});
  CHECK(g.point(3, 3) == State{10.0, 3.0});
  CHECK(g.point(1, 2) == State{7.5, 2.0});
  CHECK_THROWS_AS((GridSpec{1.0, 1.0, 0.0, 1.0, 3}.validate()), std::domain_error);
  CHECK_THROWS_AS((GridSpec{-1.0, 1.0, 0.0, 1.0, 3}.validate()), std::domain_error);
  CHECK_THROWS_AS((GridSpec{0.0, 1.0, 0.0, 1.0, 0}.validate()), std::domain_error);
}

TEST_CASE("generator inequality") {
  SUBCASE("default grids pass for both parameter sets") {
    for (const ModelParams& q : {kPara1, kPara2}) {
      const auto rep = check_generator_inequality(q, 3.0, default_generator_grid());
      CHECK(rep.pass);
      CHECK(rep.worst_slack <= 0.0);
      CHECK(rep.evaluated == 40000);
    }
  }
  SUBCASE("single point at (1,1)") {
    // By hand: mu = (-5/6, 1/2), grad V = (54, 54), V_NN = V_PP = 126,
    // g11^2 = 17/6, g22^2 = 5/2, so LV = -18 + 336 = 318 and V = 27.
    const auto rep = check_generator_inequality(kPara1, 3.0, {0.5, 1.0, 0.5, 1.0, 1});
    CHECK(rep.evaluated == 1);
    CHECK(rep.worst_point == State{1.0, 1.0});
    CHECK(rep.worst_slack == doctest::Approx(318.0 - 86.0 * 27.0));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(check_generator_inequality(kPara1, 2.0, default_generator_grid()), std::domain_error);
    CHECK_THROWS_AS(check_generator_inequality(kPara1, 3.0, default_monotonicity_grid()), std::domain_error);
  }
  SUBCASE("a small constant fails") {
    const auto rep = check_generator_inequality(kPara1, 3.0, default_generator_grid(), 3.0);
    CHECK_FALSE(rep.pass);
    CHECK(rep.worst_point.interior());
  }
}

TEST_CASE("generator matches finite differences at random grid points") {
  const ScalarField v = lyapunov_candidate(3.0);
  const GridSpec grid = default_generator_grid();
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> idx(0, grid.resolution - 1);
  for (int i = 0; i < 100; ++i) {
    const State x = grid.point(idx(rng), idx(rng));
    // Central differences of V alone; drift and diffusion written out here.
    const auto V = [&](double n, double p) { return std::pow(1 + n * n + p * p, 3.0); };
    const double hn = 1e-4 * std::max(1.0, x.n);
    const double hp = 1e-4 * std::max(1.0, x.p);
    const double vn = (V(x.n + hn, x.p) - V(x.n - hn, x.p)) / (2 * hn);
    const double vp = (V(x.n, x.p + hp) - V(x.n, x.p - hp)) / (2 * hp);
    const double vnn = (V(x.n + hn, x.p) - 2 * V(x.n, x.p) + V(x.n - hn, x.p)) / (hn * hn);
    const double vpp = (V(x.n, x.p + hp) - 2 * V(x.n, x.p) + V(x.n, x.p - hp)) / (hp * hp);
    const double f = kPara1.m * x.n * x.p / (1 + x.n);
    const double mun = x.n * (1 - x.n / kPara1.k) - f;
    const double mup = -kPara1.c * x.p + f;
    const double a11 = x.n * (1 + x.n / kPara1.k) + f;
    const double a22 = kPara1.c * x.p + f;
    const double oracle = mun * vn + mup * vp + 0.5 * (a11 * vnn + a22 * vpp);
    const double scale = std::abs(mun * vn) + std::abs(mup * vp) + std::abs(0.5 * a11 * vnn) +
                         std::abs(0.5 * a22 * vpp);
    CHECK(std::abs(generator_apply(kPara1, v, x) - oracle) <= 1e-6 * scale);
  }
}

TEST_CASE("monotonicity") {
  CHECK(monotonicity_slack(kPara1, {0.0, 0.0}, monotonicity_constant(kPara1)) ==
        doctest::Approx(-37.0 / 6.0));
  for (const ModelParams& q : {kPara1, kPara2}) {
    const auto rep = check_monotonicity(q, default_monotonicity_grid());
    CHECK(rep.pass);
    CHECK(rep.evaluated == 40000);
  }
  // The worst ratio on this grid is about 0.85, so c_mono/10 must fail.
  const auto bad = check_monotonicity(kPara1, default_monotonicity_grid(), monotonicity_constant(kPara1) / 10);
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst_point.interior());
}

TEST_CASE("worst point is the first maximiser in row-major order") {
  // With constant 0 the slack depends on the grid only through lhs; a
  // one-row grid along N at P = tiny makes the ordering observable.
  const GridSpec g{0.0, 4.0, 0.0, 1e-9, 4};
  const auto rep = check_monotonicity(kPara1, g, 0.0);
  double best = -INFINITY;
  State arg{};
  for (std::size_t r = 0; r < g.resolution; ++r)
    for (std::size_t c = 0; c < g.resolution; ++c) {
      const double s = monotonicity_slack(kPara1, g.point(r, c), 0.0);
      if (s > best) { best = s; arg = g.point(r, c); }
    }
  CHECK(rep.worst_slack == best);
  CHECK(rep.worst_point == arg);
}

TEST_CASE("moment bound") {
  const State x0{1.0, 0.6};
  const double r2 = 1.36;
  CHECK(moment_bound(kPara1, x0, 1.0, 0.0) == doctest::Approx(std::sqrt(1 + r2)));
  CHECK(moment_bound(kPara1, x0, 2.0, 0.0) == doctest::Approx(1 + r2));
  CHECK(moment_bound(kPara1, x0, 4.0, 0.0) == doctest::Approx(2 * (1 + r2 * r2)));
  for (double p : {0.5, 1.0, 2.0, 3.0, 4.0}) CHECK(moment_bound(kPara1, x0, p, 0.0) >= std::pow(r2, p / 2));
  CHECK(moment_bound(kPara1, x0, 1.0, 2.0) ==
        doctest::Approx(std::sqrt(1 + r2) * std::exp(2.0 * 37.0 / 6.0)));
  CHECK_THROWS_AS(moment_bound(kPara1, x0, 0.0, 1.0), std::domain_error);
}

TEST_CASE("moment checks on a desk ensemble") {
  SimConfig cfg;
  cfg.t_end = 5.0;
  cfg.m_steps = 2000;
  cfg.seed = 21;
  cfg.stride = 10;
  const auto paths1 = simulate_ensemble(kPara1, {1.0, 0.6}, cfg, 200);
  const auto rep1 = check_moment_bound(moment_series(paths1, 1.0), kPara1, {1.0, 0.6}, 1.0);
  CHECK(rep1.pass);
  CHECK(rep1.evaluated == 201);
  const auto paths2 = simulate_ensemble(kPara2, {1.0, 0.6}, cfg, 200);
  CHECK(check_moment_bound(moment_series(paths2, 2.0), kPara2, {1.0, 0.6}, 2.0).pass);

  CHECK_THROWS_AS(check_moment_bound(moment_series(paths2, 2.0), kPara2, {1.0, 0.6}, 4.0),
                  ContractViolation);
  CHECK_THROWS_AS(check_moment_bound(moment_series(paths2, 2.0), kPara2, {1.0, 0.6}, 0.0),
                  std::domain_error);

  // A series above the bound fails at the offending time.
  MomentSeries fake{1.0, {0.0, 1.0}, {0.0, 1e9}};
  const auto bad = check_moment_bound(fake, kPara1, {1.0, 0.6}, 1.0);
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst_time == 1.0);
}
