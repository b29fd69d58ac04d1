#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rmpp/model.hpp"
#include "rmpp/ode.hpp"

using namespace rmpp;

namespace {

const ModelParams kPara1{3.0, 1.0, 3.0};

// Independent oracle: L v by central differences of v alone, with drift and
// variance terms written out from the model equations.
double generator_fd(const ModelParams& prm, const std::function<double(double, double)>& v, double n,
                    double p, double h) {
  const double h_int = prm.m * n * p / (1.0 + n);
  const double mu_n = n * (1.0 - n / prm.k) - h_int;
  const double mu_p = -prm.c * p + h_int;
  const double a11 = n * (1.0 + n / prm.k) + h_int;
  const double a22 = prm.c * p + h_int;
  const double vn = (v(n + h, p) - v(n - h, p)) / (2 * h);
  const double vp = (v(n, p + h) - v(n, p - h)) / (2 * h);
  const double vnn = (v(n + h, p) - 2 * v(n, p) + v(n - h, p)) / (h * h);
  const double vpp = (v(n, p + h) - 2 * v(n, p) + v(n, p - h)) / (h * h);
  return mu_n * vn + mu_p * vp + 0.5 * (a11 * vnn + a22 * vpp);
}

}  // namespace

TEST_CASE("nondimensionalize maps the reference raw set onto (3,1,3)") {
  const auto nd = nondimensionalize({1.0, 3.0, 1.0, 1.0, 1.0, 3.0});
  CHECK(nd.params.m == doctest::Approx(3.0));
  CHECK(nd.params.c == doctest::Approx(1.0));
  CHECK(nd.params.k == doctest::Approx(3.0));
  CHECK(nd.prey_scale == doctest::Approx(1.0));
  CHECK(nd.predator_scale == doctest::Approx(3.0));
  CHECK(nd.time_scale == doctest::Approx(1.0));
}

TEST_CASE("unit search rate and handling time leave k equal to K") {
  for (double K : {0.25, 1.0, 7.5, 120.0}) {
    CHECK(nondimensionalize({1.0, K, 1.0, 1.0, 0.4, 1.0}).params.k == doctest::Approx(K));
  }
}

TEST_CASE("nondimensionalize rejects nonpositive raw parameters") {
  CHECK_THROWS_AS(nondimensionalize({1.0, 3.0, 1.0, 0.0, 1.0, 3.0}), std::domain_error);
  CHECK_THROWS_AS(nondimensionalize({-1.0, 3.0, 1.0, 1.0, 1.0, 3.0}), std::domain_error);
  CHECK_THROWS_AS(nondimensionalize({1.0, 3.0, 1.0, 1.0, 1.0, 0.0}), std::domain_error);
}

TEST_CASE("rescaled dimensional flow matches the nondimensional flow") {
  // Generic raw set so every scale factor is nontrivial.
  const RawParams raw{0.8, 5.0, 1.7, 0.45, 0.35, 0.9};
  const auto nd = nondimensionalize(raw);
  const State raw0{1.3, 0.7};
  const State nd0{raw0.n / nd.prey_scale, raw0.p / nd.predator_scale};

  // Integrate both with RK4 at matched steps: raw step h corresponds to h / time_scale.
  const double t_raw_end = 10.0 * nd.time_scale;
  const std::size_t steps = 20000;
  const double h_raw = t_raw_end / steps;
  const double h_nd = h_raw / nd.time_scale;
  State xr = raw0;
  State xn = nd0;
  double worst = 0.0;
  const auto f_raw = [&raw](const State& x) { return raw_drift(raw, x); };
  const auto f_nd = [&nd](const State& x) { return drift(nd.params, x); };
  for (std::size_t i = 0; i < steps; ++i) {
    xr = rk4_step(f_raw, xr, h_raw);
    xn = rk4_step(f_nd, xn, h_nd);
    worst = std::max({worst, std::abs(xr.n / nd.prey_scale - xn.n),
                      std::abs(xr.p / nd.predator_scale - xn.p)});
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("drift vanishes at the three equilibria of (3,1,3)") {
  const DriftVector o = drift(kPara1, {0.0, 0.0});
  CHECK(o.dn == 0.0);
  CHECK(o.dp == 0.0);
  const DriftVector k2 = drift(kPara1, {3.0, 0.0});
  CHECK(k2.dn == 0.0);
  CHECK(k2.dp == 0.0);
  const DriftVector k3 = drift(kPara1, {0.5, 5.0 / 12.0});
  CHECK(std::abs(k3.dn) <= 1e-15);
  CHECK(std::abs(k3.dp) <= 1e-15);
}

TEST_CASE("diffusion entries") {
  const auto zero = diffusion(kPara1, {0.0, 0.0});
  CHECK(zero.g11 == 0.0);
  CHECK(zero.g22 == 0.0);
  const auto prey = diffusion(kPara1, {1.0, 0.0});
  CHECK(prey.g11 == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-15));
  CHECK(prey.g22 == 0.0);
  const auto pred = diffusion(kPara1, {0.0, 1.0});
  CHECK(pred.g11 == 0.0);
  CHECK(pred.g22 == doctest::Approx(1.0));
  CHECK_THROWS_AS(diffusion(kPara1, {-1e-3, 1.0}), std::domain_error);
}

TEST_CASE("squared diffusion matches the variance terms on a grid") {
  for (int i = 0; i <= 10; ++i) {
    for (int j = 0; j <= 10; ++j) {
      const State x{0.7 * i, 0.45 * j};
      const auto g = diffusion(kPara1, x);
      const double h = kPara1.m * x.n * x.p / (1.0 + x.n);
      CHECK(g.g11 * g.g11 == doctest::Approx(x.n * (1.0 + x.n / kPara1.k) + h).epsilon(1e-14));
      CHECK(g.g22 * g.g22 == doctest::Approx(kPara1.c * x.p + h).epsilon(1e-14));
      const auto f = drift(kPara1, x);
      CHECK(std::isfinite(f.dn));
      CHECK(std::isfinite(f.dp));
    }
  }
}

TEST_CASE("generator of a constant field is zero") {
  ScalarField v{[](const State&) { return 4.2; }, [](const State&) { return Vec2{0.0, 0.0}; },
                [](const State&) { return Mat2{Vec2{0.0, 0.0}, Vec2{0.0, 0.0}}; }};
  for (const State x : {State{0.1, 0.2}, State{1.0, 1.0}, State{7.0, 0.3}}) {
    CHECK(generator_apply(kPara1, v, x) == 0.0);
  }
}

TEST_CASE("generator of the prey coordinate is the prey drift") {
  ScalarField v{[](const State& x) { return x.n; }, [](const State&) { return Vec2{1.0, 0.0}; },
                [](const State&) { return Mat2{Vec2{0.0, 0.0}, Vec2{0.0, 0.0}}; }};
  CHECK(std::abs(generator_apply(kPara1, v, {0.5, 5.0 / 12.0})) <= 1e-15);
  CHECK(generator_apply(kPara1, v, {1.0, 1.0}) == doctest::Approx(drift(kPara1, {1.0, 1.0}).dn));
}

TEST_CASE("generator rejects boundary points") {
  const auto v = lyapunov_candidate(3.0);
  CHECK_THROWS_AS(generator_apply(kPara1, v, {0.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(generator_apply(kPara1, v, {1.0, 0.0}), std::domain_error);
}

TEST_CASE("generator on the Lyapunov candidate matches central differences") {
  const auto v = lyapunov_candidate(3.0);
  const auto plain = [](double n, double p) { return std::pow(1.0 + n * n + p * p, 3.0); };
  const double analytic = generator_apply(kPara1, v, {1.0, 1.0});
  const double oracle = generator_fd(kPara1, plain, 1.0, 1.0, 1e-5);
  CHECK(std::abs(analytic - oracle) <= 1e-6 * std::abs(oracle));
}

TEST_CASE("Lyapunov candidate values and derivatives") {
  const auto v = lyapunov_candidate(3.0);
  CHECK(v.value({0.0, 0.0}) == 1.0);
  CHECK(v.value({1.0, 1.0}) == 27.0);
  // d/dN (1+N^2+P^2)^3 = 6N (1+N^2+P^2)^2 = 24 at (1,0).
  const Vec2 g = v.gradient({1.0, 0.0});
  CHECK(g[0] == doctest::Approx(24.0));
  CHECK(g[1] == 0.0);
  CHECK_THROWS_AS(lyapunov_candidate(2.0), std::domain_error);
  CHECK_THROWS_AS(lyapunov_candidate(1.5), std::domain_error);
}

TEST_CASE("candidate derivatives agree with finite differences on a 10x10 grid") {
  for (double alpha : {2.5, 3.0, 4.0}) {
    const auto v = lyapunov_candidate(alpha);
    for (int i = 1; i <= 10; ++i) {
      for (int j = 1; j <= 10; ++j) {
        const State x{0.3 * i, 0.25 * j};
        const double h = 1e-4 * (1.0 + std::hypot(x.n, x.p));
        const auto val = [&](double dn, double dp) { return v.value({x.n + dn, x.p + dp}); };
        const Vec2 g = v.gradient(x);
        const Mat2 H = v.hessian(x);
        const double gn = (val(h, 0) - val(-h, 0)) / (2 * h);
        const double gp = (val(0, h) - val(0, -h)) / (2 * h);
        const double hnn = (val(h, 0) - 2 * val(0, 0) + val(-h, 0)) / (h * h);
        const double hpp = (val(0, h) - 2 * val(0, 0) + val(0, -h)) / (h * h);
        const double hnp = (val(h, h) - val(h, -h) - val(-h, h) + val(-h, -h)) / (4 * h * h);
        CHECK(g[0] == doctest::Approx(gn).epsilon(1e-6));
        CHECK(g[1] == doctest::Approx(gp).epsilon(1e-6));
        CHECK(H[0][0] == doctest::Approx(hnn).epsilon(1e-6));
        CHECK(H[1][1] == doctest::Approx(hpp).epsilon(1e-6));
        CHECK(H[0][1] == doctest::Approx(hnp).epsilon(1e-6));
        CHECK(H[0][1] == H[1][0]);
      }
    }
  }
}
