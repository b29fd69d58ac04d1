#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rmpp/model.hpp"

namespace rmpp {

/// What happens to a component that an Euler-Maruyama step drives below zero.
enum class ClampPolicy { ProjectToZero };

struct SimConfig {
  double t_end = 10.0;              ///< horizon T
  std::uint64_t m_steps = 4000;     ///< number M of equidistant steps
  std::uint64_t seed = 0;
  std::uint64_t stride = 1;         ///< record every stride-th state; must divide m_steps
  bool zero_noise = false;          ///< test hook: every increment is 0
  ClampPolicy clamp_policy = ClampPolicy::ProjectToZero;

  double delta() const { return t_end / static_cast<double>(m_steps); }
  /// Throws std::domain_error when the configuration is unusable.
  void validate() const;
};

/// Euler-Maruyama sample path recorded at every `stride`-th grid time.
struct SamplePath {
  std::vector<double> times;
  std::vector<State> states;
  std::size_t clamp_events = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
};

struct EmStep {
  State state;
  unsigned clamped_components = 0;
  bool clamped() const { return clamped_components != 0; }
};

/// N' = N + mu_N delta + g11 dw1, P' = P + mu_P delta + g22 dw2, with negative
/// components projected to 0. Throws std::domain_error on non-finite input,
/// a state outside the closed quadrant, or delta <= 0.
EmStep em_step(const ModelParams& params, const State& x, double delta, double dw1, double dw2);

/// Path driven by NoiseStream(cfg.seed, stream_index). Throws IntegrationBlowup
/// if a step produces a non-finite state.
SamplePath simulate_path(const ModelParams& params, const State& x0, const SimConfig& cfg,
                         std::uint64_t stream_index);

/// Terminal state of an EM path over [0, t_end] driven by the given increments
/// (one (dW1, dW2) per step). Returns the clamp count through `clamps` when set.
State em_terminal_state(const ModelParams& params, const State& x0, double t_end,
                        std::span<const Vec2> increments, std::size_t* clamps = nullptr);

struct RefinementLevel {
  double delta;       ///< coarse step of the compared pair
  double difference;  ///< |X_T(delta) - X_T(delta/2)|
};

/// Simulates on nested grids base_steps * 2^j, j < levels, all driven by one
/// Brownian path (coarse increments are sums of fine ones), and reports the
/// terminal difference between consecutive levels. levels <= 1 gives an
/// empty report.
std::vector<RefinementLevel> strong_self_convergence(const ModelParams& params, const State& x0,
                                                     double t_end, std::uint64_t seed,
                                                     std::uint64_t base_steps = 64,
                                                     unsigned levels = 4,
                                                     std::uint64_t stream_index = 0,
                                                     bool zero_noise = false);

}  // namespace rmpp
