#include "rmpp/sde.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

#include "rmpp/errors.hpp"
#include "rmpp/noise.hpp"

namespace rmpp {

void SimConfig::validate() const {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::domain_error("SimConfig: t_end must be positive");
  if (m_steps < 1) throw std::domain_error("SimConfig: m_steps must be >= 1");
  if (stride < 1 || m_steps % stride != 0) {
    throw std::domain_error("SimConfig: stride must be >= 1 and divide m_steps");
  }
}

EmStep em_step(const ModelParams& params, const State& x, double delta, double dw1, double dw2) {
  if (!std::isfinite(x.n) || !std::isfinite(x.p) || !std::isfinite(delta) || !std::isfinite(dw1) ||
      !std::isfinite(dw2)) {
    throw std::domain_error("em_step: non-finite input");
  }
  if (!(delta > 0.0)) throw std::domain_error("em_step: delta must be positive");
  const DriftVector mu = drift(params, x);
  const DiffusionDiagonal g = diffusion(params, x);
  EmStep out{{x.n + mu.dn * delta + g.g11 * dw1, x.p + mu.dp * delta + g.g22 * dw2}, 0};
  if (out.state.n < 0.0) { out.state.n = 0.0; ++out.clamped_components; }
  if (out.state.p < 0.0) { out.state.p = 0.0; ++out.clamped_components; }
  return out;
}

SamplePath simulate_path(const ModelParams& params, const State& x0, const SimConfig& cfg,
                         std::uint64_t stream_index) {
  params.validate();
  cfg.validate();
  if (!x0.in_closed_quadrant()) throw std::domain_error("simulate_path: x0 outside the closed quadrant");

  const double delta = cfg.delta();
  const NoiseStream noise(cfg.seed, stream_index);
  const std::size_t recorded = cfg.m_steps / cfg.stride + 1;

  SamplePath path;
  path.seed = cfg.seed;
  path.stream_index = stream_index;
  path.times.reserve(recorded);
  path.states.reserve(recorded);
  path.times.push_back(0.0);
  path.states.push_back(x0);

  State x = x0;
  for (std::uint64_t n = 0; n < cfg.m_steps; ++n) {
    double dw1 = 0.0;
    double dw2 = 0.0;
    if (!cfg.zero_noise) std::tie(dw1, dw2) = noise.increments(n, delta);
    EmStep step;
    try {
      step = em_step(params, x, delta, dw1, dw2);
    } catch (const std::domain_error& e) {
      throw IntegrationBlowup(std::string("simulate_path: step ") + std::to_string(n) + ": " + e.what(),
                              static_cast<std::size_t>(n));
    }
    if (!std::isfinite(step.state.n) || !std::isfinite(step.state.p)) {
      throw IntegrationBlowup("simulate_path: non-finite state at step " + std::to_string(n + 1),
                              static_cast<std::size_t>(n));
    }
    x = step.state;
    path.clamp_events += step.clamped_components;
    if ((n + 1) % cfg.stride == 0) {
      path.times.push_back(static_cast<double>(n + 1) * delta);
      path.states.push_back(x);
    }
  }
  return path;
}

State em_terminal_state(const ModelParams& params, const State& x0, double t_end,
                        std::span<const Vec2> increments, std::size_t* clamps) {
  if (increments.empty()) throw std::domain_error("em_terminal_state: no increments");
  const double delta = t_end / static_cast<double>(increments.size());
  State x = x0;
  std::size_t count = 0;
  for (const Vec2& dw : increments) {
    const EmStep step = em_step(params, x, delta, dw[0], dw[1]);
    x = step.state;
    count += step.clamped_components;
  }
  if (clamps != nullptr) *clamps = count;
  return x;
}

std::vector<RefinementLevel> strong_self_convergence(const ModelParams& params, const State& x0,
                                                     double t_end, std::uint64_t seed,
                                                     std::uint64_t base_steps, unsigned levels,
                                                     std::uint64_t stream_index, bool zero_noise) {
  params.validate();
  if (!(t_end > 0.0)) throw std::domain_error("strong_self_convergence: t_end must be positive");
  if (base_steps < 1) throw std::domain_error("strong_self_convergence: base_steps must be >= 1");
  if (levels <= 1) return {};

  const std::uint64_t finest = base_steps << (levels - 1);
  const double fine_delta = t_end / static_cast<double>(finest);
  const NoiseStream noise(seed, stream_index);
  std::vector<Vec2> increments(finest, Vec2{0.0, 0.0});
  if (!zero_noise) {
    for (std::uint64_t n = 0; n < finest; ++n) {
      const auto [a, b] = noise.increments(n, fine_delta);
      increments[n] = {a, b};
    }
  }

  // Terminal states from finest to coarsest; each coarser level sums pairs.
  std::vector<State> terminal(levels);
  std::vector<double> deltas(levels);
  for (unsigned j = levels; j-- > 0;) {
    terminal[j] = em_terminal_state(params, x0, t_end, increments);
    deltas[j] = t_end / static_cast<double>(increments.size());
    if (j == 0) break;
    std::vector<Vec2> coarse(increments.size() / 2);
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      coarse[i] = {increments[2 * i][0] + increments[2 * i + 1][0],
                   increments[2 * i][1] + increments[2 * i + 1][1]};
    }
    increments = std::move(coarse);
  }

  std::vector<RefinementLevel> report;
  for (unsigned j = 0; j + 1 < levels; ++j) {
    report.push_back({deltas[j], std::hypot(terminal[j].n - terminal[j + 1].n,
                                            terminal[j].p - terminal[j + 1].p)});
  }
  return report;
}

}  // namespace rmpp
