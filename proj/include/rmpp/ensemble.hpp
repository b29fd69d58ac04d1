#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rmpp/model.hpp"
#include "rmpp/sde.hpp"

namespace rmpp {

/// Monte Carlo summary on the recorded grid. Variances use the population
/// divisor (runs, not runs - 1); bands are mean +- 0.5 * sqrt(var), i.e. half
/// a standard deviation, not a standard error.
struct EnsembleStats {
  std::vector<double> times;
  std::vector<double> mean_n, mean_p;
  std::vector<double> var_n, var_p;
  std::vector<double> band_upper_n, band_lower_n;
  std::vector<double> band_upper_p, band_lower_p;
  std::size_t runs = 0;
  std::uint64_t seed = 0;
  std::size_t clamp_events = 0;  ///< summed over all paths
};

/// Ê ||X_t||^p with the Euclidean norm.
struct MomentSeries {
  double p = 0.0;
  std::vector<double> times;
  std::vector<double> values;
};

/// Paths are processed in fixed blocks of this many streams; the reduction
/// tree over blocks depends only on the run count.
inline constexpr std::size_t kEnsembleBlock = 32;

/// Runs streams 0..runs-1 and reduces them. `threads` = 0 uses the hardware
/// concurrency; the result is bit-identical for every thread count.
EnsembleStats run_ensemble(const ModelParams& params, const State& x0, const SimConfig& cfg,
                           std::size_t runs, unsigned threads = 0);

/// Summary statistics of already simulated paths on a common grid.
EnsembleStats summarize_paths(std::span<const SamplePath> paths);

/// All paths for streams 0..runs-1, simulated in parallel.
std::vector<SamplePath> simulate_ensemble(const ModelParams& params, const State& x0,
                                          const SimConfig& cfg, std::size_t runs,
                                          unsigned threads = 0);

MomentSeries moment_series(std::span<const SamplePath> paths, double p);

struct LyapunovProxy {
  double exponent;             ///< max over t >= t_min of log(||X_t||)/t
  std::size_t zero_samples;    ///< samples with ||X_t|| = 0 (contributing -inf)
};

/// Finite-horizon surrogate for limsup (1/t) log ||X_t||.
LyapunovProxy lyapunov_exponent_proxy(const SamplePath& path, double t_min = 1.0);

}  // namespace rmpp
