#include "rmpp/ensemble.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "parallel.hpp"
#include "rmpp/errors.hpp"

namespace rmpp {

namespace {

struct BlockSummary {
  std::size_t count = 0;
  std::vector<double> mean_n, m2_n, mean_p, m2_p;
  std::size_t clamps = 0;
};

BlockSummary summarize_block(std::span<const SamplePath> block) {
  const std::size_t len = block.front().states.size();
  BlockSummary s;
  s.count = block.size();
  s.mean_n.resize(len);
  s.mean_p.resize(len);
  s.m2_n.resize(len);
  s.m2_p.resize(len);
  const double count = static_cast<double>(block.size());
  for (std::size_t t = 0; t < len; ++t) {
    // Shift by the first sample so identical values give an exact mean and zero M2.
    const double shift_n = block.front().states[t].n;
    const double shift_p = block.front().states[t].p;
    double dn = 0.0;
    double dp = 0.0;
    for (const SamplePath& path : block) {
      dn += path.states[t].n - shift_n;
      dp += path.states[t].p - shift_p;
    }
    const double mn = shift_n + dn / count;
    const double mp = shift_p + dp / count;
    double qn = 0.0;
    double qp = 0.0;
    for (const SamplePath& path : block) {
      const double en = path.states[t].n - mn;
      const double ep = path.states[t].p - mp;
      qn += en * en;
      qp += ep * ep;
    }
    s.mean_n[t] = mn;
    s.mean_p[t] = mp;
    s.m2_n[t] = qn;
    s.m2_p[t] = qp;
  }
  for (const SamplePath& path : block) s.clamps += path.clamp_events;
  return s;
}

// Chan et al. pairwise update of (count, mean, M2).
BlockSummary merge(const BlockSummary& a, const BlockSummary& b) {
  BlockSummary out;
  out.count = a.count + b.count;
  out.clamps = a.clamps + b.clamps;
  const double na = static_cast<double>(a.count);
  const double nb = static_cast<double>(b.count);
  const double n = na + nb;
  const std::size_t len = a.mean_n.size();
  out.mean_n.resize(len);
  out.mean_p.resize(len);
  out.m2_n.resize(len);
  out.m2_p.resize(len);
  for (std::size_t t = 0; t < len; ++t) {
    const double dn = b.mean_n[t] - a.mean_n[t];
    const double dp = b.mean_p[t] - a.mean_p[t];
    out.mean_n[t] = a.mean_n[t] + dn * (nb / n);
    out.mean_p[t] = a.mean_p[t] + dp * (nb / n);
    out.m2_n[t] = a.m2_n[t] + b.m2_n[t] + dn * dn * (na * nb / n);
    out.m2_p[t] = a.m2_p[t] + b.m2_p[t] + dp * dp * (na * nb / n);
  }
  return out;
}

BlockSummary reduce(std::span<const BlockSummary> blocks) {
  if (blocks.size() == 1) return blocks.front();
  const std::size_t mid = blocks.size() / 2;
  return merge(reduce(blocks.first(mid)), reduce(blocks.subspan(mid)));
}

EnsembleStats finish(const BlockSummary& total, std::vector<double> times, std::uint64_t seed) {
  EnsembleStats st;
  st.times = std::move(times);
  st.runs = total.count;
  st.seed = seed;
  st.clamp_events = total.clamps;
  st.mean_n = total.mean_n;
  st.mean_p = total.mean_p;
  const std::size_t len = st.mean_n.size();
  const double runs = static_cast<double>(total.count);
  st.var_n.resize(len);
  st.var_p.resize(len);
  st.band_upper_n.resize(len);
  st.band_lower_n.resize(len);
  st.band_upper_p.resize(len);
  st.band_lower_p.resize(len);
  for (std::size_t t = 0; t < len; ++t) {
    st.var_n[t] = total.m2_n[t] / runs;
    st.var_p[t] = total.m2_p[t] / runs;
    const double hn = 0.5 * std::sqrt(st.var_n[t]);
    const double hp = 0.5 * std::sqrt(st.var_p[t]);
    st.band_upper_n[t] = st.mean_n[t] + hn;
    st.band_lower_n[t] = st.mean_n[t] - hn;
    st.band_upper_p[t] = st.mean_p[t] + hp;
    st.band_lower_p[t] = st.mean_p[t] - hp;
  }
  return st;
}

void require_common_grid(std::span<const SamplePath> paths, const char* who) {
  if (paths.empty()) throw ContractViolation(std::string(who) + ": no paths");
  const auto& ref = paths.front().times;
  if (ref.empty()) throw ContractViolation(std::string(who) + ": empty path");
  for (const SamplePath& path : paths) {
    if (path.times != ref || path.states.size() != ref.size()) {
      throw ContractViolation(std::string(who) + ": paths are not on a common time grid");
    }
  }
}

}  // namespace

EnsembleStats summarize_paths(std::span<const SamplePath> paths) {
  require_common_grid(paths, "summarize_paths");
  std::vector<BlockSummary> blocks;
  for (std::size_t lo = 0; lo < paths.size(); lo += kEnsembleBlock) {
    blocks.push_back(summarize_block(paths.subspan(lo, std::min(kEnsembleBlock, paths.size() - lo))));
  }
  return finish(reduce(blocks), paths.front().times, paths.front().seed);
}

EnsembleStats run_ensemble(const ModelParams& params, const State& x0, const SimConfig& cfg,
                           std::size_t runs, unsigned threads) {
  if (runs < 2) throw ContractViolation("run_ensemble: runs must be >= 2");
  params.validate();
  cfg.validate();

  const std::size_t nblocks = (runs + kEnsembleBlock - 1) / kEnsembleBlock;
  std::vector<BlockSummary> blocks(nblocks);
  std::vector<double> times;
  detail::parallel_for(nblocks, threads, [&](std::size_t b) {
    const std::size_t lo = b * kEnsembleBlock;
    const std::size_t hi = std::min(runs, lo + kEnsembleBlock);
    std::vector<SamplePath> paths;
    paths.reserve(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) paths.push_back(simulate_path(params, x0, cfg, i));
    blocks[b] = summarize_block(paths);
    if (b == 0) times = paths.front().times;
  });
  return finish(reduce(blocks), std::move(times), cfg.seed);
}

std::vector<SamplePath> simulate_ensemble(const ModelParams& params, const State& x0,
                                          const SimConfig& cfg, std::size_t runs, unsigned threads) {
  params.validate();
  cfg.validate();
  std::vector<SamplePath> paths(runs);
  detail::parallel_for(runs, threads,
                       [&](std::size_t i) { paths[i] = simulate_path(params, x0, cfg, i); });
  return paths;
}

MomentSeries moment_series(std::span<const SamplePath> paths, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::domain_error("moment_series: p must be positive");
  require_common_grid(paths, "moment_series");
  MomentSeries out;
  out.p = p;
  out.times = paths.front().times;
  out.values.resize(out.times.size());
  const double count = static_cast<double>(paths.size());
  for (std::size_t t = 0; t < out.times.size(); ++t) {
    double sum = 0.0;
    for (const SamplePath& path : paths) {
      const State& x = path.states[t];
      sum += std::pow(std::hypot(x.n, x.p), p);
    }
    out.values[t] = sum / count;
  }
  return out;
}

LyapunovProxy lyapunov_exponent_proxy(const SamplePath& path, double t_min) {
  if (!(t_min > 0.0)) throw ContractViolation("lyapunov_exponent_proxy: t_min must be positive");
  if (path.times.empty() || !(path.times.back() > t_min)) {
    throw ContractViolation("lyapunov_exponent_proxy: path must extend beyond t_min");
  }
  LyapunovProxy out{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    const double t = path.times[i];
    if (t < t_min) continue;
    const double norm = std::hypot(path.states[i].n, path.states[i].p);
    if (norm == 0.0) {
      ++out.zero_samples;
      continue;
    }
    out.exponent = std::max(out.exponent, std::log(norm) / t);
  }
  return out;
}

}  // namespace rmpp
