#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace rmpp {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
/// Stateless: the output is a pure function of (counter, key).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key);
};

/// Gaussian Brownian increments addressed by (seed, stream_index, step).
/// The same triple always yields the same pair, independently of call order.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t stream_index)
      : seed_(seed), stream_(stream_index) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }

  /// Two independent N(0,1) draws for the given step (Box-Muller).
  std::pair<double, double> standard_normals(std::uint64_t step) const;

  /// Independent increments (dW1, dW2) with variance delta.
  std::pair<double, double> increments(std::uint64_t step, double delta) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace rmpp
