#pragma once

#include <array>
#include <cstdint>

namespace plrs {

/// Philox 4x32 with 10 rounds: a counter-based generator. Every output
/// block is a pure function of (key, counter), so independent streams are
/// made by picking distinct counters, never by jumping shared state.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key);
};

/// Stream-id space of one master seed, partitioned by purpose so that the
/// learning-rate draws, gradient-noise draws and initialization draws of
/// trial k can never collide: id = (purpose << 56) | index.
enum class StreamPurpose : std::uint64_t {
  LearningRate = 0,
  GradientNoise = 1,
  Init = 2,
  Misc = 3,
};

constexpr std::uint64_t stream_id(StreamPurpose purpose, std::uint64_t index) {
  return (static_cast<std::uint64_t>(purpose) << 56) | (index & ((std::uint64_t{1} << 56) - 1));
}

/// One logical random stream: key = master seed, counter = (block, stream).
///
/// Two interfaces:
///  - sequential (`next_*`): advances an internal block counter;
///  - addressed (`u01_at`): reads block `index` without touching the
///    sequential counter.
/// A given stream should be used through one interface only; mixing them
/// can reuse blocks.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1), 53 random bits.
  double next_u01();
  double next_uniform(double lo, double hi);
  /// Standard normal via Box-Muller; draws are cached in pairs.
  double next_gaussian();

  std::uint64_t u64_at(std::uint64_t index) const;
  double u01_at(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Stream for (purpose, trial index) under a master seed.
inline RngStream make_stream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index) {
  return RngStream(seed, stream_id(purpose, index));
}

}  // namespace plrs
