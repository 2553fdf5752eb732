#pragma once

#include <cstdint>

namespace spacelike::rmt {

// Counter-based random stream (Threefry-2x64, 20 rounds).
//
// A stream is addressed by (seed, stream_index) and every draw is a pure
// function of that key and a running 64-bit counter.  Distinct stream
// indices give statistically independent streams, replicas can be sharded
// across workers without coordination, and a rerun with the same
// (seed, stream_index) reproduces bit-identical output on any platform.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index)
      : seed_(seed), stream_(stream_index) {}

  std::uint64_t next_u64();

  // Uniform on (0,1] with 53-bit resolution (never returns 0).
  double next_uniform();

  // Standard normal via Box-Muller; draws come in deterministic pairs.
  double next_normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::uint64_t block_[2] = {0, 0};
  int avail_ = 0;
  double pending_normal_ = 0.0;
  bool has_pending_normal_ = false;
};

}  // namespace spacelike::rmt
