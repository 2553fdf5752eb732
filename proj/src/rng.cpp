#include "spacelike/rng.hpp"

#include <cmath>

namespace spacelike::rmt {

namespace {

inline std::uint64_t rotl64(std::uint64_t x, int r) {
  return (x << r) | (x >> (64 - r));
}

// Threefry-2x64-20 block function (Salmon et al., SC'11 reference constants).
void threefry2x64(const std::uint64_t key[2], const std::uint64_t ctr[2],
                  std::uint64_t out[2]) {
  static constexpr int kRot[8] = {16, 42, 12, 31, 16, 32, 24, 21};
  const std::uint64_t ks[3] = {
      key[0], key[1], 0x1BD11BDAA9FC1A22ull ^ key[0] ^ key[1]};
  std::uint64_t x0 = ctr[0] + ks[0];
  std::uint64_t x1 = ctr[1] + ks[1];
  for (int round = 0; round < 20; ++round) {
    x0 += x1;
    x1 = rotl64(x1, kRot[round % 8]);
    x1 ^= x0;
    if (round % 4 == 3) {
      const int s = round / 4 + 1;
      x0 += ks[s % 3];
      x1 += ks[(s + 1) % 3] + static_cast<std::uint64_t>(s);
    }
  }
  out[0] = x0;
  out[1] = x1;
}

}  // namespace

std::uint64_t RngStream::next_u64() {
  if (avail_ == 0) {
    const std::uint64_t key[2] = {seed_, stream_};
    const std::uint64_t ctr[2] = {counter_++, 0};
    threefry2x64(key, ctr, block_);
    avail_ = 2;
  }
  return block_[2 - avail_--];
}

double RngStream::next_uniform() {
  // (x >> 11) + 1 lies in [1, 2^53], so the result is in (0, 1].
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::next_normal() {
  if (has_pending_normal_) {
    has_pending_normal_ = false;
    return pending_normal_;
  }
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  pending_normal_ = r * std::sin(a);
  has_pending_normal_ = true;
  return r * std::cos(a);
}

}  // namespace spacelike::rmt
