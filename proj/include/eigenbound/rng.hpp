#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace eigenbound {

// Counter-based stream RNG (Philox4x32-10). Every logical task owns a stream
// keyed by (seed, stream id); draws depend only on that pair and the position
// in the stream, never on thread scheduling, so replays are bit-exact and
// order-independent across worker counts.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  // Derives an independent child stream; fork(k) from equal states with equal
  // k yields equal streams, distinct k (or distinct parents) yield unrelated
  // ones.
  RngStream fork(std::uint64_t k) const {
    return RngStream(seed_, mix64(stream_ + 0x9E3779B97F4A7C15ull * (k + 1)));
  }

  std::uint64_t stream_id() const { return stream_; }

  std::uint32_t next_u32() {
    if (idx_ >= 4) {
      fill_block();
      ++block_;
      idx_ = 0;
    }
    return buf_[idx_++];
  }

  std::uint64_t next_u64() {
    std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform on the open interval (0,1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Raw Philox4x32-10 block for known-answer tests.
  static std::array<std::uint32_t, 4> philox4x32(
      std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      std::uint64_t p0 = 0xD2511F53ull * ctr[0];
      std::uint64_t p1 = 0xCD9E8D57ull * ctr[2];
      std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

  static std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  void fill_block() {
    // 128-bit counter: low word walks the stream, high word is the stream id.
    std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(block_),
                                        static_cast<std::uint32_t>(block_ >> 32),
                                        static_cast<std::uint32_t>(stream_),
                                        static_cast<std::uint32_t>(stream_ >> 32)};
    std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                        static_cast<std::uint32_t>(seed_ >> 32)};
    buf_ = philox4x32(ctr, key);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int idx_ = 4;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace eigenbound
