#pragma once

#include <array>
#include <cstdint>

namespace lew {

// Philox4x32-10 counter-based generator. A stream is addressed by
// (seed, sample, walker); draws within a stream advance a 32-bit counter
// lane, so parallel and serial runs over samples produce identical output.
struct Philox4x32 {
  static constexpr uint32_t kMul0 = 0xD2511F53u;
  static constexpr uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr,
                                       std::array<uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const uint64_t p0 = static_cast<uint64_t>(kMul0) * ctr[0];
      const uint64_t p1 = static_cast<uint64_t>(kMul1) * ctr[2];
      const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
      const uint32_t lo0 = static_cast<uint32_t>(p0);
      const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
      const uint32_t lo1 = static_cast<uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t sample, uint32_t walker)
      : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
        base_{static_cast<uint32_t>(sample), static_cast<uint32_t>(sample >> 32),
              walker, 0u} {}

  // Uniform double in [0, 1) built from 53 random bits.
  double uniform() {
    if (have_ == 0) refill();
    --have_;
    const uint64_t hi = buf_[2 * have_];
    const uint64_t lo = buf_[2 * have_ + 1];
    const uint64_t bits = (hi << 32) | lo;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  uint32_t raw32() {
    if (raw_have_ == 0) {
      auto ctr = base_;
      ctr[3] = 0x80000000u | draw_;  // separate lane from uniform() draws
      raw_buf_ = Philox4x32::block(ctr, key_);
      ++draw_;
      raw_have_ = 4;
    }
    return raw_buf_[--raw_have_];
  }

 private:
  void refill() {
    auto ctr = base_;
    ctr[3] = draw_;
    buf_ = Philox4x32::block(ctr, key_);
    ++draw_;
    have_ = 2;
  }

  std::array<uint32_t, 2> key_;
  std::array<uint32_t, 4> base_;
  uint32_t draw_ = 0;
  std::array<uint32_t, 4> buf_{};
  int have_ = 0;
  std::array<uint32_t, 4> raw_buf_{};
  int raw_have_ = 0;
};

}  // namespace lew
