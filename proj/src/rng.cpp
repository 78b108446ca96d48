#include "jumpcurve/rng.hpp"

#include <cmath>

namespace jumpcurve {

namespace {

constexpr std::uint32_t kMultiplier0 = 0xD2511F53;
constexpr std::uint32_t kMultiplier1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kMultiplier0, ctr[0], lo0, hi0);
    mulhilo(kMultiplier1, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

PhiloxStream::PhiloxStream(std::uint64_t seed, std::uint64_t path, std::uint32_t factor)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, path_(path), factor_(factor) {}

void PhiloxStream::refill() {
  buffer_ = philox4x32({block_, factor_, static_cast<std::uint32_t>(path_), static_cast<std::uint32_t>(path_ >> 32)}, key_);
  ++block_;
  used_ = 0;
}

double PhiloxStream::uniform() {
  if (used_ == 2) refill();
  const std::uint64_t hi = buffer_[2 * used_];
  const std::uint64_t lo = buffer_[2 * used_ + 1];
  ++used_;
  ++draws_;
  const std::uint64_t bits = ((hi << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double PhiloxStream::exponential(double rate) { return -std::log(uniform()) / rate; }

}  // namespace jumpcurve
