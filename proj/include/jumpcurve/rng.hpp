#pragma once

#include <array>
#include <cstdint>

namespace jumpcurve {

/// Philox4x32-10 counter-based block generator.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Deterministic uniform stream addressed by (seed, path, factor).
///
/// The seed is the Philox key; the counter packs the draw block, factor index
/// and path index, so every path/factor pair owns a disjoint substream and the
/// n-th draw depends only on (seed, path, factor, n).
class PhiloxStream {
public:
  PhiloxStream(std::uint64_t seed, std::uint64_t path, std::uint32_t factor);

  /// Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform();
  /// Exp(rate) variate by inversion.
  double exponential(double rate);

  std::uint64_t draws() const { return draws_; }

private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t path_;
  std::uint32_t factor_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 2;
  std::uint64_t draws_ = 0;
};

}  // namespace jumpcurve
