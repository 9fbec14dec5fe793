#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vrlab/error.hpp"

// Lockstep warp emulation. Every collective takes and returns exactly one value
// per lane, so code written against these primitives reads like the SIMT
// kernel it models.

namespace vrlab::simd {

inline constexpr unsigned kMinWarpWidth = 4;
inline constexpr unsigned kMaxWarpWidth = 64;

inline void check_width(unsigned width) {
  if (width < kMinWarpWidth || width > kMaxWarpWidth || !std::has_single_bit(width)) {
    throw ConfigError("warp width must be a power of two in [4, 64], got " +
                      std::to_string(width));
  }
}

// Result of a ballot. No bit at or above `width` is ever set.
class LaneMask {
 public:
  LaneMask() = default;
  LaneMask(std::uint64_t bits, unsigned width) : bits_(bits), width_(width) {
    check_width(width);
    if (width < 64 && (bits >> width) != 0) {
      throw ConfigError("lane mask has bits beyond warp width");
    }
  }

  std::uint64_t bits() const noexcept { return bits_; }
  unsigned width() const noexcept { return width_; }
  bool test(unsigned lane) const noexcept { return lane < 64 && ((bits_ >> lane) & 1u); }
  bool none() const noexcept { return bits_ == 0; }

  friend bool operator==(const LaneMask&, const LaneMask&) = default;

 private:
  std::uint64_t bits_ = 0;
  unsigned width_ = 32;
};

// One register across all lanes of a warp.
template <class T>
class Lanes {
 public:
  explicit Lanes(unsigned width, T fill = T{}) : values_(width, fill) { check_width(width); }
  explicit Lanes(std::vector<T> values) : values_(std::move(values)) {
    check_width(static_cast<unsigned>(values_.size()));
  }

  unsigned width() const noexcept { return static_cast<unsigned>(values_.size()); }
  T& operator[](unsigned lane) { return values_[lane]; }
  const T& operator[](unsigned lane) const { return values_[lane]; }
  const std::vector<T>& values() const noexcept { return values_; }

  friend bool operator==(const Lanes&, const Lanes&) = default;

 private:
  std::vector<T> values_;
};

using WarpState = Lanes<std::uint32_t>;

inline void check_lane(unsigned lane, unsigned width) {
  if (lane >= width) {
    throw ConfigError("source lane " + std::to_string(lane) + " outside warp of width " +
                      std::to_string(width));
  }
}

// Broadcast lane `src_lane` to every lane.
template <class T>
Lanes<T> shfl(const Lanes<T>& reg, unsigned src_lane) {
  check_lane(src_lane, reg.width());
  return Lanes<T>(reg.width(), reg[src_lane]);
}

// Per-lane source: lane i receives reg[src[i]].
template <class T>
Lanes<T> shfl(const Lanes<T>& reg, const Lanes<unsigned>& src) {
  if (src.width() != reg.width()) throw ConfigError("shfl operand widths differ");
  Lanes<T> out(reg.width());
  for (unsigned lane = 0; lane < reg.width(); ++lane) {
    check_lane(src[lane], reg.width());
    out[lane] = reg[src[lane]];
  }
  return out;
}

// Bit i is set iff predicate(i) holds.
template <class Pred>
LaneMask ballot_if(unsigned width, Pred&& predicate) {
  check_width(width);
  std::uint64_t bits = 0;
  for (unsigned lane = 0; lane < width; ++lane) {
    if (predicate(lane)) bits |= std::uint64_t{1} << lane;
  }
  return {bits, width};
}

LaneMask ballot(const std::vector<bool>& predicates);

// 1-based position of the least significant set bit, 0 for an empty mask.
constexpr int ffs(std::uint64_t bits) noexcept {
  return bits == 0 ? 0 : std::countr_zero(bits) + 1;
}
inline int ffs(const LaneMask& mask) noexcept { return ffs(mask.bits()); }

}  // namespace vrlab::simd
