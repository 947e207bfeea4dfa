#pragma once

#include <compare>
#include <cstdint>

#include "axplore/error.hpp"

namespace axplore {

class Interval;

namespace fixed {

inline constexpr int kFracBits = 16;
inline constexpr std::int64_t kOne = std::int64_t{1} << kFracBits;
inline constexpr int kMaxCut = 15;

// Signed two's-complement Q16.16 scalar. The represented value is
// raw * 2^-16; there is no rounding after construction.
class FixQ16x16 {
 public:
  constexpr FixQ16x16() = default;

  static constexpr FixQ16x16 from_raw(std::int32_t raw) { return FixQ16x16(raw); }

  // Throws OutOfRange when raw does not fit in 32 bits.
  static FixQ16x16 from_raw_checked(std::int64_t raw);

  constexpr std::int32_t raw() const { return raw_; }
  double to_double() const { return static_cast<double>(raw_) / static_cast<double>(kOne); }

  friend constexpr auto operator<=>(FixQ16x16, FixQ16x16) = default;

  // Checked arithmetic; results outside the format throw Overflow.
  friend FixQ16x16 operator+(FixQ16x16 a, FixQ16x16 b);
  friend FixQ16x16 operator-(FixQ16x16 a, FixQ16x16 b);
  // Product truncated toward -inf on the 2^-16 grid (hardware multiply).
  friend FixQ16x16 operator*(FixQ16x16 a, FixQ16x16 b);
  // Arithmetic right shift of the raw word (floor division by 2^s).
  friend FixQ16x16 operator>>(FixQ16x16 a, int s);

 private:
  constexpr explicit FixQ16x16(std::int32_t raw) : raw_(raw) {}
  std::int32_t raw_ = 0;
};

// Number of least-significant fractional bits removed from a stored value.
class CutDepth {
 public:
  constexpr CutDepth() = default;
  // Throws OutOfRange unless 0 <= k <= 15.
  explicit CutDepth(int k);

  constexpr int bits() const { return k_; }
  friend constexpr auto operator<=>(CutDepth, CutDepth) = default;

 private:
  int k_ = 0;
};

// Nearest representable value, ties to even raw. Throws OutOfRange.
FixQ16x16 quantize(double x);

// Clears the k least-significant bits of the raw word.
FixQ16x16 truncate(FixQ16x16 x, CutDepth k);

// x - truncate(x, k): the removed bits as a value on the 2^-16 grid, >= 0.
FixQ16x16 truncation_error(FixQ16x16 x, CutDepth k);

enum class ErrorBoundForm {
  // Sum of the weights of the k removed bits: (2^k - 1) * 2^-16.
  RemovedBits,
  // The published closed form (2^k - 1) * 2^-15, kept for comparison runs.
  PublishedClosedForm,
};

// [0, max truncation error]: minimum when every removed bit is 0, maximum
// when every removed bit is 1. The default form counts k removed bits; the
// published summation runs over k+1 terms, which is treated as a typo.
Interval error_bounds(CutDepth k, ErrorBoundForm form = ErrorBoundForm::RemovedBits);

}  // namespace fixed
}  // namespace axplore
