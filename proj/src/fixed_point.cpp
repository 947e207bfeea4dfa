#include "axplore/fixed_point.hpp"

#include <cfenv>
#include <cmath>
#include <limits>
#include <string>

#include "axplore/interval.hpp"

namespace axplore::fixed {

namespace {

constexpr std::int64_t kRawMin = std::numeric_limits<std::int32_t>::min();
constexpr std::int64_t kRawMax = std::numeric_limits<std::int32_t>::max();

FixQ16x16 checked(std::int64_t raw, const char* op) {
  if (raw < kRawMin || raw > kRawMax) {
    throw Overflow(std::string("Q16.16 overflow in ") + op);
  }
  return FixQ16x16::from_raw(static_cast<std::int32_t>(raw));
}

std::int32_t low_mask(CutDepth k) { return static_cast<std::int32_t>((std::uint32_t{1} << k.bits()) - 1u); }

}  // namespace

FixQ16x16 FixQ16x16::from_raw_checked(std::int64_t raw) {
  if (raw < kRawMin || raw > kRawMax) {
    throw OutOfRange("raw value " + std::to_string(raw) + " does not fit Q16.16");
  }
  return FixQ16x16(static_cast<std::int32_t>(raw));
}

FixQ16x16 operator+(FixQ16x16 a, FixQ16x16 b) {
  return checked(std::int64_t{a.raw_} + b.raw_, "add");
}

FixQ16x16 operator-(FixQ16x16 a, FixQ16x16 b) {
  return checked(std::int64_t{a.raw_} - b.raw_, "sub");
}

FixQ16x16 operator*(FixQ16x16 a, FixQ16x16 b) {
  // >> on a negative int64 is an arithmetic shift (floor) since C++20.
  return checked((std::int64_t{a.raw_} * b.raw_) >> kFracBits, "mul");
}

FixQ16x16 operator>>(FixQ16x16 a, int s) {
  if (s < 0 || s > 31) {
    throw OutOfRange("shift amount must be in [0, 31]");
  }
  return FixQ16x16(a.raw_ >> s);
}

CutDepth::CutDepth(int k) : k_(k) {
  if (k < 0 || k > kMaxCut) {
    throw OutOfRange("cut depth " + std::to_string(k) + " outside [0, 15]");
  }
}

FixQ16x16 quantize(double x) {
  if (!std::isfinite(x)) {
    throw OutOfRange("cannot quantize a non-finite value");
  }
  const double scaled = x * static_cast<double>(kOne);
  const int previous = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const double rounded = std::nearbyint(scaled);
  std::fesetround(previous);
  if (rounded < static_cast<double>(kRawMin) || rounded > static_cast<double>(kRawMax)) {
    throw OutOfRange("value " + std::to_string(x) + " outside the Q16.16 range");
  }
  return FixQ16x16::from_raw(static_cast<std::int32_t>(rounded));
}

FixQ16x16 truncate(FixQ16x16 x, CutDepth k) {
  return FixQ16x16::from_raw(static_cast<std::int32_t>(x.raw() & ~low_mask(k)));
}

FixQ16x16 truncation_error(FixQ16x16 x, CutDepth k) {
  return FixQ16x16::from_raw(x.raw() & low_mask(k));
}

Interval error_bounds(CutDepth k, ErrorBoundForm form) {
  const std::int64_t max_bits = (std::int64_t{1} << k.bits()) - 1;
  switch (form) {
    case ErrorBoundForm::RemovedBits:
      return Interval::from_raw(0, max_bits);
    case ErrorBoundForm::PublishedClosedForm:
      return Interval::from_raw(0, 2 * max_bits);
  }
  return Interval::from_raw(0, max_bits);
}

}  // namespace axplore::fixed
