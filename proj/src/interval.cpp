#include "axplore/interval.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace axplore {

namespace {

__extension__ typedef __int128 i128;

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) {
    throw Overflow("interval accumulator overflow");
  }
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_sub_overflow(a, b, &r)) {
    throw Overflow("interval accumulator overflow");
  }
  return r;
}

std::int64_t narrow(i128 x) {
  if (x < std::numeric_limits<std::int64_t>::min() || x > std::numeric_limits<std::int64_t>::max()) {
    throw Overflow("interval product overflow");
  }
  return static_cast<std::int64_t>(x);
}

// Products are on the 2^-32 grid; bring them back to 2^-16.
i128 floor_shift(i128 x, int s) { return x >> s; }
i128 ceil_shift(i128 x, int s) { return -((-x) >> s); }

}  // namespace

Interval Interval::from_raw(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) {
    throw std::invalid_argument("interval lower bound exceeds upper bound");
  }
  return Interval(lo, hi);
}

Interval Interval::from_values(double lo, double hi) {
  return from_raw(fixed::quantize(lo).raw(), fixed::quantize(hi).raw());
}

double Interval::lo_value() const { return static_cast<double>(lo_) / static_cast<double>(fixed::kOne); }
double Interval::hi_value() const { return static_cast<double>(hi_) / static_cast<double>(fixed::kOne); }

Interval add(const Interval& a, const Interval& b) {
  return Interval::from_raw(checked_add(a.lo(), b.lo()), checked_add(a.hi(), b.hi()));
}

Interval sub(const Interval& a, const Interval& b) {
  return Interval::from_raw(checked_sub(a.lo(), b.hi()), checked_sub(a.hi(), b.lo()));
}

Interval neg(const Interval& a) {
  return Interval::from_raw(checked_sub(0, a.hi()), checked_sub(0, a.lo()));
}

Interval mul(const Interval& a, const Interval& b) {
  const std::array<i128, 4> p{
      i128{a.lo()} * b.lo(), i128{a.lo()} * b.hi(), i128{a.hi()} * b.lo(), i128{a.hi()} * b.hi()};
  const auto [mn, mx] = std::minmax_element(p.begin(), p.end());
  return Interval::from_raw(narrow(floor_shift(*mn, fixed::kFracBits)),
                            narrow(ceil_shift(*mx, fixed::kFracBits)));
}

Interval shr(const Interval& a, int s) {
  if (s < 0 || s > 31) {
    throw OutOfRange("shift amount must be in [0, 31]");
  }
  return Interval::from_raw(a.lo() >> s, -((-a.hi()) >> s));
}

Interval hull(const Interval& a, const Interval& b) {
  return Interval::from_raw(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

std::ostream& operator<<(std::ostream& os, const Interval& x) {
  return os << '[' << x.lo_value() << ", " << x.hi_value() << ']';
}

}  // namespace axplore
