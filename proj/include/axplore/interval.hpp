#pragma once

#include <cstdint>
#include <iosfwd>

#include "axplore/fixed_point.hpp"

namespace axplore {

// Closed interval [lo, hi] on the 2^-16 grid. Endpoints are 64-bit
// numerators over 2^16, wide enough that a full layer sum stays exact;
// anything beyond 64 bits throws Overflow.
class Interval {
 public:
  constexpr Interval() = default;

  // Throws std::invalid_argument when lo > hi.
  static Interval from_raw(std::int64_t lo, std::int64_t hi);
  static constexpr Interval point_raw(std::int64_t x) { return Interval(x, x); }
  static constexpr Interval point(fixed::FixQ16x16 x) { return Interval(x.raw(), x.raw()); }
  // Both endpoints quantized to the grid; convenient in tests and configs.
  static Interval from_values(double lo, double hi);

  constexpr std::int64_t lo() const { return lo_; }
  constexpr std::int64_t hi() const { return hi_; }
  double lo_value() const;
  double hi_value() const;

  constexpr bool is_degenerate() const { return lo_ == hi_; }
  constexpr bool contains(std::int64_t raw) const { return lo_ <= raw && raw <= hi_; }
  constexpr bool contains(fixed::FixQ16x16 x) const { return contains(std::int64_t{x.raw()}); }
  // Subset test: every point of `inner` lies in *this.
  constexpr bool encloses(const Interval& inner) const {
    return lo_ <= inner.lo_ && inner.hi_ <= hi_;
  }
  // hi - lo, in raw grid units.
  constexpr std::int64_t width() const { return hi_ - lo_; }

  friend constexpr bool operator==(const Interval&, const Interval&) = default;

 private:
  constexpr Interval(std::int64_t lo, std::int64_t hi) : lo_(lo), hi_(hi) {}
  std::int64_t lo_ = 0;
  std::int64_t hi_ = 0;
};

Interval add(const Interval& a, const Interval& b);
Interval sub(const Interval& a, const Interval& b);
Interval neg(const Interval& a);
// Min/max of the four endpoint products, rounded outward to the grid when a
// product falls between grid points.
Interval mul(const Interval& a, const Interval& b);
// Division by 2^s, lower bound floored and upper bound ceiled.
Interval shr(const Interval& a, int s);
Interval hull(const Interval& a, const Interval& b);

inline Interval operator+(const Interval& a, const Interval& b) { return add(a, b); }
inline Interval operator-(const Interval& a, const Interval& b) { return sub(a, b); }
inline Interval operator*(const Interval& a, const Interval& b) { return mul(a, b); }

std::ostream& operator<<(std::ostream& os, const Interval& x);

}  // namespace axplore
