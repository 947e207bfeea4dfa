#pragma once

#include <iosfwd>

#include "axplore/fixed_point.hpp"
#include "axplore/interval.hpp"

namespace axplore {

// An approximated quantity v - eps, with the value and the (subtractive)
// truncation error kept as separate intervals so the error can be inspected
// on its own at any point of a computation.
struct IaNum {
  Interval v;
  Interval eps;

  friend bool operator==(const IaNum&, const IaNum&) = default;
};

enum class TriBool { DefinitelyTrue, DefinitelyFalse, Uncertain };

// v = [x, x], eps = [0, 0].
IaNum from_exact(fixed::FixQ16x16 x);
// v = [x, x], eps = error_bounds(k).
IaNum from_param(fixed::FixQ16x16 x, fixed::CutDepth k);

// Endpoint-wise on both components.
IaNum add(const IaNum& a, const IaNum& b);
// v1 - v2 and eps1 - eps2, each with the crossed endpoint rule.
IaNum sub(const IaNum& a, const IaNum& b);
// (v1 - e1)(v2 - e2) = v1 v2 - (v1 e2 + v2 e1 - e1 e2); the error term is
// bounded with plain interval operations.
IaNum mul(const IaNum& a, const IaNum& b);
// Arithmetic right shift. The value component follows the unapproximated
// hardware shift (floor on both ends); the error component is shifted
// outward, which is enough to enclose the truncation the shift introduces.
IaNum shr(const IaNum& a, int s);
// Component-wise hull; realize(hull(a, b)) encloses realize(a) and realize(b).
IaNum hull(const IaNum& a, const IaNum& b);

// The concrete range covered: v - eps.
Interval realize(const IaNum& a);

// Strict a > b over the realized ranges. Touching ranges (ra.hi == rb.lo)
// are DefinitelyFalse.
TriBool cmp_gt(const IaNum& a, const IaNum& b);

inline IaNum operator+(const IaNum& a, const IaNum& b) { return add(a, b); }
inline IaNum operator-(const IaNum& a, const IaNum& b) { return sub(a, b); }
inline IaNum operator*(const IaNum& a, const IaNum& b) { return mul(a, b); }

std::ostream& operator<<(std::ostream& os, const IaNum& x);
std::ostream& operator<<(std::ostream& os, TriBool t);

}  // namespace axplore
