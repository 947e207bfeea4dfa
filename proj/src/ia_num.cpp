#include "axplore/ia_num.hpp"

#include <ostream>

namespace axplore {

IaNum from_exact(fixed::FixQ16x16 x) { return {Interval::point(x), Interval::point_raw(0)}; }

IaNum from_param(fixed::FixQ16x16 x, fixed::CutDepth k) {
  return {Interval::point(x), fixed::error_bounds(k)};
}

IaNum add(const IaNum& a, const IaNum& b) { return {add(a.v, b.v), add(a.eps, b.eps)}; }

IaNum sub(const IaNum& a, const IaNum& b) { return {sub(a.v, b.v), sub(a.eps, b.eps)}; }

IaNum mul(const IaNum& a, const IaNum& b) {
  const Interval err = add(add(mul(a.v, b.eps), mul(b.v, a.eps)), neg(mul(a.eps, b.eps)));
  return {mul(a.v, b.v), err};
}

IaNum shr(const IaNum& a, int s) {
  if (s < 0 || s > 31) {
    throw OutOfRange("shift amount must be in [0, 31]");
  }
  // floor(v) - ceil(e) <= floor(v - e) <= floor(v) - floor(e), so the
  // hardware shift of the value plus an outward shift of the error encloses
  // every shifted concrete value without extra slack.
  return {Interval::from_raw(a.v.lo() >> s, a.v.hi() >> s), shr(a.eps, s)};
}

IaNum hull(const IaNum& a, const IaNum& b) { return {hull(a.v, b.v), hull(a.eps, b.eps)}; }

Interval realize(const IaNum& a) { return sub(a.v, a.eps); }

TriBool cmp_gt(const IaNum& a, const IaNum& b) {
  const Interval ra = realize(a);
  const Interval rb = realize(b);
  if (ra.lo() > rb.hi()) {
    return TriBool::DefinitelyTrue;
  }
  if (ra.hi() <= rb.lo()) {
    return TriBool::DefinitelyFalse;
  }
  return TriBool::Uncertain;
}

std::ostream& operator<<(std::ostream& os, const IaNum& x) {
  return os << "{v=" << x.v << ", eps=" << x.eps << '}';
}

std::ostream& operator<<(std::ostream& os, TriBool t) {
  switch (t) {
    case TriBool::DefinitelyTrue:
      return os << "DefinitelyTrue";
    case TriBool::DefinitelyFalse:
      return os << "DefinitelyFalse";
    case TriBool::Uncertain:
      return os << "Uncertain";
  }
  return os;
}

}  // namespace axplore
