#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "conformal/errors.hpp"

namespace conformal {

// Closed interval [lo, hi]. Certified arithmetic below widens each result
// outward by a fixed relative 1e-14 per operation; directed rounding modes
// are not assumed available.
struct IntervalBound {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  // Largest absolute value attained on the interval.
  double mag() const { return std::max(std::abs(lo), std::abs(hi)); }
  // Smallest absolute value attained on the interval (0 if it contains 0).
  double mig() const {
    if (lo <= 0.0 && 0.0 <= hi) return 0.0;
    return std::min(std::abs(lo), std::abs(hi));
  }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const IntervalBound& o) const { return lo <= o.lo && o.hi <= hi; }
  bool intersects(const IntervalBound& o) const { return lo <= o.hi && o.lo <= hi; }
};

inline constexpr double kOutwardRel = 1e-14;
inline constexpr double kDenomFloor = 1e-12;

inline IntervalBound point_interval(double x) { return {x, x}; }

inline IntervalBound inflate(IntervalBound a) {
  a.lo -= std::abs(a.lo) * kOutwardRel;
  a.hi += std::abs(a.hi) * kOutwardRel;
  return a;
}

inline IntervalBound hull(IntervalBound a, IntervalBound b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline IntervalBound intersect(IntervalBound a, IntervalBound b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

inline IntervalBound operator+(IntervalBound a, IntervalBound b) {
  return inflate({a.lo + b.lo, a.hi + b.hi});
}

inline IntervalBound operator-(IntervalBound a, IntervalBound b) {
  return inflate({a.lo - b.hi, a.hi - b.lo});
}

inline IntervalBound operator-(IntervalBound a) { return {-a.hi, -a.lo}; }

inline IntervalBound operator*(IntervalBound a, IntervalBound b) {
  const double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return inflate({std::min(std::min(p1, p2), std::min(p3, p4)),
                  std::max(std::max(p1, p2), std::max(p3, p4))});
}

inline IntervalBound operator*(double c, IntervalBound a) {
  return a * point_interval(c);
}

inline IntervalBound operator/(IntervalBound a, IntervalBound b) {
  if (b.mig() < kDenomFloor)
    fail(Err::DivisionNearZero, "interval denominator within 1e-12 of zero");
  const double q1 = a.lo / b.lo, q2 = a.lo / b.hi, q3 = a.hi / b.lo, q4 = a.hi / b.hi;
  return inflate({std::min(std::min(q1, q2), std::min(q3, q4)),
                  std::max(std::max(q1, q2), std::max(q3, q4))});
}

// |[lo, hi]| as an interval.
inline IntervalBound abs_interval(IntervalBound a) {
  if (a.lo >= 0.0) return a;
  if (a.hi <= 0.0) return {-a.hi, -a.lo};
  return {0.0, a.mag()};
}

// Integer power, exact monotone case analysis.
inline IntervalBound ipow(IntervalBound a, std::int64_t e) {
  if (e == 0) return {1.0, 1.0};
  if (e == 1) return a;
  const bool even = (e % 2 == 0);
  const double plo = std::pow(a.lo, double(e));
  const double phi = std::pow(a.hi, double(e));
  IntervalBound r;
  if (!even) {
    r = {plo, phi};
  } else if (a.lo >= 0.0) {
    r = {plo, phi};
  } else if (a.hi <= 0.0) {
    r = {phi, plo};
  } else {
    r = {0.0, std::max(plo, phi)};
  }
  return inflate(r);
}

// x^t for a nonnegative base interval and real exponent t >= 0.
inline IntervalBound rpow(IntervalBound a, double t) {
  if (t == 0.0) return {1.0, 1.0};
  const double lo = std::max(0.0, a.lo);
  return inflate({std::pow(lo, t), std::pow(std::max(0.0, a.hi), t)});
}

}  // namespace conformal
