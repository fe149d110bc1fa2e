#ifndef STABCHECK_INTERVAL_HPP
#define STABCHECK_INTERVAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>

#include "stabcheck/errors.hpp"

namespace stabcheck {

/// Closed interval [lo, hi] with outward-rounded arithmetic.
///
/// Every operation returns an interval that contains the exact image of the
/// operands (fundamental theorem of interval arithmetic). Hardware rounding
/// control is not assumed: each primitive result is widened outward by two
/// ulps instead, except where an endpoint is provably exact (even powers and
/// abs of a zero-straddling interval attain 0 exactly).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double point) : lo(point), hi(point) {}  // NOLINT: implicit by design
  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {}

  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
  bool subset_of(const Interval& o) const { return o.lo <= lo && hi <= o.hi; }
  double width() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  /// sup |x| over the interval.
  double mag() const { return std::max(std::abs(lo), std::abs(hi)); }
  /// inf |x| over the interval; 0 when the interval straddles 0.
  double mig() const {
    return contains_zero() ? 0.0 : std::min(std::abs(lo), std::abs(hi));
  }
};

namespace detail {

inline double step_down(double x) {
  double y = std::nextafter(x, -std::numeric_limits<double>::infinity());
  return std::nextafter(y, -std::numeric_limits<double>::infinity());
}

inline double step_up(double x) {
  double y = std::nextafter(x, std::numeric_limits<double>::infinity());
  return std::nextafter(y, std::numeric_limits<double>::infinity());
}

inline Interval outward(double lo, double hi) {
  Interval r{step_down(lo), step_up(hi)};
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo <= r.hi)) {
    throw DomainError("interval arithmetic produced a non-finite bound");
  }
  return r;
}

}  // namespace detail

inline Interval operator+(const Interval& a, const Interval& b) {
  return detail::outward(a.lo + b.lo, a.hi + b.hi);
}

inline Interval operator-(const Interval& a, const Interval& b) {
  return detail::outward(a.lo - b.hi, a.hi - b.lo);
}

inline Interval operator-(const Interval& a) {
  return Interval{-a.hi, -a.lo};  // negation is exact
}

inline Interval operator*(const Interval& a, const Interval& b) {
  const double p1 = a.lo * b.lo;
  const double p2 = a.lo * b.hi;
  const double p3 = a.hi * b.lo;
  const double p4 = a.hi * b.hi;
  return detail::outward(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
}

/// Division by an interval containing 0 is a hard error: the pipeline only
/// needs sign certification, so propagating unbounded intervals adds nothing.
inline Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) {
    throw DomainError("division by an interval containing zero");
  }
  const Interval recip = detail::outward(1.0 / b.hi, 1.0 / b.lo);
  return a * recip;
}

/// Integer power with even-power tightening: when the base straddles 0 and k
/// is even, the exact minimum 0 is attained, so the lower bound is 0 with no
/// widening.
inline Interval pow_int(const Interval& a, int k) {
  if (k < 0) throw DomainError("negative exponent");
  if (k == 0) return Interval{1.0, 1.0};
  if (k == 1) return a;
  auto endpoint_pow = [k](double e) {
    Interval acc{e, e};
    for (int i = 1; i < k; ++i) acc = acc * Interval{e, e};
    return acc;
  };
  const Interval plo = endpoint_pow(a.lo);
  const Interval phi = endpoint_pow(a.hi);
  if (k % 2 == 1) return Interval{plo.lo, phi.hi};
  if (a.lo >= 0.0) return Interval{plo.lo, phi.hi};
  if (a.hi <= 0.0) return Interval{phi.lo, plo.hi};
  return Interval{0.0, std::max(plo.hi, phi.hi)};
}

inline Interval abs_i(const Interval& a) {
  if (a.lo >= 0.0) return a;
  if (a.hi <= 0.0) return -a;
  return Interval{0.0, std::max(-a.lo, a.hi)};  // 0 attained exactly
}

inline Interval sqrt_i(const Interval& a) {
  if (a.lo < 0.0) {
    throw DomainError("sqrt of an interval containing negative values");
  }
  Interval r = detail::outward(std::sqrt(a.lo), std::sqrt(a.hi));
  r.lo = std::max(r.lo, 0.0);
  return r;
}

inline Interval exp_i(const Interval& a) {
  Interval r = detail::outward(std::exp(a.lo), std::exp(a.hi));
  r.lo = std::max(r.lo, 0.0);
  return r;
}

namespace detail {

constexpr double kPi = 3.14159265358979323846;

/// True when some point phase + k*period lies in [lo - slack, hi + slack].
/// The slack absorbs the inexactness of the floating-point pi multiples; a
/// false positive only widens the result, which stays sound.
inline bool hits_critical(double lo, double hi, double phase, double period) {
  const double slack = 4.0 * std::max(1.0, std::max(std::abs(lo), std::abs(hi))) *
                       std::numeric_limits<double>::epsilon();
  const double k = std::ceil((lo - slack - phase) / period);
  return phase + k * period <= hi + slack;
}

}  // namespace detail

/// Range of sin over the interval via critical-point analysis, outward
/// rounded and clamped to [-1, 1] (the true range is always inside).
inline Interval sin_i(const Interval& a) {
  using detail::kPi;
  if (a.hi - a.lo >= 2.0 * kPi) return Interval{-1.0, 1.0};
  double smin = std::min(std::sin(a.lo), std::sin(a.hi));
  double smax = std::max(std::sin(a.lo), std::sin(a.hi));
  if (detail::hits_critical(a.lo, a.hi, kPi / 2.0, 2.0 * kPi)) smax = 1.0;
  if (detail::hits_critical(a.lo, a.hi, -kPi / 2.0, 2.0 * kPi)) smin = -1.0;
  Interval r = detail::outward(smin, smax);
  r.lo = std::max(r.lo, -1.0);
  r.hi = std::min(r.hi, 1.0);
  return r;
}

inline Interval cos_i(const Interval& a) {
  using detail::kPi;
  if (a.hi - a.lo >= 2.0 * kPi) return Interval{-1.0, 1.0};
  double cmin = std::min(std::cos(a.lo), std::cos(a.hi));
  double cmax = std::max(std::cos(a.lo), std::cos(a.hi));
  if (detail::hits_critical(a.lo, a.hi, 0.0, 2.0 * kPi)) cmax = 1.0;
  if (detail::hits_critical(a.lo, a.hi, kPi, 2.0 * kPi)) cmin = -1.0;
  Interval r = detail::outward(cmin, cmax);
  r.lo = std::max(r.lo, -1.0);
  r.hi = std::min(r.hi, 1.0);
  return r;
}

}  // namespace stabcheck

#endif  // STABCHECK_INTERVAL_HPP
