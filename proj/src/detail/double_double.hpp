#ifndef NSFOM_DETAIL_DOUBLE_DOUBLE_HPP
#define NSFOM_DETAIL_DOUBLE_DOUBLE_HPP

#include <cmath>

namespace nsfom::detail {

// Minimal double-double arithmetic (Dekker/Bailey, FMA-based products).
// Used where a Vandermonde row evaluates terms of size ~1/gamma^q whose
// cancellation against 1 exceeds what plain double can resolve.
struct dd {
  double hi = 0.0;
  double lo = 0.0;
};

inline dd two_sum(double a, double b) {
  const double s = a + b;
  const double v = s - a;
  return {s, (a - (s - v)) + (b - v)};
}

// Requires |a| >= |b|.
inline dd quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd add(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  return quick_two_sum(s.hi, s.lo + a.lo + b.lo);
}

inline dd neg(dd a) { return {-a.hi, -a.lo}; }

inline dd sub(dd a, dd b) { return add(a, neg(b)); }

inline dd mul(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  return quick_two_sum(p.hi, p.lo + a.hi * b.lo + a.lo * b.hi);
}

inline dd div(dd a, dd b) {
  const double q1 = a.hi / b.hi;
  dd r = sub(a, mul(b, {q1, 0.0}));
  const double q2 = r.hi / b.hi;
  r = sub(r, mul(b, {q2, 0.0}));
  const double q3 = r.hi / b.hi;
  dd q = quick_two_sum(q1, q2);
  return add(q, {q3, 0.0});
}

inline dd from(double a) { return {a, 0.0}; }

}  // namespace nsfom::detail

#endif  // NSFOM_DETAIL_DOUBLE_DOUBLE_HPP
