#pragma once

#include <cmath>
#include <utility>

namespace bpblab {

struct SearchResult {
  double arg;
  double value;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
/// Stops once the bracket is narrower than `width`.
template <typename F>
SearchResult golden_section_max(F&& f, double lo, double hi, double width) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > width) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  const double fx = f(x);
  // The bracket midpoint can be marginally worse than a probe on flat tops.
  if (fc > fx && fc >= fd) return {c, fc};
  if (fd > fx) return {d, fd};
  return {x, fx};
}

template <typename F>
SearchResult golden_section_min(F&& f, double lo, double hi, double width) {
  auto r = golden_section_max([&](double t) { return -f(t); }, lo, hi, width);
  return {r.arg, -r.value};
}

}  // namespace bpblab
