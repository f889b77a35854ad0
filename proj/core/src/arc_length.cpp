#include "bpblab/arc_length.hpp"

#include "bpblab/error.hpp"
#include "bpblab/search.hpp"
#include "bpblab/tolerances.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bpblab {

namespace {

void require_smooth_exponent(const Exponent& p) {
  if (p.is_infinite() || p.is_one()) {
    throw Error(Errc::UnsupportedExponent, "the l_" + p.to_string() + " circle is a polygon");
  }
}

// |dx/dy| on the first octant is (y/x)^(p-1).
double octant_speed(double y, double p) {
  const double x = std::pow(1.0 - std::pow(y, p), 1.0 / p);
  return std::sqrt(1.0 + std::pow(y / x, 2.0 * (p - 1.0)));
}

}  // namespace

double arc_length_total(const Exponent& p) {
  if (p.is_one()) return 4.0 * std::numbers::sqrt2;
  if (p.is_infinite()) return 8.0;
  if (p.is_two()) return 2.0 * std::numbers::pi;
  const double e = 2.0 / p.value();
  auto speed = [e](double t) {
    const double c = std::cos(t);
    const double s = std::sin(t);
    if (s <= 0.0) return 0.0;
    const double dx = e * std::pow(c, e - 1.0) * s;
    const double dy = e * std::pow(s, e - 1.0) * c;
    return std::hypot(dx, dy);
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double octant = integrator.integrate(speed, 0.0, std::numbers::pi / 4.0, 1e-12);
  return 8.0 * octant;
}

LpCircle::LpCircle(const Exponent& p, int cells_per_octant) : p_(p), cells_(cells_per_octant) {
  require_smooth_exponent(p);
  if (cells_ < 4) throw Error(Errc::InvalidArgument, "arc table needs at least 4 cells");
  const double q = p.value();
  y_end_ = std::pow(2.0, -1.0 / q);
  step_ = y_end_ / cells_;
  cumulative_.resize(static_cast<std::size_t>(cells_) + 1);
  cumulative_[0] = 0.0;
  auto speed = [q](double y) { return octant_speed(y, q); };
  for (int k = 0; k < cells_; ++k) {
    const double a = k * step_;
    const double b = (k + 1 == cells_) ? y_end_ : a + step_;
    cumulative_[k + 1] =
        cumulative_[k] + boost::math::quadrature::gauss_kronrod<double, 15>::integrate(speed, a, b, 0);
  }
  octant_ = cumulative_.back();
}

double LpCircle::y_at(double r) const {
  r = std::clamp(r, 0.0, octant_);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
  auto k = static_cast<int>(it - cumulative_.begin()) - 1;
  k = std::clamp(k, 0, cells_ - 1);
  const double span = cumulative_[k + 1] - cumulative_[k];
  const double frac = span > 0 ? (r - cumulative_[k]) / span : 0.0;
  return std::min(y_end_, (k + frac) * step_);
}

double LpCircle::arc_at(double y) const {
  const double u = std::clamp(y / step_, 0.0, static_cast<double>(cells_));
  const int k = std::min(static_cast<int>(u), cells_ - 1);
  const double frac = u - k;
  return cumulative_[k] + frac * (cumulative_[k + 1] - cumulative_[k]);
}

Eigen::Vector2d LpCircle::point_at(double s) const {
  const double total = length();
  s = std::fmod(s, total);
  if (s < 0) s += total;
  int octant = std::min(7, static_cast<int>(s / octant_));
  const double r = s - octant * octant_;
  const double q = p_.value();
  Eigen::Vector2d v;
  if (octant % 2 == 0) {
    const double y = y_at(r);
    v << std::pow(1.0 - std::pow(y, q), 1.0 / q), y;
  } else {
    const double y = y_at(octant_ - r);
    v << y, std::pow(1.0 - std::pow(y, q), 1.0 / q);
  }
  for (int quarter = octant / 2; quarter > 0; --quarter) v = Eigen::Vector2d(-v.y(), v.x());
  return v;
}

double LpCircle::position_of(const Eigen::Vector2d& x) const {
  const double nx = lp_norm(x, p_);
  if (nx == 0.0) throw Error(Errc::ZeroVector, "no arc position for the origin");
  Eigen::Vector2d v = x / nx;
  double angle = std::atan2(v.y(), v.x());
  if (angle < 0) angle += 2.0 * std::numbers::pi;
  int quarter = std::min(3, static_cast<int>(angle / (std::numbers::pi / 2.0)));
  for (int k = 0; k < quarter; ++k) v = Eigen::Vector2d(v.y(), -v.x());
  const double a = std::abs(v.x());
  const double b = std::abs(v.y());
  const double within = b <= a ? arc_at(b) : 2.0 * octant_ - arc_at(a);
  return quarter * 2.0 * octant_ + within;
}

double arc_length_constant(const LpCircle& circle, double eps) {
  if (!(eps > 0)) throw Error(Errc::InvalidArgument, "eps must be positive");
  if (eps >= circle.length() / 2.0) {
    throw Error(Errc::OutOfRange, "eps must be below half the circle length");
  }
  const Exponent& p = circle.exponent();
  auto chord = [&](double s) {
    const Eigen::Vector2d d = circle.point_at(s + eps) - circle.point_at(s);
    return lp_norm(d, p);
  };
  // A quarter turn covers every pair up to symmetry.
  const double span = circle.length() / 4.0;
  const int grid = 2048;
  const double h = span / grid;
  std::vector<double> values(grid + 1);
  for (int i = 0; i <= grid; ++i) values[i] = chord(i * h);
  double best = *std::min_element(values.begin(), values.end());
  for (int i = 0; i <= grid; ++i) {
    const double left = values[(i + grid - 1) % grid];
    const double right = values[(i + 1) % grid];
    if (values[i] <= left && values[i] <= right) {
      const auto r = golden_section_min(chord, (i - 1) * h, (i + 1) * h, tol::kOpt);
      best = std::min(best, r.value);
    }
  }
  return best;
}

double arc_length_constant(const Exponent& p, double eps) {
  require_smooth_exponent(p);
  int cells = kDefaultArcCells;
  double previous = arc_length_constant(LpCircle(p, cells), eps);
  for (int round = 0; round < 4; ++round) {
    cells *= 2;
    const double next = arc_length_constant(LpCircle(p, cells), eps);
    if (std::abs(next - previous) < 1e-6) return next;
    previous = next;
  }
  return previous;
}

}  // namespace bpblab
