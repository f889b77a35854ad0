#pragma once

#include "bpblab/spaces.hpp"

#include <Eigen/Dense>

#include <vector>

namespace bpblab {

/// Cells per octant of the arc table; eight octants give 2^16 samples in total.
inline constexpr int kDefaultArcCells = 8192;

/// Euclidean length of the l_p unit circle |x|^p + |y|^p = 1.
/// Polyhedral exponents return the exact polygon perimeter.
double arc_length_total(const Exponent& p);

/// The l_p unit circle parametrized by Euclidean arc length, counterclockwise from (1, 0).
///
/// One octant (0 <= y <= x) is tabulated as a function of y; the rest follows from the
/// dihedral symmetry of the curve.
class LpCircle {
 public:
  explicit LpCircle(const Exponent& p, int cells_per_octant = kDefaultArcCells);

  const Exponent& exponent() const noexcept { return p_; }
  int cells() const noexcept { return cells_; }
  double length() const noexcept { return 8.0 * octant_; }
  double octant_length() const noexcept { return octant_; }

  Eigen::Vector2d point_at(double s) const;
  /// Arc position of the radial projection of `x` onto the circle.
  double position_of(const Eigen::Vector2d& x) const;

 private:
  double y_at(double r) const;
  double arc_at(double y) const;

  Exponent p_;
  int cells_;
  double y_end_;
  double step_;
  double octant_;
  std::vector<double> cumulative_;
};

/// Minimal l_p chord between circle points exactly `eps` apart in arc length,
/// evaluated on a fixed table.
double arc_length_constant(const LpCircle& circle, double eps);

/// Same, doubling the table until successive values agree to 1e-6.
double arc_length_constant(const Exponent& p, double eps);

}  // namespace bpblab
