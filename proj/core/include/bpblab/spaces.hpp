#pragma once

#include <Eigen/Dense>

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bpblab {

/// An exponent p in [1, inf], kept as an exact rational or the infinity sentinel.
class Exponent {
 public:
  Exponent() = default;

  static Exponent integer(long long p);
  static Exponent rational(long long num, long long den);
  static Exponent infinity();
  /// Accepts "inf", integers ("3"), fractions ("4/3") and finite decimals ("1.5").
  static Exponent parse(std::string_view text);

  bool is_infinite() const noexcept { return infinite_; }
  bool is_integer() const noexcept { return !infinite_ && den_ == 1; }
  long long numerator() const noexcept { return num_; }
  long long denominator() const noexcept { return den_; }
  double value() const noexcept;

  bool is_one() const noexcept { return !infinite_ && num_ == 1 && den_ == 1; }
  bool is_two() const noexcept { return !infinite_ && num_ == 2 && den_ == 1; }

  /// The q with 1/p + 1/q = 1.
  Exponent conjugate() const;

  std::string to_string() const;

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  long long num_ = 2;
  long long den_ = 1;
  bool infinite_ = false;
};

/// A finite-dimensional l_p space.
struct SpaceSpec {
  Exponent p;
  int n = 1;

  SpaceSpec() = default;
  SpaceSpec(Exponent exponent, int dimension);

  bool polyhedral() const noexcept { return p.is_infinite() || p.is_one(); }
  bool strictly_convex() const noexcept { return !polyhedral(); }
  bool hilbert() const noexcept { return p.is_two(); }

  std::string to_string() const;

  friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;
};

SpaceSpec dual_space(const SpaceSpec& s);

double lp_norm(const Eigen::Ref<const Eigen::VectorXd>& x, const Exponent& p);

/// A vector tagged with the space whose norm measures it.
struct Point {
  Eigen::VectorXd coords;
  SpaceSpec space;

  Point(Eigen::VectorXd c, SpaceSpec s);

  double norm() const { return lp_norm(coords, space.p); }
};

double norm(const Point& x);

/// A proper face of the unit ball of l_inf^n or l_1^n, encoded by a sign pattern.
///
/// l_inf^n: nonzero entries are fixed coordinates, zero entries are free in [-1, 1].
/// l_1^n:   the face is the convex hull of pattern_i * e_i over the nonzero entries.
class Face {
 public:
  Face(SpaceSpec space, std::vector<int> pattern);

  const SpaceSpec& space() const noexcept { return space_; }
  const std::vector<int>& pattern() const noexcept { return pattern_; }

  int nonzeros() const noexcept;
  int dimension() const noexcept;
  bool is_facet() const noexcept { return dimension() == space_.n - 1; }
  bool is_vertex() const noexcept { return dimension() == 0; }

  std::vector<Eigen::VectorXd> vertices() const;
  /// True when this face is a subset of `other`.
  bool subset_of(const Face& other) const;
  Face negated() const;

  /// Sign-pattern string such as "+0-".
  std::string to_string() const;
  static Face parse(const SpaceSpec& space, std::string_view pattern);

  friend bool operator==(const Face& a, const Face& b) {
    return a.space_ == b.space_ && a.pattern_ == b.pattern_;
  }
  friend bool operator<(const Face& a, const Face& b) { return a.pattern_ < b.pattern_; }

 private:
  SpaceSpec space_;
  std::vector<int> pattern_;
};

std::vector<Point> extreme_points(const SpaceSpec& s);

/// Every proper face once, ordered by dimension and then by pattern.
std::vector<Face> enumerate_faces(const SpaceSpec& s);

Point relative_interior_point(const Face& f);

double distance(const Point& x, const Face& f);
double distance(const Point& x, std::span<const Point> points);
/// Distance to a linear subspace spanned by the columns of `basis` (l_2 only).
double distance_to_subspace(const Point& x, const Eigen::MatrixXd& basis);

/// J(x): the norm-one functionals f with f(x) = ||x||.
///
/// For strictly convex spaces `functionals` holds the unique element; for polyhedral
/// spaces it holds the extreme generators, whose convex hull is J(x).
struct SupportSet {
  Eigen::VectorXd point;
  SpaceSpec space;
  std::vector<Eigen::VectorXd> functionals;

  bool unique() const noexcept { return functionals.size() == 1; }
};

SupportSet support_functionals(const Point& x);
bool is_smooth_point(const Point& x);

/// Birkhoff-James orthogonality x ⊥_B y; with `strong`, the strict variant.
bool birkhoff_orthogonal(const Point& x, const Point& y, bool strong = false);

}  // namespace bpblab
