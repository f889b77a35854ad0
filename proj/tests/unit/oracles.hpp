#pragma once
// Brute-force references used by the unit tests. Deliberately naive.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace oracle {

inline double pnorm(const Eigen::VectorXd& x, double p) {
  if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
  double s = 0;
  for (double v : x) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

/// Point on the l_p circle at polar angle t (radial projection).
inline Eigen::Vector2d circle_point(double p, double t) {
  Eigen::Vector2d u(std::cos(t), std::sin(t));
  return u / pnorm(u, p);
}

/// sup ||T x||_q over the l_p circle, scanned at `steps` angles in [0, pi).
inline double grid_norm_2d(const Eigen::MatrixXd& T, double p, double q, int steps = 200000) {
  double best = 0;
  for (int i = 0; i < steps; ++i) {
    Eigen::VectorXd x = circle_point(p, M_PI * i / steps);
    best = std::max(best, pnorm(T * x, q));
  }
  return best;
}

/// Euclidean length of |x|^p + |y|^p = 1 from a polyline with `segments` pieces.
inline double polyline_length(double p, long segments) {
  // One quadrant via x = cos(t)^(2/p), y = sin(t)^(2/p), times four.
  double len = 0;
  Eigen::Vector2d prev(1, 0);
  const long per = segments / 4;
  for (long i = 1; i <= per; ++i) {
    const double t = 0.5 * M_PI * i / per;
    Eigen::Vector2d cur(std::pow(std::cos(t), 2.0 / p), std::pow(std::sin(t), 2.0 / p));
    if (i == per) cur = Eigen::Vector2d(0, 1);
    len += (cur - prev).norm();
    prev = cur;
  }
  return 4 * len;
}

/// min ||x - y||_p over pairs on the l_p circle at arc separation exactly eps,
/// from a table of `n` points per quadrant with linear interpolation.
inline double arc_pair_scan(double p, double eps, int n) {
  std::vector<Eigen::Vector2d> pts;
  std::vector<double> s;
  for (int q = 0; q < 4; ++q) {
    for (int i = 0; i < n; ++i) {
      const double t = 0.5 * M_PI * i / n;
      Eigen::Vector2d v(std::pow(std::cos(t), 2.0 / p), std::pow(std::sin(t), 2.0 / p));
      for (int r = 0; r < q; ++r) v = Eigen::Vector2d(-v.y(), v.x());
      pts.push_back(v);
    }
  }
  pts.push_back(pts.front());
  s.push_back(0);
  for (std::size_t i = 1; i < pts.size(); ++i) s.push_back(s.back() + (pts[i] - pts[i - 1]).norm());
  const double L = s.back();
  auto at = [&](double a) {
    a = std::fmod(a, L);
    auto it = std::upper_bound(s.begin(), s.end(), a);
    std::size_t j = std::min<std::size_t>(it - s.begin(), s.size() - 1);
    const double w = (a - s[j - 1]) / (s[j] - s[j - 1]);
    return Eigen::Vector2d((1 - w) * pts[j - 1] + w * pts[j]);
  };
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) best = std::min(best, pnorm(at(s[i] + eps) - pts[i], p));
  return best;
}

}  // namespace oracle
