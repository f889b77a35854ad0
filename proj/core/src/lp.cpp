#include "bpblab/lp.hpp"

#include "bpblab/error.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace bpblab::lp {

Result maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (c.size() != n || b.size() != m) throw Error(Errc::InvalidArgument, "LP dimensions disagree");
  if (m > 0 && b.minCoeff() < 0) throw Error(Errc::InvalidArgument, "LP needs b >= 0");

  constexpr double kPivotTol = 1e-12;
  // Tableau columns: n structural, m slack, then the right-hand side.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  t.topLeftCorner(m, n) = A;
  t.block(0, n, m, m).setIdentity();
  t.col(n + m).head(m) = b;
  t.row(m).head(n) = -c.transpose();
  std::vector<Eigen::Index> basis(m);
  for (Eigen::Index i = 0; i < m; ++i) basis[i] = n + i;

  Result r;
  const Eigen::Index limit = 50 * (n + m) + 1000;
  for (Eigen::Index iter = 0;; ++iter) {
    if (iter > limit) {
      r.status = Result::Status::IterationLimit;
      break;
    }
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (t(m, j) < -kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (t(i, enter) > kPivotTol) best = std::min(best, t(i, n + m) / t(i, enter));
    }
    // Bland: among tied rows, the smallest basic index leaves.
    Eigen::Index leave = -1;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (t(i, enter) > kPivotTol && t(i, n + m) / t(i, enter) <= best + kPivotTol &&
          (leave < 0 || basis[i] < basis[leave])) {
        leave = i;
      }
    }
    if (leave < 0) {
      r.status = Result::Status::Unbounded;
      r.value = std::numeric_limits<double>::infinity();
      return r;
    }
    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i != leave && t(i, enter) != 0.0) t.row(i) -= t(i, enter) * t.row(leave);
    }
    basis[leave] = enter;
  }
  r.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[i] < n) r.x[basis[i]] = t(i, n + m);
  }
  r.value = c.dot(r.x);
  return r;
}

}  // namespace bpblab::lp
