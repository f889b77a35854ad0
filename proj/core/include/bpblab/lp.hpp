#pragma once

#include <Eigen/Dense>

namespace bpblab::lp {

struct Result {
  enum class Status { Optimal, Unbounded, IterationLimit };
  Status status = Status::Optimal;
  double value = 0.0;
  Eigen::VectorXd x;
};

/// max c.x  s.t.  A x <= b,  x >= 0, with b >= 0 so the origin is feasible.
/// Dense tableau simplex with Bland's rule; meant for a few dozen variables.
Result maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

}  // namespace bpblab::lp
