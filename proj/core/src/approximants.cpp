#include "bpblab/approximants.hpp"

#include "bpblab/classify.hpp"
#include "bpblab/error.hpp"
#include "bpblab/tolerances.hpp"

#include <cmath>
#include <numbers>

namespace bpblab {

namespace {

void require_eps(double eps) {
  if (!(eps > 0) || !std::isfinite(eps)) throw Error(Errc::InvalidArgument, "eps must be positive");
}

double require_norm_one(const OperatorMatrix& T) {
  const double norm = op_norm(T).value;
  if (std::abs(norm - 1.0) > tol::kEq) {
    throw Error(Errc::NormNotOne, "operator norm is " + std::to_string(norm));
  }
  return norm;
}

double sign_of(double v) { return v < 0 ? -1.0 : 1.0; }

// Computes the measured fields and enforces the report contract.
ApproximantReport finish(const OperatorMatrix& T, OperatorMatrix A, double eps, std::string tag) {
  const double dist = operator_distance(T, A);
  const double norm_a = op_norm(A).value;
  if (!(dist < eps)) {
    throw Error(Errc::ConditionFails, tag + ": distance " + std::to_string(dist) + " is not below eps");
  }
  if (std::abs(norm_a - 1.0) > tol::kEq) {
    throw Error(Errc::ConditionFails, tag + ": approximant norm is " + std::to_string(norm_a));
  }
  if (dist == 0.0) throw Error(Errc::ConditionFails, tag + ": approximant equals the operator");
  auto mt = attainment_set(T);
  auto ma = attainment_set(A);
  const bool preserved = same_attainment(mt, ma);
  return {T, std::move(A), eps, dist, std::move(mt), std::move(ma), preserved, std::move(tag)};
}

Eigen::MatrixXd complement_basis(const Eigen::MatrixXd& q, int n) {
  // Columns of the full Q beyond rank(q) span the orthogonal complement.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
  const Eigen::MatrixXd full = qr.householderQ();
  return full.rightCols(n - q.cols());
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& b) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(b);
  if (qr.rank() < b.cols()) throw Error(Errc::DegenerateBasis, "basis columns are dependent");
  return qr.householderQ() * Eigen::MatrixXd::Identity(b.rows(), b.cols());
}

}  // namespace

ApproximantReport rank_one_approx(const OperatorMatrix& T, double eps) {
  require_eps(eps);
  require_norm_one(T);
  if (T.codomain.n == 1) throw Error(Errc::CodomainDimOne, "a one-dimensional codomain leaves no room");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(T.entries);
  const auto& sv = svd.singularValues();
  if (sv.size() > 1 && sv[1] > 1e-9 * sv[0]) throw Error(Errc::NotRankOne, "operator has rank above one");

  const auto& yp = T.codomain.p;
  Eigen::Index col = 0;
  double best = -1.0;
  for (Eigen::Index j = 0; j < T.entries.cols(); ++j) {
    const double c = lp_norm(T.entries.col(j), yp);
    if (c > best) {
      best = c;
      col = j;
    }
  }
  const Eigen::VectorXd w = T.entries.col(col) / best;
  Eigen::Index pivot = 0;
  w.cwiseAbs().maxCoeff(&pivot);
  const Eigen::RowVectorXd f = T.entries.row(pivot) / w[pivot];

  // Auxiliary direction: the first basis vector not parallel to w.
  Eigen::VectorXd v;
  for (int k = 0; k < T.codomain.n; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(T.codomain.n, k);
    Eigen::MatrixXd pair(T.codomain.n, 2);
    pair << w, e;
    if (Eigen::FullPivLU<Eigen::MatrixXd>(pair).rank() == 2) {
      v = e;
      break;
    }
  }
  auto u_at = [&](double phi) {
    Eigen::VectorXd u = std::cos(phi) * w + std::sin(phi) * v;
    return Eigen::VectorXd(u / lp_norm(u, yp));
  };
  auto gap = [&](double phi) { return lp_norm(u_at(phi) - w, yp); };
  const double target = std::min(eps / 4.0, gap(std::numbers::pi / 2.0) / 2.0);
  double lo = 0.0;
  double hi = std::numbers::pi / 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) < target ? lo : hi) = mid;
  }
  const Eigen::VectorXd u = u_at(0.5 * (lo + hi));
  return finish(T, OperatorMatrix(u * f, T.domain, T.codomain), eps, "rank-one");
}

ApproximantReport convex_witness_approx(const OperatorMatrix& T, const OperatorMatrix& T1,
                                        const OperatorMatrix& T2, double eps) {
  require_eps(eps);
  if (!T.same_spaces(T1) || !T.same_spaces(T2)) throw Error(Errc::MixedSpaces, "witnesses act between other spaces");
  require_norm_one(T1);
  require_norm_one(T2);
  const Eigen::MatrixXd mid = 0.5 * (T1.entries + T2.entries);
  if ((mid - T.entries).cwiseAbs().maxCoeff() > tol::kEq) {
    throw Error(Errc::NotAMidpoint, "T is not the midpoint of the witnesses");
  }
  const double d = operator_distance(T, T1);
  if (d <= tol::kEq) throw Error(Errc::DegenerateWitness, "T coincides with T1");
  long long n = std::max(2LL, static_cast<long long>(std::floor(d / eps)) + 1);
  while (d / static_cast<double>(n) >= eps) ++n;
  const double s = 1.0 / static_cast<double>(n);
  OperatorMatrix a((1.0 - s) * T.entries + s * T1.entries, T.domain, T.codomain);
  return finish(T, std::move(a), eps, "convex-witness");
}

ApproximantReport direct_sum_shrink_approx(const OperatorMatrix& T, const Eigen::MatrixXd& x1,
                                           const Eigen::MatrixXd& x2, double eps) {
  require_eps(eps);
  require_norm_one(T);
  const int n = T.domain.n;
  if (x1.rows() != n || x2.rows() != n || x1.cols() + x2.cols() != n || x1.cols() == 0 || x2.cols() == 0) {
    throw Error(Errc::NotComplementary, "X1 and X2 do not split the domain");
  }
  Eigen::MatrixXd joint(n, n);
  joint << x1, x2;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(joint);
  if (lu.rank() < n) throw Error(Errc::NotComplementary, "X1 and X2 overlap");

  if ((T.entries * x2).cwiseAbs().maxCoeff() <= tol::kEq) {
    throw Error(Errc::ZeroOnX2, "T vanishes on X2, shrinking changes nothing");
  }

  const auto mt = attainment_set(T);
  for (const auto& r : mt.representatives()) {
    const Eigen::VectorXd resid = r.coords - x1 * x1.colPivHouseholderQr().solve(r.coords);
    if (resid.cwiseAbs().maxCoeff() > 1e-7) {
      throw Error(Errc::ConditionFails, "the attainment set leaves X1");
    }
  }

  // X1 must be Birkhoff-James orthogonal to X2; probe basis vectors, sums and differences.
  auto probes = [](const Eigen::MatrixXd& b) {
    std::vector<Eigen::VectorXd> out;
    for (Eigen::Index i = 0; i < b.cols(); ++i) {
      out.push_back(b.col(i));
      for (Eigen::Index j = i + 1; j < b.cols(); ++j) {
        out.push_back(b.col(i) + b.col(j));
        out.push_back(b.col(i) - b.col(j));
      }
    }
    return out;
  };
  for (const auto& a : probes(x1)) {
    for (const auto& b : probes(x2)) {
      if (!birkhoff_orthogonal(Point(a, T.domain), Point(b, T.domain))) {
        throw Error(Errc::OrthogonalityFails, "X1 is not Birkhoff-James orthogonal to X2");
      }
    }
  }

  // Projection onto X2 along X1.
  const Eigen::MatrixXd coeffs = lu.inverse();
  const Eigen::MatrixXd p2 = x2 * coeffs.bottomRows(x2.cols());
  const long long k = static_cast<long long>(std::floor(2.0 / eps)) + 1;
  const double s = 1.0 / static_cast<double>(std::max(2LL, k));
  OperatorMatrix a(T.entries - s * T.entries * p2, T.domain, T.codomain);
  return finish(T, std::move(a), eps, "direct-sum-shrink");
}

ApproximantReport linf_extreme_approx(const OperatorMatrix& T, double eps) {
  require_eps(eps);
  if (eps >= 2.0) throw Error(Errc::InvalidArgument, "eps must be below 2");
  if (!linf_row_condition(T)) throw Error(Errc::ConditionFails, "a row lacks a single +-1 entry");
  if (is_signed_permutation(T.entries)) throw Error(Errc::IsIsometry, "signed permutations are isometries");
  require_norm_one(T);
  Eigen::MatrixXd a = T.entries;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    Eigen::Index first = -1;
    int count = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (a(i, j) != 0.0) {
        if (first < 0) first = i;
        ++count;
      }
    }
    if (count >= 2) {
      a(first, j) -= sign_of(a(first, j)) * eps / 2.0;
      return finish(T, OperatorMatrix(a, T.domain, T.codomain), eps, "linf-extreme");
    }
  }
  throw Error(Errc::ConditionFails, "no column carries two entries");
}

ApproximantReport l1_extreme_approx(const OperatorMatrix& T, double eps) {
  require_eps(eps);
  if (eps >= 2.0) throw Error(Errc::InvalidArgument, "eps must be below 2");
  if (!l1_column_condition(T)) throw Error(Errc::ConditionFails, "a column lacks a single +-1 entry");
  if (is_signed_permutation(T.entries)) throw Error(Errc::IsIsometry, "signed permutations are isometries");
  require_norm_one(T);
  Eigen::MatrixXd a = T.entries;
  Eigen::Index doubled = -1;
  Eigen::Index empty = -1;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const auto nz = (a.row(i).array() != 0.0).count();
    if (nz >= 2 && doubled < 0) doubled = i;
    if (nz == 0 && empty < 0) empty = i;
  }
  if (doubled < 0) throw Error(Errc::ConditionFails, "no row carries two entries");
  if (empty < 0) throw Error(Errc::NoZeroRow, "no zero row to receive the shifted mass");
  Eigen::Index j = 0;
  while (a(doubled, j) == 0.0) ++j;
  const double s = sign_of(a(doubled, j));
  a(doubled, j) -= s * eps / 4.0;
  a(empty, j) = s * eps / 4.0;
  return finish(T, OperatorMatrix(a, T.domain, T.codomain), eps, "l1-extreme");
}

ApproximantReport linf3_l13_extreme_approx(const OperatorMatrix& T, double eps) {
  require_eps(eps);
  const auto member = find_extreme_linf3_l13(T);
  if (!member) throw Error(Errc::NotInEnumeration, "operator is not an extreme contraction of l_inf^3 -> l_1^3");
  if (member->orbit == 0) return rank_one_approx(T, eps);
  if (eps >= 4.0) throw Error(Errc::InvalidArgument, "eps must be below 4");
  const double e = eps / 8.0;
  Eigen::MatrixXd canon(3, 3);
  canon << 0.5 - e, 0.5 - e, 0.0,
           0.5, -0.5, 0.0,
           e, e, 0.0;
  const Eigen::MatrixXd a = member->left.matrix() * canon * member->right.matrix();
  return finish(T, OperatorMatrix(a, T.domain, T.codomain), eps, "linf3-l13-block");
}

ApproximantReport hilbert_rotate_approx(const OperatorMatrix& T, double eps, const std::optional<Eigen::MatrixXd>& h0) {
  require_eps(eps);
  if (!T.domain.hilbert() || !T.codomain.hilbert()) throw Error(Errc::WrongSpaces, "needs l_2 spaces on both sides");
  require_norm_one(T);
  const int n = T.domain.n;
  Eigen::MatrixXd q;
  if (h0) {
    if (h0->rows() != n || h0->cols() == 0) throw Error(Errc::InvalidArgument, "H0 basis has the wrong shape");
    q = orthonormalize(*h0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(T.entries * q);
    if (svd.singularValues().minCoeff() < 1.0 - tol::kEq) {
      throw Error(Errc::ConditionFails, "T does not attain its norm on all of H0");
    }
  } else {
    q = attainment_set(T).basis;
  }
  const int k = static_cast<int>(q.cols());
  double rest = 0.0;
  Eigen::MatrixXd comp;
  if (k < n) {
    comp = complement_basis(q, n);
    rest = restricted_norm(T, comp);
  }
  if (rest >= 1.0 - tol::kEq) {
    throw Error(Errc::ObstructionFullNormOnComplement, "T has full norm on the complement of H0");
  }
  if (k < n && (T.entries * comp).cwiseAbs().maxCoeff() > tol::kEq) {
    auto r = direct_sum_shrink_approx(T, q, comp, eps);
    r.construction = "hilbert-shrink";
    return r;
  }
  if (k == 1) return rank_one_approx(T, eps);

  const double phi = 2.0 * std::asin(eps / 8.0);
  const Eigen::VectorXd e1 = q.col(0);
  const Eigen::VectorXd e2 = q.col(1);
  const Eigen::VectorXd t1 = T.entries * e1;
  const Eigen::VectorXd t2 = T.entries * e2;
  const Eigen::VectorXd u1 = std::cos(phi) * t1 + std::sin(phi) * t2;
  const Eigen::VectorXd u2 = -std::sin(phi) * t1 + std::cos(phi) * t2;
  Eigen::MatrixXd a = T.entries + (u1 - t1) * e1.transpose() + (u2 - t2) * e2.transpose();
  return finish(T, OperatorMatrix(a, T.domain, T.codomain), eps, "hilbert-rotate");
}

ApproximantReport tilted_projection_demo(double eps, std::optional<double> theta) {
  require_eps(eps);
  if (eps >= 2.0) throw Error(Errc::InvalidArgument, "eps must be below 2");
  double s = 1.0 - eps * eps / 16.0;
  if (theta) {
    s = std::sin(*theta);
    if (!(s > 1.0 - eps * eps / 8.0) || !(std::cos(*theta) > 0)) {
      throw Error(Errc::InvalidArgument, "theta must satisfy 1 - eps^2/8 < sin(theta) < 1");
    }
  }
  const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
  const SpaceSpec l22(Exponent::integer(2), 2);
  Eigen::MatrixXd t(2, 2);
  t << 1, 0, 0, 0;
  Eigen::MatrixXd a(2, 2);
  a << s * s, s * c, s * c, c * c;
  return finish(OperatorMatrix(t, l22, l22), OperatorMatrix(a, l22, l22), eps, "tilted-projection");
}

ApproximantReport functional_approx_lp2(const OperatorMatrix& f, double eps) {
  require_eps(eps);
  if (f.domain.n != 2 || f.codomain.n != 1 || !f.domain.strictly_convex()) {
    throw Error(Errc::WrongSpaces, "needs a functional on l_p^2 with 1 < p < inf");
  }
  require_norm_one(f);
  const SpaceSpec dual = dual_space(f.domain);
  const Eigen::VectorXd fv = f.entries.row(0).transpose();
  // The point where f attains its norm is the support point of f in the dual space.
  const Eigen::VectorXd x = support_functionals(Point(fv, dual)).functionals.front();
  const double t0 = std::atan2(x[1], x[0]);
  for (double h = 0.5; h > 1e-12; h /= 2.0) {
    Eigen::Vector2d xk(std::cos(t0 + h), std::sin(t0 + h));
    xk /= lp_norm(xk, f.domain.p);
    if (lp_norm(xk - x, f.domain.p) >= eps / 2.0) continue;
    const Eigen::VectorXd fk = support_functionals(Point(xk, f.domain)).functionals.front();
    if (lp_norm(fk - fv, dual.p) >= eps) continue;
    return finish(f, OperatorMatrix(fk.transpose(), f.domain, f.codomain), eps, "functional-lp2");
  }
  throw Error(Errc::ConditionFails, "no nearby supporting functional found");
}

OperatorMatrix sbpbp_counterexample_family(const Point& x0, long long n) {
  if (!x0.space.hilbert()) throw Error(Errc::WrongSpaces, "the family lives on l_2^d");
  if (n <= 1) throw Error(Errc::BadIndex, "n must exceed 1");
  if (std::abs(x0.norm() - 1.0) > tol::kEq) throw Error(Errc::InvalidArgument, "x0 must be a unit vector");
  const int d = x0.space.n;
  const Eigen::MatrixXd p = x0.coords * x0.coords.transpose();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  const double shrink = 1.0 - 1.0 / static_cast<double>(n);
  return OperatorMatrix(p + shrink * (id - p), x0.space, x0.space);
}

}  // namespace bpblab
