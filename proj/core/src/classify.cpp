#include "bpblab/classify.hpp"

#include "bpblab/error.hpp"
#include "bpblab/lp.hpp"
#include "bpblab/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace bpblab {

namespace {

void require_norm_one(const OperatorMatrix& T) {
  const double norm = op_norm(T).value;
  if (std::abs(norm - 1.0) > tol::kEq) {
    throw Error(Errc::NormNotOne, "operator norm is " + std::to_string(norm));
  }
}

bool is_unit_entry(double v) { return std::abs(std::abs(v) - 1.0) <= tol::kEq; }
bool is_zero_entry(double v) { return std::abs(v) <= tol::kEq; }

// One +-1 and otherwise zeros.
template <typename Vec>
bool single_unit(const Vec& v) {
  int units = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (is_unit_entry(v[i])) ++units;
    else if (!is_zero_entry(v[i])) return false;
  }
  return units == 1;
}

// Extreme points of the dual unit ball of `s`.
std::vector<Eigen::VectorXd> dual_extreme_points(const SpaceSpec& s) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& p : extreme_points(dual_space(s))) out.push_back(p.coords);
  return out;
}

bool within_unit_ball(const OperatorMatrix& T, const Eigen::MatrixXd& d) {
  const double plus = op_norm(OperatorMatrix(T.entries + d, T.domain, T.codomain)).value;
  const double minus = op_norm(OperatorMatrix(T.entries - d, T.domain, T.codomain)).value;
  return std::max(plus, minus) <= 1.0 + tol::kEq;
}

ExtremalityVerdict lp_extremality(const OperatorMatrix& T) {
  const int m = T.rows();
  const int n = T.cols();
  const int vars = m * n;
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  std::map<std::vector<long long>, bool> seen;
  for (const auto& sigma : extreme_points(T.domain)) {
    for (const auto& g : dual_extreme_points(T.codomain)) {
      // (sigma, g) and (-sigma, -g) give the same constraint.
      Eigen::MatrixXd outer = g * sigma.coords.transpose();
      std::vector<long long> key(vars);
      for (int k = 0; k < vars; ++k) key[k] = std::llround(outer.data()[k]);
      if (!seen.emplace(key, true).second) continue;
      const double slack = std::max(0.0, 1.0 - g.dot(T.entries * sigma.coords));
      Eigen::Map<const Eigen::VectorXd> flat(outer.data(), vars);
      for (double s : {1.0, -1.0}) {
        // s * <g sigma^T, D> <= 1 - g T sigma, with D = P - N.
        Eigen::VectorXd row(2 * vars);
        row.head(vars) = s * flat;
        row.tail(vars) = -s * flat;
        rows.push_back(std::move(row));
        rhs.push_back(slack);
      }
    }
  }
  Eigen::MatrixXd a(rows.size(), 2 * vars);
  for (std::size_t i = 0; i < rows.size(); ++i) a.row(i) = rows[i].transpose();
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), rhs.size());

  ExtremalityVerdict v;
  v.method = "lp";
  for (int k = 0; k < vars; ++k) {
    for (double s : {1.0, -1.0}) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * vars);
      c[k] = s;
      c[vars + k] = -s;
      const auto r = lp::maximize(c, a, b);
      if (r.status == lp::Result::Status::Unbounded || r.value > tol::kEq) {
        Eigen::VectorXd flat = r.x.head(vars) - r.x.tail(vars);
        v.status = ExtremalityVerdict::Status::NotExtreme;
        v.witness = Eigen::Map<const Eigen::MatrixXd>(flat.data(), m, n);
        return v;
      }
    }
  }
  v.status = ExtremalityVerdict::Status::Extreme;
  return v;
}

ExtremalityVerdict perturbation_extremality(const OperatorMatrix& T, std::uint64_t seed) {
  const int m = T.rows();
  const int n = T.cols();
  std::vector<Eigen::MatrixXd> directions;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m, n);
      e(i, j) = 1.0;
      directions.push_back(std::move(e));
    }
  }
  // Singular pairs below the top one can be pushed without leaving the ball.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(T.entries, Eigen::ComputeFullU | Eigen::ComputeFullV);
  for (int k = 0; k < std::min(m, n); ++k) {
    directions.push_back(svd.matrixU().col(k) * svd.matrixV().col(k).transpose());
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) directions.push_back(svd.matrixU().col(i) * svd.matrixV().col(j).transpose());
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int k = 0; k < 64; ++k) {
    Eigen::MatrixXd d(m, n);
    for (Eigen::Index i = 0; i < d.size(); ++i) d.data()[i] = gauss(rng);
    directions.push_back(d / d.norm());
  }
  ExtremalityVerdict v;
  v.method = "perturbation";
  for (const auto& d : directions) {
    for (double t = 0.5; t >= 1e-6; t /= 4.0) {
      if (within_unit_ball(T, t * d)) {
        v.status = ExtremalityVerdict::Status::NotExtreme;
        v.witness = t * d;
        return v;
      }
    }
  }
  v.status = ExtremalityVerdict::Status::NecessaryConditionOnly;
  return v;
}

}  // namespace

Eigen::MatrixXd SignedPermutation::matrix() const {
  const int n = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, perm[i]) = signs[i];
  return m;
}

SignedPermutation SignedPermutation::inverse() const {
  SignedPermutation inv{std::vector<int>(perm.size()), std::vector<int>(signs.size())};
  for (int i = 0; i < size(); ++i) {
    inv.perm[perm[i]] = i;
    inv.signs[perm[i]] = signs[i];
  }
  return inv;
}

std::vector<SignedPermutation> signed_permutations(int n) {
  if (n < 1 || n > 8) throw Error(Errc::Unsupported, "signed permutations are enumerated for 1 <= n <= 8");
  std::vector<SignedPermutation> out;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<int> signs(n);
      for (int i = 0; i < n; ++i) signs[i] = (mask >> i) & 1U ? -1 : 1;
      out.push_back({perm, std::move(signs)});
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::string_view to_string(ExtremalityVerdict::Status s) {
  switch (s) {
    case ExtremalityVerdict::Status::Extreme: return "Extreme";
    case ExtremalityVerdict::Status::NotExtreme: return "NotExtreme";
    case ExtremalityVerdict::Status::NecessaryConditionOnly: return "NecessaryConditionOnly";
  }
  return "?";
}

bool linf_row_condition(const OperatorMatrix& T) {
  if (!T.domain.p.is_infinite() || !T.codomain.p.is_infinite() || T.domain.n != T.codomain.n) {
    throw Error(Errc::WrongSpaces, "row condition is stated for l_inf^n -> l_inf^n");
  }
  for (int i = 0; i < T.rows(); ++i) {
    if (!single_unit(T.entries.row(i))) return false;
  }
  return true;
}

bool l1_column_condition(const OperatorMatrix& T) {
  if (!T.domain.p.is_one() || !T.codomain.p.is_one() || T.domain.n != T.codomain.n) {
    throw Error(Errc::WrongSpaces, "column condition is stated for l_1^n -> l_1^n");
  }
  for (int j = 0; j < T.cols(); ++j) {
    if (!single_unit(T.entries.col(j))) return false;
  }
  return true;
}

ExtremalityVerdict is_extreme_contraction(const OperatorMatrix& T, std::uint64_t seed) {
  require_norm_one(T);
  if (T.domain.polyhedral() && T.codomain.polyhedral()) {
    if (T.domain.n > 3 || T.codomain.n > 3) {
      throw Error(Errc::Unsupported, "LP extremality is sized for dimensions up to 3");
    }
    auto v = lp_extremality(T);
    if (T.domain == T.codomain) {
      v.condition = T.domain.p.is_infinite() ? linf_row_condition(T) : l1_column_condition(T);
    }
    return v;
  }
  return perturbation_extremality(T, seed);
}

bool is_signed_permutation(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (!single_unit(a.row(i)) || !single_unit(a.col(i))) return false;
  }
  return true;
}

bool is_isometry(const OperatorMatrix& T) {
  if (T.rows() != T.cols() || !(T.domain.p == T.codomain.p)) {
    throw Error(Errc::WrongSpaces, "isometry test needs a square operator on one l_p space");
  }
  const int n = T.cols();
  if (T.domain.hilbert()) {
    const Eigen::MatrixXd gram = T.entries.transpose() * T.entries - Eigen::MatrixXd::Identity(n, n);
    return gram.cwiseAbs().maxCoeff() <= tol::kEq;
  }
  if (!is_signed_permutation(T.entries)) return false;
  if (T.domain.polyhedral()) return true;
  for (const auto& x : sphere_samples(T.domain, 256)) {
    if (std::abs(T.image_norm(x.coords) - 1.0) > tol::kEq) return false;
  }
  return true;
}

std::vector<OperatorMatrix> enumerate_isometries(const SpaceSpec& s) {
  if (s.hilbert() && s.n > 1) throw Error(Errc::InfiniteGroup, "the orthogonal group is infinite");
  std::vector<OperatorMatrix> out;
  for (const auto& sp : signed_permutations(s.n)) out.emplace_back(sp.matrix(), s, s);
  return out;
}

std::vector<OrbitMember> equivalence_orbit(const OperatorMatrix& A) {
  if (A.rows() != A.cols() || A.rows() > 3) {
    throw Error(Errc::Unsupported, "orbits are enumerated for square matrices up to 3x3");
  }
  const auto group = signed_permutations(A.rows());
  std::map<std::vector<long long>, std::size_t> index;
  std::vector<OrbitMember> members;
  for (const auto& left : group) {
    const Eigen::MatrixXd la = left.matrix() * A.entries;
    for (const auto& right : group) {
      Eigen::MatrixXd b = la * right.matrix();
      std::vector<long long> key(b.size());
      for (Eigen::Index k = 0; k < b.size(); ++k) key[k] = std::llround(b.data()[k] * 1e12);
      if (index.emplace(key, members.size()).second) {
        members.push_back({OperatorMatrix(std::move(b), A.domain, A.codomain), left, right});
      }
    }
  }
  // Order by key so the result does not depend on group enumeration order.
  std::vector<OrbitMember> sorted;
  sorted.reserve(members.size());
  for (const auto& [key, i] : index) sorted.push_back(members[i]);
  return sorted;
}

OperatorMatrix linf3_l13_rank_one_canonical() {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 0) = 1.0;
  return OperatorMatrix(a, SpaceSpec(Exponent::infinity(), 3), SpaceSpec(Exponent::integer(1), 3));
}

OperatorMatrix linf3_l13_block_canonical() {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 0) = 0.5;
  a(0, 1) = 0.5;
  a(1, 0) = 0.5;
  a(1, 1) = -0.5;
  return OperatorMatrix(a, SpaceSpec(Exponent::infinity(), 3), SpaceSpec(Exponent::integer(1), 3));
}

std::vector<ExtremeMember> enumerate_extreme_linf3_l13() {
  std::vector<ExtremeMember> out;
  int orbit = 0;
  for (const auto& canon : {linf3_l13_rank_one_canonical(), linf3_l13_block_canonical()}) {
    for (auto& m : equivalence_orbit(canon)) out.push_back({std::move(m.matrix), orbit, m.left, m.right});
    ++orbit;
  }
  return out;
}

std::optional<ExtremeMember> find_extreme_linf3_l13(const OperatorMatrix& T) {
  if (!(T.domain == SpaceSpec(Exponent::infinity(), 3)) || !(T.codomain == SpaceSpec(Exponent::integer(1), 3))) {
    return std::nullopt;
  }
  for (auto& m : enumerate_extreme_linf3_l13()) {
    if ((m.matrix.entries - T.entries).cwiseAbs().maxCoeff() <= tol::kEq) return m;
  }
  return std::nullopt;
}

}  // namespace bpblab
