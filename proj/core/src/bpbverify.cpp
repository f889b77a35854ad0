#include "bpblab/bpbverify.hpp"

#include "bpblab/arc_length.hpp"
#include "bpblab/classify.hpp"
#include "bpblab/error.hpp"
#include "bpblab/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

namespace bpblab {

namespace {

void require_norm_one(const OperatorMatrix& T, const char* name) {
  const double norm = op_norm(T).value;
  if (std::abs(norm - 1.0) > tol::kEq) {
    throw Error(Errc::NormNotOne, std::string(name) + " has norm " + std::to_string(norm));
  }
}

Eigen::MatrixXd gaussian_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = gauss(rng);
  return m;
}

Eigen::MatrixXd complement_of(const Eigen::MatrixXd& q, int n) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
  const Eigen::MatrixXd full = qr.householderQ();
  return full.rightCols(n - q.cols());
}

int rank_of(const Eigen::MatrixXd& m) {
  if (m.cols() == 0) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(1e-9);
  return static_cast<int>(qr.rank());
}

// dim(span(a) ∩ span(b)) for orthonormal a and b.
int intersection_dim(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd joint(a.rows(), a.cols() + b.cols());
  joint << a, b;
  return static_cast<int>(a.cols() + b.cols()) - rank_of(joint);
}

bool near_isometry(const OperatorMatrix& T) {
  if (T.rows() != T.cols() || !(T.domain.p == T.codomain.p)) return false;
  if (T.domain.hilbert()) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(T.entries);
    return (svd.singularValues().array() - 1.0).abs().maxCoeff() < 1e-3;
  }
  for (const auto& iso : enumerate_isometries(T.domain)) {
    if (operator_distance(T, iso) < 1e-3) return true;
  }
  return false;
}

// Every matrix with one +-1 per row (rows) or per column (!rows).
std::vector<Eigen::MatrixXd> unit_pattern_matrices(int n, bool rows) {
  std::vector<Eigen::MatrixXd> out;
  const int choices = 2 * n;
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= choices;
  for (long long code = 0; code < total; ++code) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    long long c = code;
    for (int i = 0; i < n; ++i) {
      const int pick = static_cast<int>(c % choices);
      c /= choices;
      const double sign = pick % 2 ? -1.0 : 1.0;
      if (rows) m(i, pick / 2) = sign;
      else m(pick / 2, i) = sign;
    }
    out.push_back(std::move(m));
  }
  return out;
}

bool supported_pair(const SpaceSpec& x, const SpaceSpec& y) {
  if (x.p.is_infinite() && y.p.is_infinite() && x.n == y.n) return x.n <= 3;
  if (x.p.is_one() && y.p.is_one() && x.n == y.n) return x.n <= 3;
  if (x.p.is_infinite() && y.p.is_one() && x.n == 3 && y.n == 3) return true;
  if (x.hilbert() && y.hilbert() && x.n == y.n) return x.n <= 3;
  return false;
}

}  // namespace

std::string_view to_string(BpbCertificate::Status s) {
  switch (s) {
    case BpbCertificate::Status::Certified: return "Certified";
    case BpbCertificate::Status::Falsified: return "Falsified";
    case BpbCertificate::Status::Inconclusive: return "Inconclusive";
  }
  return "?";
}

BpbCertificate verify_uniform_bpb(const OperatorMatrix& T, const OperatorMatrix& A, double eps, int resolution) {
  if (!(eps > 0)) throw Error(Errc::InvalidArgument, "eps must be positive");
  require_norm_one(T, "T");
  require_norm_one(A, "A");
  BpbCertificate c;
  c.eps = eps;
  c.resolution = resolution;
  c.operator_distance = operator_distance(T, A);
  if (c.operator_distance >= eps) {
    c.status = BpbCertificate::Status::Falsified;
    return c;
  }
  const auto ma = attainment_set(A);
  const auto search = delta_search(T, ma, eps, resolution);
  c.samples = search.samples;
  c.worst_distance = search.worst_distance;
  if (search.found) {
    c.status = BpbCertificate::Status::Certified;
    c.delta_found = search.delta;
  } else {
    c.status = BpbCertificate::Status::Falsified;
    c.counterexample = search.counterexample;
  }
  return c;
}

OnlyApproximationResult is_only_approximation(const OperatorMatrix& T, double eps, int trials, std::uint64_t seed,
                                              int resolution) {
  if (trials < 1) throw Error(Errc::InvalidArgument, "trials must be at least 1");
  if (!(eps > 0)) throw Error(Errc::InvalidArgument, "eps must be positive");
  require_norm_one(T, "T");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> scale(0.05 * eps, 0.45 * eps);
  OnlyApproximationResult out;

  // A non-extreme T is a midpoint of T +- D; the first trial uses that segment.
  std::optional<OperatorMatrix> seeded;
  try {
    auto v = is_extreme_contraction(T, seed);
    if (v.status == ExtremalityVerdict::Status::NotExtreme && v.witness) {
      OperatorMatrix t1(T.entries + *v.witness, T.domain, T.codomain);
      OperatorMatrix t2(T.entries - *v.witness, T.domain, T.codomain);
      seeded = convex_witness_approx(T, t1, t2, eps).approximant;
    }
  } catch (const Error&) {
  }

  for (int t = 0; t < trials; ++t) {
    ++out.trials_run;
    std::optional<OperatorMatrix> candidate;
    if (t == 0 && seeded) {
      candidate = std::move(seeded);
    } else {
      Eigen::MatrixXd d = gaussian_matrix(rng, T.rows(), T.cols());
      d /= op_norm(OperatorMatrix(d, T.domain, T.codomain)).value;
      const double s = scale(rng);
      Eigen::MatrixXd a = T.entries + s * d;
      a /= op_norm(OperatorMatrix(a, T.domain, T.codomain)).value;
      candidate.emplace(a, T.domain, T.codomain);
    }
    OperatorMatrix A = std::move(*candidate);
    auto cert = verify_uniform_bpb(T, A, eps, resolution);
    if (cert.status == BpbCertificate::Status::Certified) {
      out.counterexample_found = true;
      out.approximant = std::move(A);
      out.certificate = std::move(cert);
      return out;
    }
  }
  return out;
}

bool check_ball_inclusion(const OperatorMatrix& T, const OperatorMatrix& A, double radius, int resolution) {
  require_norm_one(T, "T");
  require_norm_one(A, "A");
  const auto mt = attainment_set(T);
  const auto ma = attainment_set(A);
  auto points = ma.representatives();
  for (auto& z : sphere_samples(A.domain, resolution)) {
    if (A.image_norm(z.coords) >= 1.0 - tol::kEq) points.push_back(std::move(z));
  }
  return std::all_of(points.begin(), points.end(), [&](const Point& z) { return distance(z, mt) < radius; });
}

std::optional<std::size_t> attainment_count(const AttainmentSet& m) {
  switch (m.kind) {
    case AttainmentSet::Kind::PointPairs:
      return m.points.size();
    case AttainmentSet::Kind::Subspace:
      if (m.basis.cols() == 1 && m.space.n > 1) return 2;
      if (m.space.n == 1) return 2;
      return std::nullopt;
    case AttainmentSet::Kind::FaceUnion:
      if (std::all_of(m.faces.begin(), m.faces.end(), [](const Face& f) { return f.is_vertex(); })) {
        return m.faces.size();
      }
      return std::nullopt;
  }
  return std::nullopt;
}

PropertyPWitness property_p_witness(const OperatorMatrix& A) {
  require_norm_one(A, "A");
  const bool endo = A.rows() == A.cols() && A.domain.p == A.codomain.p;
  if (endo && is_isometry(A)) throw Error(Errc::IsIsometry, "isometries attain everywhere");
  const auto ma = attainment_set(A);
  const auto& s = A.domain;
  const std::size_t count = attainment_count(ma).value_or(0);

  if (s.polyhedral()) {
    const auto faces = enumerate_faces(s);
    for (const auto& facet : faces) {
      if (!facet.is_facet()) continue;
      const Point c = relative_interior_point(facet);
      if (distance(c, ma) <= tol::kEq) continue;
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& g : faces) {
        if (!(g == facet)) nearest = std::min(nearest, distance(c, g));
      }
      const double r0 = 0.5 * nearest;
      return {A, c, r0, "facet", distance(c, ma), count};
    }
    throw Error(Errc::IsIsometry, "every facet attains the norm");
  }

  if (s.n == 2 && s.p.is_integer() && s.p.numerator() > 2) {
    if (ma.kind != AttainmentSet::Kind::PointPairs) throw Error(Errc::IsIsometry, "A attains on the whole sphere");
    const long long p = s.p.numerator();
    if (ma.points.size() > static_cast<std::size_t>(2 * (8 * p - 5))) {
      throw Error(Errc::ConditionFails, "attainment set exceeds the bound for non-isometries");
    }
    const LpCircle circle(s.p);
    const long long arcs = 16 * p - 9;
    const double step = circle.length() / static_cast<double>(arcs);
    std::vector<double> pos;
    for (const auto& x : ma.points) pos.push_back(circle.position_of(x.coords.head<2>()));
    const double r0 = arc_length_constant(circle, step / 2.0);
    // Shift the partition if attainment points sit on arc ends.
    for (double offset : {0.0, step / 3.0, 2.0 * step / 3.0}) {
      for (long long k = 0; k < arcs; ++k) {
        const double lo = offset + k * step;
        const double hi = lo + step;
        const bool free = std::none_of(pos.begin(), pos.end(), [&](double q) {
          const double a = std::fmod(q - lo + 2.0 * circle.length(), circle.length());
          return a <= hi - lo;
        });
        if (free) {
          const Eigen::Vector2d mid = circle.point_at(lo + step / 2.0);
          const Point x(Eigen::VectorXd(mid), s);
          return {A, x, r0, "arc", distance(x, ma), count};
        }
      }
    }
    throw Error(Errc::ConditionFails, "every arc meets the attainment set");
  }

  if (s.hilbert()) {
    if (ma.full_sphere()) throw Error(Errc::IsIsometry, "A attains on the whole sphere");
    const Eigen::MatrixXd comp = complement_of(ma.basis, s.n);
    Eigen::VectorXd x = comp.col(0);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (std::abs(x[i]) > 1e-9) {
        if (x[i] < 0) x = -x;
        break;
      }
    }
    const Point xa(x, s);
    return {A, xa, 1.0, "complement", distance(xa, ma), count};
  }
  throw Error(Errc::Unsupported, "no Property (P) strategy for " + s.to_string());
}

Epsilon0Report epsilon0_lp2(long long p, std::optional<int> cells) {
  if (p < 3) throw Error(Errc::BadExponent, "needs an integer exponent p >= 3");
  const Exponent e = Exponent::integer(p);
  Epsilon0Report r;
  r.p = p;
  r.separation = std::pow(2.0, static_cast<double>(p - 1) / static_cast<double>(p));
  r.length = arc_length_total(e);
  r.arc = r.length / (2.0 * static_cast<double>(16 * p - 9));
  r.cells = cells.value_or(0);
  r.delta1 = cells ? arc_length_constant(LpCircle(e, *cells), r.arc) : arc_length_constant(e, r.arc);
  r.eps0 = std::min(r.separation, r.delta1);
  return r;
}

HilbertChecks hilbert_necessary_checks(const OperatorMatrix& T, const OperatorMatrix& A, double eps, int resolution) {
  if (!T.domain.hilbert() || !T.codomain.hilbert() || !T.same_spaces(A)) {
    throw Error(Errc::WrongSpaces, "needs a pair of l_2 operators on the same spaces");
  }
  require_norm_one(T, "T");
  require_norm_one(A, "A");
  const int n = T.domain.n;
  const Eigen::MatrixXd h0 = attainment_set(T).basis;
  const Eigen::MatrixXd h = attainment_set(A).basis;
  HilbertChecks c;
  c.dim_h0 = static_cast<int>(h0.cols());
  c.dim_h = static_cast<int>(h.cols());
  c.dims_equal = c.dim_h0 == c.dim_h;
  const Eigen::MatrixXd h0c = complement_of(h0, n);
  const Eigen::MatrixXd hc = complement_of(h, n);
  c.intersections_trivial = intersection_dim(h0c, h) == 0 && intersection_dim(hc, h0) == 0;

  const OperatorMatrix diff(T.entries - A.entries, T.domain, T.codomain);
  const double on_h0 = restricted_norm(diff, h0);
  const double off_h0 = h0c.cols() ? restricted_norm(diff, h0c) : 0.0;
  c.disjunction = true;
  c.grid_points = 16;
  for (int k = 0; k < c.grid_points; ++k) {
    const double angle = (k + 0.5) / c.grid_points * std::numbers::pi / 2.0;
    const double e1 = 1.5 * eps * std::cos(angle);
    const double e2 = 1.5 * eps * std::sin(angle);
    if (!(on_h0 < e1 || off_h0 < e2)) c.disjunction = false;
  }
  c.inclusion = verify_uniform_bpb(T, A, eps, resolution).status == BpbCertificate::Status::Certified;
  return c;
}

ApproximantReport route_approximant(const OperatorMatrix& T, double eps, std::string* route) {
  auto tag = [&](const char* r) {
    if (route) *route = r;
  };
  const auto& x = T.domain;
  const auto& y = T.codomain;
  if (x.hilbert() && y.hilbert()) {
    tag("hilbert");
    return hilbert_rotate_approx(T, eps);
  }
  const auto verdict = is_extreme_contraction(T);
  if (verdict.status == ExtremalityVerdict::Status::NotExtreme) {
    tag("convex-witness");
    const OperatorMatrix t1(T.entries + *verdict.witness, x, y);
    const OperatorMatrix t2(T.entries - *verdict.witness, x, y);
    return convex_witness_approx(T, t1, t2, eps);
  }
  if (verdict.status == ExtremalityVerdict::Status::Extreme) {
    if (x.p.is_infinite() && y.p.is_infinite()) {
      tag("linf-extreme");
      return linf_extreme_approx(T, eps);
    }
    if (x.p.is_one() && y.p.is_one()) {
      tag("l1-extreme");
      return l1_extreme_approx(T, eps);
    }
    if (x.p.is_infinite() && y.p.is_one() && x.n == 3 && y.n == 3) {
      tag("linf3-l13-extreme");
      return linf3_l13_extreme_approx(T, eps);
    }
  }
  throw Error(Errc::UnsupportedPair, "no constructor for " + x.to_string() + " -> " + y.to_string());
}

SweepReport pair_property_sweep(const SpaceSpec& x, const SpaceSpec& y, const std::vector<double>& eps_list,
                                int trials, std::uint64_t seed, int resolution, int threads) {
  if (!supported_pair(x, y)) {
    throw Error(Errc::UnsupportedPair, x.to_string() + " -> " + y.to_string() + " is not swept");
  }
  if (eps_list.empty()) throw Error(Errc::InvalidArgument, "eps list is empty");
  SweepReport report;
  report.x = x;
  report.y = y;

  std::vector<OperatorMatrix> ops;
  std::mt19937_64 rng(seed);
  int attempts = 0;
  while (static_cast<int>(ops.size()) < trials && attempts < 100 * trials + 100) {
    ++attempts;
    Eigen::MatrixXd m = gaussian_matrix(rng, y.n, x.n);
    m /= op_norm(OperatorMatrix(m, x, y)).value;
    OperatorMatrix T(m, x, y);
    if (near_isometry(T)) {
      ++report.skipped_isometries;
      continue;
    }
    ops.push_back(std::move(T));
  }
  std::vector<Eigen::MatrixXd> enumerated;
  if (x.p.is_infinite() && y.p.is_one()) {
    for (const auto& m : enumerate_extreme_linf3_l13()) enumerated.push_back(m.matrix.entries);
  } else if (x.polyhedral() && x.p == y.p) {
    enumerated = unit_pattern_matrices(x.n, x.p.is_infinite());
  }
  for (auto& m : enumerated) {
    OperatorMatrix T(std::move(m), x, y);
    if (x.p == y.p && is_isometry(T)) {
      ++report.skipped_isometries;
      continue;
    }
    ops.push_back(std::move(T));
    ++report.enumerated;
  }

  std::vector<SweepCase> cases;
  for (const auto& T : ops) {
    for (double eps : eps_list) cases.push_back({T, eps, "", false, false, ""});
  }
  auto run = [&](std::size_t i) {
    auto& c = cases[i];
    try {
      const auto r = route_approximant(c.op, c.eps, &c.route);
      c.preserved = r.attainment_preserved;
      const auto cert = verify_uniform_bpb(c.op, r.approximant, c.eps, resolution);
      c.certified = cert.status == BpbCertificate::Status::Certified;
      if (!c.certified) c.failure = "not certified";
      else if (!c.preserved) c.failure = "attainment set changed";
    } catch (const Error& e) {
      c.failure = e.what();
    }
  };
  const int workers = std::max(1, threads);
  if (workers == 1) {
    for (std::size_t i = 0; i < cases.size(); ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < cases.size(); i += workers) run(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  report.cases = cases.size();
  for (auto& c : cases) {
    report.certified += c.certified;
    report.preserved += c.preserved;
    if (!c.failure.empty()) report.failures.push_back(std::move(c));
  }
  return report;
}

bool attainment_cardinality_check(const OperatorMatrix& T, const OperatorMatrix& A, double eps) {
  const auto mt = attainment_set(T);
  const auto nt = attainment_count(mt);
  if (!nt) throw Error(Errc::NotDiscrete, "M_T is not a finite set");
  const auto reps = mt.representatives();
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      gap = std::min(gap, lp_norm(reps[i].coords - reps[j].coords, T.domain.p));
    }
  }
  if (!(eps < gap / 2.0)) throw Error(Errc::InvalidArgument, "eps must be below half the gap of M_T");
  const auto na = attainment_count(attainment_set(A));
  return !na || *na >= *nt;
}

}  // namespace bpblab
