#include "bpblab/operators.hpp"

#include "bpblab/error.hpp"
#include "bpblab/search.hpp"
#include "bpblab/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>

namespace bpblab {

namespace {

constexpr int kNormGrid = tol::kDefaultResolution;

struct Peak {
  double t;
  double value;
};

// Refined local maxima of a periodic function sampled on [0, period).
template <typename F>
std::vector<Peak> periodic_maxima(F&& f, double period, int grid) {
  const double h = period / grid;
  std::vector<double> v(grid);
  for (int i = 0; i < grid; ++i) v[i] = f(i * h);
  std::vector<Peak> peaks;
  for (int i = 0; i < grid; ++i) {
    const double left = v[(i + grid - 1) % grid];
    const double right = v[(i + 1) % grid];
    if (v[i] >= left && v[i] >= right) {
      const auto r = golden_section_max(f, (i - 1) * h, (i + 1) * h, tol::kOpt);
      Peak pk{std::fmod(r.arg + period, period), r.value};
      if (v[i] > pk.value) pk = {i * h, v[i]};
      peaks.push_back(pk);
    }
  }
  return peaks;
}

Eigen::Vector2d circle_point(double t, const Exponent& p) {
  Eigen::Vector2d u(std::cos(t), std::sin(t));
  return u / lp_norm(u, p);
}

// Sign-normalise so the first clearly nonzero coordinate is positive.
Eigen::VectorXd canonical_sign(Eigen::VectorXd x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > 1e-9) {
      if (x[i] < 0) x = -x;
      break;
    }
  }
  return x;
}

std::vector<Point> pairs_from(std::vector<Eigen::VectorXd> reps, const SpaceSpec& s) {
  std::vector<Eigen::VectorXd> unique;
  for (auto& r : reps) {
    // Snap grid noise on coordinate axes.
    for (Eigen::Index i = 0; i < r.size(); ++i)
      if (std::abs(r[i]) < 1e-8) r[i] = 0.0;
    r /= lp_norm(r, s.p);
    r = canonical_sign(std::move(r));
    const bool seen = std::any_of(unique.begin(), unique.end(), [&](const Eigen::VectorXd& u) {
      return lp_norm(u - r, s.p) < tol::kDedup || lp_norm(u + r, s.p) < tol::kDedup;
    });
    if (!seen) unique.push_back(r);
  }
  std::sort(unique.begin(), unique.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size(),
                                        [](double x, double y) { return x > y + 1e-12; });
  });
  std::vector<Point> out;
  for (const auto& u : unique) {
    out.emplace_back(u, s);
    out.emplace_back(-u, s);
  }
  return out;
}

bool is_unit_multiple_on_circle(const OperatorMatrix& T, double norm) {
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 256; ++i) {
    const double t = std::numbers::pi * i / 256.0;
    lo = std::min(lo, T.image_norm(circle_point(t, T.domain.p)));
  }
  return lo >= norm * (1.0 - tol::kEq);
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& basis) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
  if (qr.rank() < basis.cols()) throw Error(Errc::DegenerateBasis, "basis columns are dependent");
  return qr.householderQ() * Eigen::MatrixXd::Identity(basis.rows(), basis.cols());
}

}  // namespace

OperatorMatrix::OperatorMatrix(Eigen::MatrixXd a, SpaceSpec dom, SpaceSpec cod)
    : entries(std::move(a)), domain(dom), codomain(cod) {
  if (entries.rows() != codomain.n || entries.cols() != domain.n) {
    throw Error(Errc::InvalidArgument,
                "matrix is " + std::to_string(entries.rows()) + "x" + std::to_string(entries.cols()) +
                    " but spaces are " + domain.to_string() + " -> " + codomain.to_string());
  }
  if (!entries.allFinite()) throw Error(Errc::InvalidArgument, "matrix has non-finite entries");
}

double OperatorMatrix::image_norm(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return lp_norm(entries * x, codomain.p);
}

NormResult op_norm(const OperatorMatrix& T) {
  const int n = T.domain.n;
  const auto& dp = T.domain.p;
  if (n == 1) {
    Eigen::VectorXd e = Eigen::VectorXd::Ones(1);
    return {T.image_norm(e), Point(e, T.domain)};
  }
  if (dp.is_one()) {
    int best = 0;
    double value = -1.0;
    for (int j = 0; j < n; ++j) {
      const double c = lp_norm(T.entries.col(j), T.codomain.p);
      if (c > value) {
        value = c;
        best = j;
      }
    }
    return {value, Point(Eigen::VectorXd::Unit(n, best), T.domain)};
  }
  if (dp.is_infinite()) {
    if (n > 24) throw Error(Errc::Unsupported, "sign-vector enumeration beyond dimension 24");
    Eigen::VectorXd best;
    double value = -1.0;
    // x and -x give the same norm; fix the last sign.
    const std::size_t count = std::size_t{1} << (n - 1);
    Eigen::VectorXd s(n);
    for (std::size_t mask = 0; mask < count; ++mask) {
      for (int i = 0; i < n; ++i) s[i] = (i < n - 1 && ((mask >> i) & 1U)) ? -1.0 : 1.0;
      const double v = T.image_norm(s);
      if (v > value) {
        value = v;
        best = s;
      }
    }
    return {value, Point(best, T.domain)};
  }
  if (dp.is_two() && T.codomain.p.is_two()) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(T.entries, Eigen::ComputeFullV);
    Eigen::VectorXd v = canonical_sign(svd.matrixV().col(0));
    return {svd.singularValues().size() ? svd.singularValues()[0] : 0.0, Point(v, T.domain)};
  }
  if (n == 2) {
    auto f = [&](double t) { return T.image_norm(circle_point(t, dp)); };
    const auto peaks = periodic_maxima(f, std::numbers::pi, kNormGrid);
    const auto top = std::max_element(peaks.begin(), peaks.end(),
                                      [](const Peak& a, const Peak& b) { return a.value < b.value; });
    return {top->value, Point(canonical_sign(circle_point(top->t, dp)), T.domain)};
  }
  throw Error(Errc::Unsupported, "operator norm on " + T.domain.to_string() + " is out of scope");
}

double operator_distance(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (!a.same_spaces(b)) throw Error(Errc::MixedSpaces, "operators act between different spaces");
  return op_norm(OperatorMatrix(a.entries - b.entries, a.domain, a.codomain)).value;
}

std::vector<Point> AttainmentSet::representatives() const {
  std::vector<Point> out;
  switch (kind) {
    case Kind::FaceUnion:
      for (const auto& f : faces) {
        for (auto& v : f.vertices()) out.emplace_back(std::move(v), space);
        if (!f.is_vertex()) out.push_back(relative_interior_point(f));
      }
      break;
    case Kind::PointPairs:
      out = points;
      break;
    case Kind::Subspace:
      for (Eigen::Index j = 0; j < basis.cols(); ++j) {
        Eigen::VectorXd b = basis.col(j);
        b /= lp_norm(b, space.p);
        out.emplace_back(b, space);
        out.emplace_back(-b, space);
      }
      break;
  }
  return out;
}

AttainmentSet attainment_set(const OperatorMatrix& T) {
  const auto nr = op_norm(T);
  const double norm = nr.value;
  if (!(norm > 0.0)) throw Error(Errc::ZeroOperator, "the zero operator attains its norm everywhere");
  AttainmentSet m;
  m.space = T.domain;
  m.norm = norm;
  const int n = T.domain.n;
  const double floor = norm * (1.0 - tol::kEq);

  if (n == 1) {
    m.kind = AttainmentSet::Kind::Subspace;
    m.basis = Eigen::MatrixXd::Ones(1, 1);
    return m;
  }

  if (T.domain.polyhedral()) {
    m.kind = AttainmentSet::Kind::FaceUnion;
    auto faces = enumerate_faces(T.domain);
    std::reverse(faces.begin(), faces.end());  // largest faces first
    for (const auto& f : faces) {
      if (std::any_of(m.faces.begin(), m.faces.end(), [&](const Face& g) { return f.subset_of(g); })) {
        continue;
      }
      const auto verts = f.vertices();
      const bool attains =
          std::all_of(verts.begin(), verts.end(), [&](const Eigen::VectorXd& v) { return T.image_norm(v) >= floor; }) &&
          T.image_norm(relative_interior_point(f).coords) >= floor;
      if (attains) m.faces.push_back(f);
    }
    std::sort(m.faces.begin(), m.faces.end());
    return m;
  }

  if (T.domain.hilbert() && T.codomain.hilbert()) {
    m.kind = AttainmentSet::Kind::Subspace;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(T.entries, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double top = sv[0];
    int k = 0;
    while (k < n && k < sv.size() && sv[k] >= top * (1.0 - tol::kGap)) ++k;
    // Missing singular values (m < n) are zeros.
    const double next = k < sv.size() ? sv[k] : 0.0;
    m.singular_gap = k < n ? (top - next) / top : 0.0;
    m.basis = svd.matrixV().leftCols(k);
    if (k == 1) m.basis.col(0) = canonical_sign(m.basis.col(0));
    return m;
  }

  if (n == 2) {
    if (is_unit_multiple_on_circle(T, norm)) {
      m.kind = AttainmentSet::Kind::Subspace;
      m.basis = Eigen::MatrixXd::Identity(2, 2);
      return m;
    }
    m.kind = AttainmentSet::Kind::PointPairs;
    auto f = [&](double t) { return T.image_norm(circle_point(t, T.domain.p)); };
    std::vector<Eigen::VectorXd> reps;
    for (const auto& pk : periodic_maxima(f, std::numbers::pi, kNormGrid)) {
      if (pk.value >= floor) reps.emplace_back(circle_point(pk.t, T.domain.p));
    }
    m.points = pairs_from(std::move(reps), T.domain);
    return m;
  }
  throw Error(Errc::Unsupported, "attainment set on " + T.domain.to_string() + " is out of scope");
}

double distance(const Point& x, const AttainmentSet& m) {
  if (!(x.space == m.space)) throw Error(Errc::MixedSpaces, x.space.to_string() + " vs " + m.space.to_string());
  switch (m.kind) {
    case AttainmentSet::Kind::FaceUnion: {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& f : m.faces) best = std::min(best, distance(x, f));
      return best;
    }
    case AttainmentSet::Kind::PointPairs:
      return distance(x, std::span<const Point>(m.points));
    case AttainmentSet::Kind::Subspace: {
      const double nx = x.norm();
      if (m.full_sphere()) return std::abs(nx - 1.0);
      if (!m.space.hilbert()) throw Error(Errc::Unsupported, "proper subspaces are kept for l_2 only");
      const double px = (m.basis.transpose() * x.coords).norm();
      return std::sqrt(std::max(0.0, nx * nx + 1.0 - 2.0 * px));
    }
  }
  return 0.0;
}

bool same_attainment(const AttainmentSet& a, const AttainmentSet& b, double tol) {
  if (!(a.space == b.space) || a.kind != b.kind) return false;
  switch (a.kind) {
    case AttainmentSet::Kind::FaceUnion:
      return a.faces == b.faces;
    case AttainmentSet::Kind::PointPairs: {
      if (a.points.size() != b.points.size()) return false;
      for (const auto& p : a.points) {
        if (distance(p, std::span<const Point>(b.points)) > tol) return false;
      }
      return true;
    }
    case AttainmentSet::Kind::Subspace: {
      if (a.basis.cols() != b.basis.cols()) return false;
      const Eigen::MatrixXd pa = a.basis * a.basis.transpose();
      const Eigen::MatrixXd pb = b.basis * b.basis.transpose();
      return (pa - pb).cwiseAbs().maxCoeff() <= tol;
    }
  }
  return false;
}

int default_resolution() {
  if (const char* env = std::getenv("BPBLAB_DEFAULT_RESOLUTION")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 100'000'000) return static_cast<int>(v);
  }
  return tol::kDefaultResolution;
}

std::vector<Point> sphere_samples(const SpaceSpec& s, int resolution, std::uint64_t seed) {
  if (resolution < 1) throw Error(Errc::InvalidArgument, "resolution must be positive");
  const int n = s.n;
  std::vector<Point> out;
  if (n == 1) {
    out.emplace_back(Eigen::VectorXd::Ones(1), s);
    out.emplace_back(-Eigen::VectorXd::Ones(1), s);
    return out;
  }
  if (s.p.is_infinite()) {
    // Odd grid size keeps facet centres in the sample.
    const double per_facet = static_cast<double>(resolution) / (2 * n);
    int k = std::max(3, static_cast<int>(std::pow(per_facet, 1.0 / (n - 1))));
    if (k % 2 == 0) --k;
    const int free = n - 1;
    std::vector<int> idx(free, 0);
    for (int axis = 0; axis < n; ++axis) {
      for (double sign : {1.0, -1.0}) {
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
          Eigen::VectorXd v(n);
          for (int i = 0, j = 0; i < n; ++i) {
            v[i] = i == axis ? sign : -1.0 + 2.0 * idx[j++] / (k - 1);
          }
          out.emplace_back(std::move(v), s);
          int j = 0;
          while (j < free && idx[j] == k - 1) idx[j++] = 0;
          if (j == free) break;
          ++idx[j];
        }
      }
    }
    return out;
  }
  if (s.p.is_one()) {
    // Barycentric lattice of step 1/k on each of the 2^n simplex facets; k is a
    // multiple of n so the facet centroid is included.
    const double per_facet = static_cast<double>(resolution) / std::ldexp(1.0, n);
    int k = n;
    auto lattice = [n](int kk) {
      double c = 1.0;
      for (int i = 1; i < n; ++i) c = c * (kk + i) / i;
      return c;
    };
    while (lattice(k + n) <= per_facet) k += n;
    std::vector<std::vector<int>> comps;
    std::vector<int> comp(n, 0);
    auto build = [&](auto&& self, int i, int rest) -> void {
      if (i == n - 1) {
        comp[i] = rest;
        comps.push_back(comp);
        return;
      }
      for (int c = 0; c <= rest; ++c) {
        comp[i] = c;
        self(self, i + 1, rest - c);
      }
    };
    build(build, 0, k);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      for (const auto& c : comps) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = ((mask >> i) & 1U ? -1.0 : 1.0) * c[i] / k;
        out.emplace_back(std::move(v), s);
      }
    }
    return out;
  }
  if (n == 2) {
    for (int i = 0; i < resolution; ++i) {
      out.emplace_back(circle_point(2.0 * std::numbers::pi * i / resolution, s.p), s);
    }
    return out;
  }
  if (n == 3 && s.p.is_two()) {
    // Fibonacci lattice.
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < resolution; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / resolution;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Eigen::VectorXd v(3);
      v << r * std::cos(golden * i), r * std::sin(golden * i), z;
      out.emplace_back(std::move(v), s);
    }
    return out;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  while (static_cast<int>(out.size()) < resolution) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    const double nv = lp_norm(v, s.p);
    if (nv > 1e-12) out.emplace_back(v / nv, s);
  }
  return out;
}

std::vector<Point> approx_attainment(const OperatorMatrix& T, double delta, int resolution) {
  if (!(delta > 0)) throw Error(Errc::InvalidArgument, "delta must be positive");
  const double norm = op_norm(T).value;
  std::vector<Point> out;
  for (auto& z : sphere_samples(T.domain, resolution)) {
    if (T.image_norm(z.coords) > norm - delta) out.push_back(std::move(z));
  }
  return out;
}

DeltaSearch delta_search(const OperatorMatrix& T, const AttainmentSet& target, double eps, int resolution) {
  if (!(eps > 0)) throw Error(Errc::InvalidArgument, "eps must be positive");
  const double norm = op_norm(T).value;
  const auto samples = sphere_samples(T.domain, resolution);
  std::vector<double> gap(samples.size());
  std::vector<double> dist(samples.size());
  double worst_gap = std::numeric_limits<double>::infinity();
  std::size_t worst = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    gap[i] = norm - T.image_norm(samples[i].coords);
    dist[i] = distance(samples[i], target);
    if (dist[i] >= eps && gap[i] < worst_gap) {
      worst_gap = gap[i];
      worst = i;
    }
  }
  DeltaSearch r;
  r.resolution = resolution;
  r.samples = samples.size();
  for (double d = norm / 2.0; d >= tol::kDeltaMin * norm; d /= 2.0) {
    if (d <= worst_gap) {
      r.found = true;
      r.delta = d;
      break;
    }
  }
  if (!r.found) {
    r.counterexample = samples[worst];
    r.worst_distance = dist[worst];
    return r;
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (gap[i] < r.delta) r.worst_distance = std::max(r.worst_distance, dist[i]);
  }
  return r;
}

DeltaSearch delta_for_epsilon(const OperatorMatrix& T, double eps, int resolution) {
  return delta_search(T, attainment_set(T), eps, resolution);
}

double restricted_norm(const OperatorMatrix& T, const Eigen::MatrixXd& basis) {
  if (basis.rows() != T.domain.n) throw Error(Errc::MixedSpaces, "basis rows differ from the domain dimension");
  if (basis.cols() == 0) throw Error(Errc::DegenerateBasis, "empty basis");
  const Eigen::MatrixXd q = orthonormal_basis(basis);
  if (T.domain.hilbert() && T.codomain.hilbert()) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(T.entries * q);
    return svd.singularValues()[0];
  }
  const auto& dp = T.domain.p;
  if (basis.cols() == 1) {
    return T.image_norm(basis.col(0)) / lp_norm(basis.col(0), dp);
  }
  if (basis.cols() == T.domain.n) return op_norm(T).value;
  if (basis.cols() == 2) {
    const Eigen::VectorXd b1 = basis.col(0);
    const Eigen::VectorXd b2 = basis.col(1);
    auto ratio = [&](double t) {
      const Eigen::VectorXd v = std::cos(t) * b1 + std::sin(t) * b2;
      return T.image_norm(v) / lp_norm(v, dp);
    };
    const auto peaks = periodic_maxima(ratio, std::numbers::pi, kNormGrid);
    double best = 0.0;
    for (const auto& pk : peaks) best = std::max(best, pk.value);
    return best;
  }
  throw Error(Errc::Unsupported, "restricted norms on non-Hilbert domains need dim Z <= 2");
}

bool is_smooth_operator(const OperatorMatrix& T) {
  const auto m = attainment_set(T);
  std::optional<Eigen::VectorXd> x0;
  switch (m.kind) {
    case AttainmentSet::Kind::Subspace:
      if (m.basis.cols() == 1) x0 = m.basis.col(0) / lp_norm(m.basis.col(0), T.domain.p);
      break;
    case AttainmentSet::Kind::PointPairs:
      if (m.points.size() == 2) x0 = m.points[0].coords;
      break;
    case AttainmentSet::Kind::FaceUnion:
      if (m.faces.size() == 2 && m.faces[0].is_vertex()) x0 = m.faces[0].vertices().front();
      break;
  }
  if (!x0) return false;
  return is_smooth_point(Point(T.entries * *x0, T.codomain));
}

}  // namespace bpblab
