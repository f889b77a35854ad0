#include "bpblab/spaces.hpp"

#include "bpblab/error.hpp"
#include "bpblab/search.hpp"
#include "bpblab/tolerances.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bpblab {

namespace {

long long parse_integer(std::string_view text) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(Errc::BadExponent, "cannot parse exponent '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

void require_same_space(const SpaceSpec& a, const SpaceSpec& b) {
  if (!(a == b)) {
    throw Error(Errc::MixedSpaces, a.to_string() + " vs " + b.to_string());
  }
}

}  // namespace

Exponent Exponent::integer(long long p) { return rational(p, 1); }

Exponent Exponent::rational(long long num, long long den) {
  if (den <= 0 || num <= 0) throw Error(Errc::BadExponent, "exponent must be a positive fraction");
  const long long g = std::gcd(num, den);
  Exponent e;
  e.num_ = num / g;
  e.den_ = den / g;
  if (e.num_ < e.den_) throw Error(Errc::BadExponent, "exponent must satisfy p >= 1");
  return e;
}

Exponent Exponent::infinity() {
  Exponent e;
  e.infinite_ = true;
  e.num_ = 1;
  e.den_ = 0;
  return e;
}

Exponent Exponent::parse(std::string_view text) {
  text = trim(text);
  if (text == "inf" || text == "infinity" || text == "Inf" || text == "∞") return infinity();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return rational(parse_integer(trim(text.substr(0, slash))),
                    parse_integer(trim(text.substr(slash + 1))));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto whole = text.substr(0, dot);
    const auto frac = text.substr(dot + 1);
    if (frac.size() > 12) throw Error(Errc::BadExponent, "too many decimals in exponent");
    long long den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const long long w = whole.empty() ? 0 : parse_integer(whole);
    const long long f = frac.empty() ? 0 : parse_integer(frac);
    return rational(w * den + f, den);
  }
  return integer(parse_integer(text));
}

double Exponent::value() const noexcept {
  if (infinite_) return std::numeric_limits<double>::infinity();
  return static_cast<double>(num_) / static_cast<double>(den_);
}

Exponent Exponent::conjugate() const {
  if (infinite_) return integer(1);
  if (num_ == den_) return infinity();
  return rational(num_, num_ - den_);
}

std::string Exponent::to_string() const {
  if (infinite_) return "inf";
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

SpaceSpec::SpaceSpec(Exponent exponent, int dimension) : p(exponent), n(dimension) {
  if (n < 1) throw Error(Errc::InvalidArgument, "dimension must be positive");
}

std::string SpaceSpec::to_string() const { return "l_" + p.to_string() + "^" + std::to_string(n); }

SpaceSpec dual_space(const SpaceSpec& s) { return SpaceSpec(s.p.conjugate(), s.n); }

double lp_norm(const Eigen::Ref<const Eigen::VectorXd>& x, const Exponent& p) {
  if (x.size() == 0) return 0.0;
  if (p.is_infinite()) return x.cwiseAbs().maxCoeff();
  if (p.is_one()) return x.cwiseAbs().sum();
  if (p.is_two()) return x.stableNorm();
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  const double q = p.value();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += std::pow(std::abs(x[i]) / m, q);
  return m * std::pow(acc, 1.0 / q);
}

Point::Point(Eigen::VectorXd c, SpaceSpec s) : coords(std::move(c)), space(s) {
  if (coords.size() != space.n) {
    throw Error(Errc::InvalidArgument, "point has " + std::to_string(coords.size()) +
                                           " coordinates, space " + space.to_string());
  }
}

double norm(const Point& x) { return x.norm(); }

Face::Face(SpaceSpec space, std::vector<int> pattern) : space_(space), pattern_(std::move(pattern)) {
  if (!space_.polyhedral()) throw Error(Errc::Unsupported, "faces need a polyhedral space");
  if (static_cast<int>(pattern_.size()) != space_.n) {
    throw Error(Errc::InvalidArgument, "face pattern length differs from dimension");
  }
  for (int v : pattern_) {
    if (v < -1 || v > 1) throw Error(Errc::InvalidArgument, "face pattern entries must be -1, 0, +1");
  }
  if (nonzeros() == 0) throw Error(Errc::InvalidArgument, "face pattern must have a nonzero entry");
}

int Face::nonzeros() const noexcept {
  return static_cast<int>(std::count_if(pattern_.begin(), pattern_.end(), [](int v) { return v != 0; }));
}

int Face::dimension() const noexcept {
  return space_.p.is_infinite() ? space_.n - nonzeros() : nonzeros() - 1;
}

std::vector<Eigen::VectorXd> Face::vertices() const {
  std::vector<Eigen::VectorXd> out;
  const int n = space_.n;
  if (space_.p.is_infinite()) {
    std::vector<int> free_idx;
    for (int i = 0; i < n; ++i)
      if (pattern_[i] == 0) free_idx.push_back(i);
    const std::size_t count = std::size_t{1} << free_idx.size();
    out.reserve(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
      Eigen::VectorXd v(n);
      for (int i = 0; i < n; ++i) v[i] = pattern_[i];
      for (std::size_t k = 0; k < free_idx.size(); ++k) v[free_idx[k]] = (mask >> k) & 1U ? -1.0 : 1.0;
      out.push_back(std::move(v));
    }
  } else {
    for (int i = 0; i < n; ++i) {
      if (pattern_[i] == 0) continue;
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      v[i] = pattern_[i];
      out.push_back(std::move(v));
    }
  }
  return out;
}

bool Face::subset_of(const Face& other) const {
  if (!(space_ == other.space_)) return false;
  const int n = space_.n;
  if (space_.p.is_infinite()) {
    // Fewer fixed coordinates means a larger face.
    for (int i = 0; i < n; ++i)
      if (other.pattern_[i] != 0 && other.pattern_[i] != pattern_[i]) return false;
  } else {
    for (int i = 0; i < n; ++i)
      if (pattern_[i] != 0 && other.pattern_[i] != pattern_[i]) return false;
  }
  return true;
}

Face Face::negated() const {
  std::vector<int> neg(pattern_);
  for (int& v : neg) v = -v;
  return Face(space_, std::move(neg));
}

std::string Face::to_string() const {
  std::string s;
  for (int v : pattern_) s += v > 0 ? '+' : (v < 0 ? '-' : '0');
  return s;
}

Face Face::parse(const SpaceSpec& space, std::string_view pattern) {
  std::vector<int> p;
  for (char c : pattern) {
    if (c == '+') p.push_back(1);
    else if (c == '-') p.push_back(-1);
    else if (c == '0') p.push_back(0);
    else throw Error(Errc::InvalidArgument, "bad face pattern '" + std::string(pattern) + "'");
  }
  return Face(space, std::move(p));
}

std::vector<Point> extreme_points(const SpaceSpec& s) {
  if (!s.polyhedral()) {
    throw Error(Errc::Unsupported, "extreme points of " + s.to_string() + " form the whole sphere");
  }
  std::vector<Point> out;
  if (s.p.is_infinite()) {
    if (s.n > 24) throw Error(Errc::Unsupported, "dimension too large to enumerate cube vertices");
    const std::size_t count = std::size_t{1} << s.n;
    for (std::size_t mask = 0; mask < count; ++mask) {
      Eigen::VectorXd v(s.n);
      for (int i = 0; i < s.n; ++i) v[i] = (mask >> i) & 1U ? -1.0 : 1.0;
      out.emplace_back(std::move(v), s);
    }
  } else {
    for (int i = 0; i < s.n; ++i) {
      for (double sign : {1.0, -1.0}) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(s.n);
        v[i] = sign;
        out.emplace_back(std::move(v), s);
      }
    }
  }
  return out;
}

std::vector<Face> enumerate_faces(const SpaceSpec& s) {
  if (!s.polyhedral()) throw Error(Errc::Unsupported, "faces need a polyhedral space");
  if (s.n > 12) throw Error(Errc::Unsupported, "dimension too large to enumerate faces");
  std::vector<Face> faces;
  std::vector<int> pattern(s.n, -1);
  while (true) {
    if (std::any_of(pattern.begin(), pattern.end(), [](int v) { return v != 0; })) {
      faces.emplace_back(s, pattern);
    }
    int i = 0;
    while (i < s.n && pattern[i] == 1) pattern[i++] = -1;
    if (i == s.n) break;
    ++pattern[i];
  }
  std::stable_sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
    if (a.dimension() != b.dimension()) return a.dimension() < b.dimension();
    return a.pattern() > b.pattern();
  });
  return faces;
}

Point relative_interior_point(const Face& f) {
  const auto& pat = f.pattern();
  Eigen::VectorXd v(f.space().n);
  if (f.space().p.is_infinite()) {
    for (int i = 0; i < f.space().n; ++i) v[i] = pat[i];
  } else {
    const double k = f.nonzeros();
    for (int i = 0; i < f.space().n; ++i) v[i] = pat[i] / k;
  }
  return Point(std::move(v), f.space());
}

double distance(const Point& x, const Face& f) {
  require_same_space(x.space, f.space());
  const auto& pat = f.pattern();
  const int n = f.space().n;
  if (f.space().p.is_infinite()) {
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
      const double c = x.coords[i];
      d = std::max(d, pat[i] != 0 ? std::abs(c - pat[i]) : std::max(0.0, std::abs(c) - 1.0));
    }
    return d;
  }
  // l_1 distance to a signed simplex: off-support mass, negative parts, and the
  // mismatch between the positive mass and one.
  double off = 0.0;
  double neg = 0.0;
  double pos = 0.0;
  for (int i = 0; i < n; ++i) {
    if (pat[i] == 0) {
      off += std::abs(x.coords[i]);
    } else {
      const double y = pat[i] * x.coords[i];
      if (y >= 0) pos += y;
      else neg -= y;
    }
  }
  return off + neg + std::abs(pos - 1.0);
}

double distance(const Point& x, std::span<const Point> points) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : points) {
    require_same_space(x.space, s.space);
    best = std::min(best, lp_norm(x.coords - s.coords, x.space.p));
  }
  return best;
}

double distance_to_subspace(const Point& x, const Eigen::MatrixXd& basis) {
  if (!x.space.hilbert()) throw Error(Errc::Unsupported, "subspace distance is defined for l_2 only");
  if (basis.rows() != x.space.n) throw Error(Errc::MixedSpaces, "basis rows differ from dimension");
  if (basis.cols() == 0) return x.coords.norm();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
  if (qr.rank() < basis.cols()) throw Error(Errc::DegenerateBasis, "basis columns are dependent");
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(basis.rows(), basis.cols());
  return (x.coords - q * (q.transpose() * x.coords)).norm();
}

SupportSet support_functionals(const Point& x) {
  const double nx = x.norm();
  if (nx == 0.0) throw Error(Errc::ZeroVector, "J(0) is not defined");
  SupportSet out{x.coords, x.space, {}};
  const int n = x.space.n;
  if (x.space.p.is_infinite()) {
    for (int i = 0; i < n; ++i) {
      if (std::abs(x.coords[i]) >= nx * (1.0 - tol::kEq)) {
        Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
        f[i] = x.coords[i] > 0 ? 1.0 : -1.0;
        out.functionals.push_back(std::move(f));
      }
    }
  } else if (x.space.p.is_one()) {
    std::vector<int> free_idx;
    Eigen::VectorXd base = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      if (std::abs(x.coords[i]) > nx * tol::kEq) base[i] = x.coords[i] > 0 ? 1.0 : -1.0;
      else free_idx.push_back(i);
    }
    const std::size_t count = std::size_t{1} << free_idx.size();
    for (std::size_t mask = 0; mask < count; ++mask) {
      Eigen::VectorXd f = base;
      for (std::size_t k = 0; k < free_idx.size(); ++k) f[free_idx[k]] = (mask >> k) & 1U ? -1.0 : 1.0;
      out.functionals.push_back(std::move(f));
    }
  } else {
    const double p = x.space.p.value();
    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) {
      const double a = std::abs(x.coords[i]) / nx;
      f[i] = (x.coords[i] > 0 ? 1.0 : (x.coords[i] < 0 ? -1.0 : 0.0)) * std::pow(a, p - 1.0);
    }
    out.functionals.push_back(std::move(f));
  }
  return out;
}

bool is_smooth_point(const Point& x) { return support_functionals(x).unique(); }

bool birkhoff_orthogonal(const Point& x, const Point& y, bool strong) {
  require_same_space(x.space, y.space);
  const double nx = x.norm();
  if (nx == 0.0) throw Error(Errc::ZeroVector, "Birkhoff-James orthogonality needs x != 0");
  const double ny = y.norm();
  if (ny == 0.0) return !strong;
  const auto& p = x.space.p;
  auto along = [&](double lambda) { return lp_norm(x.coords + lambda * y.coords, p); };
  const double radius = 2.0 * nx / ny;
  const auto best = golden_section_min(along, -radius, radius, tol::kOpt * radius);
  const bool plain = best.value >= nx * (1.0 - tol::kEq) && along(0.0) <= best.value + nx * tol::kEq;
  if (!plain || !strong) return plain;
  if (x.space.strictly_convex()) return true;
  const double step = tol::kProbe * nx / ny;
  const double bound = nx * (1.0 + tol::kEq);
  return along(step) > bound && along(-step) > bound;
}

}  // namespace bpblab
