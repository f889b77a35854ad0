#include "acceptance.hpp"

#include <bpblab/approximants.hpp>
#include <bpblab/bpbverify.hpp>
#include <bpblab/classify.hpp>
#include <bpblab/error.hpp>
#include <bpblab/operators.hpp>

#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace bpblab::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

SpaceSpec linf(int n) { return SpaceSpec(Exponent::infinity(), n); }
SpaceSpec l1(int n) { return SpaceSpec(Exponent::integer(1), n); }
SpaceSpec lp(long long p, int n) { return SpaceSpec(Exponent::integer(p), n); }

// Times `body` and folds the budget into the verdict.
CriterionResult timed(int id, std::string name, double budget, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  const auto start = Clock::now();
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << " exception: " << e.what();
    ok = false;
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (secs >= budget) detail << " over time budget";
  return {id, std::move(name), ok && secs < budget, detail.str(), secs, budget};
}

Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ();
}

// One +-1 per row (rows) or per column, never a signed permutation.
Eigen::MatrixXd random_unit_pattern(std::mt19937_64& rng, int n, bool rows) {
  std::uniform_int_distribution<int> pick(0, 2 * n - 1);
  while (true) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      const int c = pick(rng);
      const double s = c % 2 ? -1.0 : 1.0;
      if (rows) m(i, c / 2) = s;
      else m(c / 2, i) = s;
    }
    if (!is_signed_permutation(m)) return m;
  }
}

struct PolyCase {
  OperatorMatrix op;
  std::string path;  // "linf", "l1" or "mixed"
};

std::vector<PolyCase> polyhedral_cases(std::uint64_t seed) {
  std::vector<PolyCase> out;
  for (const auto& m : enumerate_extreme_linf3_l13()) out.push_back({m.matrix, "mixed"});
  std::mt19937_64 rng(seed);
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 2;
    out.push_back({OperatorMatrix(random_unit_pattern(rng, n, true), linf(n), linf(n)), "linf"});
    out.push_back({OperatorMatrix(random_unit_pattern(rng, n, false), l1(n), l1(n)), "l1"});
  }
  return out;
}

ApproximantReport construct(const PolyCase& c, double eps) {
  if (c.path == "linf") return linf_extreme_approx(c.op, eps);
  if (c.path == "l1") return l1_extreme_approx(c.op, eps);
  return linf3_l13_extreme_approx(c.op, eps);
}

// Norm-one l_2 operators exercising every Hilbert branch.
std::vector<OperatorMatrix> hilbert_cases(std::uint64_t seed) {
  std::vector<OperatorMatrix> out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (int k = 0; k < 50; ++k) {
    const int n = k % 5 == 4 ? 2 : 3;
    const Eigen::MatrixXd U = random_orthogonal(rng, n);
    const Eigen::MatrixXd V = random_orthogonal(rng, n);
    Eigen::VectorXd s(n);
    switch (k % 5) {
      case 0:  // generic
      case 4:
        for (int i = 0; i < n; ++i) s[i] = std::abs(g(rng)) + 0.05;
        s /= s.maxCoeff();
        break;
      case 1:  // double top value, nonzero rest
        s << 1.0, 1.0, u(rng);
        break;
      case 2:  // double top value, zero rest
        s << 1.0, 1.0, 0.0;
        break;
      case 3:  // rank one
        s << 1.0, 0.0, 0.0;
        break;
    }
    out.emplace_back(U * s.asDiagonal() * V.transpose(), lp(2, n), lp(2, n));
  }
  return out;
}

struct IffCase {
  OperatorMatrix op;
  std::optional<Eigen::MatrixXd> h0;
};

std::vector<IffCase> iff_cases(std::uint64_t seed) {
  std::vector<IffCase> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const SpaceSpec l23 = lp(2, 3);
  for (int k = 0; k < 100; ++k) {
    const Eigen::MatrixXd U = random_orthogonal(rng, 3);
    const Eigen::MatrixXd V = random_orthogonal(rng, 3);
    Eigen::Vector3d s;
    std::optional<Eigen::MatrixXd> h0;
    switch (k % 4) {
      case 0:
        s << 1.0, u(rng), u(rng) * 0.5;
        break;
      case 1:
        s << 1.0, 1.0, k % 8 == 1 ? 0.0 : u(rng);
        break;
      case 2:  // declared split misses a norming direction
        s << 1.0, 1.0, u(rng);
        h0 = V.col(0);
        break;
      case 3:  // complement norm just below one
        s << 1.0, 1.0 - 1e-7, u(rng);
        break;
    }
    out.push_back({OperatorMatrix(U * s.asDiagonal() * V.transpose(), l23, l23), h0});
  }
  return out;
}

}  // namespace

CriterionResult extreme_census(const Options&) {
  return timed(1, "extreme-contraction census", 5.0, [](std::ostringstream& d) {
    const auto all = enumerate_extreme_linf3_l13();
    std::map<int, int> sizes;
    std::set<std::vector<long long>> keys;
    int unit = 0;
    int extreme = 0;
    for (const auto& m : all) {
      ++sizes[m.orbit];
      std::vector<long long> key;
      for (Eigen::Index i = 0; i < m.matrix.entries.size(); ++i) key.push_back(std::llround(m.matrix.entries.data()[i] * 1e12));
      keys.insert(key);
      if (std::abs(op_norm(m.matrix).value - 1.0) <= 1e-12) ++unit;
      if (is_extreme_contraction(m.matrix).status == ExtremalityVerdict::Status::Extreme) ++extreme;
    }
    d << all.size() << " matrices, orbits " << sizes[0] << "/" << sizes[1] << ", distinct " << keys.size()
      << ", norm one " << unit << ", LP-extreme " << extreme;
    return all.size() == 90 && sizes[0] == 18 && sizes[1] == 72 && keys.size() == 90 && unit == 90 && extreme == 90;
  });
}

CriterionResult clarkson_attainment(const Options&) {
  return timed(2, "Clarkson attainment on l_p^2", 1.0, [](std::ostringstream& d) {
    Eigen::MatrixXd t(2, 2);
    t << 1, 1, 1, -1;
    const OperatorMatrix T4(t, lp(4, 2), lp(4, 2));
    const double norm = op_norm(T4).value;
    const double expect = std::pow(2.0, 0.75);
    const auto m = attainment_set(T4);
    const double c = std::pow(2.0, -0.25);
    std::vector<Eigen::Vector2d> want = {{c, c}, {-c, -c}, {c, -c}, {-c, c}};
    bool points_ok = m.kind == AttainmentSet::Kind::PointPairs && m.points.size() == 4;
    for (const auto& w : want) {
      bool hit = false;
      for (const auto& p : m.points) hit = hit || (p.coords - w).cwiseAbs().maxCoeff() <= 1e-6;
      points_ok = points_ok && hit;
    }
    const OperatorMatrix T2(t, lp(2, 2), lp(2, 2));
    const auto m2 = attainment_set(T2);
    d << "norm " << norm << " (err " << std::abs(norm - expect) << "), |M_T| " << m.points.size()
      << ", p=2 full sphere " << m2.full_sphere() << " gap " << m2.singular_gap;
    return std::abs(norm - expect) <= 1e-8 && points_ok && m2.full_sphere() && m2.singular_gap == 0.0;
  });
}

CriterionResult isometry_rigidity_constants(const Options&) {
  return timed(3, "isometry rigidity constants", 10.0, [](std::ostringstream& d) {
    bool ok = true;
    for (long long p : {3LL, 4LL}) {
      const auto isos = enumerate_isometries(lp(p, 2));
      const double sep = std::pow(2.0, static_cast<double>(p - 1) / p);
      int bad = 0;
      for (std::size_t i = 0; i < isos.size(); ++i) {
        for (std::size_t j = i + 1; j < isos.size(); ++j) {
          const double dist = operator_distance(isos[i], isos[j]);
          if (std::abs(dist - sep) > 1e-8 && std::abs(dist - 2.0) > 1e-8) ++bad;
        }
      }
      d << "p=" << p << ": " << isos.size() << " isometries, " << bad << " off-grid distances; ";
      ok = ok && isos.size() == 8 && bad == 0;
    }
    const auto coarse = epsilon0_lp2(3, 8192);
    const auto fine = epsilon0_lp2(3, 16384);
    d << "eps0(3) " << coarse.eps0 << " -> " << fine.eps0;
    return ok && coarse.eps0 > 0 && std::abs(coarse.eps0 - fine.eps0) <= 1e-4;
  });
}

CriterionResult constructor_contracts(const Options& opt) {
  return timed(4, "constructor contracts", 20.0, [&](std::ostringstream& d) {
    const double eps = 0.2;
    int total = 0;
    int good = 0;
    for (const auto& c : polyhedral_cases(opt.seed)) {
      ++total;
      const auto r = construct(c, eps);
      const double norm = op_norm(r.approximant).value;
      bool ok = std::abs(norm - 1.0) <= 1e-9;
      if (c.path == "linf") ok = ok && std::abs(r.distance - eps / 2.0) <= 1e-9;
      else ok = ok && r.distance < eps;
      ok = ok && r.attainment_original.kind == AttainmentSet::Kind::FaceUnion &&
           r.attainment_original.faces == r.attainment_approximant.faces;
      good += ok;
    }
    d << good << "/" << total << " constructions meet the contract";
    return good == total;
  });
}

CriterionResult certificate_engine(const Options& opt) {
  return timed(5, "certificate engine end-to-end", 60.0, [&](std::ostringstream& d) {
    const double eps = 0.2;
    int total = 0;
    int certified = 0;
    int refined = 0;
    auto check = [&](const OperatorMatrix& T, const OperatorMatrix& A) {
      ++total;
      const auto c = verify_uniform_bpb(T, A, eps, opt.resolution);
      if (c.status == BpbCertificate::Status::Certified && c.delta_found && *c.delta_found > 0) ++certified;
      const auto f = verify_uniform_bpb(T, A, eps, 4 * opt.resolution);
      if (f.status == BpbCertificate::Status::Certified) ++refined;
    };
    for (const auto& c : polyhedral_cases(opt.seed)) {
      const auto r = construct(c, eps);
      check(c.op, r.approximant);
    }
    for (const auto& T : hilbert_cases(opt.seed + 1)) {
      const auto r = hilbert_rotate_approx(T, eps);
      check(T, r.approximant);
    }
    d << certified << "/" << total << " certified at " << opt.resolution << ", " << refined << " at "
      << 4 * opt.resolution;
    return certified == total && refined == total;
  });
}

CriterionResult hilbert_iff(const Options& opt) {
  return timed(6, "Hilbert iff and tilted projection", 10.0, [&](std::ostringstream& d) {
    const double eps = 0.2;
    int agree = 0;
    int succeeded = 0;
    const auto cases = iff_cases(opt.seed + 2);
    for (const auto& c : cases) {
      Eigen::MatrixXd h0 = c.h0 ? *c.h0 : attainment_set(c.op).basis;
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(h0);
      const Eigen::MatrixXd full = qr.householderQ();
      const Eigen::MatrixXd comp = full.rightCols(3 - h0.cols());
      const double rest = comp.cols() ? restricted_norm(c.op, comp) : 0.0;
      const bool predicted = rest < 1.0 - 1e-9;
      bool ok = false;
      try {
        const auto r = hilbert_rotate_approx(c.op, eps, c.h0);
        ok = r.distance < eps && r.attainment_preserved;
      } catch (const Error& e) {
        if (e.code() != Errc::ObstructionFullNormOnComplement) throw;
      }
      succeeded += ok;
      agree += ok == predicted;
    }
    const double theta = std::asin(1.0 - eps * eps / 16.0);
    const auto demo = tilted_projection_demo(eps);
    const Eigen::Vector2d v(std::sin(theta), std::cos(theta));
    const auto& ma = demo.attainment_approximant;
    const bool demo_ok = std::abs(demo.distance - std::cos(theta)) <= 1e-10 &&
                         ma.kind == AttainmentSet::Kind::Subspace && ma.basis.cols() == 1 &&
                         (ma.basis.col(0) - v).cwiseAbs().maxCoeff() <= 1e-9 && !demo.attainment_preserved;
    d << agree << "/" << cases.size() << " agree with the complement-norm test (" << succeeded
      << " constructed); tilted distance " << demo.distance << " vs cos " << std::cos(theta);
    return agree == static_cast<int>(cases.size()) && demo_ok;
  });
}

CriterionResult rigidity_sweeps(const Options& opt) {
  return timed(7, "rigidity falsification sweeps", 30.0, [&](std::ostringstream& d) {
    int isometries = 0;
    int clean = 0;
    std::uint64_t seed = opt.seed + 3;
    for (const auto& s : {linf(2), l1(2), linf(3)}) {
      // eps0 for a polyhedral space: the smaller of the isometry separation and the facet radius.
      const auto isos = enumerate_isometries(s);
      double sep = std::numeric_limits<double>::infinity();
      for (std::size_t j = 1; j < isos.size(); ++j) sep = std::min(sep, operator_distance(isos[0], isos[j]));
      Eigen::MatrixXd probe = Eigen::MatrixXd::Zero(s.n, s.n);
      probe(0, 0) = 1.0;
      const double r0 = property_p_witness(OperatorMatrix(probe, s, s)).r0;
      const double eps = 0.5 * std::min(sep, r0);
      for (const auto& T : isos) {
        ++isometries;
        const auto r = is_only_approximation(T, eps, 200, seed++, 1024);
        clean += !r.counterexample_found;
      }
      d << s.to_string() << " eps " << eps << "; ";
    }
    d << clean << "/" << isometries << " isometries without counterexample";
    return clean == isometries;
  });
}

CriterionResult property_p_witnesses(const Options& opt) {
  return timed(8, "Property (P) witnesses", 20.0, [&](std::ostringstream& d) {
    std::mt19937_64 rng(opt.seed + 4);
    std::normal_distribution<double> g;
    bool ok = true;
    std::size_t max_l3 = 0;
    for (const auto& s : {linf(3), l1(3), lp(3, 2), lp(2, 3)}) {
      int found = 0;
      int made = 0;
      while (made < 50) {
        Eigen::MatrixXd m(s.n, s.n);
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
        // A few structured l_3^2 operators with four attainment points.
        if (s.n == 2 && made % 10 == 0) m << 1, 1, 1, -1;
        m /= op_norm(OperatorMatrix(m, s, s)).value;
        const OperatorMatrix A(m, s, s);
        if (is_isometry(A)) continue;
        ++made;
        const auto w = property_p_witness(A);
        bool good = w.r0 > 0 && w.distance_to_attainment >= w.r0 && std::abs(w.x_a.norm() - 1.0) <= 1e-9;
        if (s.hilbert()) good = good && w.r0 == 1.0;
        if (s.n == 2 && !s.hilbert()) {
          max_l3 = std::max(max_l3, w.attainment_size);
          good = good && w.attainment_size <= 38;
        }
        found += good;
      }
      d << s.to_string() << " " << found << "/50; ";
      ok = ok && found == 50;
    }
    d << "max |M_A| on l_3^2 " << max_l3;
    return ok;
  });
}

CriterionResult sbpbp_demo(const Options&) {
  return timed(9, "sBPBp counterexample family", 1.0, [](std::ostringstream& d) {
    const SpaceSpec l22 = lp(2, 2);
    const Point x0(Eigen::Vector2d(1, 0), l22);
    const Point h0(Eigen::Vector2d(0, 1), l22);
    bool ok = true;
    for (long long n : {10LL, 1000LL, 1000000LL}) {
      const auto A = sbpbp_counterexample_family(x0, n);
      const double image = A.image_norm(h0.coords);
      const auto m = attainment_set(A);
      const double dist = distance(h0, m);
      const bool single = m.kind == AttainmentSet::Kind::Subspace && m.basis.cols() == 1;
      d << "n=" << n << " |A h0| " << image << " dist " << dist << "; ";
      ok = ok && single && image >= 1.0 - 1.0 / n - 1e-15 && std::abs(dist - std::sqrt(2.0)) <= 1e-9;
    }
    return ok;
  });
}

CriterionResult hilbert_necessary(const Options& opt) {
  return timed(10, "Hilbert necessary conditions", 5.0, [&](std::ostringstream& d) {
    const double eps = 0.2;
    int pairs = 0;
    int good = 0;
    int uncertified = 0;
    for (const auto& c : iff_cases(opt.seed + 2)) {
      std::optional<ApproximantReport> r;
      try {
        r = hilbert_rotate_approx(c.op, eps, c.h0);
      } catch (const Error&) {
        continue;
      }
      // Only certified pairs count; a top gap below delta_min cannot be certified by sampling.
      if (verify_uniform_bpb(c.op, r->approximant, eps, opt.resolution).status != BpbCertificate::Status::Certified) {
        ++uncertified;
        continue;
      }
      ++pairs;
      const auto chk = hilbert_necessary_checks(c.op, r->approximant, eps, opt.resolution);
      good += chk.dims_equal && chk.intersections_trivial && chk.disjunction && chk.inclusion;
    }
    d << good << "/" << pairs << " certified pairs pass all checks (" << uncertified
      << " constructed pairs not certifiable at delta_min)";
    return pairs > 0 && good == pairs;
  });
}

std::vector<CriterionResult> run_all(const Options& opt, const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (auto* fn : {extreme_census, clarkson_attainment, isometry_rigidity_constants, constructor_contracts,
                   certificate_engine, hilbert_iff, rigidity_sweeps, property_p_witnesses, sbpbp_demo,
                   hilbert_necessary}) {
    out.push_back(fn(opt));
    if (on_result) on_result(out.back());
  }
  return out;
}

}  // namespace bpblab::acceptance
