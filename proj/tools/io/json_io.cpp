#include "json_io.hpp"

#include <bpblab/error.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace bpblab::io {
namespace {

const json& member(const json& j, const char* key, const std::string& field) {
  if (!j.is_object()) throw InputError(field, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(field + "." + key, "missing");
  return *it;
}

double number(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  // Non-finite values are written as strings since JSON has no literal for them.
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw InputError(field, "expected a number");
}

json number_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string text(const json& j, const std::string& field) {
  if (!j.is_string()) throw InputError(field, "expected a string");
  return j.get<std::string>();
}

bool flag(const json& j, const std::string& field) {
  if (!j.is_boolean()) throw InputError(field, "expected a boolean");
  return j.get<bool>();
}

long long integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw InputError(field, "expected an integer");
  return j.get<long long>();
}

std::size_t count(const json& j, const std::string& field) {
  if (!j.is_number_unsigned()) throw InputError(field, "expected a non-negative integer");
  return j.get<std::size_t>();
}

double num_at(const json& j, const char* key, const std::string& f) {
  return number(member(j, key, f), f + "." + key);
}

template <class F>
auto wrap(const std::string& field, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw InputError(field, e.what());
  }
}

Point point_from(const json& j, const std::string& field) {
  auto coords = vector_from_json(member(j, "coords", field), field + ".coords");
  auto space = space_from_json(member(j, "space", field), field + ".space");
  return wrap(field, [&] { return Point(std::move(coords), space); });
}

std::optional<Point> optional_point(const json& j, const char* key, const std::string& field) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return point_from(*it, field + "." + key);
}

}  // namespace

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw InputError(field, "expected a non-empty array of rows");
  const auto& first = j.front();
  if (!first.is_array() || first.empty()) throw InputError(field + "[0]", "expected a non-empty array");
  Eigen::MatrixXd m(j.size(), first.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string rf = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_array()) throw InputError(rf, "expected an array");
    if (j[i].size() != first.size()) throw InputError(rf, "row length differs from the first row");
    for (std::size_t c = 0; c < first.size(); ++c)
      m(i, c) = number(j[i][c], rf + "[" + std::to_string(c) + "]");
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_json(v(i)));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw InputError(field, "expected a non-empty array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = number(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

SpaceSpec space_from_json(const json& j, const std::string& field) {
  const auto& pj = member(j, "p", field);
  std::string ptext;
  if (pj.is_string()) {
    ptext = pj.get<std::string>();
  } else if (pj.is_number_integer()) {
    ptext = std::to_string(pj.get<long long>());
  } else {
    throw InputError(field + ".p", "expected a string such as \"inf\", \"2\" or \"4/3\"");
  }
  Exponent p = wrap(field + ".p", [&] { return Exponent::parse(ptext); });
  const long long n = integer(member(j, "n", field), field + ".n");
  if (n < 1 || n > 64) throw InputError(field + ".n", "dimension must be between 1 and 64");
  return wrap(field, [&] { return SpaceSpec(p, static_cast<int>(n)); });
}

OperatorMatrix operator_from_json(const json& j, const std::string& field) {
  auto rows = matrix_from_json(member(j, "rows", field), field + ".rows");
  auto dom = space_from_json(member(j, "domain", field), field + ".domain");
  auto cod = space_from_json(member(j, "codomain", field), field + ".codomain");
  if (rows.cols() != dom.n) throw InputError(field + ".rows", "column count must equal domain.n");
  if (rows.rows() != cod.n) throw InputError(field + ".rows", "row count must equal codomain.n");
  return wrap(field, [&] { return OperatorMatrix(std::move(rows), dom, cod); });
}

json load_file(const std::string& path, const std::string& field) {
  std::ifstream in(path);
  if (!in) throw InputError(field, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw InputError(field, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace bpblab::io

namespace nlohmann {

using bpblab::io::InputError;
using namespace bpblab::io;

void adl_serializer<bpblab::Exponent>::to_json(json& j, const bpblab::Exponent& v) { j = v.to_string(); }
bpblab::Exponent adl_serializer<bpblab::Exponent>::from_json(const json& j) {
  return bpblab::io::space_from_json(json{{"p", j}, {"n", 1}}, "exponent").p;
}

void adl_serializer<bpblab::SpaceSpec>::to_json(json& j, const bpblab::SpaceSpec& v) {
  j = json{{"p", v.p.to_string()}, {"n", v.n}};
}
bpblab::SpaceSpec adl_serializer<bpblab::SpaceSpec>::from_json(const json& j) { return space_from_json(j, "space"); }

void adl_serializer<bpblab::Point>::to_json(json& j, const bpblab::Point& v) {
  j = json{{"coords", vector_to_json(v.coords)}, {"space", v.space}};
}
bpblab::Point adl_serializer<bpblab::Point>::from_json(const json& j) { return point_from(j, "point"); }

void adl_serializer<bpblab::OperatorMatrix>::to_json(json& j, const bpblab::OperatorMatrix& v) {
  j = json{{"rows", matrix_to_json(v.entries)}, {"domain", v.domain}, {"codomain", v.codomain}};
}
bpblab::OperatorMatrix adl_serializer<bpblab::OperatorMatrix>::from_json(const json& j) {
  return operator_from_json(j, "operator");
}

void adl_serializer<bpblab::NormResult>::to_json(json& j, const bpblab::NormResult& v) {
  j = json{{"norm", number_json(v.value)}, {"witness", v.witness}};
}
bpblab::NormResult adl_serializer<bpblab::NormResult>::from_json(const json& j) {
  return {num_at(j, "norm", "norm_result"), point_from(member(j, "witness", "norm_result"), "norm_result.witness")};
}

void adl_serializer<bpblab::AttainmentSet>::to_json(json& j, const bpblab::AttainmentSet& v) {
  using K = bpblab::AttainmentSet::Kind;
  j = json{{"space", v.space}, {"norm", number_json(v.norm)}};
  switch (v.kind) {
    case K::FaceUnion: {
      j["kind"] = "faces";
      json faces = json::array();
      for (const auto& f : v.faces) faces.push_back(f.to_string());
      j["faces"] = std::move(faces);
      break;
    }
    case K::PointPairs: {
      j["kind"] = "points";
      json pts = json::array();
      for (const auto& p : v.points) pts.push_back(vector_to_json(p.coords));
      j["points"] = std::move(pts);
      break;
    }
    case K::Subspace: {
      j["kind"] = "subspace";
      json cols = json::array();
      for (Eigen::Index c = 0; c < v.basis.cols(); ++c) cols.push_back(vector_to_json(v.basis.col(c)));
      j["basis"] = std::move(cols);
      j["singular_gap"] = number_json(v.singular_gap);
      break;
    }
  }
}
bpblab::AttainmentSet adl_serializer<bpblab::AttainmentSet>::from_json(const json& j) {
  const std::string f = "attainment";
  bpblab::AttainmentSet m;
  m.space = space_from_json(member(j, "space", f), f + ".space");
  m.norm = num_at(j, "norm", f);
  const std::string kind = text(member(j, "kind", f), f + ".kind");
  if (kind == "faces") {
    m.kind = bpblab::AttainmentSet::Kind::FaceUnion;
    const auto& faces = member(j, "faces", f);
    if (!faces.is_array()) throw InputError(f + ".faces", "expected an array");
    for (std::size_t i = 0; i < faces.size(); ++i) {
      const std::string ff = f + ".faces[" + std::to_string(i) + "]";
      const std::string pat = text(faces[i], ff);
      m.faces.push_back(wrap(ff, [&] { return bpblab::Face::parse(m.space, pat); }));
    }
  } else if (kind == "points") {
    m.kind = bpblab::AttainmentSet::Kind::PointPairs;
    const auto& pts = member(j, "points", f);
    if (!pts.is_array()) throw InputError(f + ".points", "expected an array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string pf = f + ".points[" + std::to_string(i) + "]";
      auto v = vector_from_json(pts[i], pf);
      if (v.size() != m.space.n) throw InputError(pf, "length must equal space.n");
      m.points.push_back(wrap(pf, [&] { return bpblab::Point(v, m.space); }));
    }
  } else if (kind == "subspace") {
    m.kind = bpblab::AttainmentSet::Kind::Subspace;
    const auto& cols = member(j, "basis", f);
    if (!cols.is_array() || cols.empty()) throw InputError(f + ".basis", "expected a non-empty array");
    m.basis.resize(m.space.n, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const std::string cf = f + ".basis[" + std::to_string(c) + "]";
      auto v = vector_from_json(cols[c], cf);
      if (v.size() != m.space.n) throw InputError(cf, "length must equal space.n");
      m.basis.col(c) = v;
    }
    m.singular_gap = num_at(j, "singular_gap", f);
  } else {
    throw InputError(f + ".kind", "expected \"faces\", \"points\" or \"subspace\"");
  }
  return m;
}

void adl_serializer<bpblab::SignedPermutation>::to_json(json& j, const bpblab::SignedPermutation& v) {
  j = json{{"perm", v.perm}, {"signs", v.signs}};
}
bpblab::SignedPermutation adl_serializer<bpblab::SignedPermutation>::from_json(const json& j) {
  const std::string f = "signed_permutation";
  bpblab::SignedPermutation s;
  const auto& perm = member(j, "perm", f);
  const auto& signs = member(j, "signs", f);
  if (!perm.is_array() || !signs.is_array() || perm.size() != signs.size())
    throw InputError(f, "perm and signs must be arrays of equal length");
  std::vector<bool> used(perm.size(), false);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const long long p = integer(perm[i], f + ".perm[" + std::to_string(i) + "]");
    const long long sg = integer(signs[i], f + ".signs[" + std::to_string(i) + "]");
    if (p < 0 || p >= static_cast<long long>(perm.size()) || used[p])
      throw InputError(f + ".perm[" + std::to_string(i) + "]", "not a permutation");
    if (sg != 1 && sg != -1) throw InputError(f + ".signs[" + std::to_string(i) + "]", "expected +1 or -1");
    used[p] = true;
    s.perm.push_back(static_cast<int>(p));
    s.signs.push_back(static_cast<int>(sg));
  }
  return s;
}

void adl_serializer<bpblab::ExtremalityVerdict>::to_json(json& j, const bpblab::ExtremalityVerdict& v) {
  j = json{{"status", std::string(bpblab::to_string(v.status))}, {"method", v.method}};
  j["witness"] = v.witness ? matrix_to_json(*v.witness) : json(nullptr);
  j["condition"] = v.condition ? json(*v.condition) : json(nullptr);
}
bpblab::ExtremalityVerdict adl_serializer<bpblab::ExtremalityVerdict>::from_json(const json& j) {
  using S = bpblab::ExtremalityVerdict::Status;
  const std::string f = "extremality";
  bpblab::ExtremalityVerdict v;
  const std::string st = text(member(j, "status", f), f + ".status");
  bool ok = false;
  for (S s : {S::Extreme, S::NotExtreme, S::NecessaryConditionOnly})
    if (bpblab::to_string(s) == st) v.status = s, ok = true;
  if (!ok) throw InputError(f + ".status", "unknown status " + st);
  v.method = text(member(j, "method", f), f + ".method");
  if (auto it = j.find("witness"); it != j.end() && !it->is_null())
    v.witness = matrix_from_json(*it, f + ".witness");
  if (auto it = j.find("condition"); it != j.end() && !it->is_null()) v.condition = flag(*it, f + ".condition");
  return v;
}

void adl_serializer<bpblab::ApproximantReport>::to_json(json& j, const bpblab::ApproximantReport& v) {
  j = json{{"original", v.original},
           {"approximant", v.approximant},
           {"eps", number_json(v.eps)},
           {"distance", number_json(v.distance)},
           {"attainment_original", v.attainment_original},
           {"attainment_approximant", v.attainment_approximant},
           {"attainment_preserved", v.attainment_preserved},
           {"construction", v.construction}};
}
bpblab::ApproximantReport adl_serializer<bpblab::ApproximantReport>::from_json(const json& j) {
  const std::string f = "approximant_report";
  return bpblab::ApproximantReport{
      operator_from_json(member(j, "original", f), f + ".original"),
      operator_from_json(member(j, "approximant", f), f + ".approximant"),
      num_at(j, "eps", f),
      num_at(j, "distance", f),
      member(j, "attainment_original", f).get<bpblab::AttainmentSet>(),
      member(j, "attainment_approximant", f).get<bpblab::AttainmentSet>(),
      flag(member(j, "attainment_preserved", f), f + ".attainment_preserved"),
      text(member(j, "construction", f), f + ".construction")};
}

void adl_serializer<bpblab::BpbCertificate>::to_json(json& j, const bpblab::BpbCertificate& v) {
  j = json{{"status", std::string(bpblab::to_string(v.status))},
           {"eps", number_json(v.eps)},
           {"delta", v.delta_found ? number_json(*v.delta_found) : json(nullptr)},
           {"resolution", v.resolution},
           {"samples", v.samples},
           {"operator_distance", number_json(v.operator_distance)},
           {"worst_distance", number_json(v.worst_distance)},
           {"counterexample", v.counterexample ? json(*v.counterexample) : json(nullptr)}};
}
bpblab::BpbCertificate adl_serializer<bpblab::BpbCertificate>::from_json(const json& j) {
  using S = bpblab::BpbCertificate::Status;
  const std::string f = "certificate";
  bpblab::BpbCertificate c;
  const std::string st = text(member(j, "status", f), f + ".status");
  bool ok = false;
  for (S s : {S::Certified, S::Falsified, S::Inconclusive})
    if (bpblab::to_string(s) == st) c.status = s, ok = true;
  if (!ok) throw InputError(f + ".status", "unknown status " + st);
  c.eps = num_at(j, "eps", f);
  if (const auto& d = member(j, "delta", f); !d.is_null()) c.delta_found = number(d, f + ".delta");
  c.resolution = static_cast<int>(integer(member(j, "resolution", f), f + ".resolution"));
  c.samples = count(member(j, "samples", f), f + ".samples");
  c.operator_distance = num_at(j, "operator_distance", f);
  c.worst_distance = num_at(j, "worst_distance", f);
  c.counterexample = optional_point(j, "counterexample", f);
  return c;
}

void adl_serializer<bpblab::OnlyApproximationResult>::to_json(json& j, const bpblab::OnlyApproximationResult& v) {
  j = json{{"counterexample_found", v.counterexample_found},
           {"trials_run", v.trials_run},
           {"approximant", v.approximant ? json(*v.approximant) : json(nullptr)},
           {"certificate", v.certificate ? json(*v.certificate) : json(nullptr)}};
}
bpblab::OnlyApproximationResult adl_serializer<bpblab::OnlyApproximationResult>::from_json(const json& j) {
  const std::string f = "only_approximation";
  bpblab::OnlyApproximationResult r;
  r.counterexample_found = flag(member(j, "counterexample_found", f), f + ".counterexample_found");
  r.trials_run = static_cast<int>(integer(member(j, "trials_run", f), f + ".trials_run"));
  if (const auto& a = member(j, "approximant", f); !a.is_null()) r.approximant = operator_from_json(a, f + ".approximant");
  if (const auto& c = member(j, "certificate", f); !c.is_null()) r.certificate = c.get<bpblab::BpbCertificate>();
  return r;
}

void adl_serializer<bpblab::PropertyPWitness>::to_json(json& j, const bpblab::PropertyPWitness& v) {
  j = json{{"operator", v.op},
           {"x_a", v.x_a},
           {"r0", number_json(v.r0)},
           {"strategy", v.strategy},
           {"distance_to_attainment", number_json(v.distance_to_attainment)},
           {"attainment_size", v.attainment_size}};
}
bpblab::PropertyPWitness adl_serializer<bpblab::PropertyPWitness>::from_json(const json& j) {
  const std::string f = "witness";
  return bpblab::PropertyPWitness{operator_from_json(member(j, "operator", f), f + ".operator"),
                                  point_from(member(j, "x_a", f), f + ".x_a"),
                                  num_at(j, "r0", f),
                                  text(member(j, "strategy", f), f + ".strategy"),
                                  num_at(j, "distance_to_attainment", f),
                                  count(member(j, "attainment_size", f), f + ".attainment_size")};
}

void adl_serializer<bpblab::Epsilon0Report>::to_json(json& j, const bpblab::Epsilon0Report& v) {
  j = json{{"p", v.p},
           {"separation", number_json(v.separation)},
           {"length", number_json(v.length)},
           {"arc", number_json(v.arc)},
           {"delta1", number_json(v.delta1)},
           {"eps0", number_json(v.eps0)},
           {"cells", v.cells}};
}
bpblab::Epsilon0Report adl_serializer<bpblab::Epsilon0Report>::from_json(const json& j) {
  const std::string f = "epsilon0";
  return bpblab::Epsilon0Report{integer(member(j, "p", f), f + ".p"),
                                num_at(j, "separation", f),
                                num_at(j, "length", f),
                                num_at(j, "arc", f),
                                num_at(j, "delta1", f),
                                num_at(j, "eps0", f),
                                static_cast<int>(integer(member(j, "cells", f), f + ".cells"))};
}

void adl_serializer<bpblab::HilbertChecks>::to_json(json& j, const bpblab::HilbertChecks& v) {
  j = json{{"dim_h0", v.dim_h0},
           {"dim_h", v.dim_h},
           {"dims_equal", v.dims_equal},
           {"intersections_trivial", v.intersections_trivial},
           {"disjunction", v.disjunction},
           {"inclusion", v.inclusion},
           {"grid_points", v.grid_points},
           {"all", v.all()}};
}
bpblab::HilbertChecks adl_serializer<bpblab::HilbertChecks>::from_json(const json& j) {
  const std::string f = "hilbert_checks";
  bpblab::HilbertChecks h;
  h.dim_h0 = static_cast<int>(integer(member(j, "dim_h0", f), f + ".dim_h0"));
  h.dim_h = static_cast<int>(integer(member(j, "dim_h", f), f + ".dim_h"));
  h.dims_equal = flag(member(j, "dims_equal", f), f + ".dims_equal");
  h.intersections_trivial = flag(member(j, "intersections_trivial", f), f + ".intersections_trivial");
  h.disjunction = flag(member(j, "disjunction", f), f + ".disjunction");
  h.inclusion = flag(member(j, "inclusion", f), f + ".inclusion");
  h.grid_points = static_cast<int>(integer(member(j, "grid_points", f), f + ".grid_points"));
  return h;
}

void adl_serializer<bpblab::SweepCase>::to_json(json& j, const bpblab::SweepCase& v) {
  j = json{{"operator", v.op},     {"eps", number_json(v.eps)}, {"route", v.route},
           {"certified", v.certified}, {"preserved", v.preserved}, {"failure", v.failure}};
}
bpblab::SweepCase adl_serializer<bpblab::SweepCase>::from_json(const json& j) {
  const std::string f = "sweep_case";
  return bpblab::SweepCase{operator_from_json(member(j, "operator", f), f + ".operator"),
                           num_at(j, "eps", f),
                           text(member(j, "route", f), f + ".route"),
                           flag(member(j, "certified", f), f + ".certified"),
                           flag(member(j, "preserved", f), f + ".preserved"),
                           text(member(j, "failure", f), f + ".failure")};
}

void adl_serializer<bpblab::SweepReport>::to_json(json& j, const bpblab::SweepReport& v) {
  j = json{{"x", v.x},
           {"y", v.y},
           {"cases", v.cases},
           {"certified", v.certified},
           {"preserved", v.preserved},
           {"skipped_isometries", v.skipped_isometries},
           {"enumerated", v.enumerated},
           {"failures", v.failures}};
}
bpblab::SweepReport adl_serializer<bpblab::SweepReport>::from_json(const json& j) {
  const std::string f = "sweep";
  bpblab::SweepReport r;
  r.x = space_from_json(member(j, "x", f), f + ".x");
  r.y = space_from_json(member(j, "y", f), f + ".y");
  r.cases = count(member(j, "cases", f), f + ".cases");
  r.certified = count(member(j, "certified", f), f + ".certified");
  r.preserved = count(member(j, "preserved", f), f + ".preserved");
  r.skipped_isometries = count(member(j, "skipped_isometries", f), f + ".skipped_isometries");
  r.enumerated = count(member(j, "enumerated", f), f + ".enumerated");
  const auto& fails = member(j, "failures", f);
  if (!fails.is_array()) throw InputError(f + ".failures", "expected an array");
  for (const auto& c : fails) r.failures.push_back(c.get<bpblab::SweepCase>());
  return r;
}

}  // namespace nlohmann
