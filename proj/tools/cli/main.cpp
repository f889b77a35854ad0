// bpblab: command-line front end. Every subcommand prints one JSON document.
#include "acceptance.hpp"
#include "json_io.hpp"

#include <bpblab/approximants.hpp>
#include <bpblab/bpbverify.hpp>
#include <bpblab/classify.hpp>
#include <bpblab/error.hpp>
#include <bpblab/operators.hpp>

#include <CLI11.hpp>

#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using bpblab::io::InputError;
using bpblab::io::json;

constexpr const char* kVersion = "0.1.0";

struct Common {
  std::string out;
  bool no_timestamp = false;
  int threads = 1;
  std::optional<int> resolution;
  std::optional<std::uint64_t> seed;
};

struct Args {
  std::string t, a, t1, t2, x1, x2, h0;
  std::string pair = "linf3-l13";
  std::string method = "auto";
  std::string domain, codomain, space;
  std::vector<double> eps_list;
  std::optional<double> eps, theta;
  std::optional<long long> p;
  std::optional<int> cells, trials;
  bool hilbert_checks = false;
};

bpblab::OperatorMatrix load_operator(const std::string& path, const std::string& field) {
  if (path.empty()) throw InputError(field, "required");
  return bpblab::io::operator_from_json(bpblab::io::load_file(path, field), field);
}

// Accepts {"rows": [[...]]} or a bare array of rows.
Eigen::MatrixXd load_matrix(const std::string& path, const std::string& field) {
  json j = bpblab::io::load_file(path, field);
  if (j.is_object()) {
    auto it = j.find("rows");
    if (it == j.end()) throw InputError(field + ".rows", "missing");
    return bpblab::io::matrix_from_json(*it, field + ".rows");
  }
  return bpblab::io::matrix_from_json(j, field);
}

// "p:n", for example "inf:3" or "4/3:2".
bpblab::SpaceSpec parse_space(const std::string& text, const std::string& field) {
  auto colon = text.rfind(':');
  if (colon == std::string::npos) throw InputError(field, "expected p:n, for example inf:3");
  json n;
  try {
    n = std::stoll(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw InputError(field, "dimension after ':' is not an integer");
  }
  return bpblab::io::space_from_json(json{{"p", text.substr(0, colon)}, {"n", n}}, field);
}

double need_eps(const Args& a) {
  if (!a.eps) throw InputError("--eps", "required");
  if (!(*a.eps > 0)) throw InputError("--eps", "must be positive");
  return *a.eps;
}

std::uint64_t need_seed(const Common& c, const char* why) {
  if (!c.seed) throw InputError("--seed", std::string("required for ") + why);
  return *c.seed;
}

int resolution(const Common& c) {
  const int r = c.resolution ? *c.resolution : bpblab::default_resolution();
  if (r < 16) throw InputError("--resolution", "must be at least 16");
  return r;
}

std::string utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json run_classify(const Args& a, const Common& c) {
  auto T = load_operator(a.t, "--T");
  const bool lp = T.domain.polyhedral() && T.codomain.polyhedral();
  const std::uint64_t seed = lp ? c.seed.value_or(1) : need_seed(c, "perturbation search");
  json out{{"extremality", bpblab::is_extreme_contraction(T, seed)}};
  if (T.rows() == T.cols() && T.domain.p == T.codomain.p) out["isometry"] = bpblab::is_isometry(T);
  out["smooth"] = bpblab::is_smooth_operator(T);
  if (T.domain.n == 3 && T.domain.p.is_infinite() && T.codomain.p.is_one() && T.codomain.n == 3) {
    auto m = bpblab::find_extreme_linf3_l13(T);
    out["enumeration_orbit"] = m ? json(m->orbit) : json(nullptr);
  }
  return out;
}

json run_orbit(const Args& a) {
  auto T = load_operator(a.t, "--T");
  auto orbit = bpblab::equivalence_orbit(T);
  json members = json::array();
  for (const auto& m : orbit) members.push_back({{"operator", m.matrix}, {"left", m.left}, {"right", m.right}});
  return {{"size", orbit.size()}, {"members", std::move(members)}};
}

json run_enumerate(const Args& a) {
  if (a.pair != "linf3-l13") throw InputError("--pair", "only linf3-l13 has an enumeration");
  auto all = bpblab::enumerate_extreme_linf3_l13();
  std::vector<std::size_t> orbits(2, 0);
  json members = json::array();
  for (const auto& m : all) {
    ++orbits[m.orbit];
    members.push_back({{"operator", m.matrix}, {"orbit", m.orbit}, {"left", m.left}, {"right", m.right}});
  }
  return {{"pair", a.pair}, {"count", all.size()}, {"orbits", orbits}, {"members", std::move(members)}};
}

json run_approx(const Args& a) {
  const double eps = need_eps(a);
  const std::string& m = a.method;
  if (m == "tilted") return bpblab::tilted_projection_demo(eps, a.theta);
  auto T = load_operator(a.t, "--T");
  if (m == "auto") {
    std::string route;
    json out = bpblab::route_approximant(T, eps, &route);
    out["route"] = route;
    return out;
  }
  if (m == "rank-one") return bpblab::rank_one_approx(T, eps);
  if (m == "convex")
    return bpblab::convex_witness_approx(T, load_operator(a.t1, "--T1"), load_operator(a.t2, "--T2"), eps);
  if (m == "direct-sum") {
    if (a.x1.empty()) throw InputError("--X1", "required");
    if (a.x2.empty()) throw InputError("--X2", "required");
    return bpblab::direct_sum_shrink_approx(T, load_matrix(a.x1, "--X1"), load_matrix(a.x2, "--X2"), eps);
  }
  if (m == "linf-extreme") return bpblab::linf_extreme_approx(T, eps);
  if (m == "l1-extreme") return bpblab::l1_extreme_approx(T, eps);
  if (m == "linf3-l13") return bpblab::linf3_l13_extreme_approx(T, eps);
  if (m == "hilbert") {
    std::optional<Eigen::MatrixXd> h0;
    if (!a.h0.empty()) h0 = load_matrix(a.h0, "--H0");
    return bpblab::hilbert_rotate_approx(T, eps, h0);
  }
  if (m == "functional") return bpblab::functional_approx_lp2(T, eps);
  throw InputError("--method", "unknown method " + m);
}

json run_verify(const Args& a, const Common& c, int& exit_code) {
  auto T = load_operator(a.t, "--T");
  const double eps = need_eps(a);
  const int res = resolution(c);
  if (a.a.empty()) {
    // No approximant given: search for one that would contradict rigidity.
    const int trials = a.trials.value_or(64);
    if (trials < 1) throw InputError("--trials", "must be positive");
    auto r = bpblab::is_only_approximation(T, eps, trials, need_seed(c, "random perturbations"), res);
    return {{"mode", "only-approximation"}, {"search", r}};
  }
  auto A = load_operator(a.a, "--A");
  auto cert = bpblab::verify_uniform_bpb(T, A, eps, res);
  if (cert.status == bpblab::BpbCertificate::Status::Falsified) exit_code = 1;
  json out{{"mode", "certificate"}, {"certificate", cert}};
  if (a.hilbert_checks) {
    auto checks = bpblab::hilbert_necessary_checks(T, A, eps, res);
    if (!checks.all()) exit_code = 1;
    out["hilbert_checks"] = checks;
  }
  return out;
}

json run_sweep(const Args& a, const Common& c) {
  if (a.domain.empty()) throw InputError("--domain", "required");
  if (a.codomain.empty()) throw InputError("--codomain", "required");
  auto x = parse_space(a.domain, "--domain");
  auto y = parse_space(a.codomain, "--codomain");
  if (a.eps_list.empty()) throw InputError("--eps", "at least one value required");
  for (double e : a.eps_list)
    if (!(e > 0)) throw InputError("--eps", "values must be positive");
  const int trials = a.trials.value_or(16);
  if (trials < 0) throw InputError("--trials", "must be non-negative");
  if (c.threads < 1) throw InputError("--threads", "must be positive");
  return bpblab::pair_property_sweep(x, y, a.eps_list, trials, need_seed(c, "random operators"), resolution(c),
                                     c.threads);
}

json run_demo(const Common& c, int& exit_code) {
  bpblab::acceptance::Options opt;
  if (c.seed) opt.seed = *c.seed;
  opt.resolution = resolution(c);
  json criteria = json::array();
  std::size_t passed = 0;
  for (const auto& r : bpblab::acceptance::run_all(opt)) {
    json e{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}};
    if (!c.no_timestamp) e["seconds"] = r.seconds;
    criteria.push_back(std::move(e));
    passed += r.passed;
  }
  if (passed != criteria.size()) exit_code = 1;
  return {{"seed", opt.seed}, {"passed", passed}, {"total", criteria.size()}, {"criteria", std::move(criteria)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bishop-Phelps-Bollobas tools for finite-dimensional l_p operators", "bpblab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common c;
  Args a;

  auto common = [&](CLI::App* s) {
    s->add_option("--out", c.out, "Write the report to a file instead of standard output");
    s->add_flag("--no-timestamp", c.no_timestamp, "Omit wall-clock fields");
    s->add_option("--threads", c.threads, "Worker threads for sweeps");
    s->add_option_function<int>("--resolution", [&](const int& r) { c.resolution = r; },
                                "Sphere sampling resolution (default: BPBLAB_DEFAULT_RESOLUTION or 4096)");
    s->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { c.seed = v; }, "Random seed");
  };
  auto op_t = [&](CLI::App* s) { s->add_option("--T", a.t, "Operator JSON file"); };
  auto eps = [&](CLI::App* s) {
    s->add_option_function<double>("--eps", [&](const double& e) { a.eps = e; }, "Approximation radius");
  };

  auto* norm = app.add_subcommand("norm", "Operator norm with a maximizing vector");
  auto* attain = app.add_subcommand("attain", "Norm-attainment set");
  auto* classify = app.add_subcommand("classify", "Extremality, isometry and smoothness");
  auto* isometries = app.add_subcommand("isometries", "All isometries of a space");
  auto* orbit = app.add_subcommand("orbit", "Orbit under signed permutations on both sides");
  auto* enumerate = app.add_subcommand("enumerate-ext", "Enumerate extreme contractions");
  auto* approx = app.add_subcommand("approx", "Construct an approximant with preserved attainment");
  auto* verify = app.add_subcommand("verify", "Certify a uniform BPB approximation");
  auto* witness = app.add_subcommand("witness-p", "Witness for the attainment-ball property");
  auto* epsilon0 = app.add_subcommand("epsilon0", "Rigidity constant of l_p^2 isometries");
  auto* sweep = app.add_subcommand("sweep", "Random and enumerated sweep over a pair of spaces");
  auto* demo = app.add_subcommand("demo", "Run the acceptance suite");
  for (auto* s : {norm, attain, classify, isometries, orbit, enumerate, approx, verify, witness, epsilon0, sweep, demo})
    common(s);
  for (auto* s : {norm, attain, classify, orbit, approx, verify, witness}) op_t(s);
  eps(approx);
  eps(verify);

  isometries->add_option("--space", a.space, "Space as p:n, for example inf:3")->required();
  enumerate->add_option("--pair", a.pair, "Pair of spaces")->required();
  approx->add_option("--method", a.method,
                     "auto, rank-one, convex, direct-sum, linf-extreme, l1-extreme, linf3-l13, hilbert, tilted, "
                     "functional");
  approx->add_option("--T1", a.t1, "First endpoint for the convex method");
  approx->add_option("--T2", a.t2, "Second endpoint for the convex method");
  approx->add_option("--X1", a.x1, "Basis of X1 (columns) for the direct-sum method");
  approx->add_option("--X2", a.x2, "Basis of X2 (columns) for the direct-sum method");
  approx->add_option("--H0", a.h0, "Declared attaining subspace (columns) for the hilbert method");
  approx->add_option_function<double>("--theta", [&](const double& t) { a.theta = t; }, "Angle for tilted");
  verify->add_option("--A", a.a, "Approximant JSON file; omit to search for one");
  verify->add_option_function<int>("--trials", [&](const int& t) { a.trials = t; }, "Random trials");
  verify->add_flag("--hilbert-checks", a.hilbert_checks, "Also run the l_2 necessary conditions");
  epsilon0->add_option_function<long long>("--p", [&](const long long& p) { a.p = p; }, "Integer exponent >= 3")
      ->required();
  epsilon0->add_option_function<int>("--cells", [&](const int& n) { a.cells = n; }, "Arc table cells per octant");
  sweep->add_option("--domain", a.domain, "Domain as p:n");
  sweep->add_option("--codomain", a.codomain, "Codomain as p:n");
  sweep->add_option("--eps", a.eps_list, "Radii")->delimiter(',');
  sweep->add_option_function<int>("--trials", [&](const int& t) { a.trials = t; }, "Random operators");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  int exit_code = 0;
  json result;
  CLI::App* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  try {
    if (name == "norm") {
      result = bpblab::op_norm(load_operator(a.t, "--T"));
    } else if (name == "attain") {
      result = bpblab::attainment_set(load_operator(a.t, "--T"));
    } else if (name == "classify") {
      result = run_classify(a, c);
    } else if (name == "isometries") {
      auto all = bpblab::enumerate_isometries(parse_space(a.space, "--space"));
      result = {{"count", all.size()}, {"isometries", all}};
    } else if (name == "orbit") {
      result = run_orbit(a);
    } else if (name == "enumerate-ext") {
      result = run_enumerate(a);
    } else if (name == "approx") {
      result = run_approx(a);
    } else if (name == "verify") {
      result = run_verify(a, c, exit_code);
    } else if (name == "witness-p") {
      result = bpblab::property_p_witness(load_operator(a.t, "--T"));
    } else if (name == "epsilon0") {
      result = bpblab::epsilon0_lp2(*a.p, a.cells);
    } else if (name == "sweep") {
      result = run_sweep(a, c);
    } else if (name == "demo") {
      result = run_demo(c, exit_code);
    }
  } catch (const InputError& e) {
    std::cerr << "bpblab " << name << ": invalid input: " << e.what() << "\n";
    return 2;
  } catch (const bpblab::Error& e) {
    std::cerr << "bpblab " << name << ": " << e.what() << "\n";
    return 2;
  }

  json doc{{"command", name}, {"version", kVersion}, {"result", std::move(result)}};
  if (c.seed) doc["seed"] = *c.seed;
  if (!c.no_timestamp) doc["generated_at"] = utc_now();
  const std::string text = doc.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(c.out);
    if (!f) {
      std::cerr << "bpblab: cannot write " << c.out << "\n";
      return 2;
    }
    f << text;
  }
  return exit_code;
}
