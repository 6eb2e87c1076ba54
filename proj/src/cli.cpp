#include "jetpot/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>

#include "jetpot/canonical.hpp"
#include "jetpot/cones.hpp"
#include "jetpot/garding.hpp"
#include "jetpot/operators.hpp"
#include "jetpot/verify.hpp"

namespace jetpot {

namespace {

uint64_t default_seed() {
  if (const char* env = std::getenv("JETPOT_SEED")) return std::strtoull(env, nullptr, 10);
  return 42;
}

ConstraintSet named_set(const std::string& name, int n) {
  if (name == "P") return convexity_set(n);
  if (name == "subaffine") return subaffine_set(n);
  if (name == "NP") return negative_convex_set(n);
  if (name == "subaffine_plus") return subaffine_plus_set(n);
  if (name.rfind("pk:", 0) == 0) return plurisubharmonic_set(n, std::stoi(name.substr(3)));
  if (name.rfind("eig+:", 0) == 0) {
    const auto rest = name.substr(5);
    const auto pos = rest.find(':');
    return eig_grad_set(n, std::stoi(rest.substr(0, pos)), std::stod(rest.substr(pos + 1)), +1);
  }
  if (name.rfind("eig-:", 0) == 0) {
    const auto rest = name.substr(5);
    const auto pos = rest.find(':');
    return eig_grad_set(n, std::stoi(rest.substr(0, pos)), std::stod(rest.substr(pos + 1)), -1);
  }
  if (name.rfind("cone:", 0) == 0)
    return cone_as_constraint(MonotonicityCone::from_json(json::parse(name.substr(5))), n);
  throw PreconditionError("unknown set name: " + name);
}

void deliver(const json& report, const std::string& out_path, std::ostream& out) {
  const std::string text = emit_json(report);
  if (!out_path.empty())
    write_text_file(out_path, text);
  else
    out << text;
}

void deliver_csv(const ScenarioReport& rep, const std::string& csv_path) {
  if (csv_path.empty()) return;
  std::string text = rep.csv_header + "\n";
  for (const auto& row : rep.csv_rows) text += row + "\n";
  write_text_file(csv_path, text);
}

}  // namespace

Mat parse_matrix(const std::string& text, int n_hint) {
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(), [](char c) { return std::isspace(c); }), t.end());
  if (!t.empty() && t.back() == 'I' && t.find_first_of("[{d") == std::string::npos) {
    if (n_hint <= 0) throw PreconditionError("matrix shorthand I needs a dimension");
    const double c = t.size() == 1 ? 1.0 : std::stod(t.substr(0, t.size() - 1));
    return c * Mat::Identity(n_hint, n_hint);
  }
  if (t.rfind("diag(", 0) == 0 && t.back() == ')') {
    std::vector<double> d;
    std::string body = t.substr(5, t.size() - 6);
    size_t pos = 0;
    while (pos != std::string::npos && !body.empty()) {
      const size_t next = body.find(',', pos);
      d.push_back(std::stod(body.substr(pos, next - pos)));
      pos = next == std::string::npos ? next : next + 1;
    }
    Mat A = Mat::Zero(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) A(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return A;
  }
  return mat_from_json(json::parse(t));
}

Jet parse_jet(const std::string& text, int n_hint) {
  json j = json::parse(text);
  if (j.contains("A") && j["A"].is_string()) {
    const int n = j.contains("p") ? static_cast<int>(j["p"].size()) : n_hint;
    j["A"] = mat_to_json(parse_matrix(j["A"].get<std::string>(), n));
  }
  return jet_from_json(j, n_hint);
}

Jet parse_jet_shorthand(const std::string& text, int n) {
  std::vector<std::string> tok;
  size_t pos = 0;
  while (true) {
    const size_t next = text.find(',', pos);
    tok.push_back(text.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (tok.size() < 3) throw PreconditionError("jet shorthand: r,p...,A");
  Jet J = Jet::zero(n);
  J.r = std::stod(tok.front());
  // Middle tokens: a single 0 broadcasts to the zero vector.
  const size_t np = tok.size() - 2;
  if (np == 1) {
    const double v = std::stod(tok[1]);
    J.p = Vec::Constant(n, v);
    if (v == 0.0) J.p.setZero();
  } else {
    if (static_cast<int>(np) != n) throw PreconditionError("jet shorthand: p entries != n");
    for (size_t i = 0; i < np; ++i) J.p(static_cast<int>(i)) = std::stod(tok[1 + i]);
  }
  std::string am = tok.back();
  double scale = 1.0;
  if (am.size() > 1 && am.back() == 'I') {
    scale = std::stod(am.substr(0, am.size() - 1));
    am = "I";
  }
  J.A = scale * parse_matrix(am, n);
  return J;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"constant-coefficient nonlinear potential theory on the 2-jet space"};
  app.set_config("--config");
  app.require_subcommand(1);

  uint64_t seed = default_seed();
  app.add_option("--seed", seed, "sampling seed (env JETPOT_SEED)");
  std::string out_path, csv_path;
  app.add_option("--out", out_path, "write the JSON report here instead of stdout");
  app.add_option("--csv", csv_path, "write per-point CSV for grid scenarios");

  // ops
  auto* ops = app.add_subcommand("ops", "operator catalog");
  auto* ops_list = ops->add_subcommand("list", "list catalog names");
  auto* ops_show = ops->add_subcommand("show", "entry metadata");
  std::string op_name;
  std::string op_params = "{}";
  ops_show->add_option("name", op_name)->required();
  ops_show->add_option("--params", op_params, "JSON parameters");

  // cone
  auto* cone = app.add_subcommand("cone", "cone membership queries");
  std::string cone_json, cone_jet, cone_query = "member";
  int cone_n = 2;
  cone->add_option("--cone", cone_json, "cone JSON")->required();
  cone->add_option("--jet", cone_jet, "jet JSON")->required();
  cone->add_option("--query", cone_query, "member | interior | dual | polar");
  cone->add_option("--n", cone_n, "dimension");

  // canonical
  auto* canon = app.add_subcommand("canonical", "boundary-ray operator evaluation");
  std::string canon_set = "P", canon_J0 = "0,0,I", canon_jet;
  int canon_n = -1;
  canon->add_option("--set", canon_set, "P | subaffine | NP | subaffine_plus | pk:<k> | "
                                        "eig+:<k>:<R> | eig-:<k>:<R> | cone:<json>");
  canon->add_option("--J0", canon_J0, "cone direction, e.g. \"0,0,I\"");
  canon->add_option("--jet", canon_jet, "jet JSON")->required();
  canon->add_option("--n", canon_n, "dimension (default from the jet)");
  bool canon_dual = false;
  canon->add_flag("--dual", canon_dual, "evaluate the dual operator");

  // garding
  auto* gard = app.add_subcommand("garding", "hyperbolic polynomial queries");
  auto* gard_eigs = gard->add_subcommand("eigs", "ordered eigenvalues");
  std::string g_poly = "det", g_A;
  int g_n = -1, g_k = 1;
  double g_r = 0.0;
  bool g_has_r = false;
  gard_eigs->add_option("--poly", g_poly, "det | sigma_k:<k> | tau_k:<k> | lifted:<name> | "
                                          "derived:<I|II|III>:<param>:<base>");
  gard_eigs->add_option("--A", g_A, "matrix: I, diag(...), or JSON")->required();
  gard_eigs->add_option("--n", g_n, "dimension");
  gard_eigs->add_option("--r", g_r, "zeroth-order slot for lifted polynomials")
      ->each([&](const std::string&) { g_has_r = true; });
  auto* gard_branch = gard->add_subcommand("branch", "k-th branch margin");
  gard_branch->add_option("--poly", g_poly);
  gard_branch->add_option("--A", g_A)->required();
  gard_branch->add_option("--k", g_k)->required();
  gard_branch->add_option("--n", g_n);

  // scenario
  auto* scen = app.add_subcommand("scenario", "named verification scenarios");
  auto* s_zmp = scen->add_subcommand("zmp-failure", "maximum principle failure on a large ball");
  s_zmp->set_help_flag("--help", "print help");
  double z_R = 1.0, z_Rp = 1.5, z_h = 0.01;
  int z_n = 2;
  s_zmp->add_option("--R", z_R);
  s_zmp->add_option("--Rprime", z_Rp);
  s_zmp->add_option("--n", z_n);
  s_zmp->add_option("--h", z_h);
  auto* s_small = scen->add_subcommand("small-ball", "comparison failure on a small ball");
  s_small->set_help_flag("--help", "print help");
  double sb_alpha = 2.0, sb_R = 0.1, sb_h = 0.001;
  s_small->add_option("--alpha", sb_alpha);
  s_small->add_option("--R", sb_R);
  s_small->add_option("--h", sb_h);
  auto* s_sap = scen->add_subcommand("subaffine-plus", "gradient-free dual characterization");

  // check
  auto* check = app.add_subcommand("check", "sampled structural checks");
  auto* c_mono = check->add_subcommand("monotonicity", "set + cone stays in set");
  std::string c_set, c_cone, c_op = "det";
  std::string c_params = "{}";
  long c_samples = 2000;
  c_mono->add_option("--set", c_set, "named set (see canonical --set)")->required();
  c_mono->add_option("--cone", c_cone, "cone JSON")->required();
  c_mono->add_option("--samples", c_samples);
  c_mono->add_option("--n", cone_n);
  auto* c_comp = check->add_subcommand("compatibility", "inf and boundary-level identity");
  c_comp->add_option("--op", c_op)->required();
  c_comp->add_option("--params", c_params);
  c_comp->add_option("--samples", c_samples);
  auto* c_tame = check->add_subcommand("tameness", "strict increase along the cone direction");
  std::string c_J0 = "-1,0,I";
  c_tame->add_option("--op", c_op)->required();
  c_tame->add_option("--params", c_params);
  c_tame->add_option("--J0", c_J0);
  c_tame->add_option("--samples", c_samples);
  auto* c_dual = check->add_subcommand("duality", "eigenvalue-gradient family dual index");
  int d_n = 2, d_k = 1;
  double d_R = 1.0;
  c_dual->add_option("--n", d_n);
  c_dual->add_option("--k", d_k);
  c_dual->add_option("--R", d_R);
  c_dual->add_option("--samples", c_samples);

  // Global flags remain valid after a subcommand name.
  std::function<void(CLI::App*)> set_fallthrough = [&](CLI::App* a) {
    for (CLI::App* sub : a->get_subcommands([](CLI::App*) { return true; })) {
      sub->fallthrough();
      set_fallthrough(sub);
    }
  };
  set_fallthrough(&app);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("jetpot");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());

    json report;
    report["seed"] = seed;
    int exit_code = 0;

    if (*ops_list) {
      report["names"] = catalog_names();
    } else if (*ops_show) {
      report = catalog(op_name, json::parse(op_params)).metadata();
      report["seed"] = seed;
    } else if (*cone) {
      const MonotonicityCone M = MonotonicityCone::from_json(json::parse(cone_json));
      const Jet J = parse_jet(cone_jet, -1);
      report["cone"] = M.to_json();
      report["query"] = cone_query;
      if (cone_query == "member") {
        report["result"] = cone_member(M, J);
        report["margin"] = M.member_margin(J);
      } else if (cone_query == "interior") {
        report["result"] = cone_interior(M, J);
        report["margin"] = M.member_margin(J);
      } else if (cone_query == "dual") {
        report["result"] = cone_dual_member(M, J);
      } else if (cone_query == "polar") {
        report["result"] = polar_member(M, J);
      } else {
        throw PreconditionError("unknown cone query: " + cone_query);
      }
    } else if (*canon) {
      const Jet J = parse_jet(canon_jet, canon_n);
      const int n = J.dim();
      const ConstraintSet S = named_set(canon_set, n);
      const Jet J0 = parse_jet_shorthand(canon_J0, n);
      const RaySolution sol = solve_boundary_ray(S, J0, canon_dual ? -J : J);
      report["set"] = S.name;
      report["value"] = canon_dual ? sol.t_J : -sol.t_J;
      report["t_J"] = sol.t_J;
      report["iterations"] = sol.iterations;
      report["residual"] = sol.residual;
    } else if (*gard_eigs || *gard_branch) {
      Mat A = parse_matrix(g_A, g_n);
      const int n = static_cast<int>(A.rows());
      const GardingPolynomial g = GardingPolynomial::parse(g_poly, n);
      const Vec w = g.lifted() ? garding_eigs(g, g_has_r ? g_r : 0.0, A) : garding_eigs(g, A);
      report["poly"] = g.name();
      report["degree"] = g.degree();
      if (*gard_eigs) {
        report["eigenvalues"] = std::vector<double>(w.data(), w.data() + w.size());
      } else {
        if (g_k < 1 || g_k > g.degree()) throw PreconditionError("branch index out of range");
        report["k"] = g_k;
        report["margin"] = w(g_k - 1);
        report["member"] = w(g_k - 1) >= -1e-9 * (1.0 + A.norm());
      }
    } else if (*s_zmp || *s_small || *s_sap) {
      ScenarioReport rep;
      if (*s_zmp) rep = scenario_zmp_failure(z_R, z_Rp, z_n, z_h);
      if (*s_small) rep = scenario_small_ball_failure(sb_alpha, sb_R, sb_h, seed);
      if (*s_sap) rep = scenario_subaffine_plus(seed);
      deliver_csv(rep, csv_path);
      report = rep.to_json();
      report["seed"] = seed;
      exit_code = rep.pass ? 0 : 1;
    } else if (*c_mono) {
      const ConstraintSet S = named_set(c_set, cone_n);
      const MonotonicityCone M = MonotonicityCone::from_json(json::parse(c_cone));
      const VerificationReport rep = monotonicity_check(S, M, c_samples, seed);
      report = rep.to_json();
      exit_code = rep.inconclusive ? 3 : (rep.pass ? 0 : 1);
    } else if (*c_comp) {
      const OperatorSpec spec = catalog(c_op, json::parse(c_params));
      const VerificationReport rep = compatibility_check(spec.pair, c_samples, seed);
      report = rep.to_json();
      report["op"] = c_op;
      exit_code = rep.inconclusive ? 3 : (rep.pass ? 0 : 1);
    } else if (*c_tame) {
      const OperatorSpec spec = catalog(c_op, json::parse(c_params));
      const Jet J0 = parse_jet_shorthand(c_J0, spec.pair.n);
      const VerificationReport rep = tameness_check(spec.pair, J0, c_samples, seed);
      report = rep.to_json();
      report["op"] = c_op;
      exit_code = rep.inconclusive ? 3 : (rep.pass ? 0 : 1);
    } else if (*c_dual) {
      const DualityRelationReport rep = duality_relation_check(d_n, d_k, d_R, c_samples, seed);
      report = rep.to_json();
      exit_code = 0;
    }

    deliver(report, out_path, out);
    return exit_code;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const SearchFailure& e) {
    err << "inconclusive: " << e.what() << "\n";
    return 3;
  } catch (const PreconditionError& e) {
    err << "precondition error: " << e.what() << "\n";
    return 2;
  } catch (const CapabilityError& e) {
    err << "capability error: " << e.what() << "\n";
    return 2;
  } catch (const LevelError& e) {
    err << "level error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "malformed JSON: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace jetpot
