#include "jetpot/operators.hpp"

#include <cmath>

namespace jetpot {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double get_d(const json& p, const std::string& key, double fallback) {
  return p.contains(key) ? p[key].get<double>() : fallback;
}
int get_i(const json& p, const std::string& key, int fallback) {
  return p.contains(key) ? p[key].get<int>() : fallback;
}
std::string get_s(const json& p, const std::string& key, const std::string& fallback) {
  return p.contains(key) ? p[key].get<std::string>() : fallback;
}

// Gradient factor catalog: (d, D) pairs with d >= 0 on D vanishing exactly
// on the boundary and D-monotone.
struct GradientFactor {
  std::function<double(const Vec&)> d;
  DirectionalCone D;
};

GradientFactor gradient_factor(const std::string& name, int n) {
  if (name == "last_coordinate") {
    Vec e = Vec::Zero(n);
    e(n - 1) = 1.0;
    return {[n](const Vec& p) { return p(n - 1); }, DirectionalCone::half_space(e)};
  }
  if (name.rfind("orthant_product", 0) == 0) {
    int k = n;
    const auto pos = name.find(':');
    if (pos != std::string::npos) k = std::stoi(name.substr(pos + 1));
    return {[k](const Vec& p) {
              double prod = 1.0;
              for (int j = 0; j < k; ++j) prod *= p(j);
              return prod;
            },
            DirectionalCone::orthant(k)};
  }
  throw PreconditionError("unknown gradient factor: " + name);
}

struct ZeroProfile {
  std::function<double(double)> h;  // nonnegative, nonincreasing on (-inf, 0]
};

ZeroProfile zero_profile(const std::string& name, int n) {
  if (name == "one") return {[](double) { return 1.0; }};
  if (name == "neg_r") return {[](double r) { return -r; }};
  if (name == "neg_r_pow")
    return {[n](double r) { return std::pow(-r, n + 2); }};
  throw PreconditionError("unknown zero-order profile: " + name);
}

}  // namespace

json OperatorSpec::metadata() const {
  json j;
  j["name"] = name;
  j["params"] = params;
  j["constrained"] = pair.constrained();
  if (pair.constrained()) {
    j["constraint"] = pair.constraint->name;
    j["c0"] = pair.c0;
  }
  j["levels"] = pair.levels.to_json();
  j["cone"] = claimed_cone.to_json();
  j["description"] = description;
  return j;
}

std::vector<std::string> catalog_names() {
  return {"lambda_min",     "lambda_max",        "truncated_laplacian",
          "special_lagrangian", "det",           "sigma_k",
          "tau_k",          "gradient_free_min", "gradient_free_max",
          "neg_r_det",      "affine_sphere",     "directional_gd",
          "optimal_transport", "eig_grad_plus",  "eig_grad_minus",
          "alpha_min",      "alpha_max",         "linear",
          "hjb_min_eig_grad", "heat",            "parabolic_det"};
}

OperatorSpec catalog(const std::string& name_in, const json& params) {
  // Accept the long-form alias for the determinant pair.
  const std::string name = name_in == "det_MA" ? "det" : name_in;
  OperatorSpec spec;
  spec.name = name;
  spec.params = params;
  const int n = get_i(params, "n", 2);
  CompatiblePair& P = spec.pair;
  P.name = name;
  P.n = n;
  P.levels = {};

  if (name == "lambda_min") {
    P.op = [](const Jet& J) { return sym_eigs(J.A)(0); };
    spec.claimed_cone = MonotonicityCone::P();
    spec.description = "smallest Hessian eigenvalue (canonical for the convexity set)";
  } else if (name == "lambda_max") {
    P.op = [](const Jet& J) {
      const Vec w = sym_eigs(J.A);
      return w(w.size() - 1);
    };
    spec.claimed_cone = MonotonicityCone::P();
    spec.description = "largest Hessian eigenvalue (canonical for the subaffine set)";
  } else if (name == "truncated_laplacian") {
    const int k = get_i(params, "k", 1);
    if (k < 1 || k > n) throw PreconditionError("truncated_laplacian: 1 <= k <= n");
    P.op = [k](const Jet& J) {
      const Vec w = sym_eigs(J.A);
      double sum = 0;
      for (int j = 0; j < k; ++j) sum += w(j);
      return sum;
    };
    spec.claimed_cone = MonotonicityCone::P();
    spec.description = "sum of the k smallest Hessian eigenvalues";
  } else if (name == "special_lagrangian") {
    P.op = [](const Jet& J) {
      const Vec w = sym_eigs(J.A);
      double sum = 0;
      for (int j = 0; j < w.size(); ++j) sum += std::atan(w(j));
      return sum;
    };
    P.levels = {-n * M_PI / 2, n * M_PI / 2, true, true, false};
    spec.claimed_cone = MonotonicityCone::P();
    spec.description = "sum of arctangents of the Hessian eigenvalues";
  } else if (name == "det") {
    P.op = [](const Jet& J) { return J.A.determinant(); };
    P.constraint = convexity_set(n);
    P.c0 = 0.0;
    P.levels = {0.0, kInf, false, false, false};
    spec.claimed_cone = MonotonicityCone::P();
    spec.description = "determinant of the Hessian on the convexity set";
  } else if (name == "sigma_k") {
    const int k = get_i(params, "k", n);
    GardingPolynomial g = GardingPolynomial::sigma_k(n, k);
    P.op = [g](const Jet& J) { return g(J.A); };
    ConstraintSet C;
    C.name = "closed_cone(" + g.name() + ")";
    C.n = n;
    C.margin = [g](const Jet& J) { return garding_eigs(g, J.A)(0); };
    C.monotone_cone = MonotonicityCone::P();
    C.silent = {true, true, false};
    C.tame = true;
    P.constraint = C;
    P.c0 = 0.0;
    P.levels = {0.0, kInf, false, false, false};
    spec.claimed_cone = MonotonicityCone::P();
    spec.description = "k-th elementary symmetric function of the eigenvalues on its cone";
  } else if (name == "tau_k") {
    const int k = get_i(params, "k", 1);
    GardingPolynomial g = GardingPolynomial::tau_k(n, k);
    P.op = [g](const Jet& J) { return g(J.A); };
    P.constraint = plurisubharmonic_set(n, k);
    P.c0 = 0.0;
    P.levels = {0.0, kInf, false, false, false};
    spec.claimed_cone = MonotonicityCone::P();
    spec.description = "product of k-fold eigenvalue sums on the k-plurisubharmonic set";
  } else if (name == "gradient_free_min") {
    P.op = [](const Jet& J) { return std::min(-J.r, sym_eigs(J.A)(0)); };
    spec.claimed_cone = MonotonicityCone::NP();
    spec.description = "min(-r, lambda_min(A)) (canonical for the negative-convex set)";
  } else if (name == "gradient_free_max") {
    P.op = [](const Jet& J) {
      const Vec w = sym_eigs(J.A);
      return std::max(-J.r, w(w.size() - 1));
    };
    spec.claimed_cone = MonotonicityCone::NP();
    spec.description = "max(-r, lambda_max(A)) (canonical for the subaffine-plus set)";
  } else if (name == "neg_r_det" || name == "affine_sphere") {
    const auto prof = zero_profile(name == "neg_r_det" ? "neg_r" : "neg_r_pow", n);
    P.op = [h = prof.h](const Jet& J) { return h(J.r) * J.A.determinant(); };
    P.constraint = negative_convex_set(n);
    P.c0 = 0.0;
    P.levels = {0.0, kInf, false, false, false};
    spec.claimed_cone = MonotonicityCone::NP();
    spec.description = name == "neg_r_det" ? "(-r) det(A) on the negative-convex set"
                                           : "(-r)^(n+2) det(A) on the negative-convex set";
  } else if (name == "directional_gd") {
    const auto gf = gradient_factor(get_s(params, "d", "last_coordinate"), n);
    const std::string hname = get_s(params, "h", "neg_r");
    if (hname == "one")
      throw PreconditionError(
          "directional_gd: the constant profile breaks the boundary-level identity in the "
          "r slot; use optimal_transport");
    const auto prof = zero_profile(hname, n);
    const GardingPolynomial g = GardingPolynomial::parse(get_s(params, "g", "det"), n);
    P.op = [h = prof.h, d = gf.d, g](const Jet& J) { return h(J.r) * d(J.p) * g(J.A); };
    ConstraintSet C;
    C.name = "NxDxGamma";
    C.n = n;
    const DirectionalCone D = gf.D;
    C.margin = [D, g](const Jet& J) {
      return std::min({-J.r, D.margin(J.p), garding_eigs(g, J.A)(0)});
    };
    C.monotone_cone = MonotonicityCone::NDP(D);
    C.tame = true;
    P.constraint = C;
    P.c0 = 0.0;
    P.levels = {0.0, kInf, false, false, false};
    spec.claimed_cone = MonotonicityCone::NDP(gf.D);
    spec.description = "h(r) d(p) g(A) with gradient directionality";
  } else if (name == "optimal_transport") {
    const auto gf = gradient_factor(get_s(params, "d", "last_coordinate"), n);
    P.op = [d = gf.d](const Jet& J) { return d(J.p) * J.A.determinant(); };
    ConstraintSet C;
    C.name = "DxP";
    C.n = n;
    const DirectionalCone D = gf.D;
    C.margin = [D](const Jet& J) { return std::min(D.margin(J.p), sym_eigs(J.A)(0)); };
    C.monotone_cone = MonotonicityCone::NDP(D);
    C.silent = {true, false, false};
    C.tame = true;
    P.constraint = C;
    P.c0 = 0.0;
    P.levels = {0.0, kInf, false, false, false};
    spec.claimed_cone = MonotonicityCone::NDP(gf.D);
    spec.description = "d(Du) det(D^2 u): transport potential with directed target density";
  } else if (name == "eig_grad_plus" || name == "eig_grad_minus") {
    const int k = get_i(params, "k", 1);
    const double R = get_d(params, "R", 1.0);
    const int sign = name == "eig_grad_plus" ? 1 : -1;
    ConstraintSet S = eig_grad_set(n, k, R, sign);
    P.op = S.margin;
    spec.claimed_cone = MonotonicityCone::of_R(R);
    spec.description = "lambda_k(A) +/- |p|/R";
  } else if (name == "alpha_min" || name == "alpha_max") {
    const double alpha = get_d(params, "alpha", 2.0);
    ConstraintSet S = name == "alpha_min" ? alpha_min_set(n, alpha) : alpha_max_set(n, alpha);
    P.op = S.margin;
    spec.claimed_cone = MonotonicityCone::zero_gradient();
    spec.description = "extreme eigenvalue of A + |p|^((a-1)/a)(P_perp + a P_p)";
  } else if (name == "linear") {
    Jet coeff = Jet::zero(n);
    coeff.r = get_d(params, "a", 0.0);
    if (params.contains("b")) {
      const auto& b = params["b"];
      for (size_t i = 0; i < b.size(); ++i) coeff.p(static_cast<int>(i)) = b[i].get<double>();
    }
    coeff.A = params.contains("E") ? mat_from_json(params["E"]) : Mat::Identity(n, n);
    if (coeff.r > 0 || sym_eigs(coeff.A)(0) < -1e-12)
      throw PreconditionError("linear: coefficients must be proper elliptic (a <= 0, E >= 0)");
    P.op = [coeff](const Jet& J) { return inner(coeff, J); };
    DirectionalCone D = coeff.p.norm() > 0 ? DirectionalCone::half_space(coeff.p)
                                           : DirectionalCone::full();
    spec.claimed_cone = MonotonicityCone::NDP(std::move(D));
    spec.description = "tr(E A) + <b, p> + a r";
  } else if (name == "hjb_min_eig_grad") {
    const int N = get_i(params, "N", 4096);
    const double R = get_d(params, "R", 1.0);
    const auto dirs = sphere_directions(n, N);  // rejects n outside {2, 3}
    P.op = [dirs, R](const Jet& J) { return min_eig_grad_family(dirs, R, J); };
    spec.claimed_cone = MonotonicityCone::of_R(R);
    spec.params["discretization_error_budget"] = sphere_mesh_budget(n, N);
    spec.description = "infimum of the discretized eigenvalue-drift family";
  } else if (name == "heat") {
    P.op = [n](const Jet& J) {
      return J.A.topLeftCorner(n - 1, n - 1).trace() - J.p(n - 1);
    };
    spec.claimed_cone = MonotonicityCone::parabolic(0.0);
    spec.description = "spatial Laplacian minus the time derivative";
  } else if (name == "parabolic_det") {
    P.op = [n](const Jet& J) {
      return J.p(n - 1) * J.A.topLeftCorner(n - 1, n - 1).determinant();
    };
    ConstraintSet C;
    C.name = "tau>=0 x P'";
    C.n = n;
    C.margin = [n](const Jet& J) {
      return std::min(J.p(n - 1), sym_eigs(J.A.topLeftCorner(n - 1, n - 1))(0));
    };
    C.tame = true;
    P.constraint = C;
    P.c0 = 0.0;
    P.levels = {0.0, kInf, false, false, false};
    {
      Vec e = Vec::Zero(n);
      e(n - 1) = 1.0;
      MonotonicityCone M;
      M.kind = MonotonicityCone::Kind::ParabolicProduct;
      M.D = DirectionalCone::half_space(e);
      spec.claimed_cone = M;
    }
    spec.description = "tau det(A') constrained to increasing time slope";
  } else {
    throw PreconditionError("unknown operator: " + name);
  }
  P.cone = spec.claimed_cone;
  return spec;
}

double op_eval(const OperatorSpec& spec, const Jet& J) {
  if (spec.pair.constrained()) {
    const double m = spec.pair.constraint->margin(J);
    if (m < -jet_tol(J))
      throw ConstraintViolation(spec.name + ": jet outside the constraint set (margin " +
                                std::to_string(m) + ")");
  }
  return spec.pair.op(J);
}

Interval admissible_levels(const OperatorSpec& spec) { return spec.pair.levels; }

json DualityRelationReport::to_json() const {
  json j;
  j["reflection_index_holds"] = reflection_index_holds;
  j["shifted_index_holds"] = shifted_index_holds;
  j["worst_gap_reflection"] = worst_gap_reflection;
  j["worst_gap_shifted"] = worst_gap_shifted;
  j["n_samples"] = n_samples;
  j["seed"] = seed;
  return j;
}

DualityRelationReport duality_relation_check(int n, int k, double R, long samples,
                                             uint64_t seed) {
  Sampler s(seed);
  DualityRelationReport rep;
  rep.seed = seed;
  const ConstraintSet plus = eig_grad_set(n, k, R, +1);
  const ConstraintSet dual_of_plus = dual_margin(plus);
  const int k_reflect = n - k + 1;
  const int k_shift = n + k - 1;
  const bool shift_valid = k_shift >= 1 && k_shift <= n;
  const ConstraintSet reflect = eig_grad_set(n, k_reflect, R, -1);
  rep.shifted_index_holds = shift_valid;
  std::optional<ConstraintSet> shifted;
  if (shift_valid) shifted = eig_grad_set(n, k_shift, R, -1);
  for (long i = 0; i < samples; ++i) {
    const Jet J = s.jet(n);
    const double md = dual_of_plus.margin(J);
    rep.worst_gap_reflection = std::max(rep.worst_gap_reflection,
                                        std::abs(md - reflect.margin(J)));
    if (shifted)
      rep.worst_gap_shifted = std::max(rep.worst_gap_shifted,
                                       std::abs(md - shifted->margin(J)));
    ++rep.n_samples;
  }
  const double tol = 1e-9;
  rep.reflection_index_holds = rep.worst_gap_reflection <= tol;
  if (shifted)
    rep.shifted_index_holds = rep.worst_gap_shifted <= tol;
  else
    rep.shifted_index_holds = false;
  return rep;
}

}  // namespace jetpot
