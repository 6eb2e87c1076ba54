#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "jetpot/grid.hpp"
#include "jetpot/jets.hpp"
#include "jetpot/report.hpp"
#include "jetpot/rng.hpp"

namespace jetpot {

// Closed convex cone in R^n with vertex 0 and nonempty interior.
struct DirectionalCone {
  enum class Kind { Full, HalfSpace, Orthant, Circular, Parabolic };

  Kind kind{Kind::Full};
  Vec axis;          // HalfSpace / Circular
  int count{0};      // Orthant: q_j >= 0 for j < count
  double angle{0};   // Circular: half-angle in (0, pi/2)
  double slope{0};   // Parabolic: -q_n >= slope * |q'|

  static DirectionalCone full();
  static DirectionalCone half_space(Vec b);
  static DirectionalCone orthant(int k);
  static DirectionalCone circular(Vec b, double theta);
  static DirectionalCone parabolic(double gamma);

  bool proper() const { return kind != Kind::Full; }
  void check_dim(const Vec& q) const;  // PreconditionError on mismatch

  // Signed margin: >= 0 membership, > 0 interior; +inf for the full space.
  double margin(const Vec& q) const;
  bool member(const Vec& q, double tol) const { return margin(q) >= -tol; }
  bool interior(const Vec& q, double tol) const { return margin(q) > tol; }

  // Dual cone D~ = ~(-Int D); margin >= 0 iff member. -inf when empty (Full).
  double dual_margin(const Vec& q) const;

  // Convex-cone polar { q : <q,p> >= 0 for all p in D }.
  bool polar_member(const Vec& q, double tol) const;

  // A unit vector strictly interior to the cone.
  Vec interior_direction(int n) const;

  Vec sample(Sampler& s, int n) const;

  nlohmann::json to_json() const;
  static DirectionalCone from_json(const nlohmann::json& j);
};

// Monotonicity cones: the fundamental family M(gamma, D, R) with the
// conventions gamma = 0 for the r <= 0 half-line and R = +inf for A >= 0,
// plus the enlarged and product variants.
struct MonotonicityCone {
  enum class Kind {
    Fundamental,       // optional r-part (r <= -gamma |p|), D, optional A-part
    GeoMeanR,          // A >= 0 and (prod lambda_i)^(1/n) >= |p|/R
    DirectionalR,      // A >= 0 and <Ae,e> >= |<p,e>|/R for all unit e
    PucciR,            // lam tr A+ + Lam tr A- >= lam n |p|/R
    MinTraceR,         // lambda_min(A) + delta tr A >= |p|/R
    TraceEllipticity,  // r <= 0, p in D, A >= 0, lam tr A >= beta |p|
    ParabolicProduct,  // r <= 0, p in parabolic cone, spatial minor A' >= 0
    ZeroGradient,      // r <= 0, p = 0, A >= 0 (no interior)
  };
  enum class AMode { None, Psd, PsdRadius };

  Kind kind{Kind::Fundamental};
  std::optional<double> gamma;  // engaged r-constraint; 0 means r <= 0
  DirectionalCone D;            // Full means unconstrained gradient slot
  AMode a_mode{AMode::None};
  double R{0};            // PsdRadius / GeoMeanR / DirectionalR / PucciR / MinTraceR
  double lam{0}, Lam{0};  // PucciR / TraceEllipticity
  double delta{0};        // MinTraceR
  double beta{0};         // TraceEllipticity

  // Fundamental-family constructors (Remark-style conventions).
  static MonotonicityCone N();                                  // r <= 0
  static MonotonicityCone P();                                  // A >= 0
  static MonotonicityCone of_gamma(double gamma);               // r <= -gamma|p|
  static MonotonicityCone of_R(double R);                       // A >= (|p|/R) I
  static MonotonicityCone of_D(DirectionalCone D);              // p in D
  static MonotonicityCone NP();                                 // r <= 0, A >= 0
  static MonotonicityCone NDP(DirectionalCone D);               // r <= 0, p in D, A >= 0
  static MonotonicityCone fundamental(std::optional<double> gamma, DirectionalCone D,
                                      std::optional<double> R_finite, bool a_psd);
  // M(gamma, D, R): all three constraints engaged; R_finite empty means A >= 0.
  static MonotonicityCone gdr(double gamma, DirectionalCone D, std::optional<double> R_finite);

  static MonotonicityCone geo_mean_R(double R);
  static MonotonicityCone directional_R(double R);
  static MonotonicityCone pucci(double lam, double Lam, double R);
  static MonotonicityCone min_trace(double delta, double R);
  static MonotonicityCone trace_ellipticity(double lam, double beta, DirectionalCone D);
  static MonotonicityCone parabolic(double gamma);
  static MonotonicityCone zero_gradient();

  // Smallest defining-inequality margin; >= 0 iff member, > 0 iff interior
  // (for variants with interior).
  double member_margin(const Jet& J) const;
  bool has_interior() const { return kind != Kind::ZeroGradient; }

  std::string describe() const;
  nlohmann::json to_json() const;
  static MonotonicityCone from_json(const nlohmann::json& j);

  // Random member; constructive per variant, rejection for the rest.
  Jet sample(Sampler& s, int n) const;
  // Member with every engaged inequality active (on the cone boundary).
  Jet sample_tight(Sampler& s, int n) const;
  // Member of the closed-form polar (variants of polar_member only).
  Jet sample_polar(Sampler& s, int n) const;
};

bool cone_member(const MonotonicityCone& M, const Jet& J);
bool cone_interior(const MonotonicityCone& M, const Jet& J);

// Dirichlet dual membership. Fundamental/product variants use the
// closed-form disjunction of dualized factors; the rest use the
// definition M~ = ~(-Int M) directly.
bool cone_dual_member(const MonotonicityCone& M, const Jet& J);

// Closed-form polar membership; CapabilityError for variants without one.
bool polar_member(const MonotonicityCone& M, const Jet& J);

// Circular cones in jet space, C = { J : <J0,J> >= cos(theta) |J0| |J| }.
struct JetCircularCone {
  Jet axis;
  double theta{0};
  double margin(const Jet& J) const;
  bool member(const Jet& J, double tol) const { return margin(J) >= -tol; }
  JetCircularCone polar() const;  // half-angle pi/2 - theta
  // min of <J,J'> over unit J' in the cone (analytic minimizer).
  double min_inner(const Jet& J) const;
  Jet sample(Sampler& s) const;
};

// Embeds a fundamental-family cone inside an oracle-given monotonicity
// cone: perturb an interior jet to p != 0, fit a ball in the interior,
// rescale, and return (gamma, D, R) with M(gamma, D, R) inside the oracle.
struct EmbedResult {
  double gamma{0};
  DirectionalCone D;
  double R{0};
  Jet interior_point;
};
EmbedResult fundamental_embed(int n, const std::function<bool(const Jet&)>& member,
                              const std::function<bool(const Jet&)>& interior,
                              std::optional<Jet> probe, Sampler& s, long budget = 20000);

// Closed-form strict approximators: quadratic for the fundamental family,
// radial monomials for the enlarged R-cones, exponential for the
// trace-ellipticity cone. The descriptor carries exact jets.
struct ApproximatorDescriptor {
  enum class Form { Quadratic, Monomial, Exponential };
  Form form{Form::Quadratic};
  Vec y;            // base point (quadratic) or radial center (monomial/exponential)
  double c{0};      // quadratic: psi = -c + |x-y|^2 / 2
  int m{0};         // monomial: psi = |x-y|^(m+1)/(m+1) - shift
  double mu{0};     // exponential: psi = e^(mu |x-y|)/mu - shift
  double shift{0};

  double value(const Vec& x) const;
  Jet jet(const Vec& x) const;
  std::string describe() const;
  nlohmann::json to_json() const;
};

struct ApproximatorResult {
  ApproximatorDescriptor psi;
  VerificationReport report;  // worst interior margin over the grid
};

// Throws InfeasibleDomain when the domain cannot fit a finite-R cone.
ApproximatorResult strict_approximator(const MonotonicityCone& M, const GridDomain& grid);

}  // namespace jetpot
