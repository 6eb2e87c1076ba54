#pragma once

#include <functional>
#include <optional>
#include <string>

#include "jetpot/cones.hpp"
#include "jetpot/jets.hpp"
#include "jetpot/report.hpp"
#include "jetpot/rng.hpp"

namespace jetpot {

// A subequation constraint set represented by a signed margin function,
// F = { margin >= 0 }. Margins are the canonical representation; the zero
// set of a tame margin is the boundary of F.
struct ConstraintSet {
  std::string name;
  int n{0};
  std::function<double(const Jet&)> margin;
  std::optional<MonotonicityCone> monotone_cone;
  struct SilentAxes {
    bool r{false}, p{false}, A{false};
  } silent;
  std::optional<bool> tame;
  bool dual_degraded{false};  // set when duality was flagged unreliable

  double operator()(const Jet& J) const { return margin(J); }
  bool member(const Jet& J) const { return margin(J) >= -jet_tol(J); }
};

// Dirichlet dual via margins: m~(J) = -m(-J). The double dual returns the
// original margin exactly. Margins whose zero set has interior (non-tame)
// get the degraded flag.
ConstraintSet dual_margin(const ConstraintSet& S);

// Wrap a Boolean membership oracle as a +1/-1 margin. The zero set is no
// longer the boundary, so the set is flagged non-tame and its dual carries
// the degraded flag.
ConstraintSet from_indicator(std::string name, int n, std::function<bool(const Jet&)> member);

// Admissible-level interval of a compatible pair.
struct Interval {
  double lo{-std::numeric_limits<double>::infinity()};
  double hi{std::numeric_limits<double>::infinity()};
  bool lo_open{false}, hi_open{false};
  bool approximate{false};
  bool contains(double c) const {
    if (lo_open ? !(c > lo) : !(c >= lo)) return false;
    if (hi_open ? !(c < hi) : !(c <= hi)) return false;
    return true;
  }
  json to_json() const;
};

// Operator together with its constraint set (or unconstrained), the
// boundary level c0, and the admissible levels.
struct CompatiblePair {
  std::string name;
  int n{0};
  std::function<double(const Jet&)> op;
  std::optional<ConstraintSet> constraint;
  double c0{-std::numeric_limits<double>::infinity()};
  Interval levels;
  std::optional<MonotonicityCone> cone;

  bool constrained() const { return constraint.has_value(); }
};

// Upper level set F_c = { J in F : op(J) >= c } as a margin:
// min(constraint margin, op - c) constrained, op - c unconstrained.
ConstraintSet level_set(const CompatiblePair& P, double c);

// Rejection sampling for members of a margin set, with a boundary-pinning
// bisection helper. Budgets are hard caps; starvation is reported, not hidden.
std::optional<Jet> find_member(const ConstraintSet& S, Sampler& s, long budget);
// Bisect between a member and a non-member to a jet with margin in [0, width].
Jet pin_to_boundary(const ConstraintSet& S, Jet inside, Jet outside, double width);

// F + M subset F, sampled; when an operator is supplied its monotonicity is
// asserted along the same draws. Violations return the witness pair.
VerificationReport monotonicity_check(const ConstraintSet& S, const MonotonicityCone& M,
                                      long n_samples, uint64_t seed,
                                      const std::function<double(const Jet&)>* op = nullptr);

// Strict increase of the operator along an interior cone direction.
VerificationReport tameness_check(const CompatiblePair& P, const Jet& J0, long samples,
                                  uint64_t seed);

// inf_F op finite and boundary = { op = c0 }: sampled both ways.
VerificationReport compatibility_check(const CompatiblePair& P, long samples, uint64_t seed);

// Equivalence F + F~ in H  <=>  F + H~ in F, tested by sampling both
// inclusions; the report's verdict is their agreement.
VerificationReport jet_addition_check(const ConstraintSet& F, const ConstraintSet& H,
                                      long samples, uint64_t seed);

// Margin catalog used across modules and tests.
ConstraintSet convexity_set(int n);                   // lambda_min(A) >= 0
ConstraintSet subaffine_set(int n);                   // lambda_max(A) >= 0
ConstraintSet plurisubharmonic_set(int n, int k);     // lambda_1 + ... + lambda_k >= 0
ConstraintSet negative_convex_set(int n);             // min(-r, lambda_min(A)) >= 0
ConstraintSet subaffine_plus_set(int n);              // max(-r, lambda_max(A)) >= 0
ConstraintSet halfspace_set(const Jet& coeff);        // <coeff, J> >= 0
ConstraintSet eig_grad_set(int n, int k, double R, int sign);  // lambda_k(A) +/- |p|/R >= 0
ConstraintSet cone_as_constraint(const MonotonicityCone& M, int n);
// Upper/lower branch sets of the small-ball family:
//   B(p, A) = A + |p|^((a-1)/a) (P_perp + a P_p),  B(0, A) = A.
Mat alpha_family_B(double alpha, const Vec& p, const Mat& A);
ConstraintSet alpha_min_set(int n, double alpha);  // lambda_min(B) >= 0
ConstraintSet alpha_max_set(int n, double alpha);  // lambda_max(B) >= 0

}  // namespace jetpot
