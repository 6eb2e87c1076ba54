#pragma once

#include <optional>
#include <vector>

#include "jetpot/cones.hpp"
#include "jetpot/subeq.hpp"

namespace jetpot {

// Boundary crossing of the ray J + t J0: bracketing by geometric expansion,
// then bisection. The single crossing is guaranteed when S is monotone for
// a cone with J0 interior.
struct RaySolution {
  double t_J{0};
  double t_lo{0}, t_hi{0};
  int iterations{0};
  double residual{0};  // margin at the returned parameter
};

RaySolution solve_boundary_ray(const ConstraintSet& S, const Jet& J0, const Jet& J,
                               double tol = -1.0);

// Canonical operator value F(J) = -t_J. Default tolerance 1e-10 (1 + |J|).
double canonical_eval(const ConstraintSet& S, const Jet& J0, const Jet& J, double tol = -1.0);

// Dual operator F~(J) = -F(-J); agrees with the canonical operator of the
// dual margin.
double dual_canonical_eval(const ConstraintSet& S, const Jet& J0, const Jet& J,
                           double tol = -1.0);

// Hyperplane through the origin with the given normal jet.
struct Hyperplane {
  Jet normal;
};

// Graphing function of the boundary over W0: g(J') = -F(J'), so that
// J' + g(J') J0 lies on the boundary.
double graphing(const ConstraintSet& S, const Jet& J0, const Hyperplane& W0, const Jet& Jprime,
                double tol = -1.0);

// Seminorm pair (|J'|+, |J'|-) graphing the cone boundary over W0. The
// normal must sit in the relative interior of the polar of M (validated by
// sampling; GeometryError otherwise).
std::pair<double, double> lipschitz_seminorm(const MonotonicityCone& M, const Jet& J0,
                                             const Hyperplane& W0, const Jet& Jprime,
                                             Sampler& s);

// Family of proper elliptic linear operators <J_sigma, J>.
struct LinearFamily {
  std::vector<Jet> members;
  std::optional<Jet> axis;

  void validate() const;  // nonzero, a_sigma <= 0, E_sigma psd
};

struct Pointedness {
  bool pointed{false};
  Jet axis;
  double epsilon{0};
  long violating_index{-1};
};

// Pointedness of the coefficient set: <J_sigma, J0> >= eps |J_sigma| for a
// common axis. Without a supplied axis, the mean of the normalized members
// is tried.
Pointedness pointedness_check(const LinearFamily& S, std::optional<Jet> axis = {});

// inf / sup over the family of the renormalized values
// <J_sigma, J> / <J_sigma, J0>; precondition: pointed with this axis.
double family_op(const LinearFamily& S, bool sup_mode, const Jet& J0, const Jet& J);

// Unit directions covering the sphere: the exact angular grid in dimension
// two, a Fibonacci spiral in dimension three. Mesh size is O(N^(-1/(n-1))).
std::vector<Vec> sphere_directions(int n, int N);
double sphere_mesh_budget(int n, int N);

// Discretized minimum-eigenvalue-with-gradient-drift operator: the product
// family (0, eta_j / R, xi_i xi_i^T) over N directions per sphere factor.
// The infimum over pairs splits into the two single-index minima, which is
// what this evaluates.
double min_eig_grad_family(const std::vector<Vec>& dirs, double R, const Jet& J,
                           bool sup_mode = false);
double hjb_min_eig_grad(int N, double R, const Jet& J, bool sup_mode = false);
// Explicit member list of the same product family (for modest N).
LinearFamily hjb_family(int N, double R);

}  // namespace jetpot
