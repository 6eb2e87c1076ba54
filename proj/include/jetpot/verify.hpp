#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jetpot/grid.hpp"
#include "jetpot/subeq.hpp"

namespace jetpot {

// Function with a jet oracle: analytic jets where available, otherwise the
// finite-difference fallback.
struct FunctionOracle {
  std::function<double(const Vec&)> value;
  std::function<Jet(const Vec&)> jet;

  static FunctionOracle radial(RadialProfile psi);
  static FunctionOracle from_value(std::function<double(const Vec&)> f, double h = -1.0);
  static FunctionOracle constant(double c, int n);
  static FunctionOracle quadratic(const Jet& J0, const Vec& x0);
};

enum class InclusionMode { Sub, Harmonic, Super };

// Grid membership of the function's jets in the constraint set:
// sub requires margin >= -gridtol at all interior points, harmonic
// |margin| <= gridtol, super is sub for the dual margin of -u.
VerificationReport jet_inclusion_check(const ConstraintSet& S, const FunctionOracle& u,
                                       const GridDomain& grid, InclusionMode mode,
                                       double gridtol = 1e-9);

// One-dimensional reduction for radial profiles: a conjunction or
// disjunction of inequalities in (t, psi, psi', psi'').
struct RadialDescriptor {
  enum class Combine { All, Any };
  Combine combine{Combine::All};
  std::vector<std::function<double(double, double, double, double)>> margins;
  std::string name;
};

// Catalog of radial descriptors for the shipped scenarios.
RadialDescriptor radial_alpha_min(double alpha);        // both inequalities
RadialDescriptor radial_alpha_max(double alpha);        // either inequality
RadialDescriptor radial_alpha_min_dual(double alpha);   // either, reflected sign
RadialDescriptor radial_alpha_max_dual(double alpha);   // both, reflected sign
RadialDescriptor radial_dual_R(double R);               // lambda_max + |psi'|/R >= 0

VerificationReport radial_check(const RadialDescriptor& cond, const RadialProfile& profile,
                                const std::vector<double>& t_grid, InclusionMode mode,
                                double tol = 1e-9);

// Randomized search for strict upper test jets of u at x0: quadratics
// Q_J with u - Q_J <= -eps |x - x0|^2 on sampled points. Absence over the
// budget is evidence, not proof.
std::vector<Jet> bad_test_jet_search(const std::function<double(const Vec&)>& u, const Vec& x0,
                                     double radius, int budget, uint64_t seed);

// Scenario outputs: a JSON report with the verdict, tolerances, key numbers
// and pass/fail; CSV rows of per-point margins on request.
struct ScenarioReport {
  std::string scenario;
  bool pass{false};
  json data;

  std::vector<std::string> csv_rows;  // "x...,margin,verdict" lines
  std::string csv_header;

  json to_json() const;
};

// Maximum principle failure on a large ball: u = |x| - |x|^2/(2R) is
// subharmonic for the dual R-cone everywhere off the origin yet peaks at
// |x| = R with value R/2 inside any larger ball.
ScenarioReport scenario_zmp_failure(double R, double Rprime, int n, double h);

// Comparison failure on arbitrarily small balls: z = 0 and the radial bump
// h share boundary values yet both solve the same two equations.
ScenarioReport scenario_small_ball_failure(double alpha, double R, double h,
                                           uint64_t seed = 42);

// Gradient-free dual characterization: jet-level equivalence with the
// positive-part subaffine condition, plus the one-dimensional example
// showing the plain a+ comparison form fails.
ScenarioReport scenario_subaffine_plus(uint64_t seed = 42);

// u sub, w super (verified first), boundary inequality, then interior
// verdict; parabolic mode ignores the top time face.
VerificationReport comparison_check(const ConstraintSet& S, const FunctionOracle& u,
                                    const FunctionOracle& w, const GridDomain& grid,
                                    bool parabolic_boundary, double gridtol = 1e-9);

// Strictly subharmonic one-parameter approximations: every member strictly
// inside on the grid, sup-gap to the target vanishing at an O(eps) rate.
struct StrictSequence {
  std::vector<double> epsilons;
  std::function<FunctionOracle(double)> member;
  FunctionOracle target;
  std::string name;
};
ScenarioReport strict_sequence_check(const ConstraintSet& S, const StrictSequence& seq,
                                     const GridDomain& grid);

}  // namespace jetpot
