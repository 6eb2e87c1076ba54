#pragma once

#include <functional>
#include <optional>
#include <string>

#include "jetpot/jets.hpp"
#include "jetpot/report.hpp"
#include "jetpot/rng.hpp"

namespace jetpot {

// Hyperbolic polynomial on S(n) (or on R x S(n) after the gradient-free
// lift), normalized so the evaluation in the hyperbolicity direction is 1.
// The direction is kappa*I for pure second order polynomials (kappa = 1 for
// det and the k-Hessians, 1/k for the k-fold-sum families so their
// eigenvalues are the sums themselves) and (-1/2, I/2) after the lift.
// Eigenvalues come from an oracle-only root extraction: sample the
// univariate restriction at Chebyshev nodes, fit the monic coefficients,
// take companion-matrix eigenvalues.
class GardingPolynomial {
 public:
  // The normalization constant 1/eval(dir_scale * I) is computed by
  // evaluation unless supplied (construction-time evaluation at multiples
  // of the identity hits repeated roots in derived oracles).
  static GardingPolynomial from_oracle(std::string name, int degree, int n,
                                       std::function<double(const Mat&)> eval,
                                       double dir_scale = 1.0,
                                       std::optional<double> normalization = {});
  static GardingPolynomial determinant(int n);
  static GardingPolynomial sigma_k(int n, int k);  // k-Hessian
  static GardingPolynomial tau_k(int n, int k);    // geometric k-convexity

  // Parse catalog names: det | sigma_k:<k> | tau_k:<k> | lifted:<name> |
  // derived:<I|II|III>:<param>:<base>.
  static GardingPolynomial parse(const std::string& name, int n);

  double operator()(const Mat& A) const;
  double operator()(double r, const Mat& A) const;  // lifted evaluation

  const std::string& name() const { return name_; }
  int degree() const { return degree_; }
  int dim() const { return n_; }
  bool lifted() const { return lifted_; }
  // Scale kappa of the hyperbolicity direction kappa*I (pure second order).
  double direction_scale() const { return dir_scale_; }

 private:
  friend GardingPolynomial lift_gradient_free(const GardingPolynomial&);
  friend Vec garding_eigs(const GardingPolynomial&, double, const Mat&);

  std::string name_;
  int degree_{0};
  int n_{0};
  bool lifted_{false};
  // Raw oracle on (r, A); r ignored when not lifted. Normalization factor
  // applied on top.
  std::function<double(double, const Mat&)> raw_;
  double scale_{1.0};
  // Hyperbolicity direction: (0, kappa I) pure second order, (-1/2, I/2)
  // lifted.
  double dir_r_{0.0};
  double dir_scale_{1.0};
};

// Roots of t -> g(input + t * direction), negated and sorted ascending.
Vec garding_eigs(const GardingPolynomial& g, const Mat& A);
Vec garding_eigs(const GardingPolynomial& g, double r, const Mat& A);

// k-th ordered eigenvalue (k in 1..m); branch membership is margin >= -tol.
double branch_margin(const GardingPolynomial& g, int k, const Mat& A);
double branch_margin(const GardingPolynomial& g, int k, double r, const Mat& A);

// g~(r, A) := g(A - rI); eigenvalues shift to lambda_k(A) - r.
GardingPolynomial lift_gradient_free(const GardingPolynomial& g);

// The three derived constructions: directional derivatives along I,
// k-fold eigenvalue sums, and epsilon-elliptic regularization.
struct DeriveSpec {
  enum class Method { PartialI, SumsII, RegularizeIII };
  Method method{Method::SumsII};
  int k{1};
  double eps{0.0};
};
GardingPolynomial derive(const GardingPolynomial& g, const DeriveSpec& spec);

// Strict cone monotonicity of the ordered eigenvalues: lambda_k(A + B) >
// lambda_k(A) for B interior to the cone.
VerificationReport strict_monotone_check(const GardingPolynomial& g, long samples, uint64_t seed);

// Roots of a real monic polynomial via its companion matrix. coeffs are
// c_0..c_{m-1} with p(t) = t^m + c_{m-1} t^{m-1} + ... + c_0.
std::vector<std::complex<double>> companion_roots(const std::vector<double>& coeffs);

}  // namespace jetpot
