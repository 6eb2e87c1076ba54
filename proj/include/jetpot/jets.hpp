#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "jetpot/errors.hpp"

namespace jetpot {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A 2-jet (r, p, A): value, gradient and Hessian slots.
struct Jet {
  double r{0.0};
  Vec p;
  Mat A;

  Jet() = default;
  Jet(double r_, Vec p_, Mat A_) : r(r_), p(std::move(p_)), A(std::move(A_)) {}

  static Jet zero(int n) { return {0.0, Vec::Zero(n), Mat::Zero(n, n)}; }
  int dim() const { return static_cast<int>(p.size()); }

  Jet& operator+=(const Jet& o) {
    r += o.r;
    p += o.p;
    A += o.A;
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    r -= o.r;
    p -= o.p;
    A -= o.A;
    return *this;
  }
  Jet& operator*=(double t) {
    r *= t;
    p *= t;
    A *= t;
    return *this;
  }
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(double t, Jet a) { return a *= t; }
inline Jet operator-(const Jet& a) { return {-a.r, -a.p, -a.A}; }

// Inner product r s + <p,q> + tr(A B); the pairing used by linear
// operators on jets and by polar cones.
double inner(const Jet& a, const Jet& b);
double norm(const Jet& a);

// Scaled membership tolerance used throughout: 1e-9 * (1 + |J|).
inline double jet_tol(const Jet& J) { return 1e-9 * (1.0 + norm(J)); }

// Symmetry guard: max |A_ij - A_ji| <= 1e-9 * (1 + |A|_F).
bool is_symmetric(const Mat& A);
void require_symmetric(const Mat& A);
Mat symmetrized(const Mat& A);

// Eigenvalues ascending. Input is symmetrized after the symmetry check.
Vec sym_eigs(const Mat& A);
// Eigenvalues ascending plus the orthogonal factor Q with A = Q diag(w) Q^T.
std::pair<Vec, Mat> sym_eigs_vectors(const Mat& A);
double lambda_min(const Mat& A);
double lambda_max(const Mat& A);

// Orthogonal projections onto [x] and [x]^perp; x must be nonzero.
std::pair<Mat, Mat> projections(const Vec& x);

// Radial profile psi supplied with its first two derivatives as oracles.
struct RadialProfile {
  std::function<double(double)> psi;
  std::function<double(double)> dpsi;
  std::function<double(double)> ddpsi;

  // psi(t) = t^(m+1)/(m+1) + shift
  static RadialProfile power(double m, double shift = 0.0);
  // psi(t) = c * e^(a t) + shift
  static RadialProfile exponential(double a, double c = 1.0, double shift = 0.0);
  // psi(t) = a t^2/2 + b t + c
  static RadialProfile quadratic(double a, double b = 0.0, double c = 0.0);
};

// 2-jet of x -> psi(|x|) at x != 0:
//   ( psi(t), psi'(t) x/t, (psi'(t)/t) P_xperp + psi''(t) P_x ),  t = |x|.
Jet radial_jet(const RadialProfile& profile, const Vec& x);

// Central-difference 2-jet of a scalar function; O(h^2) for C^4 data.
// Default step h = 1e-4 * (1 + |x|).
Jet fd_jet(const std::function<double(const Vec&)>& f, const Vec& x, double h = -1.0);

}  // namespace jetpot
