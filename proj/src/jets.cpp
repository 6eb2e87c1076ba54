#include "jetpot/jets.hpp"

#include <cmath>

namespace jetpot {

double inner(const Jet& a, const Jet& b) {
  return a.r * b.r + a.p.dot(b.p) + (a.A.array() * b.A.array()).sum();
}

double norm(const Jet& a) { return std::sqrt(inner(a, a)); }

bool is_symmetric(const Mat& A) {
  if (A.rows() != A.cols()) return false;
  const double tol = 1e-9 * (1.0 + A.norm());
  return (A - A.transpose()).cwiseAbs().maxCoeff() <= tol;
}

void require_symmetric(const Mat& A) {
  if (!is_symmetric(A)) throw PreconditionError("matrix is not symmetric within tolerance");
}

Mat symmetrized(const Mat& A) { return 0.5 * (A + A.transpose()); }

Vec sym_eigs(const Mat& A) {
  require_symmetric(A);
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(A), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

std::pair<Vec, Mat> sym_eigs_vectors(const Mat& A) {
  require_symmetric(A);
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized(A));
  return {es.eigenvalues(), es.eigenvectors()};
}

double lambda_min(const Mat& A) { return sym_eigs(A)(0); }
double lambda_max(const Mat& A) {
  const Vec w = sym_eigs(A);
  return w(w.size() - 1);
}

std::pair<Mat, Mat> projections(const Vec& x) {
  const double nx = x.norm();
  if (!(nx > 0.0)) throw std::domain_error("projections: x must be nonzero");
  Mat Px = (x * x.transpose()) / (nx * nx);
  Mat Pperp = Mat::Identity(x.size(), x.size()) - Px;
  return {std::move(Px), std::move(Pperp)};
}

RadialProfile RadialProfile::power(double m, double shift) {
  return {
      [m, shift](double t) { return std::pow(t, m + 1.0) / (m + 1.0) + shift; },
      [m](double t) { return std::pow(t, m); },
      [m](double t) { return m * std::pow(t, m - 1.0); },
  };
}

RadialProfile RadialProfile::exponential(double a, double c, double shift) {
  return {
      [a, c, shift](double t) { return c * std::exp(a * t) + shift; },
      [a, c](double t) { return c * a * std::exp(a * t); },
      [a, c](double t) { return c * a * a * std::exp(a * t); },
  };
}

RadialProfile RadialProfile::quadratic(double a, double b, double c) {
  return {
      [a, b, c](double t) { return 0.5 * a * t * t + b * t + c; },
      [a, b](double t) { return a * t + b; },
      [a](double) { return a; },
  };
}

Jet radial_jet(const RadialProfile& profile, const Vec& x) {
  const double t = x.norm();
  if (!(t > 0.0)) throw std::domain_error("radial_jet: singular at the origin");
  const double v = profile.psi(t);
  const double d1 = profile.dpsi(t);
  const double d2 = profile.ddpsi(t);
  if (!std::isfinite(v) || !std::isfinite(d1) || !std::isfinite(d2))
    throw EvaluationError("radial_jet: profile not finite at |x|");
  auto [Px, Pperp] = projections(x);
  return {v, d1 / t * x, (d1 / t) * Pperp + d2 * Px};
}

Jet fd_jet(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  const int n = static_cast<int>(x.size());
  if (h <= 0.0) h = 1e-4 * (1.0 + x.norm());
  auto eval = [&](const Vec& y) {
    const double v = f(y);
    if (!std::isfinite(v)) throw EvaluationError("fd_jet: non-finite sample");
    return v;
  };
  Jet J = Jet::zero(n);
  const double f0 = eval(x);
  J.r = f0;
  std::vector<double> fp(n), fm(n);
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e(i) = h;
    fp[i] = eval(x + e);
    fm[i] = eval(x - e);
    J.p(i) = (fp[i] - fm[i]) / (2.0 * h);
    J.A(i, i) = (fp[i] - 2.0 * f0 + fm[i]) / (h * h);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Vec ei = Vec::Zero(n), ej = Vec::Zero(n);
      ei(i) = h;
      ej(j) = h;
      const double v = (eval(x + ei + ej) - eval(x + ei - ej) - eval(x - ei + ej) +
                        eval(x - ei - ej)) /
                       (4.0 * h * h);
      J.A(i, j) = v;
      J.A(j, i) = v;
    }
  }
  return J;
}

}  // namespace jetpot
