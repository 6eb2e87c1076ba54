#include "jetpot/garding.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace jetpot {

namespace {

// Elementary symmetric polynomial sigma_k of the entries of w.
double elementary_symmetric(const Vec& w, int k) {
  const int n = static_cast<int>(w.size());
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  // DP over prefix: e[j] after i entries.
  std::vector<double> e(static_cast<size_t>(k) + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::min(k, i + 1); j >= 1; --j) e[j] += w(i) * e[j - 1];
  return e[k];
}

void subsets_rec(int n, int k, int start, std::vector<int>& cur,
                 const std::function<void(const std::vector<int>&)>& f) {
  if (static_cast<int>(cur.size()) == k) {
    f(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    subsets_rec(n, k, i + 1, cur, f);
    cur.pop_back();
  }
}

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::vector<std::complex<double>> companion_roots(const std::vector<double>& coeffs) {
  const int m = static_cast<int>(coeffs.size());
  if (m == 0) return {};
  Mat C = Mat::Zero(m, m);
  for (int i = 1; i < m; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) C(i, m - 1) = -coeffs[i];
  Eigen::EigenSolver<Mat> es(C, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> roots(m);
  for (int i = 0; i < m; ++i) roots[static_cast<size_t>(i)] = es.eigenvalues()(i);
  return roots;
}

GardingPolynomial GardingPolynomial::from_oracle(std::string name, int degree, int n,
                                                 std::function<double(const Mat&)> eval,
                                                 double dir_scale,
                                                 std::optional<double> normalization) {
  if (!(dir_scale > 0)) throw PreconditionError("direction scale must be positive");
  GardingPolynomial g;
  g.name_ = std::move(name);
  g.degree_ = degree;
  g.n_ = n;
  g.dir_scale_ = dir_scale;
  g.raw_ = [eval = std::move(eval)](double, const Mat& A) { return eval(A); };
  if (normalization) {
    g.scale_ = *normalization;
    return g;
  }
  const double gdir = g.raw_(0.0, dir_scale * Mat::Identity(n, n));
  if (!(gdir > 0)) throw PreconditionError("g(direction) must be positive");
  g.scale_ = 1.0 / gdir;
  return g;
}

GardingPolynomial GardingPolynomial::determinant(int n) {
  return from_oracle("det", n, n, [](const Mat& A) { return A.determinant(); });
}

GardingPolynomial GardingPolynomial::sigma_k(int n, int k) {
  if (k < 1 || k > n) throw PreconditionError("sigma_k: 1 <= k <= n");
  return from_oracle("sigma_" + std::to_string(k), k, n, [k](const Mat& A) {
    return elementary_symmetric(sym_eigs(A), k);
  });
}

GardingPolynomial GardingPolynomial::tau_k(int n, int k) {
  if (k < 1 || k > n) throw PreconditionError("tau_k: 1 <= k <= n");
  const int deg = static_cast<int>(binomial(n, k));
  // Direction I/k: the k-fold sums move with unit slope along it, so they
  // are the eigenvalues themselves.
  return from_oracle(
      "tau_" + std::to_string(k), deg, n,
      [n, k](const Mat& A) {
        const Vec w = sym_eigs(A);
        double prod = 1.0;
        std::vector<int> cur;
        subsets_rec(n, k, 0, cur, [&](const std::vector<int>& idx) {
          double s = 0.0;
          for (int i : idx) s += w(i);
          prod *= s;
        });
        return prod;
      },
      1.0 / k);
}

GardingPolynomial GardingPolynomial::parse(const std::string& name, int n) {
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (true) {
      const size_t next = s.find(sep, pos);
      out.push_back(s.substr(pos, next - pos));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    return out;
  };
  const auto parts = split(name, ':');
  if (parts[0] == "det") return determinant(n);
  if (parts[0] == "sigma_k") return sigma_k(n, parts.size() > 1 ? std::stoi(parts[1]) : n);
  if (parts[0] == "tau_k") return tau_k(n, parts.size() > 1 ? std::stoi(parts[1]) : 1);
  if (parts[0] == "lifted") {
    if (parts.size() < 2) throw PreconditionError("lifted:<name>");
    return lift_gradient_free(parse(name.substr(7), n));
  }
  if (parts[0] == "derived") {
    if (parts.size() < 4) throw PreconditionError("derived:<I|II|III>:<param>:<base>");
    DeriveSpec spec;
    if (parts[1] == "I")
      spec = {DeriveSpec::Method::PartialI, std::stoi(parts[2]), 0.0};
    else if (parts[1] == "II")
      spec = {DeriveSpec::Method::SumsII, std::stoi(parts[2]), 0.0};
    else if (parts[1] == "III")
      spec = {DeriveSpec::Method::RegularizeIII, 0, std::stod(parts[2])};
    else
      throw PreconditionError("derived method must be I, II or III");
    std::string base;
    for (size_t i = 3; i < parts.size(); ++i) base += (i > 3 ? ":" : "") + parts[i];
    return derive(parse(base, n), spec);
  }
  throw PreconditionError("unknown polynomial: " + name);
}

double GardingPolynomial::operator()(const Mat& A) const {
  if (lifted_) throw PreconditionError(name_ + " expects a (r, A) pair");
  return scale_ * raw_(0.0, A);
}

double GardingPolynomial::operator()(double r, const Mat& A) const {
  return scale_ * raw_(r, A);
}

namespace {

Vec eigs_from_univariate(const GardingPolynomial& g,
                         const std::function<double(double)>& q, int m, double s) {
  // Fit monic coefficients from m+1 Chebyshev nodes scaled to [-s, s].
  Mat V(m + 1, m);
  Vec rhs(m + 1);
  for (int j = 0; j <= m; ++j) {
    const double t = s * std::cos(M_PI * (j + 0.5) / (m + 1));
    double tp = 1.0;
    for (int c = 0; c < m; ++c) {
      V(j, c) = tp;
      tp *= t;
    }
    rhs(j) = q(t) - tp;  // tp == t^m here
  }
  Vec coeff = V.colPivHouseholderQr().solve(rhs);
  const auto roots = companion_roots(std::vector<double>(coeff.data(), coeff.data() + m));
  Vec eigs(m);
  for (int i = 0; i < m; ++i) {
    if (std::abs(roots[static_cast<size_t>(i)].imag()) > 1e-6 * s)
      throw HyperbolicityError(g.name() + ": complex roots beyond tolerance; input outside "
                                          "the hyperbolic class");
    eigs(i) = -roots[static_cast<size_t>(i)].real();
  }
  std::sort(eigs.data(), eigs.data() + m);
  return eigs;
}

}  // namespace

Vec garding_eigs(const GardingPolynomial& g, const Mat& A) {
  if (g.lifted()) throw PreconditionError(g.name() + " expects a (r, A) pair");
  require_symmetric(A);
  const int m = g.degree();
  const double kappa = g.direction_scale();
  // Eigenvalues are positively homogeneous; normalizing the input keeps the
  // Chebyshev fit uniformly conditioned across matrix scales.
  const double c = A.norm();
  if (!(c > 0)) return Vec::Zero(m);
  const Mat As = symmetrized(A) / c;
  const double s = 2.0 * (1.0 + As.norm()) * std::max(1.0, 1.0 / kappa);
  const Mat dir = kappa * Mat::Identity(A.rows(), A.cols());
  return c * eigs_from_univariate(g, [&](double t) { return g(As + t * dir); }, m, s);
}

Vec garding_eigs(const GardingPolynomial& g, double r, const Mat& A) {
  if (!g.lifted()) throw PreconditionError(g.name() + " is pure second order");
  require_symmetric(A);
  const int m = g.degree();
  const double c = std::abs(r) + A.norm();
  if (!(c > 0)) return Vec::Zero(m);
  const double rs = r / c;
  const Mat As = symmetrized(A) / c;
  const double s = 2.0 * (1.0 + std::abs(rs) + As.norm());
  const Mat I = Mat::Identity(A.rows(), A.cols());
  // Direction (-1/2, I/2): g((r,A) + t dir) = g~(r - t/2, A + t I/2).
  return c * eigs_from_univariate(
                 g, [&](double t) { return g(rs + t * g.dir_r_, As + 0.5 * t * I); }, m, s);
}

double branch_margin(const GardingPolynomial& g, int k, const Mat& A) {
  if (k < 1 || k > g.degree()) throw PreconditionError("branch index out of range");
  return garding_eigs(g, A)(k - 1);
}

double branch_margin(const GardingPolynomial& g, int k, double r, const Mat& A) {
  if (k < 1 || k > g.degree()) throw PreconditionError("branch index out of range");
  return garding_eigs(g, r, A)(k - 1);
}

GardingPolynomial lift_gradient_free(const GardingPolynomial& g) {
  if (g.lifted()) throw PreconditionError("already lifted");
  if (g.direction_scale() != 1.0)
    throw PreconditionError("lift expects a polynomial with direction I");
  GardingPolynomial h;
  h.name_ = "lifted:" + g.name_;
  h.degree_ = g.degree_;
  h.n_ = g.n_;
  h.lifted_ = true;
  h.dir_r_ = -0.5;
  h.raw_ = [g](double r, const Mat& A) {
    return g(A - r * Mat::Identity(A.rows(), A.cols()));
  };
  // Normalized at the direction point (-1/2, I/2): g(I/2 + I/2) = g(I) = 1.
  h.scale_ = 1.0;
  return h;
}

GardingPolynomial derive(const GardingPolynomial& g, const DeriveSpec& spec) {
  if (g.lifted()) throw PreconditionError("derive expects a pure second order polynomial");
  const int m = g.degree();
  const int n = g.dim();
  switch (spec.method) {
    case DeriveSpec::Method::PartialI: {
      if (spec.k < 1 || spec.k >= m) throw PreconditionError("PartialI: 1 <= k < m");
      const int k = spec.k;
      return GardingPolynomial::from_oracle(
          "derived:I:" + std::to_string(k) + ":" + g.name(), m - k, n, [g, k, m](const Mat& A) {
            return elementary_symmetric(garding_eigs(g, A), m - k);
          },
          g.direction_scale(), 1.0 / static_cast<double>(binomial(m, m - k)));
    }
    case DeriveSpec::Method::SumsII: {
      if (spec.k < 1 || spec.k > m) throw PreconditionError("SumsII: 1 <= k <= m");
      const int k = spec.k;
      const int deg = static_cast<int>(binomial(m, k));
      // k-fold sums move with slope k along the base direction.
      return GardingPolynomial::from_oracle(
          "derived:II:" + std::to_string(k) + ":" + g.name(), deg, n,
          [g, k, m](const Mat& A) {
            const Vec w = garding_eigs(g, A);
            double prod = 1.0;
            std::vector<int> cur;
            subsets_rec(m, k, 0, cur, [&](const std::vector<int>& idx) {
              double sum = 0.0;
              for (int i : idx) sum += w(i);
              prod *= sum;
            });
            return prod;
          },
          g.direction_scale() / k, 1.0);
    }
    case DeriveSpec::Method::RegularizeIII: {
      if (!(spec.eps > 0)) throw PreconditionError("RegularizeIII: eps > 0");
      const double eps = spec.eps;
      // Each factor moves with slope 1 + eps m along the base direction.
      return GardingPolynomial::from_oracle(
          "derived:III:" + std::to_string(eps) + ":" + g.name(), m, n,
          [g, eps](const Mat& A) {
            const Vec w = garding_eigs(g, A);
            const double tr = w.sum();
            double prod = 1.0;
            for (int i = 0; i < w.size(); ++i) prod *= w(i) + eps * tr;
            return prod;
          },
          g.direction_scale() / (1.0 + eps * m), 1.0);
    }
  }
  throw PreconditionError("unknown derive method");
}

VerificationReport strict_monotone_check(const GardingPolynomial& g, long samples,
                                         uint64_t seed) {
  Sampler s(seed);
  VerificationReport rep;
  rep.seed = seed;
  rep.pass = true;
  const int n = g.dim();
  for (long i = 0; i < samples; ++i) {
    const Mat A = s.sym(n);
    // B in the open cone: shift a random C onto the cone boundary along
    // the hyperbolicity direction, then push inside by a random eps.
    Mat C = s.sym(n);
    const Vec wc = garding_eigs(g, C);
    const double eps = 0.01 + std::abs(s.uniform(0.0, 1.0)) * s.magnitude();
    const Mat B =
        C + (eps - wc(0)) * g.direction_scale() * Mat::Identity(n, n);
    const Vec before = garding_eigs(g, A);
    const Vec after = garding_eigs(g, A + B);
    for (int k = 0; k < g.degree(); ++k) {
      const double margin = after(k) - before(k);
      ++rep.n_samples;
      if (margin < rep.worst_margin) rep.worst_margin = margin;
      if (!(margin > 0)) {
        rep.pass = false;
        rep.witness = Jet{0.0, Vec::Zero(n), A};
        rep.witness_pair = Jet{0.0, Vec::Zero(n), B};
        rep.note = "strict cone monotonicity violated at branch " + std::to_string(k + 1);
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace jetpot
