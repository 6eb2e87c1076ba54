#include "jetpot/cones.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace jetpot {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// DirectionalCone
// ---------------------------------------------------------------------------

DirectionalCone DirectionalCone::full() { return {}; }

DirectionalCone DirectionalCone::half_space(Vec b) {
  if (b.norm() <= 0) throw PreconditionError("half_space: zero axis");
  DirectionalCone d;
  d.kind = Kind::HalfSpace;
  d.axis = b / b.norm();
  return d;
}

DirectionalCone DirectionalCone::orthant(int k) {
  if (k < 1) throw PreconditionError("orthant: need k >= 1");
  DirectionalCone d;
  d.kind = Kind::Orthant;
  d.count = k;
  return d;
}

DirectionalCone DirectionalCone::circular(Vec b, double theta) {
  if (b.norm() <= 0) throw PreconditionError("circular: zero axis");
  if (!(theta > 0 && theta < M_PI / 2)) throw PreconditionError("circular: theta in (0, pi/2)");
  DirectionalCone d;
  d.kind = Kind::Circular;
  d.axis = b / b.norm();
  d.angle = theta;
  return d;
}

DirectionalCone DirectionalCone::parabolic(double gamma) {
  if (gamma < 0) throw PreconditionError("parabolic: gamma >= 0");
  DirectionalCone d;
  d.kind = Kind::Parabolic;
  d.slope = gamma;
  return d;
}

void DirectionalCone::check_dim(const Vec& q) const {
  switch (kind) {
    case Kind::HalfSpace:
    case Kind::Circular:
      if (axis.size() != q.size())
        throw PreconditionError("directional cone: dimension mismatch");
      break;
    case Kind::Orthant:
      if (count > q.size()) throw PreconditionError("directional cone: dimension mismatch");
      break;
    case Kind::Parabolic:
      if (q.size() < 2) throw PreconditionError("parabolic cone needs dimension >= 2");
      break;
    default:
      break;
  }
}

double DirectionalCone::margin(const Vec& q) const {
  check_dim(q);
  switch (kind) {
    case Kind::Full:
      return kInf;
    case Kind::HalfSpace:
      return axis.dot(q);
    case Kind::Orthant: {
      double m = kInf;
      for (int j = 0; j < count; ++j) m = std::min(m, q(j));
      return m;
    }
    case Kind::Circular:
      return axis.dot(q) - std::cos(angle) * q.norm();
    case Kind::Parabolic: {
      const int n = static_cast<int>(q.size());
      return -q(n - 1) - slope * q.head(n - 1).norm();
    }
  }
  return -kInf;
}

double DirectionalCone::dual_margin(const Vec& q) const {
  check_dim(q);
  switch (kind) {
    case Kind::Full:
      return -kInf;  // dual of the full space is empty
    case Kind::HalfSpace:
      return axis.dot(q);  // self-dual
    case Kind::Orthant: {
      double m = -kInf;
      for (int j = 0; j < count; ++j) m = std::max(m, q(j));
      return m;
    }
    case Kind::Circular:
      return axis.dot(q) + std::cos(angle) * q.norm();
    case Kind::Parabolic: {
      const int n = static_cast<int>(q.size());
      return slope * q.head(n - 1).norm() - q(n - 1);
    }
  }
  return -kInf;
}

bool DirectionalCone::polar_member(const Vec& q, double tol) const {
  check_dim(q);
  switch (kind) {
    case Kind::Full:
      return q.norm() <= tol;
    case Kind::HalfSpace: {
      const double t = axis.dot(q);
      return t >= -tol && (q - t * axis).norm() <= tol;
    }
    case Kind::Orthant: {
      for (int j = 0; j < count; ++j)
        if (q(j) < -tol) return false;
      for (int j = count; j < q.size(); ++j)
        if (std::abs(q(j)) > tol) return false;
      return true;
    }
    case Kind::Circular:
      return axis.dot(q) - std::cos(M_PI / 2 - angle) * q.norm() >= -tol;
    case Kind::Parabolic: {
      const int n = static_cast<int>(q.size());
      if (slope == 0.0) {
        // D is the half-space q_n <= 0; polar is the ray through -e_n.
        return -q(n - 1) >= -tol && q.head(n - 1).norm() <= tol;
      }
      return -q(n - 1) - (1.0 / slope) * q.head(n - 1).norm() >= -tol;
    }
  }
  return false;
}

Vec DirectionalCone::interior_direction(int n) const {
  switch (kind) {
    case Kind::Full: {
      Vec e = Vec::Zero(n);
      e(0) = 1.0;
      return e;
    }
    case Kind::HalfSpace:
    case Kind::Circular:
      return axis;
    case Kind::Orthant: {
      Vec e = Vec::Zero(n);
      for (int j = 0; j < count; ++j) e(j) = 1.0;
      return e / e.norm();
    }
    case Kind::Parabolic: {
      Vec e = Vec::Zero(n);
      e(n - 1) = -1.0;
      return e;
    }
  }
  return Vec::Zero(n);
}

Vec DirectionalCone::sample(Sampler& s, int n) const {
  switch (kind) {
    case Kind::Full:
      return s.vec(n);
    case Kind::HalfSpace: {
      Vec v = s.vec(n);
      const double t = axis.dot(v);
      if (t < 0) v -= 2.0 * t * axis;
      return v;
    }
    case Kind::Orthant: {
      Vec v = s.vec(n);
      for (int j = 0; j < count; ++j) v(j) = std::abs(v(j));
      return v;
    }
    case Kind::Circular: {
      const double phi = s.uniform(0.0, angle);
      Vec w = s.unit(n);
      w -= axis.dot(w) * axis;
      if (w.norm() < 1e-12) return s.magnitude() * axis;
      w /= w.norm();
      return s.magnitude() * (std::cos(phi) * axis + std::sin(phi) * w);
    }
    case Kind::Parabolic: {
      Vec v(n);
      const double mag = s.magnitude();
      for (int i = 0; i + 1 < n; ++i) v(i) = mag * s.uniform(-1.0, 1.0);
      v(n - 1) = -slope * v.head(n - 1).norm() - mag * std::abs(s.uniform(0.0, 1.0));
      return v;
    }
  }
  return Vec::Zero(n);
}

json DirectionalCone::to_json() const {
  json j;
  switch (kind) {
    case Kind::Full:
      j["variant"] = "full";
      break;
    case Kind::HalfSpace:
      j["variant"] = "half_space";
      j["axis"] = std::vector<double>(axis.data(), axis.data() + axis.size());
      break;
    case Kind::Orthant:
      j["variant"] = "orthant";
      j["k"] = count;
      break;
    case Kind::Circular:
      j["variant"] = "circular";
      j["axis"] = std::vector<double>(axis.data(), axis.data() + axis.size());
      j["theta"] = angle;
      break;
    case Kind::Parabolic:
      j["variant"] = "parabolic";
      j["gamma"] = slope;
      break;
  }
  return j;
}

DirectionalCone DirectionalCone::from_json(const json& j) {
  const std::string v = j.at("variant").get<std::string>();
  auto axis_of = [&](const json& jj) {
    const auto& a = jj.at("axis");
    Vec b(a.size());
    for (size_t i = 0; i < a.size(); ++i) b(static_cast<int>(i)) = a[i].get<double>();
    return b;
  };
  if (v == "full") return full();
  if (v == "half_space") return half_space(axis_of(j));
  if (v == "orthant") return orthant(j.at("k").get<int>());
  if (v == "circular") return circular(axis_of(j), j.at("theta").get<double>());
  if (v == "parabolic") return parabolic(j.at("gamma").get<double>());
  throw PreconditionError("unknown directional cone variant: " + v);
}

// ---------------------------------------------------------------------------
// MonotonicityCone: constructors
// ---------------------------------------------------------------------------

MonotonicityCone MonotonicityCone::N() {
  MonotonicityCone m;
  m.gamma = 0.0;
  return m;
}

MonotonicityCone MonotonicityCone::P() {
  MonotonicityCone m;
  m.a_mode = AMode::Psd;
  return m;
}

MonotonicityCone MonotonicityCone::of_gamma(double g) {
  if (g < 0) throw PreconditionError("gamma >= 0 required");
  MonotonicityCone m;
  m.gamma = g;
  return m;
}

MonotonicityCone MonotonicityCone::of_R(double R) {
  if (!(R > 0)) throw PreconditionError("R > 0 required");
  MonotonicityCone m;
  m.a_mode = AMode::PsdRadius;
  m.R = R;
  return m;
}

MonotonicityCone MonotonicityCone::of_D(DirectionalCone D) {
  MonotonicityCone m;
  m.D = std::move(D);
  if (!m.D.proper()) throw PreconditionError("M(D) with full D constrains nothing");
  return m;
}

MonotonicityCone MonotonicityCone::NP() {
  MonotonicityCone m;
  m.gamma = 0.0;
  m.a_mode = AMode::Psd;
  return m;
}

MonotonicityCone MonotonicityCone::NDP(DirectionalCone D) {
  MonotonicityCone m;
  m.gamma = 0.0;
  m.D = std::move(D);
  m.a_mode = AMode::Psd;
  return m;
}

MonotonicityCone MonotonicityCone::fundamental(std::optional<double> gamma, DirectionalCone D,
                                               std::optional<double> R_finite, bool a_psd) {
  MonotonicityCone m;
  m.gamma = gamma;
  m.D = std::move(D);
  if (R_finite) {
    if (!(*R_finite > 0)) throw PreconditionError("R > 0 required");
    m.a_mode = AMode::PsdRadius;
    m.R = *R_finite;
  } else {
    m.a_mode = a_psd ? AMode::Psd : AMode::None;
  }
  if (!m.gamma && !m.D.proper() && m.a_mode == AMode::None)
    throw PreconditionError("cone constrains nothing");
  return m;
}

MonotonicityCone MonotonicityCone::gdr(double gamma, DirectionalCone D,
                                       std::optional<double> R_finite) {
  return fundamental(gamma, std::move(D), R_finite, true);
}

MonotonicityCone MonotonicityCone::geo_mean_R(double R) {
  MonotonicityCone m;
  m.kind = Kind::GeoMeanR;
  m.R = R;
  return m;
}

MonotonicityCone MonotonicityCone::directional_R(double R) {
  MonotonicityCone m;
  m.kind = Kind::DirectionalR;
  m.R = R;
  return m;
}

MonotonicityCone MonotonicityCone::pucci(double lam, double Lam, double R) {
  if (!(0 < lam && lam <= Lam)) throw PreconditionError("need 0 < lam <= Lam");
  MonotonicityCone m;
  m.kind = Kind::PucciR;
  m.lam = lam;
  m.Lam = Lam;
  m.R = R;
  return m;
}

MonotonicityCone MonotonicityCone::min_trace(double delta, double R) {
  if (!(delta > 0)) throw PreconditionError("delta > 0 required");
  MonotonicityCone m;
  m.kind = Kind::MinTraceR;
  m.delta = delta;
  m.R = R;
  return m;
}

MonotonicityCone MonotonicityCone::trace_ellipticity(double lam, double beta, DirectionalCone D) {
  if (!(lam > 0) || beta < 0) throw PreconditionError("need lam > 0, beta >= 0");
  MonotonicityCone m;
  m.kind = Kind::TraceEllipticity;
  m.lam = lam;
  m.beta = beta;
  m.D = std::move(D);
  return m;
}

MonotonicityCone MonotonicityCone::parabolic(double gamma) {
  MonotonicityCone m;
  m.kind = Kind::ParabolicProduct;
  m.D = DirectionalCone::parabolic(gamma);
  return m;
}

MonotonicityCone MonotonicityCone::zero_gradient() {
  MonotonicityCone m;
  m.kind = Kind::ZeroGradient;
  return m;
}

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

namespace {

// Minimum of <Ae,e> - <b,e> over the unit sphere (trust-region subproblem,
// solved through the eigendecomposition and a secular bisection).
double sphere_quadratic_min(const Mat& A, const Vec& b) {
  const auto [w, Q] = sym_eigs_vectors(A);
  const int n = static_cast<int>(w.size());
  const Vec beta = Q.transpose() * (0.5 * b);
  const double lam1 = w(0);
  const double bnorm = beta.norm();
  auto value = [&](const Vec& e) { return e.dot(w.asDiagonal() * e) - 2.0 * beta.dot(e); };
  if (bnorm < 1e-300) return lam1;
  // Secular norm of e(mu) = (Lambda - mu I)^{-1} beta.
  auto norm2 = [&](double mu) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = w(i) - mu;
      s += beta(i) * beta(i) / (d * d);
    }
    return s;
  };
  // Hard case: no beta mass on the bottom eigenspace and the smooth part
  // already fits inside the sphere.
  double smooth = 0.0;
  bool bottom_mass = false;
  for (int i = 0; i < n; ++i) {
    if (w(i) - lam1 <= 1e-12 * (1.0 + std::abs(lam1))) {
      if (std::abs(beta(i)) > 1e-13 * (1.0 + bnorm)) bottom_mass = true;
    } else {
      const double d = w(i) - lam1;
      smooth += beta(i) * beta(i) / (d * d);
    }
  }
  if (!bottom_mass && smooth <= 1.0) {
    Vec e = Vec::Zero(n);
    double used = 0.0;
    for (int i = 0; i < n; ++i) {
      if (w(i) - lam1 > 1e-12 * (1.0 + std::abs(lam1))) {
        e(i) = beta(i) / (w(i) - lam1);
        used += e(i) * e(i);
      }
    }
    // Fill the remaining norm along the bottom eigenspace.
    const double tau = std::sqrt(std::max(0.0, 1.0 - used));
    for (int i = 0; i < n; ++i) {
      if (w(i) - lam1 <= 1e-12 * (1.0 + std::abs(lam1))) {
        e(i) += tau;
        break;
      }
    }
    return value(e);
  }
  double loB = lam1 - bnorm - 1.0;
  double hiB = lam1 - 1e-14 * (1.0 + std::abs(lam1));
  while (norm2(hiB) < 1.0 && hiB < lam1) hiB = 0.5 * (hiB + lam1);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (loB + hiB);
    (norm2(mid) < 1.0 ? loB : hiB) = mid;
  }
  const double mu = 0.5 * (loB + hiB);
  Vec e(n);
  for (int i = 0; i < n; ++i) e(i) = beta(i) / (w(i) - mu);
  if (e.norm() > 0) e /= e.norm();
  return value(e);
}

double psd_margin(const Mat& A) { return sym_eigs(A)(0); }

}  // namespace

double MonotonicityCone::member_margin(const Jet& J) const {
  const int n = J.dim();
  double m = kInf;
  switch (kind) {
    case Kind::Fundamental: {
      if (gamma) m = std::min(m, -(*gamma) * J.p.norm() - J.r);
      if (D.proper()) m = std::min(m, D.margin(J.p));
      if (a_mode == AMode::Psd) m = std::min(m, psd_margin(J.A));
      if (a_mode == AMode::PsdRadius)
        m = std::min(m, psd_margin(J.A - (J.p.norm() / R) * Mat::Identity(n, n)));
      return m;
    }
    case Kind::GeoMeanR: {
      const Vec w = sym_eigs(J.A);
      m = w(0);
      if (w(0) >= 0.0) {
        double geo = 0.0;
        for (int i = 0; i < n; ++i) geo += std::log(std::max(w(i), 1e-300));
        geo = std::exp(geo / n);
        m = std::min(m, geo - J.p.norm() / R);
      }
      return m;
    }
    case Kind::DirectionalR: {
      m = psd_margin(J.A);
      m = std::min(m, sphere_quadratic_min(J.A, J.p / R));
      return m;
    }
    case Kind::PucciR: {
      const Vec w = sym_eigs(J.A);
      double v = 0.0;
      for (int i = 0; i < n; ++i) v += w(i) > 0 ? lam * w(i) : Lam * w(i);
      return v - lam * n * J.p.norm() / R;
    }
    case Kind::MinTraceR: {
      const Vec w = sym_eigs(J.A);
      return w(0) + delta * w.sum() - J.p.norm() / R;
    }
    case Kind::TraceEllipticity: {
      m = std::min(-J.r, psd_margin(J.A));
      if (D.proper()) m = std::min(m, D.margin(J.p));
      m = std::min(m, lam * J.A.trace() - beta * J.p.norm());
      return m;
    }
    case Kind::ParabolicProduct: {
      m = std::min(-J.r, D.margin(J.p));
      m = std::min(m, psd_margin(J.A.topLeftCorner(n - 1, n - 1)));
      return m;
    }
    case Kind::ZeroGradient:
      return std::min({-J.r, -J.p.norm(), psd_margin(J.A)});
  }
  return m;
}

bool cone_member(const MonotonicityCone& M, const Jet& J) {
  return M.member_margin(J) >= -jet_tol(J);
}

bool cone_interior(const MonotonicityCone& M, const Jet& J) {
  if (!M.has_interior()) return false;
  return M.member_margin(J) > jet_tol(J);
}

bool cone_dual_member(const MonotonicityCone& M, const Jet& J) {
  const double tol = jet_tol(J);
  if (M.kind == MonotonicityCone::Kind::Fundamental) {
    // Dual of an intersection is the union of the duals of the factors.
    double m = -kInf;
    if (M.gamma) m = std::max(m, (*M.gamma) * J.p.norm() - J.r);
    if (M.D.proper()) m = std::max(m, M.D.dual_margin(J.p));
    if (M.a_mode == MonotonicityCone::AMode::Psd) m = std::max(m, lambda_max(J.A));
    if (M.a_mode == MonotonicityCone::AMode::PsdRadius)
      m = std::max(m, lambda_max(J.A) + J.p.norm() / M.R);
    return m >= -tol;
  }
  // Definition of the Dirichlet dual: J in M~ iff -J not interior to M.
  return !cone_interior(M, -J);
}

bool polar_member(const MonotonicityCone& M, const Jet& J) {
  const double tol = jet_tol(J);
  const double s = J.r;
  const Vec& q = J.p;
  const Mat& B = J.A;
  if (M.kind != MonotonicityCone::Kind::Fundamental)
    throw CapabilityError("no closed-form polar for this cone variant");
  const bool d_full = !M.D.proper();
  const bool has_r = M.gamma.has_value();
  const double g = has_r ? *M.gamma : 0.0;
  switch (M.a_mode) {
    case MonotonicityCone::AMode::None: {
      if (!d_full) throw CapabilityError("no closed-form polar for M(gamma, D)");
      if (!has_r) throw CapabilityError("degenerate cone");
      if (B.norm() > tol) return false;
      if (g > 0) return s <= -q.norm() / g + tol;
      return std::abs(s) <= tol ? q.norm() <= tol : (s < 0 && q.norm() <= tol);
    }
    case MonotonicityCone::AMode::Psd: {
      if (psd_margin(B) < -tol) return false;
      if (!has_r && d_full) return std::abs(s) <= tol && q.norm() <= tol;  // M(P) polar
      if (has_r && d_full) {
        if (g > 0) return s <= -q.norm() / g + tol;   // M(gamma, P) polar
        return s <= tol && q.norm() <= tol;           // M(N, P) polar
      }
      if (has_r && !d_full && g == 0.0)               // M(N, D, P) polar
        return s <= tol && M.D.polar_member(q, tol);
      throw CapabilityError("no closed-form polar for this fundamental-family member");
    }
    case MonotonicityCone::AMode::PsdRadius: {
      if (!d_full) throw CapabilityError("no closed-form polar with a proper D and finite R");
      if (psd_margin(B) < -tol) return false;
      if (!has_r) {  // M(R) polar
        if (std::abs(s) > tol) return false;
        return B.trace() >= M.R * q.norm() - tol;
      }
      if (s > tol) return false;  // M(gamma, R) / M(N, R) polar
      return B.trace() >= M.R * (q.norm() + g * s) - tol;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

Jet MonotonicityCone::sample(Sampler& s, int n) const {
  switch (kind) {
    case Kind::Fundamental: {
      Jet J = Jet::zero(n);
      J.p = D.proper() ? D.sample(s, n) : s.vec(n);
      if (s.uniform(0.0, 1.0) < 0.1) J.p.setZero();  // vertex directions matter
      J.r = gamma ? -(*gamma) * J.p.norm() - std::abs(s.uniform(0.0, 1.0)) * s.magnitude()
                  : s.uniform(-1.0, 1.0) * s.magnitude();
      switch (a_mode) {
        case AMode::None:
          J.A = s.sym(n);
          break;
        case AMode::Psd:
          J.A = s.psd(n);
          break;
        case AMode::PsdRadius:
          J.A = (J.p.norm() / R) * Mat::Identity(n, n) + s.uniform(0.0, 1.0) * s.psd(n);
          break;
      }
      return J;
    }
    case Kind::GeoMeanR: {
      Jet J = Jet::zero(n);
      J.r = s.uniform(-1.0, 1.0) * s.magnitude();
      Vec w(n);
      const double mag = s.magnitude();
      double lg = 0.0;
      for (int i = 0; i < n; ++i) {
        w(i) = mag * (0.01 + std::abs(s.uniform(0.0, 1.0)));
        lg += std::log(w(i));
      }
      J.A = s.sym_with_eigs(w);
      J.p = std::exp(lg / n) * R * s.uniform(0.0, 1.0) * s.unit(n);
      return J;
    }
    case Kind::DirectionalR: {
      Jet J = Jet::zero(n);
      J.r = s.uniform(-1.0, 1.0) * s.magnitude();
      J.A = s.psd(n);
      Vec dir = s.unit(n);
      // Largest feasible |p| along dir by bisection on the exact margin.
      double hi = 1.0;
      auto margin_at = [&](double t) {
        Jet K{0.0, t * dir, J.A};
        return member_margin(K);
      };
      while (margin_at(hi) > 0 && hi < 1e12) hi *= 2;
      double lo = 0.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (margin_at(mid) >= 0 ? lo : hi) = mid;
      }
      J.p = s.uniform(0.0, 1.0) * lo * dir;
      return J;
    }
    case Kind::PucciR: {
      Jet J = Jet::zero(n);
      J.r = s.uniform(-1.0, 1.0) * s.magnitude();
      J.A = s.psd(n) + 0.05 * s.sym(n);
      Vec w = sym_eigs(J.A);
      double v = 0.0;
      for (int i = 0; i < n; ++i) v += w(i) > 0 ? lam * w(i) : Lam * w(i);
      if (v < 0) {
        J.A = J.A - (w(0) - 0.01) * Mat::Identity(n, n);
        w = sym_eigs(J.A);
        v = 0.0;
        for (int i = 0; i < n; ++i) v += w(i) > 0 ? lam * w(i) : Lam * w(i);
      }
      J.p = s.uniform(0.0, 1.0) * (v * R / (lam * n)) * s.unit(n);
      return J;
    }
    case Kind::MinTraceR: {
      Jet J = Jet::zero(n);
      J.r = s.uniform(-1.0, 1.0) * s.magnitude();
      J.A = s.psd(n);
      const Vec w = sym_eigs(J.A);
      J.p = s.uniform(0.0, 1.0) * R * (w(0) + delta * w.sum()) * s.unit(n);
      return J;
    }
    case Kind::TraceEllipticity: {
      Jet J = Jet::zero(n);
      J.p = D.proper() ? D.sample(s, n) : s.vec(n);
      J.r = -std::abs(s.uniform(0.0, 1.0)) * s.magnitude();
      J.A = s.psd(n);
      const double need = beta * J.p.norm();
      if (lam * J.A.trace() < need)
        J.A += ((need - lam * J.A.trace()) / (lam * n) + 0.01) * Mat::Identity(n, n);
      return J;
    }
    case Kind::ParabolicProduct: {
      Jet J = Jet::zero(n);
      J.r = -std::abs(s.uniform(0.0, 1.0)) * s.magnitude();
      J.p = D.sample(s, n);
      J.A = s.sym(n);
      Mat Ap = s.psd(n - 1);
      J.A.topLeftCorner(n - 1, n - 1) = Ap;
      return J;
    }
    case Kind::ZeroGradient:
      return {-std::abs(s.uniform(0.0, 1.0)) * s.magnitude(), Vec::Zero(n), s.psd(n)};
  }
  return Jet::zero(n);
}

Jet MonotonicityCone::sample_tight(Sampler& s, int n) const {
  Jet J = sample(s, n);
  switch (kind) {
    case Kind::Fundamental:
      if (gamma) J.r = -(*gamma) * J.p.norm();
      if (a_mode == AMode::PsdRadius) J.A = (J.p.norm() / R) * Mat::Identity(n, n);
      if (a_mode == AMode::Psd) J.A = s.psd(n);
      return J;
    case Kind::GeoMeanR: {
      const Vec w = sym_eigs(J.A);
      double lg = 0.0;
      for (int i = 0; i < n; ++i) lg += std::log(std::max(w(i), 1e-300));
      J.p = std::exp(lg / n) * R * s.unit(n);
      return J;
    }
    default:
      return J;
  }
}

Jet MonotonicityCone::sample_polar(Sampler& s, int n) const {
  if (kind != Kind::Fundamental) throw CapabilityError("no closed-form polar to sample");
  Jet J = Jet::zero(n);
  const bool d_full = !D.proper();
  const bool has_r = gamma.has_value();
  const double g = has_r ? *gamma : 0.0;
  switch (a_mode) {
    case AMode::None: {
      if (!d_full || !has_r) throw CapabilityError("no closed-form polar to sample");
      if (g > 0) {
        J.p = s.vec(n);
        J.r = -J.p.norm() / g - std::abs(s.uniform(0.0, 1.0)) * s.magnitude();
      } else {
        J.r = -std::abs(s.uniform(0.0, 1.0)) * s.magnitude();
      }
      return J;
    }
    case AMode::Psd: {
      J.A = s.psd(n);
      if (!has_r && d_full) return J;                       // M(P): {0} x {0} x P
      if (has_r && d_full) {
        if (g > 0) {
          J.p = s.vec(n);
          J.r = -J.p.norm() / g - std::abs(s.uniform(0.0, 1.0)) * s.magnitude();
        } else {
          J.r = -std::abs(s.uniform(0.0, 1.0)) * s.magnitude();
        }
        return J;
      }
      if (has_r && !d_full && g == 0.0) {  // N x D-polar x P
        J.r = -std::abs(s.uniform(0.0, 1.0)) * s.magnitude();
        switch (D.kind) {
          case DirectionalCone::Kind::HalfSpace:
            J.p = std::abs(s.uniform(0.0, 1.0)) * s.magnitude() * D.axis;
            break;
          case DirectionalCone::Kind::Orthant: {
            J.p = Vec::Zero(n);
            const double mag = s.magnitude();
            for (int j = 0; j < D.count; ++j) J.p(j) = mag * std::abs(s.uniform(0.0, 1.0));
            break;
          }
          case DirectionalCone::Kind::Circular:
            J.p = DirectionalCone::circular(D.axis, M_PI / 2 - D.angle).sample(s, n);
            break;
          case DirectionalCone::Kind::Parabolic:
            J.p = D.slope > 0 ? DirectionalCone::parabolic(1.0 / D.slope).sample(s, n)
                              : -std::abs(s.uniform(0.0, 1.0)) * s.magnitude() *
                                    Vec::Unit(n, n - 1);
            break;
          default:
            break;
        }
        return J;
      }
      throw CapabilityError("no closed-form polar to sample");
    }
    case AMode::PsdRadius: {
      if (!d_full) throw CapabilityError("no closed-form polar to sample");
      J.A = s.psd(n);
      const double tr = J.A.trace();
      if (!has_r) {
        J.p = s.uniform(0.0, 1.0) * (tr / R) * s.unit(n);
        return J;
      }
      J.r = -std::abs(s.uniform(0.0, 1.0)) * s.magnitude();
      J.p = s.uniform(0.0, 1.0) * (tr / R + g * std::abs(J.r)) * s.unit(n);
      return J;
    }
  }
  return J;
}

// ---------------------------------------------------------------------------
// Serialization / description
// ---------------------------------------------------------------------------

std::string MonotonicityCone::describe() const {
  switch (kind) {
    case Kind::Fundamental: {
      std::string parts;
      if (gamma) parts += "gamma=" + std::to_string(*gamma);
      if (D.proper()) parts += (parts.empty() ? "" : ", ") + std::string("D");
      if (a_mode == AMode::Psd) parts += (parts.empty() ? "" : ", ") + std::string("R=inf");
      if (a_mode == AMode::PsdRadius)
        parts += (parts.empty() ? "" : ", ") + std::string("R=") + std::to_string(R);
      return "M(" + parts + ")";
    }
    case Kind::GeoMeanR:
      return "M_sub(R=" + std::to_string(R) + ")";
    case Kind::DirectionalR:
      return "M_super(R=" + std::to_string(R) + ")";
    case Kind::PucciR:
      return "M_pucci";
    case Kind::MinTraceR:
      return "M_delta";
    case Kind::TraceEllipticity:
      return "M_trace_elliptic";
    case Kind::ParabolicProduct:
      return "M_parabolic";
    case Kind::ZeroGradient:
      return "N x {0} x P";
  }
  return "?";
}

json MonotonicityCone::to_json() const {
  json j;
  switch (kind) {
    case Kind::Fundamental:
      j["variant"] = "fundamental";
      if (gamma) j["gamma"] = *gamma;
      if (a_mode == AMode::Psd) j["R"] = "inf";
      if (a_mode == AMode::PsdRadius) j["R"] = R;
      j["D"] = D.to_json();
      break;
    case Kind::GeoMeanR:
      j["variant"] = "geo_mean_R";
      j["R"] = R;
      break;
    case Kind::DirectionalR:
      j["variant"] = "directional_R";
      j["R"] = R;
      break;
    case Kind::PucciR:
      j["variant"] = "pucci";
      j["lambda"] = lam;
      j["Lambda"] = Lam;
      j["R"] = R;
      break;
    case Kind::MinTraceR:
      j["variant"] = "min_trace";
      j["delta"] = delta;
      j["R"] = R;
      break;
    case Kind::TraceEllipticity:
      j["variant"] = "trace_elliptic";
      j["lambda"] = lam;
      j["beta"] = beta;
      j["D"] = D.to_json();
      break;
    case Kind::ParabolicProduct:
      j["variant"] = "parabolic_product";
      j["gamma"] = D.slope;
      break;
    case Kind::ZeroGradient:
      j["variant"] = "zero_gradient";
      break;
  }
  return j;
}

MonotonicityCone MonotonicityCone::from_json(const json& j) {
  const std::string v = j.at("variant").get<std::string>();
  if (v == "fundamental") {
    std::optional<double> g, Rf;
    bool psd = false;
    if (j.contains("gamma")) g = j["gamma"].get<double>();
    if (j.contains("R")) {
      if (j["R"].is_string()) {
        if (j["R"].get<std::string>() != "inf") throw PreconditionError("R: number or \"inf\"");
        psd = true;
      } else {
        Rf = j["R"].get<double>();
      }
    }
    DirectionalCone D =
        j.contains("D") ? DirectionalCone::from_json(j["D"]) : DirectionalCone::full();
    return fundamental(g, std::move(D), Rf, psd);
  }
  if (v == "geo_mean_R") return geo_mean_R(j.at("R").get<double>());
  if (v == "directional_R") return directional_R(j.at("R").get<double>());
  if (v == "pucci")
    return pucci(j.at("lambda").get<double>(), j.at("Lambda").get<double>(),
                 j.at("R").get<double>());
  if (v == "min_trace") return min_trace(j.at("delta").get<double>(), j.at("R").get<double>());
  if (v == "trace_elliptic")
    return trace_ellipticity(j.at("lambda").get<double>(), j.at("beta").get<double>(),
                             j.contains("D") ? DirectionalCone::from_json(j["D"])
                                             : DirectionalCone::full());
  if (v == "parabolic_product") return parabolic(j.at("gamma").get<double>());
  if (v == "zero_gradient") return zero_gradient();
  throw PreconditionError("unknown cone variant: " + v);
}

// ---------------------------------------------------------------------------
// Circular cones in jet space
// ---------------------------------------------------------------------------

double JetCircularCone::margin(const Jet& J) const {
  const double na = norm(axis);
  return inner(axis, J) / na - std::cos(theta) * norm(J);
}

JetCircularCone JetCircularCone::polar() const { return {axis, M_PI / 2 - theta}; }

double JetCircularCone::min_inner(const Jet& J) const {
  const double na = norm(axis);
  const double alpha = inner(J, axis) / na;
  Jet perp = J - (alpha / na) * axis;
  const double beta = norm(perp);
  const double delta = std::atan2(beta, alpha);
  if (delta + theta >= M_PI) return -norm(J);
  return norm(J) * std::cos(theta + delta);
}

Jet JetCircularCone::sample(Sampler& s) const {
  const int n = axis.dim();
  const double na = norm(axis);
  Jet w = s.jet(n);
  w -= (inner(w, axis) / (na * na)) * axis;
  const double nw = norm(w);
  const double phi = s.uniform(0.0, theta);
  Jet out = (std::cos(phi) / na) * axis;
  if (nw > 1e-12) out += (std::sin(phi) / nw) * w;
  return s.magnitude() * out;
}

// ---------------------------------------------------------------------------
// fundamental_embed
// ---------------------------------------------------------------------------

EmbedResult fundamental_embed(int n, const std::function<bool(const Jet&)>& member,
                              const std::function<bool(const Jet&)>& interior,
                              std::optional<Jet> probe, Sampler& s, long budget) {
  (void)member;
  Jet J0;
  bool found = false;
  if (probe && interior(*probe)) {
    J0 = *probe;
    found = true;
  }
  for (long i = 0; i < budget && !found; ++i) {
    Jet cand = s.jet(n);
    // Bias toward the minimal monotonicity directions; interior points of
    // monotonicity cones cluster around (-1, 0, I) rays.
    cand.r = -std::abs(cand.r);
    cand.A += cand.A.norm() * Mat::Identity(n, n);
    if (interior(cand)) {
      J0 = cand;
      found = true;
    }
  }
  if (!found) throw SearchFailure("fundamental_embed: no interior jet within budget");

  // Perturb to p != 0 while staying interior.
  const double scale = 1.0 + norm(J0);
  if (J0.p.norm() < 1e-10 * scale) {
    bool ok = false;
    for (double step = 0.1 * scale; step > 1e-12 * scale && !ok; step *= 0.25) {
      for (int i = 0; i < 2 * n && !ok; ++i) {
        Jet cand = J0;
        cand.p(i / 2) += (i % 2 == 0 ? step : -step);
        if (interior(cand)) {
          J0 = cand;
          ok = true;
        }
      }
    }
    if (!ok) throw SearchFailure("fundamental_embed: perturbation to p != 0 failed");
  }

  // Largest ball B_delta(p) staying interior (sampled sphere probes).
  const int probes = 48;
  double delta = 0.5 * J0.p.norm();
  bool fits = false;
  for (int halvings = 0; halvings < 60 && !fits; ++halvings) {
    fits = true;
    for (int i = 0; i < probes; ++i) {
      Jet cand = J0;
      cand.p += delta * s.unit(n);
      if (!interior(cand)) {
        fits = false;
        break;
      }
    }
    if (!fits) delta *= 0.5;
  }
  if (!fits) throw SearchFailure("fundamental_embed: no interior ball around p");

  // Rescale per the cone construction, with the safety margins:
  // t0 inflated by 1.1 and delta halved.
  const double t0 = 1.1 * std::max({-J0.r, lambda_max(J0.A), 1e-3 * scale});
  delta *= 0.5;
  const double eps = delta / t0;
  EmbedResult out;
  out.R = 0.5 * eps;
  out.gamma = 1.0 / out.R;
  out.D = DirectionalCone::circular(J0.p, std::asin(std::min(1.0 - 1e-12, delta / J0.p.norm())));
  out.interior_point = J0;
  return out;
}

// ---------------------------------------------------------------------------
// Strict approximators
// ---------------------------------------------------------------------------

double ApproximatorDescriptor::value(const Vec& x) const {
  const double t = (x - y).norm();
  switch (form) {
    case Form::Quadratic:
      return -c + 0.5 * t * t;
    case Form::Monomial:
      return std::pow(t, m + 1.0) / (m + 1.0) - shift;
    case Form::Exponential:
      return std::exp(mu * t) / mu - shift;
  }
  return 0;
}

Jet ApproximatorDescriptor::jet(const Vec& x) const {
  switch (form) {
    case Form::Quadratic: {
      const Vec d = x - y;
      return {-c + 0.5 * d.squaredNorm(), d, Mat::Identity(x.size(), x.size())};
    }
    case Form::Monomial: {
      RadialProfile psi = RadialProfile::power(static_cast<double>(m), -shift);
      Jet J = radial_jet(psi, x - y);
      return J;
    }
    case Form::Exponential: {
      RadialProfile psi{
          [this](double t) { return std::exp(mu * t) / mu - shift; },
          [this](double t) { return std::exp(mu * t); },
          [this](double t) { return mu * std::exp(mu * t); },
      };
      return radial_jet(psi, x - y);
    }
  }
  return Jet::zero(static_cast<int>(x.size()));
}

std::string ApproximatorDescriptor::describe() const {
  char buf[160];
  switch (form) {
    case Form::Quadratic:
      std::snprintf(buf, sizeof(buf), "psi(x) = -%.6g + |x-y|^2/2", c);
      break;
    case Form::Monomial:
      std::snprintf(buf, sizeof(buf), "psi(x) = |x-y|^%d/%d - %.6g", m + 1, m + 1, shift);
      break;
    case Form::Exponential:
      std::snprintf(buf, sizeof(buf), "psi(x) = exp(%.6g |x-y|)/%.6g - %.6g", mu, mu, shift);
      break;
  }
  return buf;
}

json ApproximatorDescriptor::to_json() const {
  json j;
  j["form"] = form == Form::Quadratic    ? "quadratic"
              : form == Form::Monomial   ? "monomial"
                                         : "exponential";
  j["y"] = std::vector<double>(y.data(), y.data() + y.size());
  if (form == Form::Quadratic) j["c"] = c;
  if (form == Form::Monomial) j["m"] = m;
  if (form == Form::Exponential) j["mu"] = mu;
  if (form != Form::Quadratic) j["shift"] = shift;
  j["formula"] = describe();
  return j;
}

namespace {

double interior_slack(const DirectionalCone& D) {
  switch (D.kind) {
    case DirectionalCone::Kind::HalfSpace:
      return 1.0;
    case DirectionalCone::Kind::Circular:
      return std::sin(D.angle);
    case DirectionalCone::Kind::Orthant:
      return 1.0 / std::sqrt(static_cast<double>(D.count));
    case DirectionalCone::Kind::Parabolic:
      return 1.0 / (1.0 + D.slope);
    default:
      return 1.0;
  }
}

}  // namespace

ApproximatorResult strict_approximator(const MonotonicityCone& M, const GridDomain& grid) {
  using Kind = MonotonicityCone::Kind;
  const int n = static_cast<int>(grid.center.size() > 0 ? grid.center.size() : grid.lo.size());
  ApproximatorDescriptor psi;

  if (!M.has_interior())
    throw InfeasibleDomain("cone has empty interior: no strict approximator on any domain");

  std::vector<const std::vector<Vec>*> point_sets{&grid.interior, &grid.boundary};

  switch (M.kind) {
    case Kind::Fundamental:
    case Kind::ParabolicProduct: {
      const bool finite_R =
          M.kind == Kind::Fundamental && M.a_mode == MonotonicityCone::AMode::PsdRadius;
      const double Rfin = finite_R ? M.R : kInf;
      const double g = (M.kind == Kind::Fundamental && M.gamma) ? *M.gamma : 0.0;
      const DirectionalCone& D = M.D;
      Vec y = grid.shape == GridDomain::Shape::Ball ? grid.center
                                                    : Vec(0.5 * (grid.lo + grid.hi));
      double rho = grid.enclosing_radius(y);
      const bool need_D = D.proper() || M.kind == Kind::ParabolicProduct;
      if (need_D) {
        const Vec a = D.interior_direction(n);
        const double L = 1.05 * rho / interior_slack(D);
        if (finite_R && L + rho >= Rfin)
          throw InfeasibleDomain(
              "domain does not fit in a translate of the truncated cone D cap B_R: "
              "comparison is only guaranteed on domains inside such a translate");
        y = y - L * a;
        rho = grid.enclosing_radius(y);
      }
      if (finite_R && rho >= Rfin)
        throw InfeasibleDomain(
            "domain radius exceeds the finite R of the cone: no quadratic strict "
            "approximator; comparison is only guaranteed on domains inside a ball of "
            "radius R");
      const double R0 = std::min(Rfin, rho + 1.0);
      psi.form = ApproximatorDescriptor::Form::Quadratic;
      psi.y = y;
      psi.c = 0.5 * R0 * R0 + g * R0 + 1.0;
      break;
    }
    case Kind::GeoMeanR:
    case Kind::DirectionalR:
    case Kind::PucciR:
    case Kind::MinTraceR: {
      psi.form = ApproximatorDescriptor::Form::Monomial;
      psi.y = Vec::Zero(n);
      double rho = grid.enclosing_radius(psi.y) + grid.h;
      double bound = 0;
      if (M.kind == Kind::GeoMeanR) bound = std::pow(rho / M.R, n);
      if (M.kind == Kind::DirectionalR) bound = 1.0 + rho * rho / (4.0 * M.R * M.R);
      if (M.kind == Kind::PucciR) bound = 1.0 + n * (rho / M.R - 1.0);
      if (M.kind == Kind::MinTraceR) bound = 1.0 - n + (rho - M.R) / (M.delta * M.R);
      psi.m = std::max(1, static_cast<int>(std::floor(bound)) + 1);
      psi.shift = 0.0;
      break;
    }
    case Kind::TraceEllipticity: {
      psi.form = ApproximatorDescriptor::Form::Exponential;
      psi.y = Vec::Zero(n);
      const double rho = grid.enclosing_radius(psi.y) + grid.h;
      psi.mu = 1.1 * M.beta / M.lam + 0.01;
      psi.shift = 1.1 * std::exp(psi.mu * rho) / psi.mu;
      if (M.D.proper()) {
        for (const auto* pts : point_sets)
          for (const auto& x : *pts)
            if (!M.D.interior(x, 0.0))
              throw InfeasibleDomain("domain must sit strictly inside the directional cone");
      }
      break;
    }
    default:
      throw CapabilityError("no strict-approximator construction for this variant");
  }

  // Singular center: radial forms need the grid to exclude it.
  if (psi.form != ApproximatorDescriptor::Form::Quadratic) {
    for (const auto* pts : point_sets)
      for (const auto& x : *pts)
        if ((x - psi.y).norm() <= 0)
          throw InfeasibleDomain("radial approximator is singular at a grid point");
  }

  ApproximatorResult out;
  out.psi = psi;
  out.report.pass = true;
  out.report.worst_margin = kInf;
  for (const auto* pts : point_sets) {
    for (const auto& x : *pts) {
      const Jet J = psi.jet(x);
      const double m = M.member_margin(J);
      ++out.report.n_samples;
      if (m < out.report.worst_margin) {
        out.report.worst_margin = m;
        out.report.witness = J;
      }
      if (!(m > jet_tol(J))) out.report.pass = false;
    }
  }
  return out;
}

}  // namespace jetpot
