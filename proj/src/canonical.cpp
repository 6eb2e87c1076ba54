#include "jetpot/canonical.hpp"

#include <cmath>

namespace jetpot {

RaySolution solve_boundary_ray(const ConstraintSet& S, const Jet& J0, const Jet& J, double tol) {
  if (tol <= 0) tol = 1e-10 * (1.0 + norm(J));
  RaySolution sol;
  auto margin_at = [&](double t) { return S.margin(J + t * J0); };
  const double m0 = S.margin(J);
  double lo, hi;
  if (m0 >= 0) {
    hi = 0.0;
    lo = -1.0;
    while (margin_at(lo) >= 0) {
      lo *= 2.0;
      if (++sol.iterations > 60)
        throw StructureViolation(
            "boundary ray: no exit from the set after 2^60; the set is not monotone for "
            "this direction");
    }
  } else {
    lo = 0.0;
    hi = 1.0;
    while (margin_at(hi) < 0) {
      hi *= 2.0;
      if (++sol.iterations > 60)
        throw StructureViolation(
            "boundary ray: no entry into the set after 2^60; the set is not monotone for "
            "this direction");
    }
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (margin_at(mid) >= 0 ? hi : lo) = mid;
    ++sol.iterations;
    if (sol.iterations > 400) break;
  }
  sol.t_lo = lo;
  sol.t_hi = hi;
  sol.t_J = 0.5 * (lo + hi);
  sol.residual = margin_at(sol.t_J);
  return sol;
}

double canonical_eval(const ConstraintSet& S, const Jet& J0, const Jet& J, double tol) {
  return -solve_boundary_ray(S, J0, J, tol).t_J;
}

double dual_canonical_eval(const ConstraintSet& S, const Jet& J0, const Jet& J, double tol) {
  return -canonical_eval(S, J0, -J, tol);
}

double graphing(const ConstraintSet& S, const Jet& J0, const Hyperplane& W0, const Jet& Jprime,
                double tol) {
  const double transversal = inner(W0.normal, J0);
  if (!(transversal > 0)) throw GeometryError("graphing: W0 not transversal to J0");
  const double off = std::abs(inner(W0.normal, Jprime));
  if (off > 1e-7 * (1.0 + norm(W0.normal)) * (1.0 + norm(Jprime)))
    throw GeometryError("graphing: J' does not lie on W0");
  return -canonical_eval(S, J0, Jprime, tol);
}

std::pair<double, double> lipschitz_seminorm(const MonotonicityCone& M, const Jet& J0,
                                             const Hyperplane& W0, const Jet& Jprime,
                                             Sampler& s) {
  if (!cone_interior(M, J0)) throw GeometryError("lipschitz_seminorm: J0 not interior to M");
  const int n = J0.dim();
  // The normal must pair nonnegatively with the cone, and vanish only on
  // its edge: sampled relative-interior test.
  const double nn = norm(W0.normal);
  for (int i = 0; i < 1000; ++i) {
    const Jet Jm = M.sample(s, n);
    const double ip = inner(Jm, W0.normal);
    if (ip < -1e-9 * nn * (1.0 + norm(Jm)))
      throw GeometryError("lipschitz_seminorm: normal pairs negatively with the cone");
    if (ip <= 1e-7 * nn * (1.0 + norm(Jm)) && !cone_member(M, -Jm))
      throw GeometryError("lipschitz_seminorm: normal vanishes off the edge of the cone");
  }
  const ConstraintSet C = cone_as_constraint(M, n);
  const double plus = graphing(C, J0, W0, Jprime);
  const double minus = graphing(C, J0, W0, -Jprime);
  return {plus, minus};
}

void LinearFamily::validate() const {
  for (size_t i = 0; i < members.size(); ++i) {
    const Jet& Js = members[i];
    if (norm(Js) <= 0) throw PreconditionError("linear family: zero coefficient jet");
    if (Js.r > 1e-12)
      throw PreconditionError("linear family: coefficient a > 0 is not proper elliptic");
    if (sym_eigs(Js.A)(0) < -1e-9 * (1.0 + Js.A.norm()))
      throw PreconditionError("linear family: coefficient E not positive semidefinite");
  }
}

Pointedness pointedness_check(const LinearFamily& S, std::optional<Jet> axis) {
  if (S.members.empty()) throw PreconditionError("pointedness_check: empty family");
  Pointedness out;
  if (axis) {
    out.axis = *axis;
  } else if (S.axis) {
    out.axis = *S.axis;
  } else {
    // Heuristic axis: mean of the normalized members.
    Jet mean = Jet::zero(S.members.front().dim());
    for (const Jet& Js : S.members) mean += (1.0 / norm(Js)) * Js;
    mean *= 1.0 / static_cast<double>(S.members.size());
    out.axis = mean;
  }
  out.epsilon = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < S.members.size(); ++i) {
    const double e = inner(S.members[i], out.axis) / norm(S.members[i]);
    if (e < out.epsilon) {
      out.epsilon = e;
      out.violating_index = static_cast<long>(i);
    }
  }
  out.pointed = out.epsilon > 0;
  if (out.pointed) out.violating_index = -1;
  return out;
}

double family_op(const LinearFamily& S, bool sup_mode, const Jet& J0, const Jet& J) {
  const Pointedness pt = pointedness_check(S, J0);
  if (!pt.pointed)
    throw PreconditionError("family_op: coefficient set is not pointed for this axis");
  double best = sup_mode ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
  for (const Jet& Js : S.members) {
    const double v = inner(Js, J) / inner(Js, J0);
    best = sup_mode ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

std::vector<Vec> sphere_directions(int n, int N) {
  std::vector<Vec> dirs;
  dirs.reserve(static_cast<size_t>(N));
  if (n == 2) {
    for (int i = 0; i < N; ++i) {
      const double th = 2.0 * M_PI * i / N;
      Vec v(2);
      v << std::cos(th), std::sin(th);
      dirs.push_back(v);
    }
    return dirs;
  }
  if (n == 3) {
    // Fibonacci spiral.
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < N; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / N;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      Vec v(3);
      v << rho * std::cos(phi), rho * std::sin(phi), z;
      dirs.push_back(v);
    }
    return dirs;
  }
  throw CapabilityError("sphere_directions: dimensions two and three only");
}

double sphere_mesh_budget(int n, int N) {
  return std::pow(static_cast<double>(N), -1.0 / (n - 1));
}

double min_eig_grad_family(const std::vector<Vec>& dirs, double R, const Jet& J,
                           bool sup_mode) {
  // <J_sigma, J> / <J_sigma, J0> with J0 = (0, 0, I) has denominator
  // tr(xi xi^T) = 1, and the pair objective <A xi, xi> + <eta, p>/R is a sum
  // of single-index terms, so the inf over pairs is the sum of the minima.
  double quad = sup_mode ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
  double lin = quad;
  for (const Vec& d : dirs) {
    const double q = d.dot(J.A * d);
    const double l = d.dot(J.p) / R;
    if (sup_mode) {
      quad = std::max(quad, q);
      lin = std::max(lin, l);
    } else {
      quad = std::min(quad, q);
      lin = std::min(lin, l);
    }
  }
  return quad + lin;
}

double hjb_min_eig_grad(int N, double R, const Jet& J, bool sup_mode) {
  return min_eig_grad_family(sphere_directions(J.dim(), N), R, J, sup_mode);
}

LinearFamily hjb_family(int N, double R) {
  LinearFamily fam;
  fam.members.reserve(static_cast<size_t>(N) * N);
  for (int i = 0; i < N; ++i) {
    const double thx = 2.0 * M_PI * i / N;
    Vec xi(2);
    xi << std::cos(thx), std::sin(thx);
    const Mat E = xi * xi.transpose();
    for (int j = 0; j < N; ++j) {
      const double the = 2.0 * M_PI * j / N;
      Vec eta(2);
      eta << std::cos(the), std::sin(the);
      fam.members.push_back(Jet{0.0, eta / R, E});
    }
  }
  Jet j0 = Jet::zero(2);
  j0.A = Mat::Identity(2, 2);
  fam.axis = j0;
  return fam;
}

}  // namespace jetpot
