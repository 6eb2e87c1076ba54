#include "jetpot/subeq.hpp"

#include <algorithm>
#include <cmath>

namespace jetpot {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ConstraintSet dual_margin(const ConstraintSet& S) {
  ConstraintSet D;
  D.name = S.name.rfind("dual(", 0) == 0 ? S.name.substr(5, S.name.size() - 6)
                                         : "dual(" + S.name + ")";
  D.n = S.n;
  auto m = S.margin;
  D.margin = [m](const Jet& J) { return -m(-J); };
  D.monotone_cone = S.monotone_cone;  // dual sets share the maximal cone
  D.silent = S.silent;
  D.tame = S.tame;
  if (S.tame && !*S.tame) D.dual_degraded = true;
  return D;
}

ConstraintSet from_indicator(std::string name, int n, std::function<bool(const Jet&)> member) {
  ConstraintSet S;
  S.name = std::move(name);
  S.n = n;
  S.margin = [member = std::move(member)](const Jet& J) { return member(J) ? 1.0 : -1.0; };
  S.tame = false;
  return S;
}

json Interval::to_json() const {
  json j;
  j["lo"] = lo;
  j["hi"] = hi;
  j["lo_open"] = lo_open;
  j["hi_open"] = hi_open;
  if (approximate) j["approximate"] = true;
  return j;
}

ConstraintSet level_set(const CompatiblePair& P, double c) {
  if (!P.levels.contains(c))
    throw LevelError(P.name + ": level " + std::to_string(c) + " outside admissible interval");
  ConstraintSet S;
  S.name = P.name + "@" + std::to_string(c);
  S.n = P.n;
  if (P.constrained()) {
    auto base = P.constraint->margin;
    auto op = P.op;
    S.margin = [base, op, c](const Jet& J) { return std::min(base(J), op(J) - c); };
    S.silent = P.constraint->silent;
  } else {
    auto op = P.op;
    S.margin = [op, c](const Jet& J) { return op(J) - c; };
  }
  S.monotone_cone = P.cone;
  return S;
}

std::optional<Jet> find_member(const ConstraintSet& S, Sampler& s, long budget) {
  // Exact membership throughout: the scaled tolerance band would let the
  // monotone push below admit jets with a fixed deficit once their norm is
  // large enough to swallow it.
  const int n = S.n;
  {
    Jet z = Jet::zero(n);
    if (S.margin(z) >= 0.0 && s.uniform(0.0, 1.0) < 0.05) return z;
  }
  for (long i = 0; i < budget; ++i) {
    Jet J = s.jet(n);
    if (S.margin(J) >= 0.0) return J;
    // Push along the minimal monotonicity directions; any subequation
    // absorbs (-s, 0, P) moves, which often recovers a member.
    if (i % 3 == 0) {
      double t = 1.0 + norm(J);
      for (int k = 0; k < 24; ++k, t *= 2.0) {
        Jet K = J;
        K.r -= t;
        K.A += t * Mat::Identity(n, n);
        if (S.margin(K) >= 0.0) return K;
      }
    }
  }
  return std::nullopt;
}

Jet pin_to_boundary(const ConstraintSet& S, Jet inside, Jet outside, double width) {
  if (!(S.margin(inside) >= 0) || !(S.margin(outside) < 0))
    throw PreconditionError("pin_to_boundary: need margin(inside) >= 0 > margin(outside)");
  for (int it = 0; it < 200 && S.margin(inside) > width; ++it) {
    Jet mid = 0.5 * (inside + outside);
    (S.margin(mid) >= 0 ? inside : outside) = mid;
  }
  return inside;
}

VerificationReport monotonicity_check(const ConstraintSet& S, const MonotonicityCone& M,
                                      long n_samples, uint64_t seed,
                                      const std::function<double(const Jet&)>* op) {
  Sampler s(seed);
  VerificationReport rep;
  rep.seed = seed;
  rep.pass = true;
  const int n = S.n;
  long starved = 0;

  auto assert_pair = [&](const Jet& J, const Jet& Jp) -> bool {
    const Jet sum = J + Jp;
    const double m = S.margin(sum);
    ++rep.n_samples;
    rep.worst_margin = std::min(rep.worst_margin, m);
    bool ok = m >= -jet_tol(sum);
    if (ok && op) {
      const double drop = (*op)(sum) - (*op)(J);
      rep.worst_margin = std::min(rep.worst_margin, drop);
      ok = drop >= -jet_tol(sum);
    }
    if (!ok) {
      rep.pass = false;
      rep.witness = J;
      rep.witness_pair = Jp;
      rep.note = "membership lost after adding a cone element";
    }
    return ok;
  };

  for (long i = 0; i < n_samples && rep.pass; ++i) {
    if (i % 3 != 2) {
      auto J = find_member(S, s, 200);
      if (!J) {
        if (++starved > n_samples / 4) {
          rep.inconclusive = true;
          rep.note = "sampling starvation: could not draw members of the set";
          return rep;
        }
        continue;
      }
      assert_pair(*J, M.sample(s, n));
    } else {
      // Adversarial draws: tight cone elements, gradient anti-aligned with
      // the member's, member pinned near the boundary by shifts along I.
      Jet Jp = M.sample_tight(s, n);
      const double t = std::pow(10.0, -s.uniform_int(0, 6));
      Jp = t * Jp;
      Jet J = Jet::zero(n);
      if (S.margin(J) >= 0.0 && s.uniform(0.0, 1.0) < 0.5) {
        // The vertex itself is a member of many sets; tiny tight cone
        // elements added to it probe maximal-monotonicity boundaries.
        assert_pair(J, Jp);
        continue;
      }
      if (Jp.p.norm() > 1e-14) {
        const double alpha = s.uniform(0.0, 1.0) < 0.5 ? 2.0 : s.uniform(1.1, 4.0);
        J.p = -alpha * Jp.p;
      } else {
        J.p = s.vec(n);
      }
      J.r = -std::abs(s.uniform(0.0, 1.0)) * s.magnitude();
      J.A = s.sym(n);
      // Bracket membership along A + cI.
      double chi = 1.0 + norm(J);
      bool bracket = false;
      Jet hiJ = J;
      for (int k = 0; k < 40; ++k, chi *= 2.0) {
        hiJ = J;
        hiJ.A += chi * Mat::Identity(n, n);
        if (S.margin(hiJ) >= 0) {
          bracket = true;
          break;
        }
      }
      if (!bracket) continue;
      double clo = -(1.0 + norm(J));
      Jet loJ = J;
      for (int k = 0; k < 40; ++k, clo *= 2.0) {
        loJ = J;
        loJ.A += clo * Mat::Identity(n, n);
        if (S.margin(loJ) < 0) break;
      }
      if (S.margin(loJ) >= 0) {
        assert_pair(loJ, Jp);
        continue;
      }
      const Jet member = pin_to_boundary(S, hiJ, loJ, 1e-7 * (1.0 + norm(hiJ)));
      assert_pair(member, Jp);
    }
  }
  return rep;
}

VerificationReport tameness_check(const CompatiblePair& P, const Jet& J0, long samples,
                                  uint64_t seed) {
  if (P.cone && !cone_interior(*P.cone, J0))
    throw PreconditionError("tameness_check: J0 must be interior to the pair's cone");
  Sampler s(seed);
  VerificationReport rep;
  rep.seed = seed;
  rep.pass = true;
  const int n = P.n;
  for (long i = 0; i < samples; ++i) {
    Jet J;
    if (P.constrained()) {
      auto got = find_member(*P.constraint, s, 200);
      if (!got) continue;
      J = *got;
    } else {
      J = s.jet(n);
    }
    const double t = s.uniform(1e-3, 10.0);
    const double rise = P.op(J + t * J0) - P.op(J);
    ++rep.n_samples;
    rep.worst_margin = std::min(rep.worst_margin, rise);
    if (!(rise > 0)) {
      rep.pass = false;
      rep.witness = J;
      rep.note = "operator not strictly increasing along the interior direction, t = " +
                 std::to_string(t);
      return rep;
    }
  }
  if (rep.n_samples == 0) {
    rep.inconclusive = true;
    rep.note = "sampling starvation";
  }
  return rep;
}

VerificationReport compatibility_check(const CompatiblePair& P, long samples, uint64_t seed) {
  if (!P.constrained()) throw PreconditionError("compatibility_check: constrained pair required");
  Sampler s(seed);
  VerificationReport rep;
  rep.seed = seed;
  rep.pass = true;
  const int n = P.n;
  const ConstraintSet& F = *P.constraint;
  const double floor = -1e6;

  double inf_est = kInf;
  Jet arg_inf;
  std::vector<Jet> members;
  std::vector<Jet> outsiders;
  const double ladder[] = {1.0, 10.0, 100.0, 1e3, 1e4, 1e6};
  for (long i = 0; i < samples; ++i) {
    Jet J = s.jet(n);
    // Sweep magnitudes per jet slot independently; an infimum that
    // diverges along a single axis is invisible to uniform scaling.
    J.r *= ladder[s.uniform_int(0, 5)];
    J.p *= ladder[s.uniform_int(0, 5)];
    J.A *= ladder[s.uniform_int(0, 5)];
    // Exact membership here: the scaled tolerance band would let the
    // operator dip below c0 by an amount the band cannot bound.
    if (F.margin(J) >= 0.0) {
      members.push_back(J);
      const double v = P.op(J);
      ++rep.n_samples;
      if (v < inf_est) {
        inf_est = v;
        arg_inf = J;
      }
    } else {
      outsiders.push_back(J);
    }
  }
  if (members.empty()) {
    rep.inconclusive = true;
    rep.note = "sampling starvation: no members found";
    return rep;
  }
  rep.note = "inf_estimate=" + std::to_string(inf_est);
  if (inf_est < floor) {
    rep.pass = false;
    rep.witness = arg_inf;
    rep.worst_margin = inf_est;
    rep.note = "divergent infimum: sampled operator values fall below the floor";
    return rep;
  }
  if (inf_est < P.c0 - 1e-6 * (1.0 + std::abs(P.c0))) {
    rep.pass = false;
    rep.witness = arg_inf;
    rep.worst_margin = inf_est - P.c0;
    rep.note = "sampled operator value below the declared boundary level";
    return rep;
  }

  // Near-boundary members must sit at the operator level c0. Pin at the
  // moderate magnitudes; the huge rungs exist only for divergence hunting,
  // and polynomial operators amplify a boundary band by powers of the norm.
  long boundary_checked = 0;
  size_t oi = 0;
  for (size_t i = 0;
       i < members.size() && boundary_checked < std::max<long>(32, samples / 100); ++i) {
    if (norm(members[i]) > 1e3) continue;
    while (oi < outsiders.size() && norm(outsiders[oi]) > 1e3) ++oi;
    if (oi >= outsiders.size()) break;
    const Jet Jb =
        pin_to_boundary(F, members[i], outsiders[oi++], 1e-12 * (1.0 + norm(members[i])));
    const double gap = std::abs(P.op(Jb) - P.c0);
    const double tol = 1e-4 * (1.0 + std::abs(P.c0) + norm(Jb));
    ++boundary_checked;
    ++rep.n_samples;
    rep.worst_margin = std::min(rep.worst_margin, tol - gap);
    if (gap > tol) {
      rep.pass = false;
      rep.witness = Jb;
      rep.note = "boundary jet with operator level away from c0 (gap " + std::to_string(gap) +
                 ")";
      return rep;
    }
  }

  // Members at the operator level c0 must be near the boundary.
  for (const Jet& J : members) {
    if (P.op(J) <= P.c0 + 1e-8 * (1.0 + std::abs(P.c0))) {
      const double m = F.margin(J);
      ++rep.n_samples;
      if (m > 1e-3 * (1.0 + norm(J))) {
        rep.pass = false;
        rep.witness = J;
        rep.note = "interior member at the boundary operator level";
        return rep;
      }
    }
  }
  return rep;
}

VerificationReport jet_addition_check(const ConstraintSet& F, const ConstraintSet& H,
                                      long samples, uint64_t seed) {
  Sampler s(seed);
  VerificationReport rep;
  rep.seed = seed;
  const ConstraintSet Fd = dual_margin(F);
  const ConstraintSet Hd = dual_margin(H);

  bool first_holds = true, second_holds = true;
  double worst1 = kInf, worst2 = kInf;
  Jet w1a, w1b, w2a, w2b;
  for (long i = 0; i < samples; ++i) {
    auto J1 = find_member(F, s, 100);
    auto J2 = find_member(Fd, s, 100);
    if (J1 && J2) {
      const Jet sum = *J1 + *J2;
      const double m = H.margin(sum);
      ++rep.n_samples;
      if (m < worst1) {
        worst1 = m;
        w1a = *J1;
        w1b = *J2;
      }
      if (m < -jet_tol(sum)) first_holds = false;
    }
    auto J3 = find_member(Hd, s, 100);
    if (J1 && J3) {
      const Jet sum = *J1 + *J3;
      const double m = F.margin(sum);
      ++rep.n_samples;
      if (m < worst2) {
        worst2 = m;
        w2a = *J1;
        w2b = *J3;
      }
      if (m < -jet_tol(sum)) second_holds = false;
    }
  }
  if (rep.n_samples == 0) {
    rep.inconclusive = true;
    rep.note = "sampling starvation";
    return rep;
  }
  rep.pass = (first_holds == second_holds);
  rep.worst_margin = std::min(worst1, worst2);
  rep.note = std::string("F+dual(F) in H: ") + (first_holds ? "holds" : "fails") +
             "; F+dual(H) in F: " + (second_holds ? "holds" : "fails");
  if (!rep.pass) {
    rep.witness = first_holds ? w2a : w1a;
    rep.witness_pair = first_holds ? w2b : w1b;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Margin catalog
// ---------------------------------------------------------------------------

ConstraintSet convexity_set(int n) {
  ConstraintSet S;
  S.name = "P";
  S.n = n;
  S.margin = [](const Jet& J) { return sym_eigs(J.A)(0); };
  S.monotone_cone = MonotonicityCone::P();
  S.silent = {true, true, false};
  S.tame = true;
  return S;
}

ConstraintSet subaffine_set(int n) {
  ConstraintSet S;
  S.name = "dual(P)";
  S.n = n;
  S.margin = [](const Jet& J) {
    const Vec w = sym_eigs(J.A);
    return w(w.size() - 1);
  };
  S.monotone_cone = MonotonicityCone::P();
  S.silent = {true, true, false};
  S.tame = true;
  return S;
}

ConstraintSet plurisubharmonic_set(int n, int k) {
  if (k < 1 || k > n) throw PreconditionError("plurisubharmonic_set: 1 <= k <= n");
  ConstraintSet S;
  S.name = "P(" + std::to_string(k) + ")";
  S.n = n;
  S.margin = [k](const Jet& J) {
    const Vec w = sym_eigs(J.A);
    double sum = 0.0;
    for (int j = 0; j < k; ++j) sum += w(j);
    return sum;
  };
  S.monotone_cone = MonotonicityCone::P();
  S.silent = {true, true, false};
  S.tame = true;
  return S;
}

ConstraintSet negative_convex_set(int n) {
  ConstraintSet S;
  S.name = "NxP";
  S.n = n;
  S.margin = [](const Jet& J) { return std::min(-J.r, sym_eigs(J.A)(0)); };
  S.monotone_cone = MonotonicityCone::NP();
  S.silent = {false, true, false};
  S.tame = true;
  return S;
}

ConstraintSet subaffine_plus_set(int n) {
  ConstraintSet S;
  S.name = "dual(NxP)";
  S.n = n;
  S.margin = [](const Jet& J) {
    const Vec w = sym_eigs(J.A);
    return std::max(-J.r, w(w.size() - 1));
  };
  S.monotone_cone = MonotonicityCone::NP();
  S.silent = {false, true, false};
  S.tame = true;
  return S;
}

ConstraintSet halfspace_set(const Jet& coeff) {
  if (norm(coeff) <= 0) throw PreconditionError("halfspace_set: zero coefficient jet");
  ConstraintSet S;
  S.name = "halfspace";
  S.n = coeff.dim();
  S.margin = [coeff](const Jet& J) { return inner(coeff, J); };
  S.tame = true;
  return S;
}

ConstraintSet eig_grad_set(int n, int k, double R, int sign) {
  if (k < 1 || k > n) throw PreconditionError("eig_grad_set: 1 <= k <= n");
  if (!(R > 0)) throw PreconditionError("eig_grad_set: R > 0");
  ConstraintSet S;
  S.name = std::string("F") + (sign > 0 ? "+" : "-") + "_" + std::to_string(k);
  S.n = n;
  const double sgn = sign > 0 ? 1.0 : -1.0;
  S.margin = [k, R, sgn](const Jet& J) {
    return sym_eigs(J.A)(k - 1) + sgn * J.p.norm() / R;
  };
  S.monotone_cone = MonotonicityCone::of_R(R);
  S.silent = {true, false, false};
  S.tame = true;
  return S;
}

ConstraintSet cone_as_constraint(const MonotonicityCone& M, int n) {
  ConstraintSet S;
  S.name = M.describe();
  S.n = n;
  S.margin = [M](const Jet& J) { return M.member_margin(J); };
  S.monotone_cone = M;  // a convex cone subequation is its own maximal cone
  S.tame = M.has_interior();
  return S;
}

Mat alpha_family_B(double alpha, const Vec& p, const Mat& A) {
  if (p.norm() <= 0.0) return A;
  auto [Pp, Pperp] = projections(p);
  return A + std::pow(p.norm(), (alpha - 1.0) / alpha) * (Pperp + alpha * Pp);
}

ConstraintSet alpha_min_set(int n, double alpha) {
  if (!(alpha > 1.0)) throw PreconditionError("alpha family requires alpha > 1");
  ConstraintSet S;
  S.name = "alpha_min";
  S.n = n;
  S.margin = [alpha](const Jet& J) { return sym_eigs(alpha_family_B(alpha, J.p, J.A))(0); };
  S.monotone_cone = MonotonicityCone::zero_gradient();
  S.silent = {true, false, false};
  S.tame = true;
  return S;
}

ConstraintSet alpha_max_set(int n, double alpha) {
  if (!(alpha > 1.0)) throw PreconditionError("alpha family requires alpha > 1");
  ConstraintSet S;
  S.name = "alpha_max";
  S.n = n;
  S.margin = [alpha](const Jet& J) {
    const Vec w = sym_eigs(alpha_family_B(alpha, J.p, J.A));
    return w(w.size() - 1);
  };
  S.monotone_cone = MonotonicityCone::zero_gradient();
  S.silent = {true, false, false};
  S.tame = true;
  return S;
}

}  // namespace jetpot
