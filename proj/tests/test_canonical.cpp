#include <doctest.h>

#include <cmath>

#include "jetpot/canonical.hpp"
#include "jetpot/operators.hpp"

using namespace jetpot;

namespace {

Jet mk(double r, Vec p, Mat A) { return {r, std::move(p), std::move(A)}; }

Mat diag2(double a, double b) {
  Mat D = Mat::Zero(2, 2);
  D.diagonal() << a, b;
  return D;
}

Jet axis_I(int n, double scale = 1.0) {
  Jet J = Jet::zero(n);
  J.A = scale * Mat::Identity(n, n);
  return J;
}

Jet axis_NI(int n) {
  Jet J = axis_I(n);
  J.r = -1.0;
  return J;
}

}  // namespace

TEST_CASE("boundary-ray values for the convexity and negative-convex sets") {
  const int n = 2;
  const Jet J = mk(0.0, Vec::Zero(n), diag2(2.0, 5.0));
  CHECK(canonical_eval(convexity_set(n), axis_I(n), J) == doctest::Approx(2.0).epsilon(1e-9));
  const Jet K = mk(-3.0, Vec::Zero(n), diag2(2.0, 5.0));
  CHECK(canonical_eval(negative_convex_set(n), axis_NI(n), K) ==
        doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("affine property along the chosen direction") {
  Sampler s(42);
  const int n = 3;
  const auto S = negative_convex_set(n);
  const Jet J0 = axis_NI(n);
  for (int i = 0; i < 50; ++i) {
    const Jet J = s.jet(n);
    const double base = canonical_eval(S, J0, J);
    for (double t : {-5.0, 1.0, 3.0}) {
      CHECK(std::abs(canonical_eval(S, J0, J + t * J0) - base - t) <=
            1e-7 * (1 + std::abs(base) + std::abs(t)));
    }
  }
}

TEST_CASE("trichotomy and cone monotonicity of the canonical value") {
  Sampler s(7);
  const int n = 2;
  const auto S = convexity_set(n);
  const Jet J0 = axis_I(n);
  const auto M = MonotonicityCone::P();
  for (int i = 0; i < 200; ++i) {
    const Jet J = s.jet(n);
    const double F = canonical_eval(S, J0, J);
    const double m = S.margin(J);
    const double tol = 10 * jet_tol(J);
    if (m > tol) CHECK(F > 0);
    if (F > tol) CHECK(m > 0);
    if (std::abs(m) <= 1e-12) CHECK(std::abs(F) <= tol);
    const Jet Jp = M.sample(s, n);
    CHECK(canonical_eval(S, J0, J + Jp) >= F - 10 * jet_tol(J + Jp));
  }
}

TEST_CASE("closed-form canonical operators match the bisection") {
  Sampler s(11);
  const int n = 3;
  SUBCASE("smallest eigenvalue") {
    const auto S = convexity_set(n);
    for (int i = 0; i < 100; ++i) {
      const Jet J = s.jet(n);
      CHECK(std::abs(canonical_eval(S, axis_I(n), J) - sym_eigs(J.A)(0)) <=
            1e-7 * (1 + norm(J)));
    }
  }
  SUBCASE("negative-convex minimum") {
    const auto S = negative_convex_set(n);
    for (int i = 0; i < 100; ++i) {
      const Jet J = s.jet(n);
      const double expect = std::min(-J.r, sym_eigs(J.A)(0));
      CHECK(std::abs(canonical_eval(S, axis_NI(n), J) - expect) <= 1e-7 * (1 + norm(J)));
    }
  }
  SUBCASE("truncated Laplacian for the k-plurisubharmonic cone") {
    // The unit-slope direction for this margin is (0, 0, I/k).
    const int k = 2;
    const auto S = plurisubharmonic_set(n, k);
    const Jet J0 = axis_I(n, 1.0 / k);
    for (int i = 0; i < 100; ++i) {
      const Jet J = s.jet(n);
      const Vec w = sym_eigs(J.A);
      const double expect = w(0) + w(1);
      CHECK(std::abs(canonical_eval(S, J0, J) - expect) <= 1e-7 * (1 + norm(J)));
    }
  }
  SUBCASE("linear operators after renormalization") {
    for (int i = 0; i < 50; ++i) {
      Jet coeff = mk(-std::abs(s.uniform(0.0, 1.0)), s.vec(n), s.psd(n));
      const auto S = halfspace_set(coeff);
      Jet J0 = axis_NI(n);
      J0.p = coeff.p;  // well inside the half-space
      const double denom = inner(coeff, J0);
      REQUIRE(denom > 0);
      const Jet J = s.jet(n);
      CHECK(std::abs(canonical_eval(S, J0, J) - inner(coeff, J) / denom) <=
            1e-8 * (1 + norm(J)));
    }
  }
}

TEST_CASE("dual operator identities") {
  Sampler s(13);
  const int n = 2;
  SUBCASE("dual of the convexity set evaluates the largest eigenvalue") {
    const auto S = convexity_set(n);
    for (int i = 0; i < 50; ++i) {
      const Jet J = s.jet(n);
      const Vec w = sym_eigs(J.A);
      CHECK(std::abs(dual_canonical_eval(S, axis_I(n), J) - w(n - 1)) <= 1e-7 * (1 + norm(J)));
    }
  }
  SUBCASE("gradient-free dual maximum") {
    const auto S = negative_convex_set(n);
    for (int i = 0; i < 50; ++i) {
      const Jet J = s.jet(n);
      const Vec w = sym_eigs(J.A);
      const double expect = std::max(-J.r, w(n - 1));
      CHECK(std::abs(dual_canonical_eval(S, axis_NI(n), J) - expect) <= 1e-7 * (1 + norm(J)));
    }
  }
  SUBCASE("dual route equals the dual-margin route; double dual returns") {
    const auto S = negative_convex_set(n);
    const auto D = dual_margin(S);
    const Jet J0 = axis_NI(n);
    for (int i = 0; i < 100; ++i) {
      const Jet J = s.jet(n);
      const double tol = 2e-10 * (1 + norm(J));
      const double a = dual_canonical_eval(S, J0, J);
      CHECK(std::abs(a - canonical_eval(D, J0, J)) <= 2 * tol);
      CHECK(std::abs(-dual_canonical_eval(S, J0, -J) - canonical_eval(S, J0, J)) <= 2 * tol);
    }
  }
}

TEST_CASE("bracketing failure raises a structure violation") {
  const int n = 2;
  Jet bad_axis = Jet::zero(n);
  bad_axis.A = -Mat::Identity(n, n);  // points out of every monotonicity cone
  CHECK_THROWS_AS(canonical_eval(convexity_set(n), bad_axis, axis_I(n)), StructureViolation);
}

TEST_CASE("graphing the boundary over a transversal hyperplane") {
  const int n = 2;
  const auto S = convexity_set(n);
  const Jet J0 = axis_I(n);
  const Hyperplane W0{axis_I(n)};
  SUBCASE("traceless Hessians graph through the smallest eigenvalue") {
    Sampler s(17);
    for (int i = 0; i < 60; ++i) {
      Mat A = s.sym(n);
      A -= (A.trace() / n) * Mat::Identity(n, n);
      const Jet Jp = mk(s.uniform(-1.0, 1.0), s.vec(n), A);
      const double g = graphing(S, J0, W0, Jp);
      CHECK(g == doctest::Approx(-sym_eigs(A)(0)).epsilon(1e-7));
      CHECK(g >= -1e-12);
      const Jet on_boundary = Jp + g * J0;
      CHECK(std::abs(S.margin(on_boundary)) <= 10 * jet_tol(on_boundary));
    }
  }
  SUBCASE("the vertex graphs to zero") {
    CHECK(std::abs(graphing(S, J0, W0, Jet::zero(n))) <= 1e-9);
  }
  SUBCASE("non-transversal hyperplanes are rejected") {
    Jet sideways = Jet::zero(n);
    sideways.p = Vec::Ones(n);
    CHECK_THROWS_AS(graphing(S, J0, Hyperplane{sideways}, Jet::zero(n)), GeometryError);
    CHECK_THROWS_AS(graphing(S, J0, W0, axis_I(n)), GeometryError);  // J' off W0
  }
}

TEST_CASE("seminorm pair graphs the cone boundary") {
  Sampler s(19);
  const int n = 2;
  const auto M = MonotonicityCone::P();
  const Jet J0 = axis_I(n);
  const Hyperplane W0{axis_I(n)};
  SUBCASE("values, positivity and the edge") {
    for (int i = 0; i < 40; ++i) {
      Mat A = s.sym(n);
      A -= (A.trace() / n) * Mat::Identity(n, n);
      const Jet Jp = mk(s.uniform(-1.0, 1.0), s.vec(n), A);
      auto [plus, minus] = lipschitz_seminorm(M, J0, W0, Jp, s);
      CHECK(plus == doctest::Approx(-sym_eigs(A)(0)).epsilon(1e-7));
      CHECK(plus >= -1e-12);
      CHECK(minus >= -1e-12);
    }
    Jet edge = Jet::zero(n);
    edge.r = 0.3;
    edge.p = Vec::Ones(n);  // the edge of the convexity cone has A = 0
    auto [plus, minus] = lipschitz_seminorm(M, J0, W0, edge, s);
    CHECK(std::abs(plus) <= 1e-9);
    CHECK(std::abs(minus) <= 1e-9);
  }
  SUBCASE("one-Lipschitz bound for monotone graphing functions") {
    for (const auto& S : {convexity_set(n), plurisubharmonic_set(n, 2), subaffine_set(n)}) {
      for (int i = 0; i < 40; ++i) {
        auto traceless = [&](Jet J) {
          J.A -= (J.A.trace() / n) * Mat::Identity(n, n);
          return J;
        };
        const Jet J = traceless(s.jet(n));
        const Jet Jp = traceless(s.jet(n));
        auto [plus, minus] = lipschitz_seminorm(M, J0, W0, Jp, s);
        const double g1 = -canonical_eval(S, J0, J + Jp);
        const double g0 = -canonical_eval(S, J0, J);
        const double slack = 10 * jet_tol(J + Jp);
        CHECK(g1 - g0 <= plus + slack);
        CHECK(g1 - g0 >= -minus - slack);
      }
    }
  }
  SUBCASE("a normal outside the polar is rejected") {
    Jet bad = Jet::zero(n);
    bad.A = -Mat::Identity(n, n);
    CHECK_THROWS_AS(lipschitz_seminorm(M, J0, Hyperplane{bad}, Jet::zero(n), s), GeometryError);
  }
}

TEST_CASE("pointedness of linear families") {
  const int n = 2;
  SUBCASE("the discretized eigenvalue-drift family") {
    const double R = 1.0;
    const LinearFamily fam = hjb_family(16, R);
    fam.validate();
    const Pointedness pt = pointedness_check(fam, fam.axis);
    CHECK(pt.pointed);
    double min_inv_norm = std::numeric_limits<double>::infinity();
    for (const Jet& Js : fam.members) min_inv_norm = std::min(min_inv_norm, 1.0 / norm(Js));
    CHECK(std::abs(pt.epsilon - min_inv_norm) <= 1e-10);
  }
  SUBCASE("an antipodal pair is never pointed") {
    Jet v = Jet::zero(n);
    v.A = Mat::Identity(n, n);
    LinearFamily fam;
    fam.members = {v, -1.0 * v};
    CHECK_THROWS_AS(fam.validate(), PreconditionError);  // -v is not proper elliptic
    // Pointedness itself fails for any axis even without validation.
    const Pointedness pt = pointedness_check(fam);
    CHECK_FALSE(pt.pointed);
    CHECK(pt.violating_index >= 0);
  }
  SUBCASE("drift family with a preferred direction") {
    Sampler s(23);
    LinearFamily fam;
    Vec b0 = Vec::Zero(n);
    b0(0) = 1.0;
    for (int i = 0; i < 64; ++i) {
      Vec b = s.vec(n);
      if (b.dot(b0) < 0.3 * b.norm()) b = b - 2.0 * b.dot(b0) * b0 + 0.5 * b.norm() * b0;
      fam.members.push_back(mk(-0.5, b, s.psd(n)));
    }
    Jet J0 = axis_NI(n);
    J0.p = b0;
    const Pointedness pt = pointedness_check(fam, J0);
    CHECK(pt.pointed);
    CHECK(pt.epsilon > 0);
  }
}

TEST_CASE("family operator: inf, sup, duality and the intersection margin") {
  Sampler s(29);
  const int n = 2;
  const double R = 1.0;
  const LinearFamily fam = hjb_family(24, R);
  const Jet J0 = *fam.axis;
  SUBCASE("a single member reproduces the renormalized linear operator") {
    LinearFamily one;
    one.members = {fam.members.front()};
    const Jet J = s.jet(n);
    CHECK(family_op(one, false, J0, J) ==
          doctest::Approx(inner(one.members[0], J) / inner(one.members[0], J0)));
  }
  SUBCASE("inf-sup reflection") {
    for (int i = 0; i < 60; ++i) {
      const Jet J = s.jet(n);
      CHECK(family_op(fam, true, J0, J) ==
            doctest::Approx(-family_op(fam, false, J0, -J)).epsilon(1e-12));
    }
  }
  SUBCASE("the factored evaluator matches the explicit product family") {
    for (int i = 0; i < 60; ++i) {
      const Jet J = s.jet(n);
      CHECK(std::abs(family_op(fam, false, J0, J) - hjb_min_eig_grad(24, R, J)) <= 1e-12);
      CHECK(std::abs(family_op(fam, true, J0, J) - hjb_min_eig_grad(24, R, J, true)) <= 1e-12);
    }
  }
  SUBCASE("the infimum is the canonical operator of the intersection") {
    ConstraintSet inter;
    inter.name = "intersection";
    inter.n = n;
    inter.margin = [&fam, &J0](const Jet& J) {
      double m = std::numeric_limits<double>::infinity();
      for (const Jet& Js : fam.members) m = std::min(m, inner(Js, J) / inner(Js, J0));
      return m;
    };
    for (int i = 0; i < 40; ++i) {
      const Jet J = s.jet(n);
      const double tol = 1e-10 * (1 + norm(J));
      CHECK(std::abs(family_op(fam, false, J0, J) - canonical_eval(inter, J0, J)) <= 2 * tol);
    }
  }
  SUBCASE("midpoint concavity of the infimum") {
    for (int i = 0; i < 60; ++i) {
      const Jet A = s.jet(n), B = s.jet(n);
      const Jet mid = 0.5 * (A + B);
      CHECK(family_op(fam, false, J0, mid) >=
            0.5 * (family_op(fam, false, J0, A) + family_op(fam, false, J0, B)) - 1e-12);
    }
  }
  SUBCASE("non-pointed axes are rejected") {
    Jet bad = Jet::zero(n);
    bad.r = 1.0;
    CHECK_THROWS_AS(family_op(fam, false, bad, s.jet(n)), PreconditionError);
  }
}

TEST_CASE("discretization error of the eigenvalue-drift operator") {
  Sampler s(31);
  const double R = 1.0;
  for (int i = 0; i < 40; ++i) {
    const Jet J = s.jet(2);
    const double exact = sym_eigs(J.A)(0) - J.p.norm() / R;
    CHECK(std::abs(hjb_min_eig_grad(512, R, J) - exact) <= 2e-4 * (1 + norm(J)));
  }
}

TEST_CASE("ray solutions carry their bracket invariants") {
  Sampler s(71);
  const int n = 2;
  const auto S = negative_convex_set(n);
  const Jet J0 = axis_NI(n);
  for (int i = 0; i < 50; ++i) {
    const Jet J = s.jet(n);
    const double tol = 1e-10 * (1 + norm(J));
    const RaySolution sol = solve_boundary_ray(S, J0, J, tol);
    CHECK(sol.t_hi - sol.t_lo <= tol);
    CHECK(S.margin(J + sol.t_hi * J0) >= 0);
    CHECK(S.margin(J + sol.t_lo * J0) < 0);
    CHECK(std::abs(sol.residual) <= 10 * tol);
  }
}

TEST_CASE("sphere discretization in dimension three") {
  Sampler s(79);
  const int N = 4000;
  const auto dirs = sphere_directions(3, N);
  REQUIRE(dirs.size() == static_cast<size_t>(N));
  for (int i = 0; i < 100; ++i) CHECK(dirs[static_cast<size_t>(i * 17 % N)].norm() ==
                                      doctest::Approx(1.0));
  const double budget = sphere_mesh_budget(3, N);
  const double R = 1.0;
  for (int i = 0; i < 25; ++i) {
    const Jet J = s.jet(3);
    const double exact = sym_eigs(J.A)(0) - J.p.norm() / R;
    const double approx = min_eig_grad_family(dirs, R, J);
    // Error within a small multiple of the reported mesh budget, scaled.
    CHECK(std::abs(approx - exact) <= 3.0 * budget * (1 + norm(J)));
  }
}
