#include <doctest.h>

#include <cmath>

#include "jetpot/operators.hpp"
#include "jetpot/subeq.hpp"

using namespace jetpot;

namespace {

Jet mk(double r, Vec p, Mat A) { return {r, std::move(p), std::move(A)}; }

Mat diag2(double a, double b) {
  Mat D = Mat::Zero(2, 2);
  D.diagonal() << a, b;
  return D;
}

}  // namespace

TEST_CASE("dual margins") {
  const int n = 3;
  Sampler s(42);
  SUBCASE("dual of the convexity margin is the subaffine margin") {
    const ConstraintSet D = dual_margin(convexity_set(n));
    const ConstraintSet SA = subaffine_set(n);
    for (int i = 0; i < 200; ++i) {
      const Jet J = s.jet(n);
      CHECK(D.margin(J) == doctest::Approx(SA.margin(J)).epsilon(1e-12));
    }
  }
  SUBCASE("half-space margins are self-dual") {
    const Jet coeff = mk(-0.5, s.vec(n), s.psd(n));
    const ConstraintSet H = halfspace_set(coeff);
    const ConstraintSet D = dual_margin(H);
    for (int i = 0; i < 200; ++i) {
      const Jet J = s.jet(n);
      CHECK(D.margin(J) == doctest::Approx(H.margin(J)).epsilon(1e-12));
    }
  }
  SUBCASE("double dual restores the margin exactly") {
    for (const auto& S : {convexity_set(n), negative_convex_set(n), alpha_min_set(n, 2.0),
                          eig_grad_set(n, 2, 1.5, +1)}) {
      const ConstraintSet DD = dual_margin(dual_margin(S));
      for (int i = 0; i < 1000; ++i) {
        const Jet J = s.jet(n);
        CHECK(DD.margin(J) == S.margin(J));  // exact, pure sign algebra
      }
    }
  }
  SUBCASE("order reversal") {
    const ConstraintSet A = convexity_set(n), B = subaffine_set(n);
    const ConstraintSet dA = dual_margin(A), dB = dual_margin(B);
    for (int i = 0; i < 200; ++i) {
      const Jet J = s.jet(n);
      REQUIRE(A.margin(J) <= B.margin(J) + 1e-15);
      CHECK(dA.margin(J) >= dB.margin(J) - 1e-15);
    }
  }
  SUBCASE("translation identity") {
    const ConstraintSet S = negative_convex_set(n);
    const Jet shift = s.jet(n);
    ConstraintSet shifted = S;  // margin of F + shift
    shifted.margin = [S, shift](const Jet& J) { return S.margin(J - shift); };
    const ConstraintSet lhs = dual_margin(shifted);
    const ConstraintSet rhs = dual_margin(S);
    for (int i = 0; i < 200; ++i) {
      const Jet J = s.jet(n);
      CHECK(lhs.margin(J) == doctest::Approx(rhs.margin(J + shift)).epsilon(1e-12));
    }
  }
}

TEST_CASE("level sets") {
  const int n = 2;
  SUBCASE("unconstrained operator at level zero") {
    const OperatorSpec sl = catalog("special_lagrangian", {{"n", n}});
    const ConstraintSet S = level_set(sl.pair, 0.0);
    CHECK(S.margin(Jet::zero(n)) == doctest::Approx(0.0));
    CHECK_THROWS_AS(level_set(sl.pair, 10.0), LevelError);
  }
  SUBCASE("constrained determinant pair") {
    const OperatorSpec det = catalog("det", {{"n", n}});
    const ConstraintSet S = level_set(det.pair, 1.0);
    CHECK(S.margin(mk(0.0, Vec::Zero(n), diag2(2.0, 1.0))) == doctest::Approx(1.0));
  }
  SUBCASE("nesting in the level") {
    Sampler s(7);
    const OperatorSpec det = catalog("det", {{"n", n}});
    const ConstraintSet S1 = level_set(det.pair, 0.5), S2 = level_set(det.pair, 2.0);
    for (int i = 0; i < 300; ++i) {
      const Jet J = s.jet(n);
      CHECK(S2.margin(J) <= S1.margin(J) + 1e-15);
    }
  }
  SUBCASE("level boundary sits at the operator level for canonical margins") {
    Sampler s(11);
    const OperatorSpec lm = catalog("lambda_min", {{"n", n}});
    const double c = 0.7;
    const ConstraintSet S = level_set(lm.pair, c);
    for (int i = 0; i < 100; ++i) {
      Jet in = s.jet(n);
      in.A += (c + 1.0 + in.A.norm()) * Mat::Identity(n, n);
      REQUIRE(S.margin(in) > 0);
      Jet out = s.jet(n);
      out.A -= (c + 1.0 + out.A.norm()) * Mat::Identity(n, n);
      REQUIRE(S.margin(out) < 0);
      const Jet Jb = pin_to_boundary(S, in, out, 1e-10 * (1 + norm(in)));
      CHECK(std::abs(lm.pair.op(Jb) - c) <= 1e-7 * (1 + std::abs(c) + norm(Jb)));
    }
  }
}

TEST_CASE("monotonicity_check") {
  const int n = 2;
  SUBCASE("convexity set against its cone") {
    const auto rep = monotonicity_check(convexity_set(n), MonotonicityCone::P(), 2000, 42);
    CHECK(rep.pass);
    CHECK_FALSE(rep.inconclusive);
  }
  SUBCASE("eigenvalue-gradient set against the R-cone") {
    for (int k : {1, 2}) {
      const auto rep =
          monotonicity_check(eig_grad_set(n, k, 1.0, +1), MonotonicityCone::of_R(1.0), 3000, 42);
      CAPTURE(k);
      CHECK(rep.pass);
    }
  }
  SUBCASE("a larger R-cone is rejected with a witness") {
    const auto rep =
        monotonicity_check(eig_grad_set(n, 2, 1.0, +1), MonotonicityCone::of_R(1.3), 20000, 42);
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.witness);
    REQUIRE(rep.witness_pair);
    // Replay the witness: membership really is lost.
    const ConstraintSet S = eig_grad_set(n, 2, 1.0, +1);
    const Jet sum = *rep.witness + *rep.witness_pair;
    CHECK(S.margin(*rep.witness) >= -jet_tol(*rep.witness));
    CHECK(S.margin(sum) < -jet_tol(sum));
    CHECK(cone_member(MonotonicityCone::of_R(1.3), *rep.witness_pair));
  }
  SUBCASE("operator monotonicity rides along") {
    const OperatorSpec tl = catalog("truncated_laplacian", {{"n", n}, {"k", 1}});
    const auto S = convexity_set(n);
    const auto rep = monotonicity_check(S, MonotonicityCone::P(), 1000, 42, &tl.pair.op);
    CHECK(rep.pass);
  }
  SUBCASE("starved sampling is reported inconclusive") {
    ConstraintSet empty;
    empty.name = "empty";
    empty.n = n;
    empty.margin = [](const Jet&) { return -1.0; };
    const auto rep = monotonicity_check(empty, MonotonicityCone::P(), 500, 42);
    CHECK(rep.inconclusive);
  }
}

TEST_CASE("tameness_check") {
  const int n = 2;
  const Jet J0 = mk(-1.0, Vec::Zero(n), Mat::Identity(n, n));
  SUBCASE("strictly increasing catalog operators pass") {
    for (const char* name : {"special_lagrangian", "gradient_free_min"}) {
      const OperatorSpec spec = catalog(name, {{"n", n}});
      const auto rep = tameness_check(spec.pair, J0, 400, 42);
      CAPTURE(name);
      CHECK(rep.pass);
      CHECK(rep.worst_margin > 0);
    }
  }
  SUBCASE("canonical operators rise by exactly t") {
    Sampler s(3);
    const OperatorSpec lm = catalog("lambda_min", {{"n", n}});
    Jet I0 = Jet::zero(n);
    I0.A = Mat::Identity(n, n);
    for (int i = 0; i < 100; ++i) {
      const Jet J = s.jet(n);
      const double t = s.uniform(0.1, 10.0);
      CHECK(lm.pair.op(J + t * I0) - lm.pair.op(J) == doctest::Approx(t).epsilon(1e-12));
    }
  }
  SUBCASE("a constant operator fails") {
    CompatiblePair flat;
    flat.name = "flat";
    flat.n = n;
    flat.op = [](const Jet&) { return 1.0; };
    flat.cone = MonotonicityCone::NP();
    const auto rep = tameness_check(flat, J0, 50, 42);
    CHECK_FALSE(rep.pass);
  }
  SUBCASE("J0 must be interior") {
    CompatiblePair p = catalog("gradient_free_min", {{"n", n}}).pair;
    CHECK_THROWS_AS(tameness_check(p, Jet::zero(n), 10, 42), PreconditionError);
  }
}

TEST_CASE("compatibility_check dichotomy") {
  const int n = 2;
  SUBCASE("determinant on the convexity cone") {
    const auto rep = compatibility_check(catalog("det", {{"n", n}}).pair, 4000, 42);
    CHECK(rep.pass);
  }
  SUBCASE("zero-profile determinant products") {
    const auto rep = compatibility_check(catalog("neg_r_det", {{"n", n}}).pair, 4000, 42);
    CHECK(rep.pass);
  }
  SUBCASE("det(A) - r on the unconstrained-r domain diverges") {
    CompatiblePair bad;
    bad.name = "det_minus_r";
    bad.n = n;
    bad.op = [](const Jet& J) { return J.A.determinant() - J.r; };
    ConstraintSet C = convexity_set(n);  // r and p silent: margin ignores them
    bad.constraint = C;
    bad.c0 = 0.0;
    const auto rep = compatibility_check(bad, 4000, 42);
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.witness);
    CHECK(bad.op(*rep.witness) < -1e6);  // the divergence witness
  }
  SUBCASE("unconstrained pairs are rejected") {
    CHECK_THROWS_AS(compatibility_check(catalog("lambda_min", {{"n", n}}).pair, 10, 42),
                    PreconditionError);
  }
}

TEST_CASE("jet_addition_check equivalence") {
  const int n = 2;
  SUBCASE("pure second order: P plus its dual lands in the subaffine set") {
    const auto rep = jet_addition_check(convexity_set(n), subaffine_set(n), 1500, 42);
    CHECK(rep.pass);
    CHECK(rep.note.find("holds") != std::string::npos);
  }
  SUBCASE("gradient-free: negative-convex plus dual lands in subaffine-plus") {
    const auto rep = jet_addition_check(negative_convex_set(n), subaffine_plus_set(n), 1500, 42);
    CHECK(rep.pass);
  }
  SUBCASE("eigenvalue-gradient family against the dual cone") {
    const ConstraintSet F = eig_grad_set(n, 1, 1.0, +1);
    const ConstraintSet H = dual_margin(cone_as_constraint(MonotonicityCone::of_R(1.0), n));
    const auto rep = jet_addition_check(F, H, 1500, 42);
    CHECK(rep.pass);
  }
}

TEST_CASE("boundary is reachable from both sides along the cone axis") {
  Sampler s(5);
  const int n = 2;
  const ConstraintSet S = negative_convex_set(n);
  Jet J0 = mk(-1.0, Vec::Zero(n), Mat::Identity(n, n));
  for (int i = 0; i < 60; ++i) {
    Jet in = s.jet(n);
    in.r = -std::abs(in.r) - 1;
    in.A += (1 + in.A.norm()) * Mat::Identity(n, n);
    Jet out = s.jet(n);
    out.A -= (1 + out.A.norm()) * Mat::Identity(n, n);
    REQUIRE(S.margin(in) > 0);
    REQUIRE(S.margin(out) < 0);
    const Jet Jb = pin_to_boundary(S, in, out, 1e-9);
    const double eps = 1e-3;
    CHECK(S.margin(Jb + 2 * eps * J0) >= eps);
    CHECK(S.margin(Jb - 2 * eps * J0) < 0);
  }
}

TEST_CASE("alpha family margins") {
  const int n = 2;
  Sampler s(9);
  const ConstraintSet F = alpha_min_set(n, 2.0);
  // B(0, A) = A: at p = 0 the margin is the smallest eigenvalue.
  for (int i = 0; i < 50; ++i) {
    const Mat A = s.sym(n);
    CHECK(F.margin(mk(0.0, Vec::Zero(n), A)) == doctest::Approx(sym_eigs(A)(0)));
  }
  // The zero jet sits on both boundaries.
  CHECK(F.margin(Jet::zero(n)) == doctest::Approx(0.0));
  CHECK(alpha_max_set(n, 2.0).margin(Jet::zero(n)) == doctest::Approx(0.0));
}

TEST_CASE("indicator wrapping degrades duality") {
  const int n = 2;
  const ConstraintSet S = from_indicator("bool_P", n, [](const Jet& J) {
    return sym_eigs(J.A)(0) >= 0;
  });
  CHECK(S.margin(Jet::zero(n)) == 1.0);
  CHECK(S.tame.has_value());
  CHECK_FALSE(*S.tame);
  const ConstraintSet D = dual_margin(S);
  CHECK(D.dual_degraded);
}

TEST_CASE("every shipped margin preserves the minimal monotonicity set") {
  // Positivity and negativity as membership preservation, via the
  // degenerate cone with the zero gradient slot.
  const int n = 2;
  const auto M0 = MonotonicityCone::zero_gradient();
  for (const auto& S :
       {convexity_set(n), subaffine_set(n), plurisubharmonic_set(n, 2), negative_convex_set(n),
        subaffine_plus_set(n), eig_grad_set(n, 1, 1.0, +1), eig_grad_set(n, 2, 1.0, -1),
        alpha_min_set(n, 2.0), alpha_max_set(n, 1.5)}) {
    CAPTURE(S.name);
    const auto rep = monotonicity_check(S, M0, 800, 42);
    CHECK(rep.pass);
  }
}

TEST_CASE("margins look continuous under small perturbations") {
  Sampler s(61);
  const int n = 2;
  for (const auto& S : {convexity_set(n), negative_convex_set(n), alpha_min_set(n, 2.0),
                        eig_grad_set(n, 2, 1.0, +1)}) {
    CAPTURE(S.name);
    for (int i = 0; i < 200; ++i) {
      const Jet J = s.jet(n);
      const Jet d = (1e-6 * (1 + norm(J))) * [&] {
        Jet u = s.jet(n);
        return (1.0 / std::max(norm(u), 1e-12)) * u;
      }();
      // Sampled Lipschitz probe: perturbations move the margin by at most
      // a few multiples of their size.
      CHECK(std::abs(S.margin(J + d) - S.margin(J)) <= 20 * norm(d) + 1e-14);
    }
  }
}
