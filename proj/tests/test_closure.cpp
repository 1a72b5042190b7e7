#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <nctorus/nctorus.hpp>

using namespace nct;

TEST_CASE("span closure handles the commutative and full extremes") {
  const ClosureResult one = span_closure({Eigen::MatrixXcd::Identity(3, 3)});
  CHECK(one.dim == 1);
  CHECK(one.commutative);

  const ClosureResult diag = span_closure({clock_matrix(2)});
  CHECK(diag.dim == 2);  // C and C^2 = I
  CHECK(diag.commutative);

  const ClosureResult full = span_closure({clock_matrix(2), shift_matrix(2)});
  CHECK(full.dim == 4);
  CHECK_FALSE(full.commutative);
  CHECK(full.productClosed);

  // Idempotence: the returned basis closes onto itself.
  const ClosureResult again = span_closure(full.basis);
  CHECK(again.dim == full.dim);
}

TEST_CASE("stopAtDim terminates early without changing the answer") {
  ClosureOptions opt;
  opt.stopAtDim = 4;
  const ClosureResult bounded = span_closure({clock_matrix(2), shift_matrix(2)}, opt);
  CHECK(bounded.dim == 4);

  // A bound larger than the true dimension is inert.
  opt.stopAtDim = 16;
  const ClosureResult loose = span_closure({clock_matrix(2), shift_matrix(2)}, opt);
  CHECK(loose.dim == 4);
}

TEST_CASE("membership residual distinguishes inside from outside") {
  const ClosureResult full = span_closure({clock_matrix(2), shift_matrix(2)});
  Eigen::MatrixXcd e12 = Eigen::MatrixXcd::Zero(2, 2);
  e12(0, 1) = 1.0;
  CHECK(membership_residual(full.basis, e12) < 1e-10);

  const ClosureResult diag = span_closure({clock_matrix(2)});
  CHECK(membership_residual(diag.basis, e12) > 0.9);
}

TEST_CASE("theorem classification of D points lands in the documented cases") {
  auto caseOf = [](int a, int b, int c, int den) {
    return classify_theorem_D(
        d_params_from_angles({Rational(a, den), Rational(b, den), Rational(c, den)}));
  };
  CHECK(caseOf(0, 0, 0, 1).caseLabel == "D(i)(a)");
  CHECK(caseOf(0, 0, 0, 1).cls == AlgebraClass::Commutative);
  CHECK(caseOf(1, 1, 0, 8).caseLabel == "D(i)(b)");
  CHECK(caseOf(1, 1, 1, 4).caseLabel == "D(ii)(a)");
  CHECK(caseOf(1, 0, 0, 4).caseLabel == "D(ii)(b)");
  CHECK(caseOf(0, 1, 1, 3).caseLabel == "D(iii)");
  CHECK(caseOf(1, 0, 2, 3).caseLabel == "D(iv)");
  CHECK(caseOf(1, 2, 0, 3).caseLabel == "D(v)");
  CHECK(caseOf(1, 1, 4, 16).caseLabel == "D(full)");
  CHECK(caseOf(1, 1, 4, 16).cls == AlgebraClass::Full);
}

TEST_CASE("theorem classification of G points lands in the documented cases") {
  auto caseOf = [](int a, int b, int c, int den) {
    return classify_theorem_G(
        g_params_from_angles({Rational(a, den), Rational(b, den), Rational(c, den)}));
  };
  CHECK(caseOf(0, 0, 0, 1).caseLabel == "G(ii)");
  CHECK(caseOf(0, 0, 0, 1).cls == AlgebraClass::Commutative);
  CHECK(caseOf(1, 1, 1, 8).caseLabel == "G(i)");  // all alpha = -1
  CHECK(caseOf(1, 0, 0, 8).caseLabel == "G(i)");
  CHECK(caseOf(1, 1, 0, 2).caseLabel == "G(iii)");
  CHECK(caseOf(1, 3, 0, 4).caseLabel == "G(iii)");
}

TEST_CASE("numeric closure agrees with the theorem on fast points") {
  ClassifyOptions opt;
  opt.randomTwists = 3;

  const PointClassification commutative =
      classify_point("D", {Rational(0), Rational(0), Rational(0)}, opt);
  CHECK(commutative.theorem.caseLabel == "D(i)(a)");
  CHECK(commutative.numeric == AlgebraClass::Commutative);
  CHECK(commutative.closureDim == 1);
  CHECK(commutative.referenceFullDim == 4);
  CHECK(commutative.agree);

  const PointClassification proper =
      classify_point("D", {Rational(1, 8), Rational(1, 8), Rational(0)}, opt);
  CHECK(proper.theorem.caseLabel == "D(i)(b)");
  CHECK(proper.numeric == AlgebraClass::Proper);
  CHECK(proper.closureDim == 2);
  CHECK(proper.referenceFullDim == 4);
  CHECK(proper.agree);

  const PointClassification full = classify_point(
      "D", {Rational(1, 16), Rational(1, 16), Rational(1, 4)}, opt);
  CHECK(full.theorem.caseLabel == "D(full)");
  CHECK(full.numeric == AlgebraClass::Full);
  CHECK(full.closureDim == full.referenceFullDim);
  CHECK(full.agree);

  const PointClassification gProper =
      classify_point("G", {Rational(1, 2), Rational(1, 2), Rational(0)}, opt);
  CHECK(gProper.theorem.caseLabel == "G(iii)");
  CHECK(gProper.numeric == AlgebraClass::Proper);
  CHECK(gProper.closureDim == 6);
  CHECK(gProper.referenceFullDim == 16);
  CHECK(gProper.agree);
}

TEST_CASE("case (i)(b) points are proper with a commutative torus image") {
  const std::array<Rational, 3> a = {Rational(1, 8), Rational(1, 8), Rational(0)};
  const HarperModel model = harper_model("D");
  // The commutation phases vanish, so the represented torus is commutative...
  const auto comm = commutation_angles(model, a);
  for (const auto& t : comm) CHECK(t.mod1() == Rational(0));
  // ...yet the closure at the witness twist is strictly larger than dimension 1.
  const PointClassification pc = classify_point("D", a);
  CHECK(pc.closureDim > 1);
  CHECK(pc.closureDim < pc.referenceFullDim);
}

TEST_CASE("fermionic structure of the D case (ii)(a) point") {
  const FermionicCheck fc = structure_check_fermionic_D(
      {Rational(1, 4), Rational(1, 4), Rational(1, 4)});
  CHECK(fc.pass);
  CHECK(fc.resPauli < 1e-8);
  CHECK(fc.resU < 1e-8);
  CHECK(fc.resV < 1e-8);
  CHECK(fc.resW < 1e-8);
  CHECK(fc.worstGraphResidual < 1e-8);
  CHECK(fc.e12Residual > 0.1);
  CHECK(fc.closureDim < fc.referenceFullDim);

  CHECK_THROWS_AS(
      structure_check_fermionic_D({Rational(0), Rational(0), Rational(0)}),
      config_error);
}

TEST_CASE("family structure identities hold for cases (iii), (iv) and (v)") {
  const struct {
    const char* which;
    std::array<Rational, 3> angles;
  } rows[] = {
      {"iii", {Rational(0), Rational(1, 3), Rational(1, 3)}},
      {"iv", {Rational(1, 3), Rational(0), Rational(2, 3)}},
      {"v", {Rational(1, 3), Rational(2, 3), Rational(0)}},
  };
  for (const auto& row : rows) {
    const FamilyCheck fc = structure_check_family(row.which, row.angles);
    INFO(row.which);
    CHECK(fc.pass);
    CHECK(fc.resASquare < 1e-12);
    CHECK(fc.resBSquare < 1e-12);
    CHECK(fc.resCommute < 1e-12);
    CHECK(fc.resDefect < 1e-12);
    CHECK(fc.resQuotient < 1e-12);
    CHECK(fc.properQuotient);
    CHECK(fc.quotientOrder == 3);
    CHECK(fc.quotientDim < fc.quotientRefDim);
    CHECK(fc.quotientE12Residual > 0.1);
  }
  CHECK_THROWS_AS(
      structure_check_family("iii", {Rational(1, 3), Rational(0), Rational(2, 3)}),
      config_error);
}

TEST_CASE("reference full dimension matches k^2 times the torus image") {
  const HarperModel model = harper_model("D");
  const std::array<Rational, 3> a = {Rational(1, 16), Rational(1, 16), Rational(1, 4)};
  const HarperRep hr = harper_rep(model, a);
  const int ref = reference_full_dim(hr);
  CHECK(ref % (hr.k * hr.k) == 0);
  CHECK(ref >= hr.k * hr.k);
  CHECK(ref <= hr.k * hr.k * hr.rep.dim * hr.rep.dim);
}
