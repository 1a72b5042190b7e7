#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <nctorus/nctorus.hpp>

using namespace nct;

TEST_CASE("clock and shift matrices satisfy the Weyl relation") {
  for (int N : {2, 3, 5, 8}) {
    const Eigen::MatrixXcd C = clock_matrix(N);
    const Eigen::MatrixXcd S = shift_matrix(N);
    const std::complex<double> w = unit_phase(Rational(1, N));
    CHECK((S * C - w * C * S).norm() < 1e-12);
    CHECK((C * C.adjoint() - Eigen::MatrixXcd::Identity(N, N)).norm() < 1e-12);
    CHECK((S * S.adjoint() - Eigen::MatrixXcd::Identity(N, N)).norm() < 1e-12);
    CHECK((unitary_power(C, N) - Eigen::MatrixXcd::Identity(N, N)).norm() < 1e-12);
    CHECK((unitary_power(S, N) - Eigen::MatrixXcd::Identity(N, N)).norm() < 1e-12);
  }
}

TEST_CASE("unitary powers use the adjoint for negative exponents") {
  const Eigen::MatrixXcd C = clock_matrix(5, 2);
  CHECK((unitary_power(C, -2) - Eigen::MatrixXcd(C.adjoint() * C.adjoint())).norm() < 1e-14);
  CHECK((unitary_power(C, 0) - Eigen::MatrixXcd::Identity(5, 5)).norm() < 1e-14);
}

TEST_CASE("randomized torus representations satisfy commutation and unitarity") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> Ndist(1, 5);
  std::uniform_real_distribution<double> turn(0.0, 1.0);
  for (int t = 0; t < 60; ++t) {
    const int N = Ndist(rng);
    std::uniform_int_distribution<int> p(0, N - 1);
    const RationalSkew s{N, p(rng), p(rng), p(rng)};
    const std::array<Rational, 3> angles = {Rational(s.p12, N), Rational(s.p13, N),
                                            Rational(s.p23, N)};
    const Twist tw = twist_from_turns({turn(rng), turn(rng), turn(rng)});
    const TorusRep rep = general_rep(s, tw);
    CHECK(rep.dim == N * N * N);
    CHECK(commutation_residual(rep.gen, angles) < 1e-12);
    CHECK(unitarity_residual(rep.gen) < 1e-12);
  }
  // Axis-aligned representations for single-pair skews.
  for (int t = 0; t < 40; ++t) {
    const int N = 1 + Ndist(rng);
    std::uniform_int_distribution<int> p(1, N - 1);
    const RationalSkew s{N, p(rng), 0, 0};
    const std::array<Rational, 3> angles = {Rational(s.p12, N), Rational(0), Rational(0)};
    const Twist tw = twist_from_turns({turn(rng), turn(rng), turn(rng)});
    const TorusRep rep = axis_rep(s, 12, tw);
    CHECK(rep.dim == N);
    CHECK(commutation_residual(rep.gen, angles) < 1e-12);
    CHECK(unitarity_residual(rep.gen) < 1e-12);
  }
}

TEST_CASE("representation choice prefers the axis form when available") {
  CHECK(choose_rep({4, 3, 0, 0}).kind == RepKind::AxisAligned);
  CHECK(choose_rep({4, 0, 1, 0}).kind == RepKind::AxisAligned);
  CHECK(choose_rep({4, 0, 0, 3}).kind == RepKind::AxisAligned);
  CHECK(choose_rep({4, 1, 1, 0}).kind == RepKind::General);
  CHECK(choose_rep({1, 0, 0, 0}).kind == RepKind::AxisAligned);
}

TEST_CASE("element realization is a *-homomorphism") {
  const HarperModel m = harper_model("D");
  const std::array<Rational, 3> a = {Rational(1, 4), Rational(0), Rational(0)};
  const RationalSkew s = skew_from_angles(commutation_angles(m, a));
  const TorusRep rep = build_rep(s, twist_from_turns({0.3, 0.1, 0.7}), RepKind::General);
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> exp(-2, 2);
  std::uniform_int_distribution<long long> coeff(1, 3);
  auto randomElement = [&]() {
    TorusElement x;
    for (int t = 0; t < 3; ++t)
      x.add_term({exp(rng), exp(rng), exp(rng)},
                 PhasePoly::monomial({exp(rng), exp(rng), exp(rng)}, coeff(rng)));
    return x;
  };
  for (int t = 0; t < 20; ++t) {
    const TorusElement x = randomElement();
    const TorusElement y = randomElement();
    const Eigen::MatrixXcd mx = element_matrix(x, rep, a);
    const Eigen::MatrixXcd my = element_matrix(y, rep, a);
    const Eigen::MatrixXcd mxy = element_matrix(normal_product(m.alg, x, y), rep, a);
    CHECK((mx * my - mxy).norm() < 1e-10 * std::max(1.0, mxy.norm()));
    const Eigen::MatrixXcd mxs = element_matrix(adjoint(m.alg, x), rep, a);
    CHECK((mx.adjoint() - mxs).norm() < 1e-10 * std::max(1.0, mx.norm()));
  }
}

TEST_CASE("harper_rep realizes a Hermitian operator matching the model") {
  for (const char* lat : {"P", "D", "G"}) {
    const HarperModel m = harper_model(lat);
    const std::array<Rational, 3> a = {Rational(1, 2), Rational(1, 4), Rational(0)};
    const HarperRep hr = harper_rep(m, a);
    CHECK((hr.H - hr.H.adjoint()).norm() < 1e-12);
    CHECK(hr.d == hr.rep.dim);
    CHECK(hr.H.rows() == hr.k * hr.d);
    // rho generators act on the full (k d)-dimensional space and are unitary.
    const Eigen::Index full = hr.k * hr.d;
    for (int g = 0; g < 3; ++g) {
      REQUIRE(hr.rhoGen[g].rows() == full);
      CHECK((hr.rhoGen[g] * hr.rhoGen[g].adjoint() -
             Eigen::MatrixXcd::Identity(full, full))
                .norm() < 1e-12);
    }
  }
}

TEST_CASE("one-dimensional representations reproduce Bloch evaluation") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> turn(0.0, 1.0);
  const std::array<Rational, 3> zero = {Rational(0), Rational(0), Rational(0)};
  for (const char* lat : {"P", "D", "G"}) {
    const HarperModel m = harper_model(lat);
    for (int t = 0; t < 20; ++t) {
      const std::array<double, 3> turns = {turn(rng), turn(rng), turn(rng)};
      const HarperRep hr = harper_rep(m, zero, twist_from_turns(turns));
      REQUIRE(hr.rep.dim == 1);
      const Character angle = {2.0 * M_PI * turns[0], 2.0 * M_PI * turns[1],
                               2.0 * M_PI * turns[2]};
      const Eigen::MatrixXcd bloch = bloch_matrix(m, angle);
      CHECK((hr.H - bloch).norm() < 1e-12);
      const auto ev = harper_spectrum(hr);
      const auto bv = spectrum_from_matrix(bloch, angle).eigenvalues;
      for (std::size_t i = 0; i < ev.size(); ++i) CHECK(std::abs(ev[i] - bv[i]) < 1e-12);
    }
  }
}

TEST_CASE("farey fluxes enumerate reduced fractions in order") {
  const std::vector<Rational> f = farey_fluxes(5);
  const std::vector<Rational> expected = {
      Rational(0),    Rational(1, 5), Rational(1, 4), Rational(1, 3), Rational(2, 5),
      Rational(1, 2), Rational(3, 5), Rational(2, 3), Rational(3, 4), Rational(4, 5),
      Rational(1)};
  REQUIRE(f.size() == expected.size());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(f[i] == expected[i]);
}

TEST_CASE("band merging joins overlapping twist ranges") {
  ButterflySample s1;
  s1.eigenvalues = {-1.0, 0.0, 2.0};
  ButterflySample s2;
  s2.eigenvalues = {-0.5, 0.1, 2.5};
  const std::vector<BandInterval> bands = merge_bands({s1, s2});
  REQUIRE(bands.size() == 3);
  CHECK(bands[0].lo == -1.0);
  CHECK(bands[0].hi == -0.5);
  CHECK(bands[1].lo == 0.0);
  CHECK(bands[1].hi == 0.1);
  CHECK(bands[2].lo == 2.0);
  CHECK(bands[2].hi == 2.5);
}

TEST_CASE("P butterfly is flux-reflection symmetric with at most N bands") {
  const ButterflyResult res = butterfly("P", 12, 5, 4);
  REQUIRE_FALSE(res.fluxes.empty());
  auto allEigen = [](const ButterflyFlux& bf) {
    std::vector<double> v;
    for (const auto& s : bf.samples) v.insert(v.end(), s.eigenvalues.begin(), s.eigenvalues.end());
    std::sort(v.begin(), v.end());
    return v;
  };
  for (const auto& bf : res.fluxes) {
    CHECK(bf.bands.size() <= static_cast<std::size_t>(bf.flux.den));
    // Locate the mirror flux (N - p)/N.
    const Rational mirror = (Rational(1) - bf.flux).mod1();
    for (const auto& other : res.fluxes) {
      if (!(other.flux == mirror)) continue;
      const std::vector<double> a = allEigen(bf);
      const std::vector<double> b = allEigen(other);
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
    }
  }
}

TEST_CASE("explicit flux lists drive the sweep") {
  const ButterflyResult res =
      butterfly_over("P", 12, {Rational(1, 3)}, 3);
  REQUIRE(res.fluxes.size() == 1);
  CHECK(res.fluxes[0].dim == 3);
  CHECK(res.fluxes[0].samples.size() == 9);  // axis-aligned: M^2 twists
  CHECK(res.fluxes[0].kind == RepKind::AxisAligned);
}

TEST_CASE("representation dimension limits are enforced") {
  CHECK_THROWS_AS(general_rep({50, 1, 1, 1}, trivial_twist()), config_error);
}
