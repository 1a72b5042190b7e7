#pragma once

/// Symbolic Harper models of the built-in networks: the commutation data of
/// the three loop generators, the spanning-tree embedding twists, and the
/// matrix Harper operator with torus-algebra entries.
///
/// Generator alphabets:
///   P: U1, U2, U3  (axis translations; symbols are the pairwise phases q_ij)
///   D: U, V, W     (normalized bond loops; symbols chi_1, chi_2, chi_3)
///   G: A, B, C     (normalized cycle loops; symbols phi_1, phi_2, phi_3)

#include <string>

#include "lattice.hpp"
#include "params.hpp"
#include "symbolic.hpp"

namespace nct {

struct HarperModel {
  LatticeSpec spec;
  TorusAlgebra alg;
  RhoSpec rho;
  TorusMatrix H;
};

namespace detail {

inline TorusElement gen(int which, int power = 1) {
  TorusWord w{0, 0, 0};
  w[which] = power;
  return TorusElement::word(w);
}

}  // namespace detail

inline HarperModel harper_model_P() {
  HarperModel m;
  m.spec = lattice_P();
  m.alg.symbolNames = {"q12", "q13", "q23"};
  m.alg.generatorNames = {"U1", "U2", "U3"};
  m.alg.swap12 = {1, 0, 0};
  m.alg.swap13 = {0, 1, 0};
  m.alg.swap23 = {0, 0, 1};
  m.rho.k = 1;
  m.rho.vertexPhase = {{MonomialExp{0, 0, 0}, MonomialExp{0, 0, 0}, MonomialExp{0, 0, 0}}};
  m.H = TorusMatrix(1);
  for (int i = 0; i < 3; ++i) {
    m.H.at(0, 0) += detail::gen(i);
    m.H.at(0, 0) += adjoint(m.alg, detail::gen(i));
  }
  return m;
}

inline HarperModel harper_model_D() {
  HarperModel m;
  m.spec = lattice_D();
  m.alg.symbolNames = {"chi1", "chi2", "chi3"};
  m.alg.generatorNames = {"U", "V", "W"};
  // U V = q1 V U, U W = q2 W U, V W = q3 W V with
  // q1 = chi1^-2 chi2^2 chi3^2, q2 = chi1^-6 chi2^-2 chi3^-2,
  // q3 = chi1^-2 chi2^-6 chi3^2.
  m.alg.swap12 = {-2, 2, 2};
  m.alg.swap13 = {-6, -2, -2};
  m.alg.swap23 = {-2, -6, 2};
  m.rho.k = 2;
  m.rho.vertexPhase = {
      {MonomialExp{0, 0, 0}, MonomialExp{0, 0, 0}, MonomialExp{0, 0, 0}},
      {MonomialExp{2, 0, 0}, MonomialExp{0, 2, 0}, MonomialExp{-2, -2, 0}},
  };
  m.H = TorusMatrix(2);
  TorusElement sum = TorusElement::one();
  for (int i = 0; i < 3; ++i) sum += detail::gen(i);
  m.H.at(1, 0) = sum;                   // 1 + U + V + W
  m.H.at(0, 1) = adjoint(m.alg, sum);   // 1 + U* + V* + W*
  return m;
}

inline HarperModel harper_model_G() {
  HarperModel m;
  m.spec = lattice_G();
  m.alg.symbolNames = {"phi1", "phi2", "phi3"};
  m.alg.generatorNames = {"A", "B", "C"};
  // A B = phi1^4 B A, A C = phi2^-4 C A, B C = phi3^4 C B.
  m.alg.swap12 = {4, 0, 0};
  m.alg.swap13 = {0, -4, 0};
  m.alg.swap23 = {0, 0, 4};
  m.rho.k = 4;
  m.rho.vertexPhase = {
      {MonomialExp{0, 0, 0}, MonomialExp{0, 0, 0}, MonomialExp{0, 0, 0}},
      {MonomialExp{1, 0, 0}, MonomialExp{1, 0, 0}, MonomialExp{0, -1, -1}},
      {MonomialExp{0, 1, 0}, MonomialExp{-1, 0, -1}, MonomialExp{0, 1, 0}},
      {MonomialExp{-1, -1, 0}, MonomialExp{0, 0, 1}, MonomialExp{0, 0, 1}},
  };
  m.H = TorusMatrix(4);
  const TorusElement one = TorusElement::one();
  const TorusElement A = detail::gen(0);
  const TorusElement B = detail::gen(1);
  const TorusElement C = detail::gen(2);
  m.H.at(0, 1) = one;
  m.H.at(0, 2) = one;
  m.H.at(0, 3) = one;
  m.H.at(1, 0) = one;
  m.H.at(2, 0) = one;
  m.H.at(3, 0) = one;
  m.H.at(1, 2) = A;
  m.H.at(2, 1) = adjoint(m.alg, A);
  m.H.at(1, 3) = adjoint(m.alg, B);
  m.H.at(3, 1) = B;
  m.H.at(2, 3) = C;
  m.H.at(3, 2) = adjoint(m.alg, C);
  return m;
}

inline HarperModel harper_model(const std::string& name) {
  if (name == "P") return harper_model_P();
  if (name == "D") return harper_model_D();
  if (name == "G") return harper_model_G();
  throw config_error("symbolic Harper model is available for builtin lattices P, D, G only");
}

/// The symbolic Harper operator of a builtin lattice.
inline TorusMatrix harper_symbolic(const std::string& name) { return harper_model(name).H; }

/// Exact symbol angles (turns) for a model/parameter pair.
inline std::array<Rational, 3> symbol_angles_D(const DParams& p) {
  if (!p.exact) throw config_error("exact D parameters required");
  return p.chiAngle;
}
inline std::array<Rational, 3> symbol_angles_G(const GParams& p) {
  if (!p.exact) throw config_error("exact G parameters required");
  return p.phiAngle;
}
inline std::array<Rational, 3> symbol_angles_P(const FieldB& b) {
  const LatticeSpec p = lattice_P();
  return {theta_of(b, p.edges[0].vector, p.edges[1].vector).mod1(),
          theta_of(b, p.edges[0].vector, p.edges[2].vector).mod1(),
          theta_of(b, p.edges[1].vector, p.edges[2].vector).mod1()};
}

/// Pairwise commutation angles (turns) of the model generators implied by
/// exact symbol angles: the swap monomials evaluated at the symbols.
inline std::array<Rational, 3> commutation_angles(const HarperModel& m,
                                                  const std::array<Rational, 3>& symbolAngles) {
  auto evalExp = [&](const MonomialExp& e) {
    Rational r(0);
    for (int i = 0; i < 3; ++i) r = r + Rational(e[i]) * symbolAngles[i];
    return r.mod1();
  };
  return {evalExp(m.alg.swap12), evalExp(m.alg.swap13), evalExp(m.alg.swap23)};
}

}  // namespace nct
