#ifndef QDL_WEYL_HPP
#define QDL_WEYL_HPP

#include <string>
#include <vector>

#include "qdl/params.hpp"

namespace qdl {

// ---------------------------------------------------------------------------
// Closed-form dense-domain element f(x) = e^{-alpha x^2} e^{beta x} P(x),
// Re alpha > 0.  The family is closed under shifts by arbitrary complex
// amounts, multiplication by exponentials and polynomials, and the Fourier
// transform, so every operator below acts exactly.

struct TestFunction {
  static constexpr int kMaxDegree = 12;

  cplx alpha{1.0, 0.0};
  cplx beta{0.0, 0.0};
  std::vector<cplx> poly{cplx(1.0, 0.0)};  // ascending coefficients

  static TestFunction gaussian(cplx alpha, cplx beta = cplx(0.0, 0.0));

  cplx operator()(cplx x) const;
  int degree() const { return static_cast<int>(poly.size()) - 1; }

  TestFunction shifted(cplx c) const;        // x -> x + c
  TestFunction exp_mul(cplx kappa) const;    // multiply by e^{kappa x}
  TestFunction poly_mul(const std::vector<cplx>& q) const;
  TestFunction scaled(cplx s) const;
  TestFunction fourier() const;      // int dy e^{-2 pi i x y} f(y)
  TestFunction fourier_inv() const;  // int dy e^{+2 pi i x y} f(y)

  // L2 norm^2 on the real line, in closed form.
  double norm2() const;
};

struct TestFunctionSum {
  std::vector<TestFunction> terms;

  cplx operator()(cplx x) const;
  TestFunctionSum& operator+=(const TestFunctionSum& other);
  double norm2_quadrature_free() const;  // sum with cross terms, closed form
};

// ---------------------------------------------------------------------------
// Operator words in the Weyl-pair generators (and the Fourier operator).
// A word acts by composition with the leftmost factor outermost.

enum class Gen { U, Uinv, V, Vinv, Ut, Utinv, Vt, Vtinv, Fwd, Finv };

struct OpWord {
  cplx coeff{1.0, 0.0};
  std::vector<Gen> gens;
};

struct OpExpr {
  std::vector<OpWord> words;

  static OpExpr scalar(cplx c);
  static OpExpr atom(Gen g, cplx coeff = cplx(1.0, 0.0));

  OpExpr operator*(const OpExpr& rhs) const;
  OpExpr operator+(const OpExpr& rhs) const;
  OpExpr operator-(const OpExpr& rhs) const;
  friend OpExpr operator*(cplx c, const OpExpr& e);
};

TestFunctionSum apply(const OpExpr& op, const TestFunction& f, const ModularParams& p);
TestFunctionSum apply(const OpExpr& op, const TestFunctionSum& f, const ModularParams& p);

// Fourier-free word reduced to "multiply by coeff E_omega(x)^ku E_omega'(x)^kut,
// then shift".  Composition of these atoms is exact, which is what lets every
// two-variable operator act pointwise on arbitrary closures.
struct WordAtom {
  cplx coeff{1.0, 0.0};
  int ku = 0;
  int kut = 0;
  cplx shift{0.0, 0.0};

  cplx mult_at(cplx x, const ModularParams& p) const;
};

WordAtom word_to_atom(const OpWord& w, const ModularParams& p);

// ---------------------------------------------------------------------------
// Representation generators.

enum class GenKind {
  E,
  F,
  K,
  E_tilde,
  F_tilde,
  K_tilde,
  e_small,
  f_small,
  e_small_alt,  // the second displayed ordering; must act identically
  f_small_alt,
  e_primed,  // transposed generators acting in the third slot
  f_primed,
  e_primed_alt,
  f_primed_alt,
  K_primed,
  e_tilde_small,
  f_tilde_small,
  e_tilde_primed,
  f_tilde_primed,
  K_tilde_primed
};

OpExpr generator(GenKind kind, cplx s, const ModularParams& p);

// ---------------------------------------------------------------------------
// Algebra relation checks on closed-form samples; only roundoff remains.

struct RelationResidual {
  std::string name;
  double residual;  // max over sample/points, scaled by the value magnitude
};

struct AlgebraReport {
  std::vector<RelationResidual> relations;
  double max_residual = 0.0;
};

AlgebraReport check_relations(cplx s, const std::vector<TestFunction>& sample,
                              const std::vector<cplx>& points, const ModularParams& p);

// ---------------------------------------------------------------------------
// Coproduct action on two variables.

struct TwoVarWord {
  cplx coeff{1.0, 0.0};
  std::vector<Gen> slot1;
  std::vector<Gen> slot2;
};

struct TwoVarOpExpr {
  std::vector<TwoVarWord> words;

  static TwoVarOpExpr scalar(cplx c);
  static TwoVarOpExpr lift1(const OpExpr& e);  // e acting on the first slot
  static TwoVarOpExpr lift2(const OpExpr& e);

  TwoVarOpExpr operator*(const TwoVarOpExpr& rhs) const;
  TwoVarOpExpr operator+(const TwoVarOpExpr& rhs) const;
  TwoVarOpExpr operator-(const TwoVarOpExpr& rhs) const;
  friend TwoVarOpExpr operator*(cplx c, const TwoVarOpExpr& e);
};

// Coproduct words for the small-letter generators:
//   D(e) = e_1(s1) v_2 + e_2(s2),  D(f) = f_1(s1) + v_1^{-1} f_2(s2),
//   D(K) = v_1 v_2, and the tilde copies.
TwoVarOpExpr coproduct_generator(GenKind kind, cplx s1, cplx s2, const ModularParams& p);

struct TestFunctionPairSum {
  std::vector<std::pair<TestFunction, TestFunction>> terms;
  cplx eval(cplx x1, cplx x2) const;
};

TestFunctionPairSum apply(const TwoVarOpExpr& op, const TestFunction& f, const TestFunction& g,
                          const ModularParams& p);

}  // namespace qdl

#endif  // QDL_WEYL_HPP
