#ifndef QDL_CASIMIR_HPP
#define QDL_CASIMIR_HPP

#include <array>

#include "qdl/report.hpp"
#include "qdl/spectral.hpp"

namespace qdl {

// Pointwise-evaluable function of two variables; all operators act on it by
// exact shifts and multiplications, so no discretization enters.
using TwoVarFunction = std::function<cplx(cplx, cplx)>;

struct UndressingChain {
  double s1 = 0.0;
  double s2 = 0.0;
  double eps = 1e-4;  // regulator inside the inverse-dressing integral kernel
};

struct ChainReport {
  double step1 = 0.0;  // multiplication conjugation into the primed form
  double step2 = 0.0;  // Fourier-sandwich conjugation into the double-primed form
  double step3 = 0.0;  // multiplication conjugation into the separated form
  double K_invariance = 0.0;
  double max_residual = 0.0;
};

class CasimirEngine {
 public:
  CasimirEngine(const GammaEvaluator& g, const SpectralEngine& spectral)
      : g_(g), spec_(spectral) {}

  const ModularParams& params() const { return g_.params(); }

  // Casimir built from the coproduct words f12 e12 - q K12 - q^{-1} K12^{-1}.
  cplx casimir_apply(double s1, double s2, const TwoVarFunction& f, cplx x1, cplx x2) const;
  // The same operator in its explicit five-term shift/multiplier form.
  cplx casimir_apply_explicit(double s1, double s2, const TwoVarFunction& f, cplx x1,
                              cplx x2) const;
  // Intermediate forms of the undressing chain.
  cplx casimir_prime_apply(double s1, double s2, const TwoVarFunction& f, cplx x1, cplx x2) const;
  cplx casimir_dprime_apply(double s1, double s2, const TwoVarFunction& f, cplx x1,
                            cplx x2) const;
  // Fully undressed four-term form.
  cplx tilde_casimir_apply(double s1, double s2, const TwoVarFunction& f, cplx x1, cplx x2) const;

  // K12 = v1 v2 applied to f.
  cplx K12_apply(const TwoVarFunction& f, cplx x1, cplx x2) const;

  // Multiplication operators of the chain.
  cplx R1_mult(double s1, cplx x1, cplx x2) const;                // gamma(x12 - s1)
  cplx R3_mult(double s1, double s2, cplx x1, cplx x2) const;     // gamma(x12 - s1 + 2 s2)
  // R2 = F2^{-1} [multiplication by gamma(xhat + s2)] F2 on a closed-form pair.
  cplx R2_apply_pair(double s2, const TestFunctionPairSum& f, cplx x1, cplx x2) const;

  // A f = R1 R2 R3 f on a closed-form pair, via staged quadrature tables.
  cplx apply_A_pair(const UndressingChain& ch, const TestFunction& f1, const TestFunction& f2,
                    cplx x1, cplx x2) const;

  // A^{-1} f as the explicit integral transform in the second slot.
  cplx apply_Ainv(const UndressingChain& ch, const TwoVarFunction& f, cplx x1, cplx x2,
                  double t_decay_rate = 0.0) const;

  // A^{-1}(A f) on a Gaussian pair; returns the worst pointwise deviation
  // from f over the given points.
  double roundtrip_residual(const UndressingChain& ch, const TestFunction& f1,
                            const TestFunction& f2,
                            const std::vector<std::array<cplx, 2>>& points) const;

  // Conjugation steps verified multiplicatively (C R f = R C' f) on a
  // closed-form pair, plus K12 invariance through every step.
  ChainReport verify_undressing_chain(const UndressingChain& ch, const TestFunction& f1,
                                      const TestFunction& f2,
                                      const std::vector<std::array<cplx, 2>>& points) const;

  // Eigenfunction of the separated Casimir.
  cplx eigenfunction_Psi_p(double s1, double s2, double s3, double p, cplx x1, cplx x2,
                           double eps) const;

  // Substitution operators: V1 V2 must equal v1 v2 on test pairs.
  double substitution_product_residual(double s1, const TestFunction& f1, const TestFunction& f2,
                                       const std::vector<std::array<cplx, 2>>& points) const;

  double rel_tol = 1e-9;
  int node_budget = 1 << 16;

 private:
  const GammaEvaluator& g_;
  const SpectralEngine& spec_;

  struct ATableImpl;
  ATableImpl make_A_table(const UndressingChain& ch, const TestFunction& f1,
                          const TestFunction& f2, cplx x1) const;
  cplx eval_A_table(const ATableImpl& t, cplx x2) const;

  cplx apply_two_var(const TwoVarOpExpr& op, const TwoVarFunction& f, cplx x1, cplx x2) const;
  TwoVarOpExpr casimir_words(double s1, double s2) const;
  TwoVarOpExpr casimir_explicit_words(double s1, double s2) const;
  TwoVarOpExpr casimir_prime_words(double s1, double s2) const;
  TwoVarOpExpr casimir_dprime_words(double s1, double s2) const;
  TwoVarOpExpr tilde_casimir_words(double s1, double s2) const;
};

}  // namespace qdl

#endif  // QDL_CASIMIR_HPP
