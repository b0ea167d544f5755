#ifndef QDL_GAMMA_HPP
#define QDL_GAMMA_HPP

#include <vector>

#include "qdl/params.hpp"
#include "qdl/quadrature.hpp"

namespace qdl {

enum class GammaStrategy { StripIntegral, ShiftContinuation, ReflectionContinuation };

struct GammaValue {
  cplx value{0.0, 0.0};
  double abs_log_error = 0.0;
  GammaStrategy strategy = GammaStrategy::StripIntegral;
  int shift_count = 0;  // functional-equation applications (shifts + reflections)
};

struct PoleDatum {
  enum class Kind { Pole, Zero };
  cplx location;
  Kind kind;
  cplx leading_coefficient;
};

struct GammaConfig {
  double target_log_tol = 5e-13;  // absolute tolerance on the log integral
  int max_level = 11;
  double exclusion_radius_rel = 1e-6;  // x |omega''|
  double reflect_threshold = -0.5;     // use the reflection formula for Re z below this
};

// Evaluator for the modular quantum dilogarithm gamma(x).
//
// Inside the strip |Im x| < |Im omega''| the defining contour integral
//   log gamma(x) = -(1/4) Int dt/t e^{itx} / (sin(omega t) sin(omega' t))
// is computed by tanh-sinh quadrature on the line Im t = t0 shifted above the
// third-order singularity at t = 0.  Outside (or near the strip boundary) the
// two shift equations and the reflection formula continue the value back to a
// deep interior point.  Node tables with the x-independent integrand factors
// are precomputed once, so a single evaluation costs one complex exponential
// per node.  The evaluator is immutable after construction and safe to share
// across threads.
class GammaEvaluator {
 public:
  explicit GammaEvaluator(const ModularParams& params, GammaConfig cfg = {});

  const ModularParams& params() const { return params_; }
  const GammaConfig& config() const { return cfg_; }

  GammaValue evaluate(cplx z) const;
  cplx operator()(cplx z) const { return evaluate(z).value; }

  // Defining integral on the shifted contour; z must lie inside the strip.
  // Used directly by the continuation-consistency tests.
  cplx log_gamma_strip(cplx z, double* err = nullptr) const;

  // Distance from z to the nearest pole/zero lattice point.
  double singularity_distance(cplx z) const;
  double exclusion_radius() const { return cfg_.exclusion_radius_rel * params_.strip_half_width(); }

  // Leading expansion data at the base pole -omega'' / base zero +omega''.
  PoleDatum pole_expansion(PoleDatum::Kind kind) const;

  // Closed form e^{i beta} e^{i pi z^2} (the value of gamma(z) gamma(-z)).
  cplx reflection_product(cplx z) const;

  // |conj(gamma(z)) gamma(conj z) - 1|
  double conjugation_check(cplx z) const;

  // Force a particular strategy (consistency tests only).  ShiftContinuation
  // takes one extra 2 omega' step down and back.
  GammaValue evaluate_forced(cplx z, GammaStrategy strategy) const;

  double contour_offset() const { return t0_; }
  double contour_half_width() const { return T_; }

 private:
  struct Node {
    cplx t;   // abscissa on the shifted contour
    cplx gw;  // weight * segment radius * integrand factor 1/(t sin sin)
  };

  ModularParams params_;
  GammaConfig cfg_;
  double t0_;
  double T_;
  double landing_max_;                   // greedy shifts end with |Im z| below this
  std::vector<std::vector<Node>> levels_;  // new nodes per refinement level

  cplx integrand_factor(cplx t) const;
  cplx log_gamma_cached(cplx z, double* err) const;
  GammaValue evaluate_impl(cplx z, bool forbid_reflection) const;
};

}  // namespace qdl

#endif  // QDL_GAMMA_HPP
