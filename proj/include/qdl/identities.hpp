#ifndef QDL_IDENTITIES_HPP
#define QDL_IDENTITIES_HPP

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qdl/gamma.hpp"
#include "qdl/quadrature.hpp"
#include "qdl/report.hpp"

namespace qdl {

struct IdentityCase {
  std::string id;
  std::vector<std::pair<std::string, cplx>> parameters;
  bool domain_ok = true;
  std::string condition;  // which convergence condition gates the case
};

// Fourier-type integral identities of the dilogarithm, each evaluated as an
// adaptive regulated quadrature against its closed form.
class IdentityEngine {
 public:
  IdentityEngine(const GammaEvaluator& g, RegulatorLadder ladder = RegulatorLadder::defaults())
      : g_(g), ladder_(std::move(ladder)) {}

  const GammaEvaluator& gamma() const { return g_; }
  const RegulatorLadder& ladder() const { return ladder_; }

  // int dt e^{-2 pi i t z} / gamma(omega'' - i0 - t)  =  c gamma(z - omega'')
  ResidualReport eval_ft1(cplx z) const;

  // int dt e^{-2 pi i t z} gamma(x-t)/gamma(omega''-i0-t)
  //   =  c gamma(x) gamma(z-omega'') / gamma(x+z)
  ResidualReport eval_ft2(cplx x, cplx z) const;

  // int dt e^{-2 pi i t z} gamma(x-t) gamma(y-t)
  //       / (gamma(omega''-i0-t) gamma(x+y+z+omega''-i0-t))
  //   =  c gamma(x) gamma(y) gamma(z-omega'') / (gamma(x+z) gamma(y+z))
  ResidualReport eval_ft3(cplx x, cplx y, cplx z) const;

  // int dt e^{-2 pi i t s} gamma(t+a)/gamma(t+b), both closed forms; requires
  // Im(s) < 0 and Im(a-b-s) < 0.  The report's note records the closed-form
  // cross agreement.
  ResidualReport eval_f1f2(cplx a, cplx b_param, cplx s) const;
  // The two closed forms alone (no quadrature).
  std::pair<cplx, cplx> f1f2_closed_forms(cplx a, cplx b_param, cplx s) const;

  // gamma(t+a)/gamma(t+b) compared with its inverse-transform integral on a
  // contour lowered below s = 0.
  ResidualReport eval_invf(cplx t, cplx a, cplx b_param) const;

  // In-domain random draws (rejection sampling inside fixed boxes; seeded).
  std::vector<ResidualReport> run_draws(const std::string& which, int count,
                                        std::uint64_t seed) const;

  double rel_tol = 1e-10;
  int node_budget = 1 << 16;

 private:
  const GammaEvaluator& g_;
  RegulatorLadder ladder_;

  double strip() const { return g_.params().strip_half_width(); }
  double min_step() const { return g_.params().lattice_min_step(); }
};

}  // namespace qdl

#endif  // QDL_IDENTITIES_HPP
