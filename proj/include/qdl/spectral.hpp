#ifndef QDL_SPECTRAL_HPP
#define QDL_SPECTRAL_HPP

#include <functional>
#include <memory>

#include "qdl/gamma.hpp"
#include "qdl/quadrature.hpp"
#include "qdl/weyl.hpp"

namespace qdl {

// Spectral data of the length operator v + u + u^{-1}: eigenfunctions
// phi(x, s), spectral weight rho(s), Jost-type normalization M(s) and the
// reflection coefficient S(s) = M(s)/M(-s).

struct SpectralMeasure {
  double s = 0.0;
  cplx rho{0.0, 0.0};        // -4 sin(pi s/omega) sin(pi s/omega')
  cplx rho_gamma{0.0, 0.0};  // e^{-4 pi i s omega''} gamma(2s+omega'')/gamma(2s-omega'')
  cplx M{0.0, 0.0};          // c e^{-2 i pi s^2 - 2 i pi s omega''} gamma(2s + omega'')
  cplx S{0.0, 0.0};          // M(s) / M(-s)
  cplx sigma{0.0, 0.0};      // e^{-4 pi i s omega''} - e^{-4 pi i s (omega'' - 2 omega')}
};

class SpectralEngine {
 public:
  explicit SpectralEngine(const GammaEvaluator& g) : g_(g) {}

  const GammaEvaluator& gamma() const { return g_; }
  const ModularParams& params() const { return g_.params(); }

  // phi(x, s) = e^{-i pi (x - omega'')^2} gamma(x+s-omega''+i eps) gamma(x-s-omega''+i eps)
  cplx phi(cplx x, double s, double eps) const;
  // complex conjugate of phi for real x, s, expressed in closed form
  cplx phi_bar(cplx x, double s, double eps) const;

  // residual of (v + u + u^{-1}) phi = (Z + Z^{-1}) phi at one point
  double eigen_equation_residual(cplx x, double s, double eps) const;

  SpectralMeasure measure(double s) const;

  // product closed form of the spectral weight alone (no gamma evaluations)
  cplx rho(double s) const;

  // int dx conj(phi(x,s)) phi(x,s') smeared against Gaussian windows in (s, s'),
  // compared with rho^{-1}(s) [delta(s-s') + delta(s+s')]
  SmearedDeltaResult orthogonality_check(double lambda0, double mu0, double width,
                                         const RegulatorLadder& ladder) const;

  // int_0^inf ds rho(s) conj(phi(x,s)) phi(y,s) smeared against Gaussian windows
  // in (x, y), compared with delta(x-y); evaluated through the sigma-split with
  // the paired (eps, delta) regulators
  SmearedDeltaResult completeness_check(double x0, double y0, double width,
                                        const RegulatorLadder& ladder) const;

  // Projection P = (1/2)[delta(s-s') + S(s) delta(s+s')] applied to a smooth
  // window: (P F)(s) = (1/2)[F(s) + S(s) F(-s)].
  cplx project(const std::function<cplx(double)>& F, double s) const;
  // smeared idempotence residual of P on a Gaussian window
  double projection_idempotence_residual(double s0, double width,
                                         const std::vector<double>& sample) const;
  // residual of P acting as identity on a window already satisfying the
  // reflection constraint F(s) = S(s) F(-s)
  double projection_identity_residual(double s0, double width,
                                      const std::vector<double>& sample) const;
  // reflection-constraint residual of the image of a one-sided window
  double projection_image_constraint_residual(double s0, double width,
                                              const std::vector<double>& sample) const;

  // F = U f by quadrature on a closed-form f; returns |F(s) - S(s) F(-s)|
  double u_subspace_residual(const TestFunction& f, double s, double eps) const;

  // |gamma(z+omega-omega') gamma(z-omega+omega') - gamma(z+omega'') gamma(z-omega'')|
  double gamma_ratio_identity_residual(cplx z) const;

  // Fast factored evaluation of phi / phi_bar on real arguments: the two
  // gamma factors are one-dimensional in x+s and x-s, tabulated once per
  // regulator value with their real-axis poles split off analytically.
  struct LineFn {
    double lo = 0.0, hi = 0.0, du = 0.02;
    std::vector<cplx> vals;  // smooth part on the grid
    cplx pole{0.0, 0.0};
    cplx residue{0.0, 0.0};
    std::function<cplx(double)> tail_left, tail_right;

    cplx operator()(double u) const;
  };

  struct PhiGrids {
    double eps = 0.0;
    LineFn H;  // H(u) = 1/gamma(u + omega'' - i eps)
    LineFn K;  // K(v) = gamma(v - omega'' + i eps)
  };

  // extent: grids cover |u| <= extent with closed-form tails beyond
  PhiGrids make_grids(double eps, double extent = 4.0) const;

  cplx phi_fast(const PhiGrids& gr, double x, double s) const;
  cplx phi_bar_fast(const PhiGrids& gr, double x, double s) const;

  double rel_tol = 3e-7;  // grid interpolation limits useful refinement
  int node_budget = 1 << 15;

 private:
  const GammaEvaluator& g_;
};

}  // namespace qdl

#endif  // QDL_SPECTRAL_HPP
