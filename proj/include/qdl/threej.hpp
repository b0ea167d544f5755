#ifndef QDL_THREEJ_HPP
#define QDL_THREEJ_HPP

#include <array>

#include "qdl/report.hpp"
#include "qdl/spectral.hpp"

namespace qdl {

struct SpinTriple {
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
};

// Configuration of one coupling kernel: spins, normalization, and the finite
// realization of the omega'' -> omega'' - i0 prescription inside its gamma
// factors.
struct KernelSpec {
  SpinTriple spins;
  cplx S0{1.0, 0.0};
  double eps = 0.0;
  bool canonical = false;
};

struct SystemReport {
  double e_residual = 0.0;
  double f_residual = 0.0;
  double K_residual = 0.0;
  double e_tilde_residual = 0.0;
  double f_tilde_residual = 0.0;
  double K_tilde_residual = 0.0;
  double max_residual = 0.0;
};

class ThreeJEngine {
 public:
  ThreeJEngine(const GammaEvaluator& g, const SpectralEngine& spectral)
      : g_(g), spec_(spectral) {}

  const GammaEvaluator& gamma() const { return g_; }
  const ModularParams& params() const { return g_.params(); }

  // default regulator scale for kernel evaluations
  double default_eps() const { return 1e-6 * params().strip_half_width(); }

  KernelSpec make_spec(const SpinTriple& spins, bool canonical = true) const;

  // Coupling kernel: exponential prefactor times six gamma factors in the
  // pairwise differences x12, x23, x31.
  cplx kernel_S(const KernelSpec& spec, cplx x1, cplx x2, cplx x3) const;

  // Normalization for which the momentum-space kernel reduces to
  // gamma(p - s3) times the separated eigenfunction.
  cplx canonical_S0(const SpinTriple& spins) const;

  // Pointwise residuals of the six defining difference equations (three plus
  // the dual triple with the half-periods exchanged).
  SystemReport verify_system(const KernelSpec& spec,
                             const std::vector<std::array<cplx, 3>>& points) const;

  // Closed form of the kernel with the dressing chain removed.
  cplx undressed_kernel(const KernelSpec& spec, cplx x1, cplx x2, cplx x3) const;

  // Momentum representation of the undressed kernel.
  cplx momentum_kernel_Sp(const KernelSpec& spec, double p_mom, cplx x1, cplx x2) const;

  // Quadrature cross-check: Fourier transform of the undressed kernel in the
  // third slot against the closed form above.
  ResidualReport verify_momentum_consistency(const KernelSpec& spec, double p_mom, cplx x1,
                                             cplx x2) const;

  // Smeared orthogonality of the momentum kernels: windows in the momentum
  // (both centered at p0) and in the spectral labels (sig0, sig0p); the
  // distributional side carries the reflection term with the gamma ratio.
  SmearedDeltaResult sp_orthogonality(double s1, double s2, double p0, double sig0, double sig0p,
                                      double width, const RegulatorLadder& ladder) const;

  // Smeared completeness over momentum and spectral label against the product
  // of two coordinate deltas; windows in x1, x2, x1', x2'.
  SmearedDeltaResult sp_completeness(double s1, double s2, double c1, double c2, double c1p,
                                     double c2p, double width,
                                     const RegulatorLadder& ladder) const;

  double rel_tol = 1e-9;
  int node_budget = 1 << 16;
  double p_max = 4.0;  // |p| gate for momentum-consistency quadratures

 private:
  const GammaEvaluator& g_;
  const SpectralEngine& spec_;
};

}  // namespace qdl

#endif  // QDL_THREEJ_HPP
