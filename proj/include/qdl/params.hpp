#ifndef QDL_PARAMS_HPP
#define QDL_PARAMS_HPP

#include <cmath>

#include "qdl/core.hpp"

namespace qdl {

// Parameter bundle fixing the whole theory.  A single positive modulus b
// charts the admissible parameters: the half-periods are
//   omega = i b / 2,   omega' = i / (2 b),
// so that omega * omega' = -1/4 exactly and tau = omega'/omega = 1/b^2 > 0.
struct ModularParams {
  double b = 0.8;

  cplx omega;         // i b / 2
  cplx omega_prime;   // i / (2 b)
  cplx omega_dprime;  // omega + omega'
  double tau;         // omega' / omega (real, > 0)
  cplx q;             // exp(i pi tau)
  cplx q_tilde;       // exp(i pi / tau)
  double beta;        // (pi/12)(tau + 1/tau)
  cplx c;             // exp(i beta + i pi/4)

  bool coincident_half_periods = false;  // b == 1 is allowed but degrades pole separation

  static ModularParams make(double b) {
    if (!(b > 0.0)) throw DomainViolationError("modulus b must be positive");
    ModularParams p;
    p.b = b;
    p.omega = cplx(0.0, b / 2.0);
    p.omega_prime = cplx(0.0, 1.0 / (2.0 * b));
    p.omega_dprime = p.omega + p.omega_prime;
    p.tau = 1.0 / (b * b);
    p.q = expi_pi(cplx(p.tau, 0.0));
    p.q_tilde = expi_pi(cplx(1.0 / p.tau, 0.0));
    p.beta = (kPi / 12.0) * (p.tau + 1.0 / p.tau);
    p.c = std::exp(kI * (p.beta + kPi / 4.0));
    p.coincident_half_periods = std::abs(b - 1.0) < 1e-12;
    return p;
  }

  // |Im omega''| = (b + 1/b)/2, the half-width of the analyticity strip.
  double strip_half_width() const { return omega_dprime.imag(); }

  // Smaller of the two pole spacings b, 1/b along the imaginary axis.
  double lattice_min_step() const { return std::min(b, 1.0 / b); }

  // u-multiplier exp(-i pi x / omega) and its dual exp(-i pi x / omega').
  cplx u_mult(cplx x) const { return std::exp(-kI * kPi * x / omega); }
  cplx ut_mult(cplx x) const { return std::exp(-kI * kPi * x / omega_prime); }

  // Z = exp(-i pi s / omega); positive real for real s.
  cplx Z(cplx s) const { return u_mult(s); }
  cplx Z_tilde(cplx s) const { return ut_mult(s); }

  // Dual bundle with the two half-periods exchanged.
  ModularParams dual() const { return make(1.0 / b); }
};

}  // namespace qdl

#endif  // QDL_PARAMS_HPP
