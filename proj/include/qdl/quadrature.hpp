#ifndef QDL_QUADRATURE_HPP
#define QDL_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "qdl/core.hpp"

namespace qdl {

// Truncated straight-line contour Im t = imag_offset, |Re t| <= half_width.
struct ContourSpec {
  double imag_offset = 0.0;
  double half_width = 0.0;
  int node_budget = 1 << 15;
  double target_rel_tol = 1e-11;

  void validate() const {
    if (!(half_width > 0.0)) throw DomainViolationError("ContourSpec: half_width must be > 0");
    if (!(target_rel_tol > 0.0)) throw DomainViolationError("ContourSpec: target_rel_tol must be > 0");
    if (node_budget < 16) throw DomainViolationError("ContourSpec: node_budget must be >= 16");
  }
};

struct QuadResult {
  cplx value{0.0, 0.0};
  double error = 0.0;
  std::size_t evals = 0;
};

using Integrand = std::function<cplx(cplx)>;

// Tanh-sinh nodes on (-1,1), organized by dyadic refinement level.  Each level
// stores only the nodes new at that level (positive abscissas; used
// symmetrically).  uc = 1 - u is kept separately for accuracy near the ends.
namespace ts {

inline constexpr int kMaxLevel = 12;
inline constexpr double kSigmaMax = 4.0;

struct Node {
  double u;   // tanh((pi/2) sinh sigma)
  double uc;  // 1 - u, computed without cancellation
  double w;   // (pi/2) cosh(sigma) / cosh^2((pi/2) sinh sigma)
};

struct Level {
  double h;                 // step in sigma at this level
  double w0;                // weight of the sigma = 0 node (level 0 only, else 0)
  std::vector<Node> nodes;  // new positive-sigma nodes of this level
};

const std::vector<Level>& tables();

}  // namespace ts

// Adaptive tanh-sinh integration along the straight segment a -> b.  The
// refinement stops once the two-level difference is below rel_tol * |value|
// or below abs_floor.
QuadResult integrate_segment(const Integrand& f, cplx a, cplx b, double rel_tol,
                             int node_budget, double abs_floor = 0.0);

// Integration along a polyline; each consecutive vertex pair is one segment.
QuadResult integrate_path(const Integrand& f, const std::vector<cplx>& vertices,
                          double rel_tol, int node_budget, double abs_floor = 0.0);

// Adaptive quadrature on the truncated line Im t = imag_offset, split at Re t = 0.
// Throws EndpointMassError when the integrand has not decayed at +-half_width.
QuadResult integrate_line(const Integrand& f, const ContourSpec& contour);

// ---------------------------------------------------------------------------
// Regulator ladders: descending eps (and paired delta) values with polynomial
// extrapolation to the zero-regulator limit.

struct RegulatorLadder {
  std::vector<double> eps_values;
  std::vector<double> delta_values;
  bool pair_constraint = false;  // when set, every pair must satisfy delta > 2 eps

  // Four halving rungs: the integrand families depend exponentially on the
  // regulator, and cubic extrapolation from a 3-point ladder starting at 0.04
  // leaves ~1e-5 truncation error, right at the identity tolerances.
  static RegulatorLadder defaults() {
    RegulatorLadder l;
    l.eps_values = {0.02, 0.01, 0.005, 0.0025};
    l.delta_values = {0.05, 0.025, 0.0125, 0.00625};  // delta = 2.5 eps
    l.pair_constraint = true;
    return l;
  }

  void validate() const;
};

struct RegulatedResult {
  cplx value{0.0, 0.0};
  double spread = 0.0;      // extrapolation spread (drop-a-rung sensitivity)
  double quad_error = 0.0;  // worst per-rung quadrature error
  std::vector<cplx> rung_values;
};

// Evaluates the integrand family at every ladder rung and Richardson-extrapolates
// in eps.  `rung` must return the quadrature value for the given (eps, delta).
RegulatedResult integrate_regulated(
    const std::function<QuadResult(double eps, double delta)>& rung,
    const RegulatorLadder& ladder);

// Polynomial (Neville) extrapolation of (x_i, y_i) to x = 0.
cplx neville_at_zero(const std::vector<double>& xs, const std::vector<cplx>& ys);

// ---------------------------------------------------------------------------
// Oscillatory Fourier-type integrals over the real line.
//
// The integrand approaches C * exp(2 pi i w t) at one or both ends; the tail
// beyond the quadrature window is the closed form of that asymptote (its
// analytic continuation in w, which realizes contour bending without moving
// the contour), and only the exponentially small remainder is integrated.

struct EndSpec {
  enum class Mode { Plain, Asymptote, Bent };
  Mode mode = Mode::Plain;

  // Plain: integrand itself decays at this rate (> 0 required)
  double plain_rate = 0.0;
  // Asymptote: integrand ~ coeff * exp(2 pi i freq t); remainder decays at rem_rate
  cplx coeff{0.0, 0.0};
  cplx freq{0.0, 0.0};
  double rem_rate = 0.0;
  // Bent: finite ray tilted off the axis (for ends with Gaussian-phase decay)
  double slope = 0.0;  // right ray direction (1, -slope); left ray -(1, -slope)
  double ray_length = 10.0;

  static EndSpec plain(double rate) {
    EndSpec e;
    e.plain_rate = rate;
    return e;
  }
  static EndSpec asymptote(cplx coeff, cplx freq, double rem_rate) {
    EndSpec e;
    e.mode = Mode::Asymptote;
    e.coeff = coeff;
    e.freq = freq;
    e.rem_rate = rem_rate;
    return e;
  }
  static EndSpec bent_ray(double slope, double length = 10.0) {
    EndSpec e;
    e.mode = Mode::Bent;
    e.slope = slope;
    e.ray_length = length;
    return e;
  }
};

// Integral of f over the full real line (optionally shifted to Im t = offset).
// `breaks` lists abscissas of sharp structure; segments split there.
QuadResult line_with_asymptotes(const Integrand& f, std::vector<double> breaks,
                                const EndSpec& left, const EndSpec& right,
                                double rel_tol, int node_budget,
                                double imag_offset = 0.0, double pad = 4.0);

// ---------------------------------------------------------------------------
// Smeared-delta comparison harness.

struct SmearedDeltaResult {
  cplx lhs{0.0, 0.0};
  cplx rhs{0.0, 0.0};
  double residual = 0.0;
  double quadrature_error = 0.0;
};

// Gaussian window with unit L2 norm.
struct GaussWindow {
  double center = 0.0;
  double width = 0.05;

  double norm() const;           // (width sqrt(pi))^{-1/2}
  cplx operator()(cplx s) const {
    cplx d = s - center;
    return norm() * std::exp(-d * d / (2.0 * width * width));
  }
  double support_radius(double tail = 8.0) const { return tail * width; }
};

// Expected distributional form: sum of terms weight(s) * delta(s -+ s').
struct DeltaTerm {
  int sign = +1;  // +1: delta(s - s'), -1: delta(s + s')
  std::function<cplx(double)> weight;  // nullptr means weight 1
  // radius around s = 0 excluded from the smearing integral, for weights
  // singular at the bottom of the spectrum (the windows must make the
  // excluded mass negligible)
  double clip0 = 0.0;
};

// Smears `kernel` (a genuine two-argument callable) against the window pair and
// compares with the analytically smeared distributional form.
SmearedDeltaResult smeared_delta_check(const std::function<cplx(double, double)>& kernel,
                                       const GaussWindow& w1, const GaussWindow& w2,
                                       const std::vector<DeltaTerm>& expected,
                                       double rel_tol = 1e-9, int node_budget = 1 << 15);

// RHS half of the comparison, shared with the specialized spectral checks:
// integral of conj(w1)(s) w2(sign * s) weight(s) ds over the window overlap.
cplx smeared_delta_rhs(const GaussWindow& w1, const GaussWindow& w2,
                       const std::vector<DeltaTerm>& expected);

}  // namespace qdl

#endif  // QDL_QUADRATURE_HPP
