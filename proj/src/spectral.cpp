#include "qdl/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace qdl {

namespace {
constexpr double kTwoPi = 2.0 * kPi;
}

cplx SpectralEngine::phi(cplx x, double s, double eps) const {
  const cplx w2 = params().omega_dprime;
  return expi_pi(-(x - w2) * (x - w2)) * g_(x + s - w2 + kI * eps) * g_(x - s - w2 + kI * eps);
}

cplx SpectralEngine::phi_bar(cplx x, double s, double eps) const {
  const cplx w2 = params().omega_dprime;
  return expi_pi((x + w2) * (x + w2)) /
         (g_(x + s + w2 - kI * eps) * g_(x - s + w2 - kI * eps));
}

double SpectralEngine::eigen_equation_residual(cplx x, double s, double eps) const {
  const auto& p = params();
  cplx Z = p.Z(cplx(s, 0.0));
  cplx lhs = phi(x + 2.0 * p.omega_prime, s, eps) +
             (p.u_mult(x) + 1.0 / p.u_mult(x)) * phi(x, s, eps);
  cplx rhs = (Z + 1.0 / Z) * phi(x, s, eps);
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

cplx SpectralEngine::rho(double s) const {
  const auto& p = params();
  return -4.0 * std::sin(kPi * s / p.omega) * std::sin(kPi * s / p.omega_prime);
}

SpectralMeasure SpectralEngine::measure(double s) const {
  const auto& p = params();
  SpectralMeasure m;
  m.s = s;
  m.rho = rho(s);
  const cplx w2 = p.omega_dprime;
  cplx s2(2.0 * s, 0.0);
  if (std::abs(s) > 1e-8) {
    m.rho_gamma = std::exp(-2.0 * kTwoPi * kI * s * w2) * g_(s2 + w2) / g_(s2 - w2);
  } else {
    m.rho_gamma = 0.0;  // gamma(omega'') zero; the weight vanishes at s = 0
  }
  auto M_of = [&](double sv) {
    return p.c * std::exp(-kTwoPi * kI * (sv * sv + sv * w2)) * g_(cplx(2.0 * sv, 0.0) + w2);
  };
  m.M = M_of(s);
  m.S = m.M / M_of(-s);
  m.sigma = std::exp(-2.0 * kTwoPi * kI * s * w2) -
            std::exp(-2.0 * kTwoPi * kI * s * (w2 - 2.0 * p.omega_prime));
  return m;
}

// ---------------------------------------------------------------------------
// Factored fast evaluation.

cplx SpectralEngine::LineFn::operator()(double u) const {
  if (u < lo) return tail_left(u);
  if (u > hi) return tail_right(u);
  // 4-point Lagrange interpolation of the smooth part
  double t = (u - lo) / du;
  long i1 = std::lround(std::floor(t));
  long n = static_cast<long>(vals.size());
  long i0 = std::clamp(i1 - 1, 0L, n - 4);
  double r = t - static_cast<double>(i0);
  // nodes at offsets 0,1,2,3 from i0
  double l0 = -(r - 1.0) * (r - 2.0) * (r - 3.0) / 6.0;
  double l1 = r * (r - 2.0) * (r - 3.0) / 2.0;
  double l2 = -r * (r - 1.0) * (r - 3.0) / 2.0;
  double l3 = r * (r - 1.0) * (r - 2.0) / 6.0;
  cplx smooth = l0 * vals[i0] + l1 * vals[i0 + 1] + l2 * vals[i0 + 2] + l3 * vals[i0 + 3];
  return smooth + residue / (cplx(u, 0.0) - pole);
}

SpectralEngine::PhiGrids SpectralEngine::make_grids(double eps, double extent) const {
  const auto& p = params();
  const cplx w2 = p.omega_dprime;
  const double beta = p.beta;
  PhiGrids gr;
  gr.eps = eps;

  auto build = [&](LineFn& fn, const std::function<cplx(double)>& raw, cplx pole, cplx residue,
                   std::function<cplx(double)> tl, std::function<cplx(double)> tr) {
    fn.lo = -extent;
    fn.hi = extent;
    fn.du = 0.0075;
    fn.pole = pole;
    fn.residue = residue;
    fn.tail_left = std::move(tl);
    fn.tail_right = std::move(tr);
    std::size_t n = static_cast<std::size_t>(std::ceil((fn.hi - fn.lo) / fn.du)) + 4;
    fn.vals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double u = fn.lo + fn.du * static_cast<double>(i);
      fn.vals[i] = raw(u) - residue / (cplx(u, 0.0) - pole);
    }
    fn.hi = fn.lo + fn.du * static_cast<double>(n - 4);  // last safely interpolable point
  };

  // H(u) = 1/gamma(u + omega'' - i eps): simple pole at u = i eps with residue
  // c/(2 pi i); tails H -> 1 (u -> +inf) and the reflection asymptote (u -> -inf)
  build(
      gr.H, [&](double u) { return 1.0 / g_(cplx(u, 0.0) + w2 - kI * eps); }, kI * eps,
      p.c / (kTwoPi * kI),
      [beta, w2, eps](double u) {
        cplx w = cplx(u, 0.0) + w2 - kI * eps;
        return std::exp(cplx(0.0, -beta)) * expi_pi(-w * w);
      },
      [](double) { return cplx(1.0, 0.0); });

  // K(v) = gamma(v - omega'' + i eps): simple pole at v = -i eps with residue
  // -1/(2 pi i c); tails K -> 1 (v -> +inf) and the reflection asymptote
  build(
      gr.K, [&](double v) { return g_(cplx(v, 0.0) - w2 + kI * eps); }, -kI * eps,
      -1.0 / (kTwoPi * kI * p.c),
      [beta, w2, eps](double v) {
        cplx w = cplx(v, 0.0) - w2 + kI * eps;
        return std::exp(cplx(0.0, beta)) * expi_pi(w * w);
      },
      [](double) { return cplx(1.0, 0.0); });
  return gr;
}

cplx SpectralEngine::phi_fast(const PhiGrids& gr, double x, double s) const {
  const cplx w2 = params().omega_dprime;
  cplx xc(x, 0.0);
  return expi_pi(-(xc - w2) * (xc - w2)) * gr.K(x + s) * gr.K(x - s);
}

cplx SpectralEngine::phi_bar_fast(const PhiGrids& gr, double x, double s) const {
  const cplx w2 = params().omega_dprime;
  cplx xc(x, 0.0);
  return expi_pi((xc + w2) * (xc + w2)) * gr.H(x + s) * gr.H(x - s);
}

// ---------------------------------------------------------------------------

namespace {

// quadrature over [lo, hi] split at interior breakpoints
cplx quad_breaks(const Integrand& f, double lo, double hi, std::vector<double> brk,
                 double rel_tol, int budget, double abs_floor = 1e-13) {
  std::vector<cplx> verts;
  verts.push_back(cplx(lo, 0.0));
  std::sort(brk.begin(), brk.end());
  for (double b : brk)
    if (b > lo + 1e-12 && b < hi - 1e-12) verts.push_back(cplx(b, 0.0));
  verts.push_back(cplx(hi, 0.0));
  return integrate_path(f, verts, rel_tol, budget, abs_floor).value;
}

}  // namespace

SmearedDeltaResult SpectralEngine::orthogonality_check(double lambda0, double mu0, double width,
                                                       const RegulatorLadder& ladder) const {
  ladder.validate();
  const auto& p = params();
  GaussWindow w1{lambda0, width}, w2{mu0, width};
  const double wl = 8.0 * width;
  const double strip = p.strip_half_width();

  std::vector<cplx> rung_values;
  double quad_err = 0.0;
  for (double eps : ladder.eps_values) {
    PhiGrids gr = make_grids(eps);
    const double rate = 4.0 * kPi * (strip - 2.0 * eps);
    const double X = std::max(std::abs(lambda0), std::abs(mu0)) + wl + 44.0 / rate;

    auto Wbar1 = [&](double x) {
      auto f = [&](cplx lam) { return w1(lam) * phi_bar_fast(gr, x, lam.real()); };
      return quad_breaks(f, lambda0 - wl, lambda0 + wl, {x, -x}, rel_tol, node_budget);
    };
    auto W2f = [&](double x) {
      auto f = [&](cplx mu) { return w2(mu) * phi_fast(gr, x, mu.real()); };
      return quad_breaks(f, mu0 - wl, mu0 + wl, {x, -x}, rel_tol, node_budget);
    };
    auto outer = [&](cplx xc) { return Wbar1(xc.real()) * W2f(xc.real()); };
    cplx v = quad_breaks(outer, -X, X, {-mu0, -lambda0, lambda0, mu0}, 1e-8, node_budget);
    rung_values.push_back(v);
  }

  SmearedDeltaResult out;
  out.lhs = neville_at_zero(ladder.eps_values, rung_values);
  {
    std::vector<double> xs(ladder.eps_values.begin() + 1, ladder.eps_values.end());
    std::vector<cplx> ys(rung_values.begin() + 1, rung_values.end());
    out.quadrature_error = quad_err + std::abs(out.lhs - neville_at_zero(xs, ys));
  }
  auto inv_rho = [this](double s) { return 1.0 / rho(s); };
  // the weight is non-integrable at s = 0; the windows suppress that
  // neighbourhood exponentially, so it is excluded from the smearing
  double clip = 0.5 * std::min(std::abs(lambda0), std::abs(mu0));
  out.rhs = smeared_delta_rhs(w1, w2, {{+1, inv_rho, clip}, {-1, inv_rho, clip}});
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

SmearedDeltaResult SpectralEngine::completeness_check(double x0, double y0, double width,
                                                      const RegulatorLadder& ladder) const {
  ladder.validate();
  if (ladder.delta_values.empty())
    throw DomainViolationError("completeness_check: ladder must carry paired delta values");
  const auto& p = params();
  GaussWindow w1{x0, width}, w2{y0, width};
  const double wl = 8.0 * width;

  // sigma(lambda) = e^{-4 pi i lambda omega''} - e^{-4 pi i lambda (omega'' - 2 omega')}
  auto sigma = [&](double lam) {
    return std::exp(-2.0 * kTwoPi * kI * lam * p.omega_dprime) -
           std::exp(-2.0 * kTwoPi * kI * lam * (p.omega_dprime - 2.0 * p.omega_prime));
  };

  // lambda-range: left end decays at 4 pi b; right end cut by the window
  // smearing (Gaussian in lambda) plus the delta-damping
  const double rate_left = 4.0 * kPi * std::min(p.b, 1.0 / p.b);
  const double Lneg = 44.0 / rate_left + 1.0;
  const double Lpos = std::sqrt(44.0 / (2.0 * kPi * kPi * width * width)) + 4.0;

  std::vector<cplx> rung_values;
  for (std::size_t i = 0; i < ladder.eps_values.size(); ++i) {
    const double eps = ladder.eps_values[i];
    const double del = ladder.delta_values[i];
    PhiGrids gr = make_grids(eps);

    auto A = [&](double lam) {
      auto f = [&](cplx x) { return w1(x) * phi_bar_fast(gr, x.real(), lam); };
      return quad_breaks(f, x0 - wl, x0 + wl, {lam, -lam}, rel_tol, node_budget);
    };
    auto B = [&](double lam) {
      auto f = [&](cplx y) { return w2(y) * phi_fast(gr, y.real(), lam); };
      return quad_breaks(f, y0 - wl, y0 + wl, {lam, -lam}, rel_tol, node_budget);
    };
    auto integrand = [&](cplx lc) {
      double lam = lc.real();
      return sigma(lam) * std::exp(-kTwoPi * del * lam) * A(lam) * B(lam);
    };
    std::vector<double> brk;
    for (double b = -std::floor(Lneg); b < Lpos; b += 2.0) brk.push_back(b);
    cplx v = quad_breaks(integrand, -Lneg, Lpos, brk, 1e-8, node_budget << 2);
    rung_values.push_back(v);
  }

  SmearedDeltaResult out;
  out.lhs = neville_at_zero(ladder.eps_values, rung_values);
  {
    std::vector<double> xs(ladder.eps_values.begin() + 1, ladder.eps_values.end());
    std::vector<cplx> ys(rung_values.begin() + 1, rung_values.end());
    out.quadrature_error = std::abs(out.lhs - neville_at_zero(xs, ys));
  }
  // smeared delta(x - y) for unit-L2 windows of equal width
  out.rhs = std::exp(-(x0 - y0) * (x0 - y0) / (4.0 * width * width));
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

// ---------------------------------------------------------------------------

cplx SpectralEngine::project(const std::function<cplx(double)>& F, double s) const {
  return 0.5 * (F(s) + measure(s).S * F(-s));
}

double SpectralEngine::projection_idempotence_residual(double s0, double width,
                                                       const std::vector<double>& sample) const {
  GaussWindow w{s0, width};
  auto G = [&](double s) { return w(cplx(s, 0.0)); };
  auto PG = [&](double s) { return project(G, s); };
  double worst = 0.0;
  for (double s : sample) {
    cplx a = project(PG, s);
    cplx b = PG(s);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
  }
  return worst;
}

double SpectralEngine::projection_identity_residual(double s0, double width,
                                                    const std::vector<double>& sample) const {
  GaussWindow w{s0, width};
  // F(s) = w(s) + S(s) w(-s) satisfies F(s) = S(s) F(-s)
  auto F = [&](double s) { return w(cplx(s, 0.0)) + measure(s).S * w(cplx(-s, 0.0)); };
  double worst = 0.0;
  for (double s : sample) {
    cplx a = project(F, s);
    worst = std::max(worst, std::abs(a - F(s)) / std::max(1.0, std::abs(F(s))));
  }
  return worst;
}

double SpectralEngine::projection_image_constraint_residual(
    double s0, double width, const std::vector<double>& sample) const {
  GaussWindow w{s0, width};
  auto G = [&](double s) { return w(cplx(s, 0.0)); };
  auto F = [&](double s) { return project(G, s); };
  double worst = 0.0;
  for (double s : sample) {
    cplx a = F(s);
    cplx b = measure(s).S * F(-s);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  return worst;
}

double SpectralEngine::u_subspace_residual(const TestFunction& f, double s, double eps) const {
  const double X = 9.0;
  auto Fs = [&](double sv) {
    auto integ = [&](cplx x) { return phi(x, sv, eps) * f(x); };
    cplx I = quad_breaks(integ, -X, X, {sv, -sv}, rel_tol, node_budget);
    return measure(sv).M * I;
  };
  cplx a = Fs(s);
  cplx b = measure(s).S * Fs(-s);
  return std::abs(a - b) / std::max(1.0, std::abs(a));
}

double SpectralEngine::gamma_ratio_identity_residual(cplx z) const {
  const auto& p = params();
  cplx lhs = g_(z + p.omega - p.omega_prime) * g_(z - p.omega + p.omega_prime);
  cplx rhs;
  if (std::abs(z) < 1e-4) {
    // removable 0 * inf pair: the limit of gamma(z+omega'') gamma(z-omega'') at
    // z -> 0 is -1/c^2
    rhs = -1.0 / (p.c * p.c);
  } else {
    rhs = g_(z + p.omega_dprime) * g_(z - p.omega_dprime);
  }
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

}  // namespace qdl
