#include "qdl/threej.hpp"

#include <algorithm>
#include <cmath>

namespace qdl {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

// one summand of a three-slot operator: coeff * m1(x1) m2(x2) m3(x3) *
// S(x1+sh1, x2+sh2, x3+sh3)
struct TriAtom {
  cplx coeff{1.0, 0.0};
  WordAtom a1, a2, a3;
};

std::vector<TriAtom> lift12(const TwoVarOpExpr& e, const ModularParams& p) {
  std::vector<TriAtom> out;
  for (const auto& w : e.words) {
    TriAtom t;
    t.coeff = w.coeff;
    t.a1 = word_to_atom({cplx(1.0, 0.0), w.slot1}, p);
    t.a2 = word_to_atom({cplx(1.0, 0.0), w.slot2}, p);
    out.push_back(t);
  }
  return out;
}

std::vector<TriAtom> lift3(const OpExpr& e, const ModularParams& p) {
  std::vector<TriAtom> out;
  for (const auto& w : e.words) {
    TriAtom t;
    t.coeff = w.coeff;
    t.a3 = word_to_atom({cplx(1.0, 0.0), w.gens}, p);
    out.push_back(t);
  }
  return out;
}

template <class F>
cplx apply_atoms(const std::vector<TriAtom>& atoms, const F& S, cplx x1, cplx x2, cplx x3,
                 const ModularParams& p) {
  cplx acc = 0.0;
  for (const auto& t : atoms) {
    cplx m = t.coeff * t.a1.mult_at(x1, p) * t.a2.mult_at(x2, p) * t.a3.mult_at(x3, p);
    acc += m * S(x1 + t.a1.shift, x2 + t.a2.shift, x3 + t.a3.shift);
  }
  return acc;
}

}  // namespace

KernelSpec ThreeJEngine::make_spec(const SpinTriple& spins, bool canonical) const {
  KernelSpec spec;
  spec.spins = spins;
  spec.eps = default_eps();
  spec.canonical = canonical;
  spec.S0 = canonical ? canonical_S0(spins) : cplx(1.0, 0.0);
  return spec;
}

cplx ThreeJEngine::kernel_S(const KernelSpec& spec, cplx x1, cplx x2, cplx x3) const {
  const auto& [s1, s2, s3] = spec.spins;
  const cplx w2 = params().omega_dprime;
  const cplx ie = kI * spec.eps;
  const cplx x12 = x1 - x2, x23 = x2 - x3, x31 = x3 - x1;
  cplx pref = spec.S0 * std::exp(-kTwoPi * kI * (s1 * x23 + s2 * x31 + s3 * (x2 - x1)));
  return pref * g_(x12 - s1) / g_(x12 + s2 + s3 + w2 - ie) * g_(x23 + s3 - s2 - w2 + ie) /
         g_(x23 - s1) * g_(x31 - w2 + ie) / g_(x31 + s1 - s2 - s3);
}

cplx ThreeJEngine::canonical_S0(const SpinTriple& spins) const {
  const auto& [s1, s2, s3] = spins;
  const cplx w2 = params().omega_dprime;
  // phase fixed so that the momentum kernel reduces to gamma(p - s3) times the
  // separated eigenfunction
  cplx k0 = std::exp(-kI * kPi / 4.0);
  cplx quad = cplx(s3 * s3, 0.0) + 2.0 * s3 * (s2 + w2) +
              cplx((s2 - s1 + s3) * (s2 - s1 + s3), 0.0);
  return k0 * expi_pi(-2.0 * w2 * w2) * expi_pi(quad) * g_(cplx(s2 - s1 - s3, 0.0));
}

SystemReport ThreeJEngine::verify_system(const KernelSpec& spec,
                                         const std::vector<std::array<cplx, 3>>& points) const {
  const auto& p = params();
  const auto& [s1, s2, s3] = spec.spins;
  auto S = [&](cplx a, cplx b, cplx c) { return kernel_S(spec, a, b, c); };

  auto residual = [&](const std::vector<TriAtom>& lhs, const std::vector<TriAtom>& rhs) {
    double worst = 0.0;
    for (const auto& pt : points) {
      cplx a = apply_atoms(lhs, S, pt[0], pt[1], pt[2], p);
      cplx b = apply_atoms(rhs, S, pt[0], pt[1], pt[2], p);
      double scale = std::max({1e-30, std::abs(a), std::abs(b)});
      worst = std::max(worst, std::abs(a - b) / scale);
    }
    return worst;
  };

  SystemReport rep;
  rep.e_residual = residual(lift12(coproduct_generator(GenKind::e_small, s1, s2, p), p),
                            lift3(generator(GenKind::e_primed, s3, p), p));
  rep.f_residual = residual(lift12(coproduct_generator(GenKind::f_small, s1, s2, p), p),
                            lift3(generator(GenKind::f_primed, s3, p), p));
  rep.K_residual = residual(lift12(coproduct_generator(GenKind::K, s1, s2, p), p),
                            lift3(generator(GenKind::K_primed, s3, p), p));
  rep.e_tilde_residual =
      residual(lift12(coproduct_generator(GenKind::e_tilde_small, s1, s2, p), p),
               lift3(generator(GenKind::e_tilde_primed, s3, p), p));
  rep.f_tilde_residual =
      residual(lift12(coproduct_generator(GenKind::f_tilde_small, s1, s2, p), p),
               lift3(generator(GenKind::f_tilde_primed, s3, p), p));
  rep.K_tilde_residual = residual(lift12(coproduct_generator(GenKind::K_tilde, s1, s2, p), p),
                                  lift3(generator(GenKind::K_tilde_primed, s3, p), p));
  rep.max_residual =
      std::max({rep.e_residual, rep.f_residual, rep.K_residual, rep.e_tilde_residual,
                rep.f_tilde_residual, rep.K_tilde_residual});
  return rep;
}

cplx ThreeJEngine::undressed_kernel(const KernelSpec& spec, cplx x1, cplx x2, cplx x3) const {
  const auto& [s1, s2, s3] = spec.spins;
  const cplx w2 = params().omega_dprime;
  const cplx ie = kI * spec.eps;
  const cplx x12 = x1 - x2, x23 = x2 - x3, x13 = x1 - x3;
  cplx pref = spec.S0 * expi_pi(2.0 * w2 * w2) *
              expi_pi(cplx(-(s2 - s1 + s3) * (s2 - s1 + s3), 0.0)) /
              g_(cplx(s2 - s1 - s3, 0.0));
  return pref * std::exp(kTwoPi * kI * (s1 + s3) * x12) / g_(x12 + s2 + s3 + w2 - ie) *
         std::exp(kTwoPi * kI * (w2 - s3) * x13) * g_(x23 + s3 - s2 - w2 + ie) /
         g_(x13 + w2 - ie);
}

cplx ThreeJEngine::momentum_kernel_Sp(const KernelSpec& spec, double p_mom, cplx x1,
                                      cplx x2) const {
  const auto& [s1, s2, s3] = spec.spins;
  const auto& p = params();
  const cplx w2 = p.omega_dprime;
  const cplx ie = kI * spec.eps;
  const cplx x12 = x1 - x2, x21 = x2 - x1;
  cplx pref = spec.S0 * expi_pi(2.0 * w2 * w2) * p.c *
              expi_pi(cplx(-(s2 - s1 + s3) * (s2 - s1 + s3), 0.0)) *
              g_(cplx(p_mom - s3, 0.0)) / g_(cplx(s2 - s1 - s3, 0.0));
  return pref * std::exp(-kTwoPi * kI * p_mom * x1) / g_(x21 - s2 + p_mom) *
         std::exp(kTwoPi * kI * (s1 + s3) * x12) * g_(x21 + s3 - s2 - w2 + ie) /
         g_(x12 + s2 + s3 + w2 - ie);
}

ResidualReport ThreeJEngine::verify_momentum_consistency(const KernelSpec& spec, double p_mom,
                                                         cplx x1, cplx x2) const {
  if (std::abs(p_mom) > p_max)
    throw DomainViolationError(
        "momentum consistency: |p| beyond the quadrature gate p_max");
  const auto& [s1, s2, s3] = spec.spins;
  const double strip = params().strip_half_width();

  auto f = [&](cplx x3) {
    return std::exp(-kTwoPi * kI * p_mom * x3) * undressed_kernel(spec, x1, x2, x3);
  };
  const double rate = kTwoPi * (strip - 2.0 * spec.eps) * 0.9;
  QuadResult lhs = line_with_asymptotes(
      f, {x1.real(), (x2 + s3 - s2).real()}, EndSpec::plain(rate), EndSpec::plain(rate),
      rel_tol, node_budget);

  ResidualReport r;
  r.id = "Sp";
  r.parameters = {{"p", cplx(p_mom, 0.0)}, {"x1", x1}, {"x2", x2}};
  r.lhs = lhs.value;
  r.rhs = momentum_kernel_Sp(spec, p_mom, x1, x2);
  r.quadrature_error = lhs.error;
  r.note = "Fourier transform of the undressed kernel in the third slot";
  r.finish();
  return r;
}

// ---------------------------------------------------------------------------

namespace {

// gamma on the real axis with closed-form far tails; no real-axis poles
struct GammaLine {
  SpectralEngine::LineFn fn;

  static GammaLine build(const GammaEvaluator& g, double extent) {
    const auto& p = g.params();
    GammaLine gl;
    gl.fn.lo = -extent;
    gl.fn.hi = extent;
    gl.fn.du = 0.01;
    gl.fn.pole = cplx(0.0, -1.0);  // unused
    gl.fn.residue = cplx(0.0, 0.0);
    double beta = p.beta;
    gl.fn.tail_left = [beta](double u) {
      return std::exp(cplx(0.0, beta)) * expi_pi(cplx(u, 0.0) * cplx(u, 0.0));
    };
    gl.fn.tail_right = [](double) { return cplx(1.0, 0.0); };
    std::size_t n = static_cast<std::size_t>(std::ceil((gl.fn.hi - gl.fn.lo) / gl.fn.du)) + 4;
    gl.fn.vals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double u = gl.fn.lo + gl.fn.du * static_cast<double>(i);
      gl.fn.vals[i] = g(cplx(u, 0.0));
    }
    gl.fn.hi = gl.fn.lo + gl.fn.du * static_cast<double>(n - 4);
    return gl;
  }

  cplx operator()(double u) const { return fn(u); }
};

cplx quad_real(const Integrand& f, double lo, double hi, std::vector<double> brk, double rel_tol,
               int budget) {
  std::vector<cplx> verts;
  verts.push_back(cplx(lo, 0.0));
  std::sort(brk.begin(), brk.end());
  for (double b : brk)
    if (b > lo + 1e-12 && b < hi - 1e-12) verts.push_back(cplx(b, 0.0));
  verts.push_back(cplx(hi, 0.0));
  return integrate_path(f, verts, rel_tol, budget).value;
}

}  // namespace

SmearedDeltaResult ThreeJEngine::sp_orthogonality(double s1, double s2, double p0, double sig0,
                                                  double sig0p, double width,
                                                  const RegulatorLadder& ladder) const {
  (void)s1;
  (void)s2;  // the reduced kernel depends on the pair labels only through the
             // eigenfunction slot, which has already been shifted away
  ladder.validate();
  const double strip = params().strip_half_width();
  GaussWindow up{p0, width}, v1{sig0, width}, v2{sig0p, width};
  const double wl = 8.0 * width;

  GammaLine gl = GammaLine::build(g_, std::abs(p0) + std::max(std::abs(sig0), std::abs(sig0p)) +
                                          2.0 * wl + 1.0);

  std::vector<cplx> rungs;
  for (double eps : ladder.eps_values) {
    SpectralEngine::PhiGrids gr = spec_.make_grids(eps);
    const double rate = 4.0 * kPi * (strip - 2.0 * eps);
    const double X = std::max(std::abs(sig0), std::abs(sig0p)) + wl + 44.0 / rate;

    auto G1 = [&](double pm, double x) {
      auto f = [&](cplx s) {
        return v1(s) * gl(pm - s.real()) * spec_.phi_fast(gr, x, s.real());
      };
      return quad_real(f, sig0 - wl, sig0 + wl, {x, -x}, 1e-8, node_budget);
    };
    auto G2 = [&](double pm, double x) {
      auto f = [&](cplx s) {
        return v2(s) * spec_.phi_bar_fast(gr, x, s.real()) / gl(pm - s.real());
      };
      return quad_real(f, sig0p - wl, sig0p + wl, {x, -x}, 1e-8, node_budget);
    };
    auto T = [&](cplx pmc) {
      double pm = pmc.real();
      auto fx = [&](cplx xc) { return G1(pm, xc.real()) * G2(pm, xc.real()); };
      return up(pmc) * up(pmc) *
             quad_real(fx, -X, X, {-sig0, -sig0p, sig0, sig0p}, 1e-7, node_budget);
    };
    rungs.push_back(quad_real(T, p0 - wl, p0 + wl, {}, 1e-7, node_budget));
  }

  SmearedDeltaResult out;
  out.lhs = neville_at_zero(ladder.eps_values, rungs);
  {
    std::vector<double> xs(ladder.eps_values.begin() + 1, ladder.eps_values.end());
    std::vector<cplx> ys(rungs.begin() + 1, rungs.end());
    out.quadrature_error = std::abs(out.lhs - neville_at_zero(xs, ys));
  }

  // distributional side: rho^{-1}(s) delta(p-q) [delta(s-s') +
  // delta(s+s') gamma(p-s)/gamma(p+s)]; the momentum windows collapse on the
  // diagonal and the remaining s-smearing carries the weights
  auto inv_rho = [&](double s) { return 1.0 / spec_.rho(s); };
  cplx diag = smeared_delta_rhs(v1, v2, {{+1, inv_rho}});
  auto up2 = [&](cplx pm) { return up(pm) * up(pm); };
  cplx up_mass = integrate_segment(up2, cplx(p0 - wl, 0), cplx(p0 + wl, 0), 1e-12, 1 << 12).value;
  auto refl = [&](cplx pmc) {
    double pm = pmc.real();
    auto f = [&](cplx s) {
      double sv = s.real();
      return v1(s) * v2(-s) * inv_rho(sv) * gl(pm - sv) / gl(pm + sv);
    };
    double lo = std::max(sig0 - wl, -sig0p - wl), hi = std::min(sig0 + wl, -sig0p + wl);
    if (lo >= hi) return cplx(0.0, 0.0);
    return up(pmc) * up(pmc) * integrate_segment(f, cplx(lo, 0), cplx(hi, 0), 1e-10, 1 << 12).value;
  };
  out.rhs = diag * up_mass +
            integrate_segment(refl, cplx(p0 - wl, 0), cplx(p0 + wl, 0), 1e-9, 1 << 12).value;
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

SmearedDeltaResult ThreeJEngine::sp_completeness(double s1, double s2, double c1, double c2,
                                                 double c1p, double c2p, double width,
                                                 const RegulatorLadder& ladder) const {
  ladder.validate();
  if (ladder.delta_values.empty())
    throw DomainViolationError("sp_completeness: ladder must carry paired delta values");
  const double w = width;
  const double y0 = c2 - c1 - s2;    // center of the y-window
  const double y0p = c2p - c1p - s2;
  const double norm2w = 1.0 / (w * std::sqrt(kPi));  // GaussWindow norm squared
  const double Pmax = std::sqrt(44.0 / (2.0 * kPi * kPi * w * w)) / 1.55 + 2.0;
  const double Smax = Pmax;
  const double yext = 9.0 * w;

  GammaLine gl = GammaLine::build(g_, Pmax + std::max(std::abs(y0), std::abs(y0p)) + yext + 1.0);

  // closed-form transverse factors:
  //   Phi1(p, y) = int dx w1(x) w2(x + y + s2) e^{-2 pi i p x}
  //              = norm2w sqrt(pi) w e^{-d^2/(4w^2)} e^{-2 pi i p m} e^{-pi^2 p^2 w^2},
  //   d = y - y0, m = c1 - d/2; the primed factor carries the opposite phase.
  auto Phi = [&](double pm, double y, double yc, double cc, double sign) {
    double d = y - yc;
    double m = cc - 0.5 * d;
    return norm2w * std::sqrt(kPi) * w * std::exp(-d * d / (4.0 * w * w)) *
           std::exp(sign * kTwoPi * kI * pm * m) *
           std::exp(-kPi * kPi * pm * pm * w * w);
  };

  std::vector<cplx> rungs;
  for (std::size_t i = 0; i < ladder.eps_values.size(); ++i) {
    const double eps = ladder.eps_values[i];
    const double del = ladder.delta_values[i];
    SpectralEngine::PhiGrids gr = spec_.make_grids(eps);

    auto Q1 = [&](double pm, double s) {
      auto f = [&](cplx yc) {
        double y = yc.real();
        return Phi(pm, y, y0, c1, -1.0) * std::exp(-kTwoPi * kI * s1 * y) *
               spec_.phi_fast(gr, y, s) / gl(y + pm);
      };
      return quad_real(f, y0 - yext, y0 + yext, {s, -s}, 1e-8, node_budget);
    };
    auto Q2 = [&](double pm, double s) {
      auto f = [&](cplx yc) {
        double y = yc.real();
        return Phi(pm, y, y0p, c1p, +1.0) * std::exp(kTwoPi * kI * s1 * y) *
               spec_.phi_bar_fast(gr, y, s) * gl(y + pm);
      };
      return quad_real(f, y0p - yext, y0p + yext, {s, -s}, 1e-8, node_budget);
    };

    auto over_p = [&](double s) {
      auto f = [&](cplx pc) { return Q1(pc.real(), s) * Q2(pc.real(), s); };
      std::vector<double> brk;
      for (double b = -Pmax + 4.0; b < Pmax; b += 4.0) brk.push_back(b);
      return quad_real(f, -Pmax, Pmax, brk, 1e-7, node_budget << 2);
    };
    auto integrand = [&](cplx sc) {
      double s = sc.real();
      return spec_.rho(s) * std::exp(-kTwoPi * del * s) * over_p(s);
    };
    std::vector<double> brk;
    for (double b = 1.0; b < Smax; b += 2.0) brk.push_back(b);
    rungs.push_back(quad_real(integrand, 0.0, Smax, brk, 1e-7, node_budget << 2));
  }

  SmearedDeltaResult out;
  out.lhs = neville_at_zero(ladder.eps_values, rungs);
  {
    std::vector<double> xs(ladder.eps_values.begin() + 1, ladder.eps_values.end());
    std::vector<cplx> ys(rungs.begin() + 1, rungs.end());
    out.quadrature_error = std::abs(out.lhs - neville_at_zero(xs, ys));
  }
  out.rhs = std::exp(-(c1 - c1p) * (c1 - c1p) / (4.0 * w * w)) *
            std::exp(-(c2 - c2p) * (c2 - c2p) / (4.0 * w * w));
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace qdl
