#include "qdl/casimir.hpp"

#include <algorithm>
#include <cmath>

namespace qdl {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

// real-axis extent beyond which |f| < e^{-46} * max|f|
double gaussian_extent(const TestFunction& f) {
  double a = f.alpha.real();
  double c = f.beta.real() / (2.0 * a);
  return std::abs(c) + std::sqrt(46.0 / a) + 0.5 * f.degree();
}

}  // namespace

cplx CasimirEngine::apply_two_var(const TwoVarOpExpr& op, const TwoVarFunction& f, cplx x1,
                                  cplx x2) const {
  const auto& p = params();
  cplx acc = 0.0;
  for (const auto& w : op.words) {
    WordAtom a1 = word_to_atom({cplx(1.0, 0.0), w.slot1}, p);
    WordAtom a2 = word_to_atom({cplx(1.0, 0.0), w.slot2}, p);
    acc += w.coeff * a1.mult_at(x1, p) * a2.mult_at(x2, p) * f(x1 + a1.shift, x2 + a2.shift);
  }
  return acc;
}

TwoVarOpExpr CasimirEngine::casimir_words(double s1, double s2) const {
  const auto& p = params();
  using T = TwoVarOpExpr;
  T e12 = coproduct_generator(GenKind::e_small, s1, s2, p);
  T f12 = coproduct_generator(GenKind::f_small, s1, s2, p);
  T K12 = coproduct_generator(GenKind::K, s1, s2, p);
  T K12inv = T::lift1(OpExpr::atom(Gen::Vinv)) * T::lift2(OpExpr::atom(Gen::Vinv));
  return f12 * e12 - p.q * K12 - (1.0 / p.q) * K12inv;
}

TwoVarOpExpr CasimirEngine::casimir_explicit_words(double s1, double s2) const {
  const auto& p = params();
  using T = TwoVarOpExpr;
  const cplx q = p.q, Z1 = p.Z(cplx(s1, 0.0)), Z2 = p.Z(cplx(s2, 0.0));
  T W = T::lift1(OpExpr::atom(Gen::U)) * T::lift2(OpExpr::atom(Gen::Uinv));     // u1/u2
  T Wi = T::lift1(OpExpr::atom(Gen::Uinv)) * T::lift2(OpExpr::atom(Gen::U));    // u2/u1
  T V2 = T::lift2(OpExpr::atom(Gen::V));
  T V1i = T::lift1(OpExpr::atom(Gen::Vinv));
  T one = T::scalar(1.0);
  return Z2 * W + (1.0 / Z2) * Wi +
         (T::scalar(Z1) + (1.0 / q) * Wi) * (one + (q / Z1) * W) * V2 +
         (T::scalar(Z2) + (Z1 / (q * Z2)) * Wi) * (one + (q / Z1) * W) * V1i +
         (Z1 / (q * q)) * Wi * (one + (q / Z1) * W) * (one + (q * q * q / Z1) * W) * (V1i * V2);
}

TwoVarOpExpr CasimirEngine::casimir_prime_words(double s1, double s2) const {
  const auto& p = params();
  using T = TwoVarOpExpr;
  const cplx q = p.q, Z1 = p.Z(cplx(s1, 0.0)), Z2 = p.Z(cplx(s2, 0.0));
  T W = T::lift1(OpExpr::atom(Gen::U)) * T::lift2(OpExpr::atom(Gen::Uinv));
  T V2 = T::lift2(OpExpr::atom(Gen::V));
  T V1i = T::lift1(OpExpr::atom(Gen::Vinv));
  T U2big = T::lift2(OpExpr::atom(Gen::U)) * (T::scalar(1.0) + (Z2 / q) * V2);
  return Z2 * W + Z1 * V2 + Z2 * V1i +
         (1.0 / Z2) * T::lift1(OpExpr::atom(Gen::Uinv)) *
             (T::scalar(1.0) + (Z1 / q) * V1i) * U2big;
}

TwoVarOpExpr CasimirEngine::casimir_dprime_words(double s1, double s2) const {
  const auto& p = params();
  using T = TwoVarOpExpr;
  const cplx q = p.q, Z1 = p.Z(cplx(s1, 0.0)), Z2 = p.Z(cplx(s2, 0.0));
  T W = T::lift1(OpExpr::atom(Gen::U)) * T::lift2(OpExpr::atom(Gen::Uinv));
  T Wi = T::lift1(OpExpr::atom(Gen::Uinv)) * T::lift2(OpExpr::atom(Gen::U));
  T one = T::scalar(1.0);
  T D = one + (q * Z2 * Z2 / Z1) * W;
  T V2p = D * T::lift2(OpExpr::atom(Gen::V));
  T V1pi = D * T::lift1(OpExpr::atom(Gen::Vinv));
  return Z2 * W + (1.0 / Z2) * Wi + Z1 * V2p + (Z1 / (q * Z2)) * Wi * V1pi;
}

TwoVarOpExpr CasimirEngine::tilde_casimir_words(double s1, double s2) const {
  const auto& p = params();
  using T = TwoVarOpExpr;
  const cplx q = p.q, Z1 = p.Z(cplx(s1, 0.0)), Z2 = p.Z(cplx(s2, 0.0));
  T W = T::lift1(OpExpr::atom(Gen::U)) * T::lift2(OpExpr::atom(Gen::Uinv));
  T Wi = T::lift1(OpExpr::atom(Gen::Uinv)) * T::lift2(OpExpr::atom(Gen::U));
  return Z2 * W + (1.0 / Z2) * Wi + Z1 * T::lift2(OpExpr::atom(Gen::V)) +
         (Z1 / (q * Z2)) * Wi * T::lift1(OpExpr::atom(Gen::Vinv));
}

cplx CasimirEngine::casimir_apply(double s1, double s2, const TwoVarFunction& f, cplx x1,
                                  cplx x2) const {
  return apply_two_var(casimir_words(s1, s2), f, x1, x2);
}

cplx CasimirEngine::casimir_apply_explicit(double s1, double s2, const TwoVarFunction& f, cplx x1,
                                           cplx x2) const {
  return apply_two_var(casimir_explicit_words(s1, s2), f, x1, x2);
}

cplx CasimirEngine::casimir_prime_apply(double s1, double s2, const TwoVarFunction& f, cplx x1,
                                        cplx x2) const {
  return apply_two_var(casimir_prime_words(s1, s2), f, x1, x2);
}

cplx CasimirEngine::casimir_dprime_apply(double s1, double s2, const TwoVarFunction& f, cplx x1,
                                         cplx x2) const {
  return apply_two_var(casimir_dprime_words(s1, s2), f, x1, x2);
}

cplx CasimirEngine::tilde_casimir_apply(double s1, double s2, const TwoVarFunction& f, cplx x1,
                                        cplx x2) const {
  return apply_two_var(tilde_casimir_words(s1, s2), f, x1, x2);
}

cplx CasimirEngine::K12_apply(const TwoVarFunction& f, cplx x1, cplx x2) const {
  const cplx sh = 2.0 * params().omega_prime;
  return f(x1 + sh, x2 + sh);
}

cplx CasimirEngine::R1_mult(double s1, cplx x1, cplx x2) const { return g_(x1 - x2 - s1); }

cplx CasimirEngine::R3_mult(double s1, double s2, cplx x1, cplx x2) const {
  return g_(x1 - x2 - s1 + 2.0 * s2);
}

cplx CasimirEngine::R2_apply_pair(double s2, const TestFunctionPairSum& f, cplx x1,
                                  cplx x2) const {
  cplx acc = 0.0;
  for (const auto& [a, b] : f.terms) {
    TestFunction bhat = b.fourier();
    double Y = gaussian_extent(bhat);
    auto integrand = [&](cplx xh) {
      return std::exp(kTwoPi * kI * x2 * xh) * g_(xh + s2) * bhat(xh);
    };
    cplx q = integrate_path(integrand, {cplx(-Y, 0.0), cplx(0.0, 0.0), cplx(Y, 0.0)}, rel_tol,
                            node_budget)
                 .value;
    acc += a(x1) * q;
  }
  return acc;
}

// ---------------------------------------------------------------------------

namespace {

// fixed tanh-sinh nodes over [lo, hi], split at 0 when it is interior
struct FixedRule {
  std::vector<double> x;
  std::vector<double> w;

  static FixedRule build(double lo, double hi, int level) {
    FixedRule r;
    const auto& tables = ts::tables();
    std::vector<std::pair<double, double>> segs;
    if (lo < 0.0 && hi > 0.0) {
      segs.push_back({lo, 0.0});
      segs.push_back({0.0, hi});
    } else {
      segs.push_back({lo, hi});
    }
    for (auto [a, b] : segs) {
      double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
      double h = tables[level].h;
      for (int L = 0; L <= level; ++L) {
        const auto& lv = tables[L];
        if (L == 0) {
          r.x.push_back(mid);
          r.w.push_back(lv.w0 * h * rad);
        }
        for (const auto& n : lv.nodes) {
          r.x.push_back(b - rad * n.uc);
          r.w.push_back(n.w * h * rad);
          r.x.push_back(a + rad * n.uc);
          r.w.push_back(n.w * h * rad);
        }
      }
    }
    return r;
  }
};

}  // namespace

// Tabulated forward transform: for fixed x1 the image of A on a product pair
// is R1(x1,x2) f1(x1) sum_k col_k e^{2 pi i x2 xhat_k}.
struct CasimirEngine::ATableImpl {
  cplx x1;
  double s1 = 0.0;
  cplx f1_at_x1;
  std::vector<double> xh;
  std::vector<cplx> col;
};

CasimirEngine::ATableImpl CasimirEngine::make_A_table(const UndressingChain& ch,
                                                      const TestFunction& f1,
                                                      const TestFunction& f2, cplx x1) const {
  const auto& p = params();
  const double s1 = ch.s1, s2 = ch.s2;
  const double Y = gaussian_extent(f2) + std::abs(x1.real()) + 2.0;
  const double Xh = 44.0 / (kTwoPi * 0.6 * p.strip_half_width()) + 2.0;
  FixedRule yr = FixedRule::build(-Y, Y, 8);
  FixedRule xr = FixedRule::build(-Xh, Xh, 8);

  // G_j = w_j gamma(x1 - y_j - s1 + 2 s2) f2(y_j)
  std::vector<cplx> G(yr.x.size());
  for (std::size_t j = 0; j < yr.x.size(); ++j)
    G[j] = yr.w[j] * g_(x1 - yr.x[j] - s1 + 2.0 * s2) * f2(cplx(yr.x[j], 0.0));

  ATableImpl t;
  t.x1 = x1;
  t.s1 = s1;
  t.f1_at_x1 = f1(x1);
  t.xh = xr.x;
  t.col.resize(xr.x.size());
  for (std::size_t k = 0; k < xr.x.size(); ++k) {
    cplx inner = 0.0;
    for (std::size_t j = 0; j < yr.x.size(); ++j)
      inner += G[j] * std::exp(-kTwoPi * kI * xr.x[k] * yr.x[j]);
    t.col[k] = xr.w[k] * g_(cplx(xr.x[k], 0.0) + s2) * inner;
  }
  return t;
}

cplx CasimirEngine::eval_A_table(const ATableImpl& t, cplx x2) const {
  cplx acc = 0.0;
  for (std::size_t k = 0; k < t.xh.size(); ++k)
    acc += t.col[k] * std::exp(kTwoPi * kI * x2 * t.xh[k]);
  return R1_mult(t.s1, t.x1, x2) * t.f1_at_x1 * acc;
}

cplx CasimirEngine::apply_A_pair(const UndressingChain& ch, const TestFunction& f1,
                                 const TestFunction& f2, cplx x1, cplx x2) const {
  return eval_A_table(make_A_table(ch, f1, f2, x1), x2);
}

cplx CasimirEngine::apply_Ainv(const UndressingChain& ch, const TwoVarFunction& f, cplx x1,
                               cplx x2, double t_decay_rate) const {
  const auto& p = params();
  const cplx w2 = p.omega_dprime;
  const double s1 = ch.s1, s2 = ch.s2;
  const double rate =
      t_decay_rate > 0.0 ? t_decay_rate : kTwoPi * 0.5 * p.strip_half_width();

  auto integrand = [&](cplx t) {
    return std::exp(kTwoPi * kI * t * (s2 - w2)) * g_(-t - w2 + kI * ch.eps) /
           g_(x1 - t - s1) * f(x1, t);
  };
  QuadResult q = line_with_asymptotes(integrand, {0.0, x1.real()}, EndSpec::plain(rate),
                                      EndSpec::plain(rate), rel_tol, node_budget);
  return q.value / (p.c * g_(x1 - x2 - s1 + 2.0 * s2));
}

double CasimirEngine::roundtrip_residual(const UndressingChain& ch, const TestFunction& f1,
                                         const TestFunction& f2,
                                         const std::vector<std::array<cplx, 2>>& points) const {
  // A^{-1}(A f) = f; the forward image is tabulated once per x1 since the
  // inverse transform only integrates over the second slot.
  double worst = 0.0;
  for (const auto& pt : points) {
    ATableImpl table = make_A_table(ch, f1, f2, pt[0]);
    auto Af = [&](cplx, cplx b) { return eval_A_table(table, b); };
    cplx back = apply_Ainv(ch, Af, pt[0], pt[1], kTwoPi * 0.55 * params().strip_half_width());
    cplx expect = f1(pt[0]) * f2(pt[1]);
    worst = std::max(worst, std::abs(back - expect) / std::max(1.0, std::abs(expect)));
  }
  return worst;
}

ChainReport CasimirEngine::verify_undressing_chain(
    const UndressingChain& ch, const TestFunction& f1, const TestFunction& f2,
    const std::vector<std::array<cplx, 2>>& points) const {
  const auto& p = params();
  const double s1 = ch.s1, s2 = ch.s2;
  ChainReport rep;

  auto pairf = [&](cplx a, cplx b) { return f1(a) * f2(b); };

  // step 1: C (R1 f) = R1 (C' f)
  {
    auto R1f = [&](cplx a, cplx b) { return R1_mult(s1, a, b) * pairf(a, b); };
    TwoVarOpExpr cw = casimir_words(s1, s2);
    TwoVarOpExpr cpw = casimir_prime_words(s1, s2);
    for (const auto& pt : points) {
      cplx lhs = apply_two_var(cw, R1f, pt[0], pt[1]);
      cplx rhs = R1_mult(s1, pt[0], pt[1]) * apply_two_var(cpw, pairf, pt[0], pt[1]);
      rep.step1 = std::max(rep.step1, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
  }

  // step 2: C' (R2 f) = R2 (C'' f), one quadrature layer on each side
  {
    TestFunctionPairSum base;
    base.terms.push_back({f1, f2});
    auto R2f = [&](cplx a, cplx b) { return R2_apply_pair(s2, base, a, b); };
    TwoVarOpExpr cpw = casimir_prime_words(s1, s2);
    TwoVarOpExpr cdw = casimir_dprime_words(s1, s2);
    for (const auto& pt : points) {
      cplx lhs = apply_two_var(cpw, R2f, pt[0], pt[1]);
      TestFunctionPairSum cdf = apply(cdw, f1, f2, p);
      cplx rhs = R2_apply_pair(s2, cdf, pt[0], pt[1]);
      rep.step2 = std::max(rep.step2, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
  }

  // step 3: C'' (R3 f) = R3 (C~ f)
  {
    auto R3f = [&](cplx a, cplx b) { return R3_mult(s1, s2, a, b) * pairf(a, b); };
    TwoVarOpExpr cdw = casimir_dprime_words(s1, s2);
    TwoVarOpExpr ctw = tilde_casimir_words(s1, s2);
    for (const auto& pt : points) {
      cplx lhs = apply_two_var(cdw, R3f, pt[0], pt[1]);
      cplx rhs = R3_mult(s1, s2, pt[0], pt[1]) * apply_two_var(ctw, pairf, pt[0], pt[1]);
      rep.step3 = std::max(rep.step3, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
  }

  // K12 invariance at every step
  {
    const cplx sh = 2.0 * p.omega_prime;
    TestFunctionPairSum base;
    base.terms.push_back({f1, f2});
    TestFunctionPairSum shifted;
    shifted.terms.push_back({f1.shifted(sh), f2.shifted(sh)});
    for (const auto& pt : points) {
      // multiplication steps: the multiplier depends on x1 - x2 only
      auto R1f = [&](cplx a, cplx b) { return R1_mult(s1, a, b) * pairf(a, b); };
      cplx l1 = K12_apply(R1f, pt[0], pt[1]);
      cplx r1 = R1_mult(s1, pt[0], pt[1]) * pairf(pt[0] + sh, pt[1] + sh);
      rep.K_invariance =
          std::max(rep.K_invariance, std::abs(l1 - r1) / std::max(1.0, std::abs(r1)));
      auto R3f = [&](cplx a, cplx b) { return R3_mult(s1, s2, a, b) * pairf(a, b); };
      cplx l3 = K12_apply(R3f, pt[0], pt[1]);
      cplx r3 = R3_mult(s1, s2, pt[0], pt[1]) * pairf(pt[0] + sh, pt[1] + sh);
      rep.K_invariance =
          std::max(rep.K_invariance, std::abs(l3 - r3) / std::max(1.0, std::abs(r3)));
      // Fourier-sandwich step
      cplx l2 = R2_apply_pair(s2, base, pt[0] + sh, pt[1] + sh);
      cplx r2 = R2_apply_pair(s2, shifted, pt[0], pt[1]);
      rep.K_invariance =
          std::max(rep.K_invariance, std::abs(l2 - r2) / std::max(1.0, std::abs(r2)));
    }
  }

  rep.max_residual = std::max({rep.step1, rep.step2, rep.step3, rep.K_invariance});
  return rep;
}

cplx CasimirEngine::eigenfunction_Psi_p(double s1, double s2, double s3, double p_mom, cplx x1,
                                        cplx x2, double eps) const {
  cplx x21 = x2 - x1;
  return std::exp(-kTwoPi * kI * p_mom * x1) * std::exp(-kTwoPi * kI * s1 * x21) /
         g_(x21 + p_mom - s2) * spec_.phi(x21 - s2, s3, eps);
}

double CasimirEngine::substitution_product_residual(
    double s1, const TestFunction& f1, const TestFunction& f2,
    const std::vector<std::array<cplx, 2>>& points) const {
  const auto& p = params();
  const cplx q = p.q, Z1 = p.Z(cplx(s1, 0.0));
  const cplx sh = 2.0 * p.omega_prime;
  auto D = [&](cplx a, cplx b) { return 1.0 + (q / Z1) * p.u_mult(a) / p.u_mult(b); };
  auto pairf = [&](cplx a, cplx b) { return f1(a) * f2(b); };
  double worst = 0.0;
  for (const auto& pt : points) {
    // V2 f = D * (v2 f); V1 g = v1 (D^{-1} g)
    auto V2f = [&](cplx a, cplx b) { return D(a, b) * pairf(a, b + sh); };
    cplx lhs = V2f(pt[0] + sh, pt[1]) / D(pt[0] + sh, pt[1]);
    cplx rhs = pairf(pt[0] + sh, pt[1] + sh);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  return worst;
}

}  // namespace qdl
