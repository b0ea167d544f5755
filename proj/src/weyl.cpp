#include "qdl/weyl.hpp"

#include <algorithm>
#include <cmath>

namespace qdl {

namespace {

using Poly = std::vector<cplx>;

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), cplx(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

Poly pmul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly poly_scale(Poly a, cplx c) {
  for (auto& v : a) v *= c;
  return a;
}

cplx poly_eval(const Poly& a, cplx x) {
  cplx r = 0.0;
  for (std::size_t i = a.size(); i-- > 0;) r = r * x + a[i];
  return r;
}

// P(x + c)
Poly poly_shift(const Poly& a, cplx c) {
  Poly r(a.size(), cplx(0.0, 0.0));
  for (std::size_t k = 0; k < a.size(); ++k) {
    // binomial expansion of a_k (x + c)^k
    cplx binom = 1.0;
    cplx cpow = 1.0;
    for (std::size_t j = 0; j <= k; ++j) {
      // coefficient of x^{k-j}: C(k, j) c^j
      r[k - j] += a[k] * binom * cpow;
      binom *= static_cast<double>(k - j) / static_cast<double>(j + 1);
      cpow *= c;
    }
  }
  return r;
}

// P(c0 + c1 x)
Poly poly_affine(const Poly& a, cplx c0, cplx c1) {
  Poly r{cplx(0.0, 0.0)};
  Poly lin{c0, c1};
  Poly pw{cplx(1.0, 0.0)};
  for (std::size_t k = 0; k < a.size(); ++k) {
    r = poly_add(r, poly_scale(pw, a[k]));
    if (k + 1 < a.size()) pw = pmul(pw, lin);
  }
  return r;
}

Poly poly_derivative(const Poly& a) {
  if (a.size() <= 1) return {cplx(0.0, 0.0)};
  Poly r(a.size() - 1);
  for (std::size_t k = 1; k < a.size(); ++k) r[k - 1] = static_cast<double>(k) * a[k];
  return r;
}

void check_degree(const Poly& p) {
  if (static_cast<int>(p.size()) - 1 > TestFunction::kMaxDegree)
    throw DegreeOverflowError("TestFunction: polynomial degree exceeds the cap");
}

}  // namespace

// ---------------------------------------------------------------------------

TestFunction TestFunction::gaussian(cplx alpha, cplx beta) {
  if (!(alpha.real() > 0.0))
    throw DomainViolationError("TestFunction: Re alpha must be positive");
  TestFunction f;
  f.alpha = alpha;
  f.beta = beta;
  return f;
}

cplx TestFunction::operator()(cplx x) const {
  return std::exp(-alpha * x * x + beta * x) * poly_eval(poly, x);
}

TestFunction TestFunction::shifted(cplx c) const {
  TestFunction r = *this;
  r.beta = beta - 2.0 * alpha * c;
  r.poly = poly_scale(poly_shift(poly, c), std::exp(-alpha * c * c + beta * c));
  return r;
}

TestFunction TestFunction::exp_mul(cplx kappa) const {
  TestFunction r = *this;
  r.beta += kappa;
  return r;
}

TestFunction TestFunction::poly_mul(const std::vector<cplx>& q) const {
  TestFunction r = *this;
  r.poly = pmul(poly, q);
  check_degree(r.poly);
  return r;
}

TestFunction TestFunction::scaled(cplx s) const {
  TestFunction r = *this;
  r.poly = poly_scale(poly, s);
  return r;
}

namespace {

TestFunction fourier_impl(const TestFunction& f, double kernel_sign) {
  // int dy y^k e^{-a y^2 + g y} = sqrt(pi/a) e^{g^2/(4a)} q_k(g),
  // q_0 = 1, q_{k+1} = q_k' + g/(2a) q_k; here g = beta + kernel_sign 2 pi i x.
  const cplx a = f.alpha;
  TestFunction r;
  r.alpha = kPi * kPi / a;
  r.beta = kernel_sign * kI * kPi * f.beta / a;
  cplx pref = std::sqrt(kPi / a) * std::exp(f.beta * f.beta / (4.0 * a));

  Poly qk{cplx(1.0, 0.0)};  // in the variable g
  Poly acc{cplx(0.0, 0.0)};
  for (std::size_t k = 0; k < f.poly.size(); ++k) {
    // substitute g = beta + kernel_sign * 2 pi i x
    Poly in_x = poly_affine(qk, f.beta, kernel_sign * 2.0 * kPi * kI);
    acc = poly_add(acc, poly_scale(in_x, f.poly[k]));
    if (k + 1 < f.poly.size()) {
      Poly g_qk = pmul(Poly{cplx(0.0, 0.0), cplx(1.0, 0.0)}, qk);
      qk = poly_add(poly_derivative(qk), poly_scale(g_qk, 1.0 / (2.0 * a)));
    }
  }
  r.poly = poly_scale(acc, pref);
  check_degree(r.poly);
  return r;
}

}  // namespace

TestFunction TestFunction::fourier() const { return fourier_impl(*this, -1.0); }
TestFunction TestFunction::fourier_inv() const { return fourier_impl(*this, +1.0); }

double TestFunction::norm2() const {
  // |f(x)|^2 = e^{-A x^2 + B x} |P(x)|^2 with A = 2 Re alpha, B = 2 Re beta
  const double A = 2.0 * alpha.real();
  const double B = 2.0 * beta.real();
  Poly conj_poly = poly;
  for (auto& v : conj_poly) v = std::conj(v);
  Poly P2 = pmul(poly, conj_poly);
  // moments M_m = int x^m e^{-A x^2 + B x}
  std::vector<double> M(P2.size());
  double m0 = std::sqrt(kPi / A) * std::exp(B * B / (4.0 * A));
  for (std::size_t m = 0; m < P2.size(); ++m) {
    if (m == 0)
      M[m] = m0;
    else if (m == 1)
      M[m] = B / (2.0 * A) * m0;
    else
      M[m] = B / (2.0 * A) * M[m - 1] + (m - 1) / (2.0 * A) * M[m - 2];
  }
  double out = 0.0;
  for (std::size_t m = 0; m < P2.size(); ++m) out += (P2[m] * M[m]).real();
  return out;
}

cplx TestFunctionSum::operator()(cplx x) const {
  cplx r = 0.0;
  for (const auto& t : terms) r += t(x);
  return r;
}

TestFunctionSum& TestFunctionSum::operator+=(const TestFunctionSum& other) {
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  return *this;
}

double TestFunctionSum::norm2_quadrature_free() const {
  // sum_{ij} int conj(f_i) f_j; reduce to the diagonal closed form by
  // treating conj(f_i) f_j as a single member on the real line
  double total = 0.0;
  for (const auto& fi : terms)
    for (const auto& fj : terms) {
      TestFunction prod;
      prod.alpha = std::conj(fi.alpha) + fj.alpha;
      prod.beta = std::conj(fi.beta) + fj.beta;
      Poly ci = fi.poly;
      for (auto& v : ci) v = std::conj(v);
      prod.poly = pmul(ci, fj.poly);
      // int e^{-alpha x^2 + beta x} P(x) over the real line
      const cplx a = prod.alpha, b = prod.beta;
      cplx m0 = std::sqrt(kPi / a) * std::exp(b * b / (4.0 * a));
      std::vector<cplx> M(prod.poly.size());
      for (std::size_t m = 0; m < prod.poly.size(); ++m) {
        if (m == 0)
          M[m] = m0;
        else if (m == 1)
          M[m] = b / (2.0 * a) * m0;
        else
          M[m] = b / (2.0 * a) * M[m - 1] + (static_cast<double>(m) - 1.0) / (2.0 * a) * M[m - 2];
      }
      cplx v = 0.0;
      for (std::size_t m = 0; m < prod.poly.size(); ++m) v += prod.poly[m] * M[m];
      total += v.real();
    }
  return total;
}

// ---------------------------------------------------------------------------

OpExpr OpExpr::scalar(cplx c) {
  OpExpr e;
  e.words.push_back({c, {}});
  return e;
}

OpExpr OpExpr::atom(Gen g, cplx coeff) {
  OpExpr e;
  e.words.push_back({coeff, {g}});
  return e;
}

OpExpr OpExpr::operator*(const OpExpr& rhs) const {
  OpExpr e;
  for (const auto& a : words)
    for (const auto& b : rhs.words) {
      OpWord w;
      w.coeff = a.coeff * b.coeff;
      w.gens = a.gens;
      w.gens.insert(w.gens.end(), b.gens.begin(), b.gens.end());
      e.words.push_back(std::move(w));
    }
  return e;
}

OpExpr OpExpr::operator+(const OpExpr& rhs) const {
  OpExpr e = *this;
  e.words.insert(e.words.end(), rhs.words.begin(), rhs.words.end());
  return e;
}

OpExpr OpExpr::operator-(const OpExpr& rhs) const { return *this + (cplx(-1.0, 0.0) * rhs); }

OpExpr operator*(cplx c, const OpExpr& e) {
  OpExpr r = e;
  for (auto& w : r.words) w.coeff *= c;
  return r;
}

namespace {

TestFunction apply_gen(Gen g, const TestFunction& f, const ModularParams& p) {
  switch (g) {
    case Gen::U:
      return f.exp_mul(-kI * kPi / p.omega);
    case Gen::Uinv:
      return f.exp_mul(kI * kPi / p.omega);
    case Gen::V:
      return f.shifted(2.0 * p.omega_prime);
    case Gen::Vinv:
      return f.shifted(-2.0 * p.omega_prime);
    case Gen::Ut:
      return f.exp_mul(-kI * kPi / p.omega_prime);
    case Gen::Utinv:
      return f.exp_mul(kI * kPi / p.omega_prime);
    case Gen::Vt:
      return f.shifted(2.0 * p.omega);
    case Gen::Vtinv:
      return f.shifted(-2.0 * p.omega);
    case Gen::Fwd:
      return f.fourier();
    case Gen::Finv:
      return f.fourier_inv();
  }
  throw DomainViolationError("apply_gen: unknown generator");
}

}  // namespace

TestFunctionSum apply(const OpExpr& op, const TestFunction& f, const ModularParams& p) {
  TestFunctionSum out;
  for (const auto& w : op.words) {
    TestFunction cur = f;
    for (std::size_t i = w.gens.size(); i-- > 0;) cur = apply_gen(w.gens[i], cur, p);
    out.terms.push_back(cur.scaled(w.coeff));
  }
  return out;
}

TestFunctionSum apply(const OpExpr& op, const TestFunctionSum& f, const ModularParams& p) {
  TestFunctionSum out;
  for (const auto& t : f.terms) out += apply(op, t, p);
  return out;
}

cplx WordAtom::mult_at(cplx x, const ModularParams& p) const {
  cplx m = coeff;
  if (ku) m *= std::pow(p.u_mult(x), ku);
  if (kut) m *= std::pow(p.ut_mult(x), kut);
  return m;
}

WordAtom word_to_atom(const OpWord& w, const ModularParams& p) {
  WordAtom a;
  a.coeff = w.coeff;
  // compose right-to-left: maintain [Oh](x) = m(x) h(x + shift)
  for (std::size_t i = w.gens.size(); i-- > 0;) {
    Gen g = w.gens[i];
    switch (g) {
      case Gen::U:
      case Gen::Uinv:
      case Gen::Ut:
      case Gen::Utinv: {
        int du = (g == Gen::U) ? 1 : (g == Gen::Uinv ? -1 : 0);
        int dut = (g == Gen::Ut) ? 1 : (g == Gen::Utinv ? -1 : 0);
        a.ku += du;
        a.kut += dut;
        break;
      }
      case Gen::V:
      case Gen::Vinv:
      case Gen::Vt:
      case Gen::Vtinv: {
        cplx sigma = (g == Gen::V)    ? 2.0 * p.omega_prime
                     : (g == Gen::Vinv) ? -2.0 * p.omega_prime
                     : (g == Gen::Vt)   ? 2.0 * p.omega
                                        : -2.0 * p.omega;
        // new outer shift: m(x) -> m(x + sigma), shift += sigma
        if (a.ku) a.coeff *= std::pow(p.u_mult(sigma), a.ku);
        if (a.kut) a.coeff *= std::pow(p.ut_mult(sigma), a.kut);
        a.shift += sigma;
        break;
      }
      default:
        throw DomainViolationError("word_to_atom: Fourier factors are not pointwise atoms");
    }
  }
  return a;
}

// ---------------------------------------------------------------------------

OpExpr generator(GenKind kind, cplx s, const ModularParams& p) {
  using E = OpExpr;
  const cplx q = p.q, qt = p.q_tilde;
  const cplx Z = p.Z(s), Zt = p.Z_tilde(s);
  const cplx eps_q = kI / (q - 1.0 / q);
  const cplx eps_qt = kI / (qt - 1.0 / qt);
  auto A = [](Gen g) { return E::atom(g); };

  switch (kind) {
    case GenKind::e_small:  // u^{-1} (q v + Z)
      return A(Gen::Uinv) * (q * A(Gen::V) + E::scalar(Z));
    case GenKind::e_small_alt:  // (q^{-1} v + Z) u^{-1}
      return ((1.0 / q) * A(Gen::V) + E::scalar(Z)) * A(Gen::Uinv);
    case GenKind::f_small:  // u (1 + q Z^{-1} v^{-1})
      return A(Gen::U) * (E::scalar(1.0) + (q / Z) * A(Gen::Vinv));
    case GenKind::f_small_alt:  // (1 + q^{-1} Z^{-1} v^{-1}) u
      return (E::scalar(1.0) + (1.0 / (q * Z)) * A(Gen::Vinv)) * A(Gen::U);
    case GenKind::K:
      return A(Gen::V);
    case GenKind::E:
      return eps_q * generator(GenKind::e_small, s, p);
    case GenKind::F:
      return eps_q * generator(GenKind::f_small, s, p);
    case GenKind::e_tilde_small:
      return A(Gen::Utinv) * (qt * A(Gen::Vt) + E::scalar(Zt));
    case GenKind::f_tilde_small:
      return A(Gen::Ut) * (E::scalar(1.0) + (qt / Zt) * A(Gen::Vtinv));
    case GenKind::K_tilde:
      return A(Gen::Vt);
    case GenKind::E_tilde:
      return eps_qt * generator(GenKind::e_tilde_small, s, p);
    case GenKind::F_tilde:
      return eps_qt * generator(GenKind::f_tilde_small, s, p);
    case GenKind::e_primed:  // (Z + q v^{-1}) u^{-1}
      return (E::scalar(Z) + q * A(Gen::Vinv)) * A(Gen::Uinv);
    case GenKind::e_primed_alt:  // u^{-1} (Z + q^{-1} v^{-1})
      return A(Gen::Uinv) * (E::scalar(Z) + (1.0 / q) * A(Gen::Vinv));
    case GenKind::f_primed:  // (1 + q Z^{-1} v) u
      return (E::scalar(1.0) + (q / Z) * A(Gen::V)) * A(Gen::U);
    case GenKind::f_primed_alt:  // u (1 + q^{-1} Z^{-1} v)
      return A(Gen::U) * (E::scalar(1.0) + (1.0 / (q * Z)) * A(Gen::V));
    case GenKind::K_primed:
      return A(Gen::Vinv);
    case GenKind::e_tilde_primed:
      return (E::scalar(Zt) + qt * A(Gen::Vtinv)) * A(Gen::Utinv);
    case GenKind::f_tilde_primed:
      return (E::scalar(1.0) + (qt / Zt) * A(Gen::Vt)) * A(Gen::Ut);
    case GenKind::K_tilde_primed:
      return A(Gen::Vtinv);
  }
  throw DomainViolationError("generator: unknown kind");
}

// ---------------------------------------------------------------------------

namespace {

double scaled_residual(const TestFunctionSum& lhs, const TestFunctionSum& rhs,
                       const std::vector<cplx>& points) {
  double worst = 0.0;
  for (cplx x : points) {
    cplx a = lhs(x), b = rhs(x);
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    worst = std::max(worst, std::abs(a - b) / scale);
  }
  return worst;
}

}  // namespace

AlgebraReport check_relations(cplx s, const std::vector<TestFunction>& sample,
                              const std::vector<cplx>& points, const ModularParams& p) {
  using K = GenKind;
  const cplx q = p.q, qt = p.q_tilde;

  OpExpr e = generator(K::e_small, s, p), f = generator(K::f_small, s, p);
  OpExpr Ecap = generator(K::E, s, p), Fcap = generator(K::F, s, p);
  OpExpr Kv = generator(K::K, s, p);
  OpExpr Kinv = OpExpr::atom(Gen::Vinv);
  OpExpr et = generator(K::e_tilde_small, s, p), ft = generator(K::f_tilde_small, s, p);
  OpExpr Et = generator(K::E_tilde, s, p), Ft = generator(K::F_tilde, s, p);
  OpExpr Kt = generator(K::K_tilde, s, p);
  OpExpr Ktinv = OpExpr::atom(Gen::Vtinv);
  OpExpr u = OpExpr::atom(Gen::U), v = OpExpr::atom(Gen::V);

  std::vector<std::pair<std::string, std::pair<OpExpr, OpExpr>>> cases;
  cases.push_back({"K E = q^2 E K", {Kv * Ecap, (q * q) * (Ecap * Kv)}});
  cases.push_back({"K F = q^-2 F K", {Kv * Fcap, (1.0 / (q * q)) * (Fcap * Kv)}});
  cases.push_back(
      {"[E,F] = (K - K^-1)/(q - q^-1)",
       {Ecap * Fcap - Fcap * Ecap, (1.0 / (q - 1.0 / q)) * (Kv - Kinv)}});
  cases.push_back({"Kt Et = qt^2 Et Kt", {Kt * Et, (qt * qt) * (Et * Kt)}});
  cases.push_back({"Kt Ft = qt^-2 Ft Kt", {Kt * Ft, (1.0 / (qt * qt)) * (Ft * Kt)}});
  cases.push_back(
      {"[Et,Ft] = (Kt - Kt^-1)/(qt - qt^-1)",
       {Et * Ft - Ft * Et, (1.0 / (qt - 1.0 / qt)) * (Kt - Ktinv)}});
  cases.push_back({"u v = q^2 v u", {u * v, (q * q) * (v * u)}});
  cases.push_back({"[e, et] = 0", {e * et, et * e}});
  cases.push_back({"[e, ft] = 0", {e * ft, ft * e}});
  cases.push_back({"[f, et] = 0", {f * et, et * f}});
  cases.push_back({"[f, ft] = 0", {f * ft, ft * f}});
  cases.push_back({"[e, Kt] = 0", {e * Kt, Kt * e}});
  cases.push_back({"[f, Kt] = 0", {f * Kt, Kt * f}});
  cases.push_back({"[et, K] = 0", {et * Kv, Kv * et}});
  cases.push_back({"[ft, K] = 0", {ft * Kv, Kv * ft}});
  cases.push_back(
      {"e orderings agree", {e, generator(K::e_small_alt, s, p)}});
  cases.push_back(
      {"f orderings agree", {f, generator(K::f_small_alt, s, p)}});
  cases.push_back(
      {"e' orderings agree", {generator(K::e_primed, s, p), generator(K::e_primed_alt, s, p)}});
  cases.push_back(
      {"f' orderings agree", {generator(K::f_primed, s, p), generator(K::f_primed_alt, s, p)}});
  // Fourier conjugation: F^{-1} u F = v and F^{-1} v F = u^{-1}
  OpExpr Finv = OpExpr::atom(Gen::Finv), Fwd = OpExpr::atom(Gen::Fwd);
  cases.push_back({"F^-1 u F = v", {Finv * u * Fwd, v}});
  cases.push_back({"F^-1 v F = u^-1", {Finv * v * Fwd, OpExpr::atom(Gen::Uinv)}});

  AlgebraReport report;
  for (const auto& [name, ops] : cases) {
    double worst = 0.0;
    for (const auto& fn : sample) {
      TestFunctionSum lhs = apply(ops.first, fn, p);
      TestFunctionSum rhs = apply(ops.second, fn, p);
      worst = std::max(worst, scaled_residual(lhs, rhs, points));
    }
    report.relations.push_back({name, worst});
    report.max_residual = std::max(report.max_residual, worst);
  }
  return report;
}

// ---------------------------------------------------------------------------

TwoVarOpExpr TwoVarOpExpr::scalar(cplx c) {
  TwoVarOpExpr e;
  e.words.push_back({c, {}, {}});
  return e;
}

TwoVarOpExpr TwoVarOpExpr::lift1(const OpExpr& e) {
  TwoVarOpExpr r;
  for (const auto& w : e.words) r.words.push_back({w.coeff, w.gens, {}});
  return r;
}

TwoVarOpExpr TwoVarOpExpr::lift2(const OpExpr& e) {
  TwoVarOpExpr r;
  for (const auto& w : e.words) r.words.push_back({w.coeff, {}, w.gens});
  return r;
}

TwoVarOpExpr TwoVarOpExpr::operator*(const TwoVarOpExpr& rhs) const {
  TwoVarOpExpr e;
  for (const auto& a : words)
    for (const auto& b : rhs.words) {
      TwoVarWord w;
      w.coeff = a.coeff * b.coeff;
      w.slot1 = a.slot1;
      w.slot1.insert(w.slot1.end(), b.slot1.begin(), b.slot1.end());
      w.slot2 = a.slot2;
      w.slot2.insert(w.slot2.end(), b.slot2.begin(), b.slot2.end());
      e.words.push_back(std::move(w));
    }
  return e;
}

TwoVarOpExpr TwoVarOpExpr::operator+(const TwoVarOpExpr& rhs) const {
  TwoVarOpExpr e = *this;
  e.words.insert(e.words.end(), rhs.words.begin(), rhs.words.end());
  return e;
}

TwoVarOpExpr TwoVarOpExpr::operator-(const TwoVarOpExpr& rhs) const {
  return *this + (cplx(-1.0, 0.0) * rhs);
}

TwoVarOpExpr operator*(cplx c, const TwoVarOpExpr& e) {
  TwoVarOpExpr r = e;
  for (auto& w : r.words) w.coeff *= c;
  return r;
}

TwoVarOpExpr coproduct_generator(GenKind kind, cplx s1, cplx s2, const ModularParams& p) {
  using T = TwoVarOpExpr;
  switch (kind) {
    case GenKind::e_small:
      return T::lift1(generator(GenKind::e_small, s1, p)) * T::lift2(OpExpr::atom(Gen::V)) +
             T::lift2(generator(GenKind::e_small, s2, p));
    case GenKind::f_small:
      return T::lift1(generator(GenKind::f_small, s1, p)) +
             T::lift1(OpExpr::atom(Gen::Vinv)) * T::lift2(generator(GenKind::f_small, s2, p));
    case GenKind::K:
      return T::lift1(OpExpr::atom(Gen::V)) * T::lift2(OpExpr::atom(Gen::V));
    case GenKind::E:
      return (kI / (p.q - 1.0 / p.q)) * coproduct_generator(GenKind::e_small, s1, s2, p);
    case GenKind::F:
      return (kI / (p.q - 1.0 / p.q)) * coproduct_generator(GenKind::f_small, s1, s2, p);
    case GenKind::e_tilde_small:
      return T::lift1(generator(GenKind::e_tilde_small, s1, p)) * T::lift2(OpExpr::atom(Gen::Vt)) +
             T::lift2(generator(GenKind::e_tilde_small, s2, p));
    case GenKind::f_tilde_small:
      return T::lift1(generator(GenKind::f_tilde_small, s1, p)) +
             T::lift1(OpExpr::atom(Gen::Vtinv)) *
                 T::lift2(generator(GenKind::f_tilde_small, s2, p));
    case GenKind::K_tilde:
      return T::lift1(OpExpr::atom(Gen::Vt)) * T::lift2(OpExpr::atom(Gen::Vt));
    default:
      throw DomainViolationError("coproduct_generator: unsupported kind");
  }
}

cplx TestFunctionPairSum::eval(cplx x1, cplx x2) const {
  cplx r = 0.0;
  for (const auto& [f, g] : terms) r += f(x1) * g(x2);
  return r;
}

TestFunctionPairSum apply(const TwoVarOpExpr& op, const TestFunction& f, const TestFunction& g,
                          const ModularParams& p) {
  TestFunctionPairSum out;
  for (const auto& w : op.words) {
    TestFunction a = f, b = g;
    for (std::size_t i = w.slot1.size(); i-- > 0;) a = apply_gen(w.slot1[i], a, p);
    for (std::size_t i = w.slot2.size(); i-- > 0;) b = apply_gen(w.slot2[i], b, p);
    out.terms.push_back({a.scaled(w.coeff), b});
  }
  return out;
}

}  // namespace qdl
