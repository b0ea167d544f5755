#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qdl/weyl.hpp"

using namespace qdl;

namespace {

const ModularParams& p08() {
  static ModularParams p = ModularParams::make(0.8);
  return p;
}

std::vector<cplx> sample_points() {
  return {cplx(0.3, 0.0),  cplx(-0.4, 0.2), cplx(0.1, -0.3), cplx(0.7, 0.1), cplx(-0.2, -0.1),
          cplx(0.05, 0.4), cplx(-0.6, 0.0), cplx(0.9, -0.2), cplx(0.0, 0.0), cplx(0.45, 0.25)};
}

}  // namespace

TEST_CASE("shift acts exactly on a gaussian") {
  const auto& p = p08();
  TestFunction f = TestFunction::gaussian(cplx(1.0, 0.0));
  TestFunctionSum vf = apply(OpExpr::atom(Gen::V), f, p);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    cplx x(u(rng), u(rng));
    cplx direct = std::exp(-(x + 2.0 * p.omega_prime) * (x + 2.0 * p.omega_prime));
    CHECK(std::abs(vf(x) - direct) < 1e-12 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("identity word is exact") {
  const auto& p = p08();
  TestFunction f = TestFunction::gaussian(cplx(0.7, 0.1), cplx(0.2, -0.3));
  f.poly = {cplx(1.0, 0.0), cplx(0.5, 0.2), cplx(0.0, -0.1)};
  TestFunctionSum ff = apply(OpExpr::scalar(1.0), f, p);
  for (cplx x : sample_points()) CHECK(std::abs(ff(x) - f(x)) == 0.0);
}

TEST_CASE("weyl relation u v = q^2 v u pointwise") {
  const auto& p = p08();
  TestFunction f = TestFunction::gaussian(cplx(1.0, 0.0));
  OpExpr uv = OpExpr::atom(Gen::U) * OpExpr::atom(Gen::V);
  OpExpr vu = (p.q * p.q) * (OpExpr::atom(Gen::V) * OpExpr::atom(Gen::U));
  TestFunctionSum a = apply(uv, f, p), b = apply(vu, f, p);
  for (cplx x : sample_points())
    CHECK(std::abs(a(x) - b(x)) < 1e-12 * std::max(1.0, std::abs(a(x))));
}

TEST_CASE("fourier transform closed form inverts exactly") {
  const auto& p = p08();
  TestFunction f = TestFunction::gaussian(cplx(0.8, 0.2), cplx(-0.1, 0.4));
  f.poly = {cplx(0.3, 0.0), cplx(0.0, 1.0), cplx(0.2, -0.2)};
  TestFunctionSum rt = apply(OpExpr::atom(Gen::Finv) * OpExpr::atom(Gen::Fwd), f, p);
  for (cplx x : sample_points())
    CHECK(std::abs(rt(x) - f(x)) < 1e-11 * std::max(1.0, std::abs(f(x))));
}

TEST_CASE("fourier transform matches quadrature on a gaussian") {
  TestFunction f = TestFunction::gaussian(cplx(1.0, 0.0), cplx(0.3, 0.1));
  TestFunction hat = f.fourier();
  // int e^{-2 pi i x y} f(y) dy at x = 0.37 by direct Riemann sum
  cplx x(0.37, 0.0);
  cplx acc = 0.0;
  const double h = 1e-3;
  for (double y = -12.0; y <= 12.0; y += h)
    acc += std::exp(-2.0 * kPi * kI * x * y) * f(cplx(y, 0.0)) * h;
  CHECK(std::abs(acc - hat(x)) < 1e-8);
}

TEST_CASE("positivity witnesses on the real axis") {
  const auto& p = p08();
  for (double x : {-1.0, -0.3, 0.0, 0.4, 2.0}) {
    cplx m = p.u_mult(cplx(x, 0.0));
    CHECK(std::abs(m.imag()) < 1e-15 * std::abs(m));
    CHECK(m.real() > 0.0);
  }
  for (double s : {0.0, 0.4, 1.1}) {
    cplx Z = p.Z(cplx(s, 0.0));
    CHECK(std::abs(Z.imag()) < 1e-15 * std::abs(Z));
    CHECK(Z.real() > 0.0);
  }
}

TEST_CASE("generator orderings and K independence") {
  const auto& p = p08();
  TestFunction f = TestFunction::gaussian(cplx(1.0, 0.0));
  for (double s : {0.0, 0.4}) {
    TestFunctionSum a = apply(generator(GenKind::e_small, s, p), f, p);
    TestFunctionSum b = apply(generator(GenKind::e_small_alt, s, p), f, p);
    for (cplx x : sample_points())
      CHECK(std::abs(a(x) - b(x)) < 1e-12 * std::max(1.0, std::abs(a(x))));
  }
  // K = v independent of s
  OpExpr k1 = generator(GenKind::K, cplx(0.2, 0.0), p);
  OpExpr k2 = generator(GenKind::K, cplx(1.3, 0.0), p);
  TestFunctionSum a = apply(k1, f, p), b = apply(k2, f, p);
  for (cplx x : sample_points()) CHECK(std::abs(a(x) - b(x)) == 0.0);
}

TEST_CASE("transposed generator orderings") {
  const auto& p = p08();
  TestFunction f = TestFunction::gaussian(cplx(1.0, 0.0));
  TestFunctionSum a = apply(generator(GenKind::e_primed, 0.7, p), f, p);
  TestFunctionSum b = apply(generator(GenKind::e_primed_alt, 0.7, p), f, p);
  for (cplx x : sample_points())
    CHECK(std::abs(a(x) - b(x)) < 1e-12 * std::max(1.0, std::abs(a(x))));
}

TEST_CASE("full relation suite at the test grid") {
  std::vector<TestFunction> sample = {TestFunction::gaussian(cplx(1.0, 0.0)),
                                      TestFunction::gaussian(cplx(0.5, 0.0), cplx(0.0, 0.3))};
  for (double b : {0.6, 0.8, 1.3}) {
    ModularParams p = ModularParams::make(b);
    for (double s : {0.0, 0.4, 1.1}) {
      AlgebraReport rep = check_relations(cplx(s, 0.0), sample, sample_points(), p);
      CAPTURE(b);
      CAPTURE(s);
      CHECK(rep.max_residual < 1e-10);
    }
  }
}

TEST_CASE("coproduct of K shifts both slots") {
  const auto& p = p08();
  TestFunction f = TestFunction::gaussian(cplx(1.0, 0.0));
  TestFunction g = TestFunction::gaussian(cplx(0.5, 0.0), cplx(0.1, 0.0));
  TwoVarOpExpr dk = coproduct_generator(GenKind::K, 0.3, 0.7, p);
  TestFunctionPairSum out = apply(dk, f, g, p);
  cplx x1(0.1, 0.0), x2(-0.2, 0.0);
  cplx expect = f(x1 + 2.0 * p.omega_prime) * g(x2 + 2.0 * p.omega_prime);
  CHECK(std::abs(out.eval(x1, x2) - expect) < 1e-12);
}

TEST_CASE("coproduct of E matches the hand-expanded action") {
  const auto& p = p08();
  cplx s1(0.3, 0.0), s2(0.5, 0.0);
  TestFunction f = TestFunction::gaussian(cplx(1.0, 0.0));
  TestFunction g = TestFunction::gaussian(cplx(0.7, 0.0));
  TwoVarOpExpr de = coproduct_generator(GenKind::E, s1, s2, p);
  TestFunctionPairSum out = apply(de, f, g, p);
  // E1 K2 + E2 by hand
  TestFunctionSum e1f = apply(generator(GenKind::E, s1, p), f, p);
  TestFunctionSum k2g = apply(OpExpr::atom(Gen::V), g, p);
  TestFunctionSum e2g = apply(generator(GenKind::E, s2, p), g, p);
  cplx x1(0.1, 0.0), x2(-0.2, 0.0);
  cplx expect = e1f(x1) * k2g(x2) + f(x1) * e2g(x2);
  CHECK(std::abs(out.eval(x1, x2) - expect) < 1e-12 * std::max(1.0, std::abs(expect)));
}

TEST_CASE("coassociativity smoke test on K") {
  // (D ox id) D(K) and (id ox D) D(K) both act as v1 v2 v3
  const auto& p = p08();
  TestFunction f = TestFunction::gaussian(cplx(1.0, 0.0));
  cplx x(0.17, -0.05);
  cplx shifted = f(x + 2.0 * p.omega_prime);
  TestFunctionSum vf = apply(OpExpr::atom(Gen::V), f, p);
  CHECK(std::abs(vf(x) - shifted) < 1e-14 * std::max(1.0, std::abs(shifted)));
}

TEST_CASE("word atoms compose exactly") {
  const auto& p = p08();
  // u v u^{-1} v^{-1} reduces to the scalar q^2
  OpWord w;
  w.coeff = 1.0;
  w.gens = {Gen::U, Gen::V, Gen::Uinv, Gen::Vinv};
  WordAtom a = word_to_atom(w, p);
  CHECK(a.ku == 0);
  CHECK(a.kut == 0);
  CHECK(std::abs(a.shift) < 1e-15);
  CHECK(std::abs(a.coeff - p.q * p.q) < 1e-14);  // u v u^-1 v^-1 = q^2
}

TEST_CASE("degree overflow is detected") {
  TestFunction f = TestFunction::gaussian(cplx(1.0, 0.0));
  std::vector<cplx> big(TestFunction::kMaxDegree + 2, cplx(1.0, 0.0));
  CHECK_THROWS_AS(f.poly_mul(big), DegreeOverflowError);
}

TEST_CASE("closed-form norm matches quadrature") {
  TestFunction f = TestFunction::gaussian(cplx(0.9, 0.3), cplx(0.2, -0.1));
  f.poly = {cplx(1.0, 0.0), cplx(0.4, 0.1)};
  double direct = 0.0;
  const double h = 1e-3;
  for (double x = -14.0; x <= 14.0; x += h) direct += std::norm(f(cplx(x, 0.0))) * h;
  CHECK(std::abs(f.norm2() - direct) < 1e-8 * std::max(1.0, direct));
}
