#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qdl/gamma.hpp"

using namespace qdl;

namespace {

const ModularParams& p08() {
  static ModularParams p = ModularParams::make(0.8);
  return p;
}

const GammaEvaluator& ev08() {
  static GammaEvaluator g(p08());
  return g;
}

}  // namespace

TEST_CASE("gamma tends to one for large positive real argument") {
  const auto& g = ev08();
  double x = 6.0 * p08().strip_half_width();
  CHECK(std::abs(g(cplx(x, 0.0)) - 1.0) < 1e-8);
}

TEST_CASE("gamma(0)^2 equals the reflection constant") {
  const auto& g = ev08();
  cplx g0 = g(cplx(0.0, 0.0));
  CHECK(std::abs(g0 * g0 - std::exp(kI * p08().beta)) < 1e-9);
}

TEST_CASE("shift equation by quadrature at x = 0.3") {
  const auto& g = ev08();
  const auto& p = p08();
  // both arguments inside the strip; force the defining integral on each
  cplx lhs = g.evaluate_forced(cplx(0.3, 0.0) + p.omega_prime, GammaStrategy::StripIntegral).value /
             g.evaluate_forced(cplx(0.3, 0.0) - p.omega_prime, GammaStrategy::StripIntegral).value;
  cplx rhs = 1.0 + p.u_mult(cplx(0.3, 0.0));
  CHECK(std::abs(lhs - rhs) < 1e-8);
}

TEST_CASE("dual shift equation") {
  const auto& g = ev08();
  const auto& p = p08();
  cplx x(0.25, 0.1);
  cplx lhs = g(x + p.omega) / g(x - p.omega);
  cplx rhs = 1.0 + p.ut_mult(x);
  CHECK(std::abs(lhs - rhs) < 1e-8);
}

TEST_CASE("reflection formula against the closed form") {
  const auto& g = ev08();
  for (cplx z : {cplx(0.0, 0.0), cplx(0.5, 0.0), cplx(0.2, 0.1)}) {
    cplx lhs = g(z) * g(-z);
    cplx rhs = g.reflection_product(z);
    CHECK(std::abs(lhs - rhs) < 1e-8);
  }
  // z = 0.5: e^{i beta} e^{i pi/4}
  cplx r05 = g.reflection_product(cplx(0.5, 0.0));
  CHECK(std::abs(r05 - std::exp(kI * (p08().beta + kPi / 4.0))) < 1e-14);
}

TEST_CASE("complex conjugation relation and unimodularity on the real axis") {
  const auto& g = ev08();
  CHECK(g.conjugation_check(cplx(0.4, 0.0)) < 1e-9);
  CHECK(std::abs(std::abs(g(cplx(0.4, 0.0))) - 1.0) < 1e-9);
  CHECK(g.conjugation_check(cplx(0.3, 0.2)) < 1e-8);
  CHECK(g.conjugation_check(cplx(-0.7, -0.1)) < 1e-8);
}

TEST_CASE("modular duality b <-> 1/b") {
  GammaEvaluator g(ModularParams::make(0.8));
  GammaEvaluator gd(ModularParams::make(1.0 / 0.8));
  for (cplx z : {cplx(0.37, 0.0), cplx(-0.2, 0.3), cplx(1.1, -0.4)}) {
    CHECK(std::abs(g(z) - gd(z)) < 1e-8);
  }
}

TEST_CASE("base pole and zero expansion data") {
  const auto& g = ev08();
  const auto& p = p08();
  PoleDatum pole = g.pole_expansion(PoleDatum::Kind::Pole);
  PoleDatum zero = g.pole_expansion(PoleDatum::Kind::Zero);
  CHECK(pole.location == -p.omega_dprime);
  CHECK(zero.location == p.omega_dprime);
  CHECK(std::abs(pole.leading_coefficient - (-1.0 / (2.0 * kPi * kI * p.c))) < 1e-15);
  CHECK(std::abs(zero.leading_coefficient - 2.0 * kPi * kI / p.c) < 1e-15);

  // circle fit of the leading Taylor coefficient at the base zero
  const double r = 1e-3;
  cplx m1 = 0.0;
  for (int k = 0; k < 16; ++k) {
    double th = 2.0 * kPi * k / 16.0;
    cplx d = r * std::exp(kI * th);
    m1 += g(p.omega_dprime + d) * std::exp(-kI * th);
  }
  m1 /= 16.0 * r;
  CHECK(std::abs(m1 - zero.leading_coefficient) / std::abs(zero.leading_coefficient) < 1e-5);

  // circle fit of the residue at the base pole
  cplx mres = 0.0;
  for (int k = 0; k < 16; ++k) {
    double th = 2.0 * kPi * k / 16.0;
    cplx d = r * std::exp(kI * th);
    mres += g(-p.omega_dprime + d) * std::exp(kI * th);
  }
  mres *= r / 16.0;
  CHECK(std::abs(mres - pole.leading_coefficient) / std::abs(pole.leading_coefficient) < 1e-5);
}

TEST_CASE("near-singularity arguments are rejected") {
  const auto& g = ev08();
  cplx z = -p08().omega_dprime + cplx(1e-9, 0.0);
  CHECK_THROWS_AS(g.evaluate(z), NearSingularityError);
}

TEST_CASE("functional equations on random strip points") {
  std::mt19937_64 rng(20240811);
  for (double b : {0.6, 0.8, 1.3}) {
    ModularParams p = ModularParams::make(b);
    GammaEvaluator g(p);
    std::uniform_real_distribution<double> rex(-2.0, 2.0);
    std::uniform_real_distribution<double> imx(-0.85, 0.85);
    for (int i = 0; i < 15; ++i) {
      cplx z(rex(rng), imx(rng) * p.strip_half_width());
      cplx u = p.u_mult(z);
      CHECK(std::abs(g(z + p.omega_prime) / g(z - p.omega_prime) - (1.0 + u)) /
                (1.0 + std::abs(u)) < 1e-8);
      cplx ut = p.ut_mult(z);
      CHECK(std::abs(g(z + p.omega) / g(z - p.omega) - (1.0 + ut)) / (1.0 + std::abs(ut)) < 1e-8);
      CHECK(std::abs(g(z) * g(-z) - g.reflection_product(z)) < 1e-8);
      CHECK(g.conjugation_check(z) < 1e-8);
    }
  }
}

TEST_CASE("strip integral and shift continuation agree") {
  const auto& g = ev08();
  // points reachable by both strategies
  for (cplx z : {cplx(0.4, 0.88), cplx(-0.3, -0.8), cplx(1.2, 0.95)}) {
    GammaValue a = g.evaluate_forced(z, GammaStrategy::StripIntegral);
    GammaValue b = g.evaluate_forced(z, GammaStrategy::ShiftContinuation);
    CHECK(std::abs(a.value - b.value) / std::abs(a.value) < 1e-7);
    CHECK(b.shift_count > 0);
  }
  GammaValue direct = g.evaluate(cplx(0.2, 0.1));
  CHECK(direct.strategy == GammaStrategy::StripIntegral);
  CHECK(direct.shift_count == 0);
}
