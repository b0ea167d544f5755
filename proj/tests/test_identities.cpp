#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdl/identities.hpp"

using namespace qdl;

namespace {

const GammaEvaluator& ev08() {
  static ModularParams p = ModularParams::make(0.8);
  static GammaEvaluator g(p);
  return g;
}

const IdentityEngine& engine() {
  static IdentityEngine e(ev08());
  return e;
}

}  // namespace

TEST_CASE("FT1 at a generic point") {
  ResidualReport r = engine().eval_ft1(cplx(0.3, -0.08));
  CHECK(r.rel_residual < 1e-6);
  CHECK(r.regulator_spread < 1e-5);
}

TEST_CASE("FT1 near the strip boundary") {
  // z = omega'' + 0.3, so the right side is c gamma(0.3)
  const auto& p = ev08().params();
  cplx z = p.omega_dprime + 0.3;
  ResidualReport r = engine().eval_ft1(z);
  CHECK(r.rel_residual < 1e-6);
  CHECK(std::abs(r.rhs - p.c * ev08()(cplx(0.3, 0.0))) < 1e-12);
}

TEST_CASE("FT1 rejects out-of-domain arguments") {
  CHECK_THROWS_AS(engine().eval_ft1(cplx(0.3, -2.0)), DomainViolationError);
}

TEST_CASE("FT2 at a generic point") {
  ResidualReport r = engine().eval_ft2(cplx(0.1, 0.0), cplx(0.2, -0.05));
  CHECK(r.rel_residual < 1e-6);
  CHECK(r.regulator_spread < 1e-5);
}

TEST_CASE("FT2 with x = 0 keeps the extra factor") {
  ResidualReport r = engine().eval_ft2(cplx(0.0, 0.0), cplx(0.2, -0.05));
  CHECK(r.rel_residual < 1e-6);
}

TEST_CASE("FT2 degenerates to FT1 for large Re x") {
  const auto& p = ev08().params();
  cplx z(0.25, 0.1);
  ResidualReport r2 = engine().eval_ft2(cplx(6.0 * p.strip_half_width(), 0.0), z);
  CHECK(r2.rel_residual < 2e-6);
  ResidualReport r1 = engine().eval_ft1(z);
  CHECK(std::abs(r2.rhs - r1.rhs) / std::abs(r1.rhs) < 1e-7);
}

TEST_CASE("FT3 at a generic point") {
  ResidualReport r = engine().eval_ft3(cplx(0.1, 0.0), cplx(-0.15, 0.0), cplx(0.2, -0.15));
  CHECK(r.rel_residual < 1e-6);
  CHECK(r.regulator_spread < 1e-5);
}

TEST_CASE("FT3 symmetric arguments") {
  ResidualReport r = engine().eval_ft3(cplx(0.15, 0.0), cplx(0.15, 0.0), cplx(0.2, -0.15));
  CHECK(r.rel_residual < 1e-6);
}

TEST_CASE("FT3 degenerates to FT2 for large Re y") {
  const auto& p = ev08().params();
  cplx x(0.1, 0.0), z(0.2, -0.15);
  ResidualReport r3 = engine().eval_ft3(x, cplx(6.0 * p.strip_half_width(), 0.0), z);
  CHECK(r3.rel_residual < 2e-6);
  ResidualReport r2 = engine().eval_ft2(x, z);
  CHECK(std::abs(r3.rhs - r2.rhs) / std::abs(r2.rhs) < 1e-6);
}

TEST_CASE("F1/F2 closed forms and quadrature") {
  const auto& p = ev08().params();
  const double st = p.strip_half_width();
  cplx a(0.0, 0.2 * st), b(0.0, 0.5 * st), s(0.3, -0.05);
  ResidualReport r = engine().eval_f1f2(a, b, s);
  CHECK(r.rel_residual < 1e-6);
  // the two closed forms agree to near machine precision
  CHECK(r.regulator_spread / std::abs(r.rhs) < 1e-9);
}

TEST_CASE("F1/F2 closed-form equality on its own") {
  const auto& p = ev08().params();
  const double st = p.strip_half_width();
  auto [f1, f2] = engine().f1f2_closed_forms(cplx(0.05, 0.1 * st), cplx(-0.02, 0.6 * st),
                                             cplx(0.25, -0.06));
  CHECK(std::abs(f1 - f2) / std::abs(f1) < 1e-9);
}

TEST_CASE("F1/F2 domain gate") {
  const auto& p = ev08().params();
  const double st = p.strip_half_width();
  CHECK_THROWS_AS(engine().eval_f1f2(cplx(0.0, 0.1 * st), cplx(0.0, 0.5 * st), cplx(0.3, 0.05)),
                  DomainViolationError);
}

TEST_CASE("inverse transform at a generic point") {
  const auto& p = ev08().params();
  const double st = p.strip_half_width();
  ResidualReport r = engine().eval_invf(cplx(0.2, 0.0), cplx(0.0, 0.1 * st), cplx(0.0, 0.5 * st));
  CHECK(r.rel_residual < 1e-6);
}

TEST_CASE("inverse transform degenerate ratio short-circuits to 1") {
  const auto& p = ev08().params();
  cplx ab(0.0, 0.3 * p.strip_half_width());
  ResidualReport r = engine().eval_invf(cplx(0.2, 0.0), ab, ab);
  CHECK(std::abs(r.lhs - 1.0) < 1e-12);
  CHECK(std::abs(r.rhs - 1.0) < 1e-12);
}

TEST_CASE("inverse transform is consistent with the shift equation") {
  const auto& p = ev08().params();
  const double st = p.strip_half_width();
  cplx t(0.2, 0.0), a(0.0, 0.1 * st), b(0.0, 0.5 * st);
  ResidualReport r0 = engine().eval_invf(t, a, b);
  ResidualReport r1 = engine().eval_invf(t - 2.0 * p.omega_prime, a, b);
  // ratio(t) = ratio(t - 2 omega') (1 + u(t+a-omega')) / (1 + u(t+b-omega'))
  cplx factor = (1.0 + p.u_mult(t + a - p.omega_prime)) / (1.0 + p.u_mult(t + b - p.omega_prime));
  CHECK(std::abs(r0.lhs - r1.lhs * factor) / std::abs(r0.lhs) < 1e-6);
}

TEST_CASE("small seeded draw batches stay in tolerance") {
  for (const char* id : {"FT1", "FT2", "F1F2", "InvF"}) {
    auto rs = engine().run_draws(id, 3, 77001);
    for (const auto& r : rs) {
      CAPTURE(r.id);
      CHECK(r.rel_residual < 1e-5);
      CHECK(r.regulator_spread < 1e-5 * std::max(1.0, std::abs(r.rhs)));
    }
  }
}
