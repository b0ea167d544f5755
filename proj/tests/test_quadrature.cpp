#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qdl/gamma.hpp"
#include "qdl/params.hpp"
#include "qdl/quadrature.hpp"

using namespace qdl;

TEST_CASE("gaussian normalization on the real line") {
  auto f = [](cplx t) { return std::exp(-kPi * t * t); };
  ContourSpec c;
  c.imag_offset = 0.0;
  c.half_width = 8.0;
  c.target_rel_tol = 1e-13;
  QuadResult r = integrate_line(f, c);
  CHECK(std::abs(r.value - 1.0) < 1e-12);
}

TEST_CASE("contour-shift invariance for an entire integrand") {
  auto f = [](cplx t) { return std::exp(-kPi * t * t); };
  ContourSpec c0, c1;
  c0.half_width = c1.half_width = 8.0;
  c0.target_rel_tol = c1.target_rel_tol = 1e-13;
  c0.imag_offset = 0.0;
  c1.imag_offset = 0.3;
  QuadResult r0 = integrate_line(f, c0);
  QuadResult r1 = integrate_line(f, c1);
  CHECK(std::abs(r1.value - 1.0) < 1e-12);
  CHECK(std::abs(r0.value - r1.value) < r0.error + r1.error + 1e-12);
}

TEST_CASE("defining contour integral of the dilogarithm at the origin") {
  // Independent of the GammaEvaluator: raw integrand on the shifted line,
  // checked against the closed-form reflection value at x = 0.
  ModularParams p = ModularParams::make(0.8);
  auto f = [&](cplx t) {
    return 1.0 / (t * std::sin(p.omega * t) * std::sin(p.omega_prime * t));
  };
  ContourSpec c;
  c.imag_offset = 0.25 * 2.0 * kPi * p.lattice_min_step();
  c.half_width = 40.0 / (p.strip_half_width() - 0.05);
  c.target_rel_tol = 1e-13;
  c.node_budget = 1 << 16;
  QuadResult r = integrate_line(f, c);
  cplx gamma0 = std::exp(-0.25 * r.value);
  CHECK(std::abs(gamma0 * gamma0 - std::exp(kI * p.beta)) < 1e-9);
}

TEST_CASE("endpoint mass is detected") {
  auto f = [](cplx t) { return 1.0 / (1.0 + t * t); };  // decays too slowly for T=8
  ContourSpec c;
  c.half_width = 8.0;
  c.target_rel_tol = 1e-13;
  CHECK_THROWS_AS(integrate_line(f, c), EndpointMassError);
}

TEST_CASE("refinement never doubles the reported error estimate") {
  // Level-by-level two-level differences for a smooth integrand.
  auto f = [](double t) { return std::exp(-kPi * t * t) * std::cos(3.0 * t); };
  const auto& tables = ts::tables();
  const double a = -6.0, b = 6.0;
  const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
  double sum = 0.0, prev = 0.0;
  std::vector<double> errs;
  for (int L = 0; L <= 9; ++L) {
    const auto& lv = tables[L];
    double acc = (L == 0) ? lv.w0 * f(mid) : 0.0;
    for (const auto& n : lv.nodes) acc += n.w * (f(b - rad * n.uc) + f(a + rad * n.uc));
    sum += acc;
    double cur = lv.h * sum * rad;
    if (L > 0) errs.push_back(std::abs(cur - prev));
    prev = cur;
  }
  for (std::size_t i = 1; i < errs.size(); ++i) CHECK(errs[i] <= 2.0 * errs[i - 1] + 1e-15);
}

TEST_CASE("regulated integration: constant family") {
  RegulatorLadder ladder = RegulatorLadder::defaults();
  auto rung = [](double, double) {
    QuadResult q;
    q.value = cplx(0.7, -0.2);
    q.error = 0.0;
    return q;
  };
  RegulatedResult r = integrate_regulated(rung, ladder);
  CHECK(std::abs(r.value - cplx(0.7, -0.2)) < 1e-14);
  CHECK(r.spread < 1e-14);
}

TEST_CASE("regulated integration: polynomial family extrapolates exactly") {
  RegulatorLadder ladder = RegulatorLadder::defaults();
  auto rung = [](double eps, double) {
    QuadResult q;
    q.value = cplx(1.0, 0.5) + cplx(2.0, -1.0) * eps + cplx(-3.0, 0.25) * eps * eps;
    return q;
  };
  RegulatedResult r = integrate_regulated(rung, ladder);
  CHECK(std::abs(r.value - cplx(1.0, 0.5)) < 1e-12);
}

TEST_CASE("regulated integration is stable under dropping the largest rung") {
  RegulatorLadder l4;
  l4.eps_values = {0.08, 0.04, 0.02, 0.01};
  auto rung = [](double eps, double) {
    QuadResult q;
    // smooth but non-polynomial in eps
    q.value = std::exp(cplx(0.3, 0.1) * eps) / (1.0 + eps);
    return q;
  };
  RegulatedResult full = integrate_regulated(rung, l4);
  RegulatorLadder l3;
  l3.eps_values = {0.04, 0.02, 0.01};
  RegulatedResult drop = integrate_regulated(rung, l3);
  CHECK(std::abs(full.value - drop.value) <= full.spread + drop.spread + 1e-12);
}

TEST_CASE("ladder divergence is detected") {
  RegulatorLadder l;
  l.eps_values = {0.04, 0.02, 0.01};
  auto rung = [](double eps, double) {
    QuadResult q;
    q.value = 1.0 / eps;  // blows up toward the limit
    return q;
  };
  CHECK_THROWS_AS(integrate_regulated(rung, l), LadderDivergenceError);
}

TEST_CASE("smeared delta check with a mollified identity kernel") {
  const double width = 1e-3;
  auto kernel = [width](double s, double sp) {
    double d = s - sp;
    return cplx(std::exp(-d * d / (2.0 * width * width)) / (width * std::sqrt(2.0 * kPi)), 0.0);
  };
  GaussWindow w1{0.4, 0.05}, w2{0.4, 0.05};
  std::vector<DeltaTerm> expected(1);
  expected[0].sign = +1;
  SmearedDeltaResult r = smeared_delta_check(kernel, w1, w2, expected);
  CHECK(r.residual < 1e-4);
}
