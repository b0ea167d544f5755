#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdl/spectral.hpp"

using namespace qdl;

namespace {

const GammaEvaluator& ev08() {
  static ModularParams p = ModularParams::make(0.8);
  static GammaEvaluator g(p);
  return g;
}

const SpectralEngine& eng() {
  static SpectralEngine e(ev08());
  return e;
}

}  // namespace

TEST_CASE("phi is even in the spectral label") {
  cplx a = eng().phi(cplx(0.3, 0.1), 0.7, 1e-4);
  cplx b = eng().phi(cplx(0.3, 0.1), -0.7, 1e-4);
  CHECK(std::abs(a - b) <= 1e-14 * std::abs(a));
}

TEST_CASE("length-operator eigen-equation") {
  CHECK(eng().eigen_equation_residual(cplx(0.2, 0.0), 0.4, 1e-9) < 1e-8);
  for (double b : {0.6, 0.8, 1.3}) {
    ModularParams p = ModularParams::make(b);
    GammaEvaluator g(p);
    SpectralEngine e(g);
    for (double s : {0.2, 0.4, 1.0})
      for (double x : {-0.8, -0.3, 0.1, 0.45, 0.9})
        CHECK(e.eigen_equation_residual(cplx(x, 0.0), s, 1e-9) < 1e-8);
  }
}

TEST_CASE("phi regulator-ladder stability") {
  cplx a = eng().phi(cplx(0.25, 0.0), 0.4, 2e-5);
  cplx b = eng().phi(cplx(0.25, 0.0), 0.4, 1e-5);
  CHECK(std::abs(a - b) / std::abs(a) < 1e-4);
  cplx c1 = eng().phi(cplx(0.25, 0.0), 0.4, 1e-6);
  cplx c2 = eng().phi(cplx(0.25, 0.0), 0.4, 5e-7);
  CHECK(std::abs(c1 - c2) / std::abs(c1) < 1e-6);
}

TEST_CASE("spectral weight closed forms") {
  SpectralMeasure m0 = eng().measure(0.0);
  CHECK(std::abs(m0.rho) < 1e-12);

  const double b = 0.8;
  SpectralMeasure m = eng().measure(0.4);
  double expect = 4.0 * std::sinh(2.0 * kPi * 0.4 / b) * std::sinh(2.0 * kPi * 0.4 * b);
  CHECK(std::abs(m.rho - expect) < 1e-10 * expect);
  CHECK(m.rho.real() > 0.0);
  // product of the normalization factors reproduces the weight
  cplx mm = m.M * eng().measure(-0.4).M;
  CHECK(std::abs(mm - m.rho) < 1e-10 * std::abs(m.rho));
  // gamma-ratio form
  CHECK(std::abs(m.rho_gamma - m.rho) < 1e-10 * std::abs(m.rho));
  // unimodular reflection coefficient
  CHECK(std::abs(std::abs(m.S) - 1.0) < 1e-9);
}

TEST_CASE("two closed forms of the weight over a grid") {
  for (int i = 0; i < 50; ++i) {
    double s = -2.0 + 4.0 * i / 49.0;
    if (std::abs(s) < 0.05) continue;
    SpectralMeasure m = eng().measure(s);
    CHECK(std::abs(m.rho_gamma - m.rho) < 1e-10 * std::max(1.0, std::abs(m.rho)));
    // sigma split
    SpectralMeasure mneg = eng().measure(-s);
    CHECK(std::abs((m.sigma + mneg.sigma) - m.rho) < 1e-10 * std::max(1.0, std::abs(m.rho)));
  }
}

TEST_CASE("spectrum positivity") {
  const auto& p = ev08().params();
  for (double s : {0.0, 0.3, 0.9, 2.0}) {
    cplx Z = p.Z(cplx(s, 0.0));
    double ev = (Z + 1.0 / Z).real();
    CHECK(ev >= 2.0 - 1e-12);
  }
}

TEST_CASE("grids agree with direct evaluation") {
  double eps = 0.01;
  SpectralEngine::PhiGrids gr = eng().make_grids(eps);
  for (double x : {-2.2, -0.7, 0.15, 0.8, 2.9}) {
    for (double s : {0.35, 1.2}) {
      cplx direct = eng().phi(cplx(x, 0.0), s, eps);
      cplx fast = eng().phi_fast(gr, x, s);
      CHECK(std::abs(direct - fast) < 2e-6 * std::max(1.0, std::abs(direct)));
      cplx directb = eng().phi_bar(cplx(x, 0.0), s, eps);
      cplx fastb = eng().phi_bar_fast(gr, x, s);
      CHECK(std::abs(directb - fastb) < 2e-6 * std::max(1.0, std::abs(directb)));
    }
  }
}

TEST_CASE("smeared orthogonality: coincident windows") {
  SmearedDeltaResult r = eng().orthogonality_check(0.4, 0.4, 0.05, RegulatorLadder::defaults());
  CAPTURE(std::abs(r.lhs));
  CAPTURE(std::abs(r.rhs));
  CHECK(r.residual < 1e-3);
}

TEST_CASE("smeared orthogonality: reflection term") {
  SmearedDeltaResult r = eng().orthogonality_check(0.4, -0.4, 0.05, RegulatorLadder::defaults());
  CHECK(std::abs(r.rhs) > 1e-4);  // the delta(s+s') term carries full weight
  CHECK(r.residual < 1e-3);
}

TEST_CASE("smeared orthogonality: disjoint windows") {
  SmearedDeltaResult r = eng().orthogonality_check(0.4, 0.8, 0.05, RegulatorLadder::defaults());
  CHECK(std::abs(r.rhs) < 1e-6);
  CHECK(std::abs(r.lhs) < 1e-3);
}

TEST_CASE("smeared completeness: coincident and disjoint") {
  SmearedDeltaResult r = eng().completeness_check(0.1, 0.1, 0.05, RegulatorLadder::defaults());
  CHECK(r.residual < 1e-3);
  SmearedDeltaResult d = eng().completeness_check(0.1, 0.6, 0.05, RegulatorLadder::defaults());
  CHECK(std::abs(d.lhs) < 1e-3);
}

TEST_CASE("smeared completeness: halving the regulators") {
  RegulatorLadder l1 = RegulatorLadder::defaults();
  RegulatorLadder l2 = l1;
  for (auto& e : l2.eps_values) e *= 0.5;
  for (auto& d : l2.delta_values) d *= 0.5;
  SmearedDeltaResult a = eng().completeness_check(0.1, 0.1, 0.05, l1);
  SmearedDeltaResult b = eng().completeness_check(0.1, 0.1, 0.05, l2);
  CHECK(std::abs(a.lhs - b.lhs) < 1e-3);
}

TEST_CASE("projection kernel") {
  std::vector<double> sample = {0.25, 0.32, 0.4, 0.47, 0.55};
  CHECK(eng().projection_idempotence_residual(0.4, 0.05, sample) < 1e-3);
  CHECK(eng().projection_identity_residual(0.4, 0.05, sample) < 1e-3);
  CHECK(eng().projection_image_constraint_residual(0.4, 0.05, sample) < 1e-3);
}

TEST_CASE("reflection constraint of the spectral transform") {
  TestFunction f = TestFunction::gaussian(cplx(1.0, 0.0), cplx(0.2, 0.0));
  for (double s : {0.25, 0.4, 0.8, 1.3}) {
    CHECK(eng().u_subspace_residual(f, s, 1e-4) < 1e-3);
  }
}

TEST_CASE("half-period gamma pair identity") {
  CHECK(eng().gamma_ratio_identity_residual(cplx(0.0, 0.0)) < 1e-9);
  CHECK(eng().gamma_ratio_identity_residual(cplx(0.3, 0.0)) < 1e-8);
  CHECK(eng().gamma_ratio_identity_residual(cplx(0.1, 0.05)) < 1e-8);
}
