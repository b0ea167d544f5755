#include "qdl/identities.hpp"

#include <cmath>

namespace qdl {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

void require(bool ok, const char* what) {
  if (!ok) throw DomainViolationError(what);
}

}  // namespace

ResidualReport IdentityEngine::eval_ft1(cplx z) const {
  const auto& p = g_.params();
  const cplx w2 = p.omega_dprime;

  require(std::abs(z) > 0.05, "FT1: z too close to 0 for the tail asymptote");
  require(z.imag() > -min_step() + 0.1, "FT1: Im z too low for the left remainder");
  require(z.imag() < strip() + 0.05, "FT1: Im z above the strip boundary");

  auto rung = [&](double eps, double) {
    auto f = [&](cplx t) { return std::exp(-kTwoPi * kI * t * z) / g_(w2 - kI * eps - t); };
    EndSpec left = EndSpec::asymptote(1.0, -z, kTwoPi * (min_step() + z.imag()));
    double rate = kTwoPi * (strip() - eps - z.imag());
    EndSpec right = rate > 0.3 ? EndSpec::plain(rate) : EndSpec::bent_ray(0.4);
    return line_with_asymptotes(f, {0.0}, left, right, rel_tol, node_budget);
  };
  RegulatedResult lhs = integrate_regulated(rung, ladder_);

  ResidualReport r;
  r.id = "FT1";
  r.parameters = {{"z", z}};
  r.lhs = lhs.value;
  r.rhs = p.c * g_(z - w2);
  r.quadrature_error = lhs.quad_error;
  r.regulator_spread = lhs.spread;
  r.note = "conditions: |Im z| < min(b,1/b), Im z < |omega''|";
  r.finish();
  return r;
}

ResidualReport IdentityEngine::eval_ft2(cplx x, cplx z) const {
  const auto& p = g_.params();
  const cplx w2 = p.omega_dprime;

  require(std::abs(z) > 0.05, "FT2: z too close to 0 for the tail asymptote");
  require(z.imag() > -min_step() + 0.1, "FT2: Im z too low for the left remainder");
  require((x + z).imag() < strip() + 0.05, "FT2: Im(x+z) above the strip boundary");

  auto rung = [&](double eps, double) {
    auto f = [&](cplx t) {
      return std::exp(-kTwoPi * kI * t * z) * g_(x - t) / g_(w2 - kI * eps - t);
    };
    EndSpec left = EndSpec::asymptote(1.0, -z, kTwoPi * (min_step() + z.imag()));
    double rate = kTwoPi * (strip() - eps - (x + z).imag());
    EndSpec right = rate > 0.3 ? EndSpec::plain(rate) : EndSpec::bent_ray(0.4);
    return line_with_asymptotes(f, {0.0, x.real()}, left, right, rel_tol, node_budget);
  };
  RegulatedResult lhs = integrate_regulated(rung, ladder_);

  ResidualReport r;
  r.id = "FT2";
  r.parameters = {{"x", x}, {"z", z}};
  r.lhs = lhs.value;
  r.rhs = p.c * g_(x) * g_(z - w2) / g_(x + z);
  r.quadrature_error = lhs.quad_error;
  r.regulator_spread = lhs.spread;
  r.note = "conditions: |Im z| < min(b,1/b), Im(x+z) < |omega''|";
  r.finish();
  return r;
}

ResidualReport IdentityEngine::eval_ft3(cplx x, cplx y, cplx z) const {
  const auto& p = g_.params();
  const cplx w2 = p.omega_dprime;

  require(std::abs(z) > 0.05, "FT3: z too close to 0 for the tail asymptote");
  require(z.imag() > -min_step() + 0.1, "FT3: Im z too low for the left remainder");
  const cplx xyz = x + y + z;
  for (double eps : ladder_.eps_values)
    require(std::abs(xyz.imag() - eps) > 0.004,
            "FT3: second singularity row pinches the contour");
  auto rung = [&](double eps, double) {
    auto f = [&](cplx t) {
      return std::exp(-kTwoPi * kI * t * z) * g_(x - t) * g_(y - t) /
             (g_(w2 - kI * eps - t) * g_(xyz + w2 - kI * eps - t));
    };
    EndSpec left = EndSpec::asymptote(1.0, -z, kTwoPi * (min_step() + z.imag()));
    EndSpec right = EndSpec::plain(kTwoPi * (strip() - eps));
    return line_with_asymptotes(f, {0.0, xyz.real()}, left, right, rel_tol, node_budget);
  };
  RegulatedResult lhs = integrate_regulated(rung, ladder_);

  ResidualReport r;
  r.id = "FT3";
  r.parameters = {{"x", x}, {"y", y}, {"z", z}};
  r.lhs = lhs.value;
  r.rhs = p.c * g_(x) * g_(y) * g_(z - w2) / (g_(x + z) * g_(y + z));
  r.quadrature_error = lhs.quad_error;
  r.regulator_spread = lhs.spread;
  r.note = "conditions: |Im z| < min(b,1/b), Im(x+y+z) away from the regulated row";
  r.finish();
  return r;
}

std::pair<cplx, cplx> IdentityEngine::f1f2_closed_forms(cplx a, cplx b_param, cplx s) const {
  const auto& p = g_.params();
  const cplx w2 = p.omega_dprime;
  cplx f1 = p.c * std::exp(kTwoPi * kI * s * (b_param - w2)) * g_(a - b_param + w2) *
            g_(-s - w2) / g_(a - b_param - s + w2);
  cplx f2 = std::exp(kTwoPi * kI * s * (a + w2)) * g_(b_param - a + s - w2) /
            (p.c * g_(b_param - a - w2) * g_(s + w2));
  return {f1, f2};
}

ResidualReport IdentityEngine::eval_f1f2(cplx a, cplx b_param, cplx s) const {
  require(s.imag() < -0.02, "F1F2: convergence requires Im s < 0");
  const cplx abs_ = a - b_param - s;
  require(abs_.imag() < -0.02, "F1F2: convergence requires Im(a-b-s) < 0");
  require(s.imag() > -min_step() + 0.1, "F1F2: Im s too low for the right remainder");
  require(abs_.imag() > -min_step() + 0.1, "F1F2: Im(a-b-s) too low for the left remainder");

  auto f = [&](cplx t) {
    return std::exp(-kTwoPi * kI * t * s) * g_(t + a) / g_(t + b_param);
  };
  // t -> -inf: gamma(t+a)/gamma(t+b) ~ e^{i pi (2t(a-b) + a^2 - b^2)}
  EndSpec left = EndSpec::asymptote(expi_pi(a * a - b_param * b_param), a - b_param - s,
                                    kTwoPi * (min_step() - abs_.imag()));
  EndSpec right = EndSpec::asymptote(1.0, -s, kTwoPi * (min_step() - s.imag()));
  QuadResult lhs = line_with_asymptotes(f, {-a.real(), -b_param.real()}, left, right, rel_tol,
                                        node_budget);

  auto [f1, f2] = f1f2_closed_forms(a, b_param, s);

  ResidualReport r;
  r.id = "F1F2";
  r.parameters = {{"a", a}, {"b", b_param}, {"s", s}};
  r.lhs = lhs.value;
  r.rhs = 0.5 * (f1 + f2);
  r.quadrature_error = lhs.error;
  r.regulator_spread = std::abs(f1 - f2);  // closed-form cross agreement
  r.note = "conditions: Im s < 0, Im(a-b-s) < 0; spread records |F1-F2|";
  r.finish();
  return r;
}

ResidualReport IdentityEngine::eval_invf(cplx t, cplx a, cplx b_param) const {
  const auto& p = g_.params();
  const cplx w2 = p.omega_dprime;

  ResidualReport r;
  r.id = "invF";
  r.parameters = {{"t", t}, {"a", a}, {"b", b_param}};

  if (std::abs(a - b_param) < 1e-12) {
    // removable degeneracy: the ratio is identically 1
    r.lhs = 1.0;
    r.rhs = 1.0;
    r.note = "degenerate a = b short-circuit";
    r.finish();
    return r;
  }

  // s -> +inf: the gamma ratio tends to 1, so the integrand oscillates with
  // frequency w_plus; s -> -inf it approaches a pure linear-exponent phase.
  const cplx w_plus = t + a + w2;
  const cplx B = b_param - a - w2;
  const cplx w_minus = w_plus + B - w2;  // = t + b - omega''
  const double rate_plus = kTwoPi * w_plus.imag();
  const double rate_minus = -kTwoPi * w_minus.imag();

  EndSpec right;
  if (rate_plus > 0.3) {
    right = EndSpec::plain(rate_plus);
  } else {
    require(w_plus.imag() > -min_step() + 0.15, "invF: s -> +inf remainder decays too slowly");
    right = EndSpec::asymptote(1.0, w_plus, kTwoPi * (min_step() + w_plus.imag()));
  }
  EndSpec left;
  if (rate_minus > 0.3) {
    left = EndSpec::plain(rate_minus);
  } else {
    require(w_minus.imag() < min_step() - 0.15, "invF: s -> -inf remainder decays too slowly");
    left = EndSpec::asymptote(expi_pi(B * B - w2 * w2), w_minus,
                              kTwoPi * (min_step() - w_minus.imag()));
  }

  // contour dips below the singularity at s = 0 and stays above the top
  // numerator pole at Im(a-b)
  double h = 0.25 * min_step();
  if ((a - b_param).imag() < 0.0) h = std::min(h, 0.5 * std::abs((a - b_param).imag()));
  require(h > 0.01, "invF: no room between s = 0 and the numerator poles");

  auto f = [&](cplx s) {
    return std::exp(kTwoPi * kI * s * w_plus) * g_(s + B) / g_(s + w2);
  };
  QuadResult integral = line_with_asymptotes(f, {0.0, (a - b_param).real()}, left, right,
                                             rel_tol, node_budget, -h);

  r.lhs = integral.value / (p.c * g_(b_param - a - w2));
  r.rhs = g_(t + a) / g_(t + b_param);
  r.quadrature_error = integral.error;
  r.note = "contour lowered below s = 0";
  r.finish();
  return r;
}

std::vector<ResidualReport> IdentityEngine::run_draws(const std::string& which, int count,
                                                      std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  auto uni = [&](double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng);
  };
  const double st = strip();
  std::vector<ResidualReport> out;
  out.reserve(count);
  int guard = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++guard > 100 * count)
      throw DomainViolationError("run_draws: rejection sampling failed to find in-domain points");
    try {
      if (which == "FT1") {
        cplx z(uni(0.12, 0.55), uni(-0.18, 0.3));
        out.push_back(eval_ft1(z));
      } else if (which == "FT2") {
        cplx x(uni(-0.35, 0.45), uni(-0.12, 0.12));
        cplx z(uni(0.12, 0.55), uni(-0.18, 0.3));
        if ((x + z).imag() > 0.4) continue;
        out.push_back(eval_ft2(x, z));
      } else if (which == "FT3") {
        cplx x(uni(-0.4, 0.5), uni(-0.05, 0.05));
        cplx y(uni(-0.4, 0.5), uni(-0.05, 0.05));
        cplx z(uni(0.12, 0.5), uni(-0.25, -0.12));
        if ((x + y + z).imag() > -0.02) continue;
        out.push_back(eval_ft3(x, y, z));
      } else if (which == "F1F2") {
        cplx a(uni(-0.15, 0.15), uni(0.05, 0.3) * st);
        cplx b(uni(-0.15, 0.15), uni(0.45, 0.7) * st);
        cplx s(uni(0.1, 0.5), uni(-0.3, -0.06));
        if ((a - b - s).imag() > -0.03 || s.imag() > -0.03) continue;
        out.push_back(eval_f1f2(a, b, s));
      } else if (which == "InvF") {
        cplx t(uni(-0.3, 0.4), uni(-0.1, 0.1));
        cplx a(uni(-0.15, 0.15), uni(0.05, 0.3) * st);
        cplx b(uni(-0.15, 0.15), uni(0.45, 0.8) * st);
        if ((a - b).imag() > -0.1) continue;
        out.push_back(eval_invf(t, a, b));
      } else {
        throw DomainViolationError("run_draws: unknown identity " + which);
      }
    } catch (const DomainViolationError&) {
      continue;  // re-draw outside the gated region
    }
  }
  return out;
}

}  // namespace qdl
