#include "qdl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace qdl {

namespace ts {

static std::vector<Level> build_tables() {
  std::vector<Level> levels(kMaxLevel + 1);
  auto node_at = [](double sigma) {
    Node n;
    double sh = std::sinh(sigma);
    double arg = 0.5 * kPi * sh;
    n.u = std::tanh(arg);
    // 1 - tanh(x) = 2 e^{-2x} / (1 + e^{-2x})
    double e = std::exp(-2.0 * arg);
    n.uc = 2.0 * e / (1.0 + e);
    double ch = std::cosh(arg);
    n.w = 0.5 * kPi * std::cosh(sigma) / (ch * ch);
    return n;
  };
  for (int L = 0; L <= kMaxLevel; ++L) {
    Level& lv = levels[L];
    lv.h = std::ldexp(1.0, -L);  // 2^-L
    lv.w0 = 0.0;
    if (L == 0) {
      lv.w0 = 0.5 * kPi;  // sigma = 0: cosh 0 / cosh^2 0 * pi/2
      for (int k = 1; k * lv.h <= kSigmaMax + 1e-12; ++k) lv.nodes.push_back(node_at(k * lv.h));
    } else {
      // odd multiples of h only
      for (int k = 1; k * lv.h <= kSigmaMax + 1e-12; k += 2) lv.nodes.push_back(node_at(k * lv.h));
    }
  }
  return levels;
}

const std::vector<Level>& tables() {
  static const std::vector<Level> t = build_tables();
  return t;
}

}  // namespace ts

QuadResult integrate_segment(const Integrand& f, cplx a, cplx b, double rel_tol,
                             int node_budget, double abs_floor) {
  const auto& lv = ts::tables();
  const cplx mid = 0.5 * (a + b);
  const cplx rad = 0.5 * (b - a);

  QuadResult res;
  cplx sum = 0.0;  // accumulated weighted sum (h factored out)
  cplx prev{0.0, 0.0};
  double err_prev = -1.0;
  bool have_prev = false;

  for (int L = 0; L <= ts::kMaxLevel; ++L) {
    const auto& level = lv[L];
    cplx delta = 0.0;
    if (L == 0) delta += level.w0 * f(mid);
    for (const auto& n : level.nodes) {
      // x+ = mid + rad*u computed from the b side, x- from the a side
      cplx xp = b - rad * n.uc;
      cplx xm = a + rad * n.uc;
      delta += n.w * (f(xp) + f(xm));
      res.evals += 2;
    }
    if (L == 0) res.evals += 1;
    sum += delta;
    cplx cur = level.h * sum * rad;
    if (have_prev) {
      double err = std::abs(cur - prev);
      double scale = std::max(std::abs(cur), 1e-300);
      res.value = cur;
      res.error = err;
      if (L >= 3 && err <= std::max(rel_tol * scale, abs_floor)) return res;
      if (static_cast<int>(res.evals) > node_budget) {
        // tolerate a noise plateau well below the value scale; the achieved
        // error stays in the report
        if (err > 1e-4 * scale && err_prev >= 0.0 && err > 0.5 * err_prev)
          throw NonConvergenceError("integrate_segment: refinement stalled before tolerance");
        return res;
      }
      err_prev = err;
    }
    prev = cur;
    have_prev = true;
  }
  res.value = prev;
  if (res.error > std::max(1e-4 * std::abs(prev), 1e4 * rel_tol * std::max(std::abs(prev), 1e-300)))
    throw NonConvergenceError("integrate_segment: max refinement level reached");
  return res;
}

QuadResult integrate_path(const Integrand& f, const std::vector<cplx>& vertices,
                          double rel_tol, int node_budget, double abs_floor) {
  if (vertices.size() < 2) throw DomainViolationError("integrate_path: need >= 2 vertices");
  QuadResult total;
  int per_seg = std::max(64, node_budget / static_cast<int>(vertices.size() - 1));
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    QuadResult r = integrate_segment(f, vertices[i], vertices[i + 1], rel_tol, per_seg, abs_floor);
    total.value += r.value;
    total.error += r.error;
    total.evals += r.evals;
  }
  return total;
}

QuadResult integrate_line(const Integrand& f, const ContourSpec& contour) {
  contour.validate();
  const double T = contour.half_width;
  const cplx off{0.0, contour.imag_offset};
  QuadResult r = integrate_path(f, {-T + off, off, T + off}, contour.target_rel_tol,
                                contour.node_budget);
  double scale = std::max(std::abs(r.value), 1e-300);
  double mass = (std::abs(f(-T + off)) + std::abs(f(T + off))) * T;
  if (mass > 1e3 * contour.target_rel_tol * scale && mass > 1e-280)
    throw EndpointMassError("integrate_line: integrand has not decayed at the truncation ends");
  return r;
}

// ---------------------------------------------------------------------------

void RegulatorLadder::validate() const {
  if (eps_values.empty()) throw DomainViolationError("RegulatorLadder: empty eps ladder");
  for (double e : eps_values)
    if (!(e > 0.0)) throw DomainViolationError("RegulatorLadder: eps entries must be > 0");
  for (std::size_t i = 1; i < eps_values.size(); ++i)
    if (!(eps_values[i] < eps_values[i - 1]))
      throw DomainViolationError("RegulatorLadder: eps must be strictly decreasing");
  if (!delta_values.empty()) {
    if (delta_values.size() != eps_values.size())
      throw DomainViolationError("RegulatorLadder: delta ladder length mismatch");
    for (std::size_t i = 1; i < delta_values.size(); ++i)
      if (!(delta_values[i] < delta_values[i - 1]))
        throw DomainViolationError("RegulatorLadder: delta must be strictly decreasing");
    if (pair_constraint)
      for (std::size_t i = 0; i < eps_values.size(); ++i)
        if (!(delta_values[i] > 2.0 * eps_values[i]))
          throw DomainViolationError("RegulatorLadder: pairing requires delta > 2 eps");
  }
}

cplx neville_at_zero(const std::vector<double>& xs, const std::vector<cplx>& ys) {
  std::vector<cplx> p = ys;
  const std::size_t n = xs.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i)
      p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i]);
  return p[0];
}

RegulatedResult integrate_regulated(
    const std::function<QuadResult(double eps, double delta)>& rung,
    const RegulatorLadder& ladder) {
  ladder.validate();
  const std::size_t n = ladder.eps_values.size();
  RegulatedResult out;
  out.rung_values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double eps = ladder.eps_values[i];
    double del = ladder.delta_values.empty() ? 0.0 : ladder.delta_values[i];
    QuadResult q = rung(eps, del);
    out.rung_values[i] = q.value;
    out.quad_error = std::max(out.quad_error, q.error);
  }
  if (n == 1) {
    out.value = out.rung_values[0];
    out.spread = out.quad_error;
    return out;
  }
  // Divergence guard: for a family smooth in the regulator the successive
  // differences contract along a halving ladder; non-contracting differences
  // well above the quadrature noise mean the domain conditions are violated.
  double scale = 0.0;
  for (auto v : out.rung_values) scale = std::max(scale, std::abs(v));
  const double noise = std::max(1e-12 * scale, 8.0 * out.quad_error);
  for (std::size_t i = 2; i < n; ++i) {
    double d1 = std::abs(out.rung_values[i - 1] - out.rung_values[i - 2]);
    double d2 = std::abs(out.rung_values[i] - out.rung_values[i - 1]);
    if (d2 > 0.9 * d1 && d2 > noise)
      throw LadderDivergenceError("integrate_regulated: rung values do not stabilize");
  }
  out.value = neville_at_zero(ladder.eps_values, out.rung_values);
  if (n >= 3) {
    std::vector<double> xs(ladder.eps_values.begin() + 1, ladder.eps_values.end());
    std::vector<cplx> ys(out.rung_values.begin() + 1, out.rung_values.end());
    out.spread = std::abs(out.value - neville_at_zero(xs, ys));
  } else {
    out.spread = std::abs(out.rung_values[n - 1] - out.rung_values[n - 2]);
  }
  return out;
}

// ---------------------------------------------------------------------------

QuadResult line_with_asymptotes(const Integrand& f, std::vector<double> breaks,
                                const EndSpec& left, const EndSpec& right,
                                double rel_tol, int node_budget, double imag_offset,
                                double pad) {
  if (breaks.empty()) breaks.push_back(0.0);
  std::sort(breaks.begin(), breaks.end());
  const double aL = breaks.front() - pad;
  const double aR = breaks.back() + pad;
  const cplx off{0.0, imag_offset};

  QuadResult total;
  auto add = [&](const QuadResult& r) {
    total.value += r.value;
    total.error += r.error;
    total.evals += r.evals;
  };

  // central part, split at the structure abscissas
  {
    std::vector<cplx> verts;
    verts.push_back(aL + off);
    for (double b : breaks) verts.push_back(b + off);
    verts.push_back(aR + off);
    add(integrate_path(f, verts, rel_tol, node_budget));
  }
  // end pieces are small corrections; stop refining them at this floor
  const double floor_ = 0.25 * rel_tol * std::max(std::abs(total.value), 1e-30);

  // closed-form tail of C e^{2 pi i w t}:
  //   int_{-inf}^{A} = C e^{2 pi i w A} / (2 pi i w),
  //   int_{B}^{+inf} = -C e^{2 pi i w B} / (2 pi i w)
  auto tail_left = [&](const EndSpec& e, cplx A) {
    if (std::abs(e.freq) < 1e-8)
      throw DomainViolationError("line_with_asymptotes: asymptote frequency too close to 0");
    return e.coeff * std::exp(2.0 * kPi * kI * e.freq * A) / (2.0 * kPi * kI * e.freq);
  };

  switch (left.mode) {
    case EndSpec::Mode::Asymptote: {
      if (!(left.rem_rate > 0.05))
        throw DomainViolationError("line_with_asymptotes: left remainder rate too small");
      double TL = aL - 42.0 / left.rem_rate;
      auto g = [&](cplx t) { return f(t) - left.coeff * std::exp(2.0 * kPi * kI * left.freq * t); };
      add(integrate_path(g, {TL + off, aL + off}, rel_tol, node_budget, floor_));
      total.value += tail_left(left, aL + off);
      break;
    }
    case EndSpec::Mode::Plain: {
      if (!(left.plain_rate > 0.05))
        throw DomainViolationError("line_with_asymptotes: left decay rate too small");
      double TL = aL - 42.0 / left.plain_rate;
      add(integrate_path(f, {TL + off, aL + off}, rel_tol, node_budget, floor_));
      break;
    }
    case EndSpec::Mode::Bent: {
      cplx dir = -cplx(1.0, -left.slope);
      add(integrate_path(f, {aL + off + left.ray_length * dir, aL + off}, rel_tol, node_budget, floor_));
      break;
    }
  }

  switch (right.mode) {
    case EndSpec::Mode::Asymptote: {
      if (!(right.rem_rate > 0.05))
        throw DomainViolationError("line_with_asymptotes: right remainder rate too small");
      double TR = aR + 42.0 / right.rem_rate;
      auto g = [&](cplx t) {
        return f(t) - right.coeff * std::exp(2.0 * kPi * kI * right.freq * t);
      };
      add(integrate_path(g, {aR + off, TR + off}, rel_tol, node_budget, floor_));
      total.value -= tail_left(right, aR + off);
      break;
    }
    case EndSpec::Mode::Plain: {
      if (!(right.plain_rate > 0.05))
        throw DomainViolationError("line_with_asymptotes: right decay rate too small");
      double TR = aR + 42.0 / right.plain_rate;
      add(integrate_path(f, {aR + off, TR + off}, rel_tol, node_budget, floor_));
      break;
    }
    case EndSpec::Mode::Bent: {
      cplx dir{1.0, -right.slope};
      add(integrate_path(f, {aR + off, aR + off + right.ray_length * dir}, rel_tol, node_budget, floor_));
      break;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------

double GaussWindow::norm() const { return 1.0 / std::sqrt(width * std::sqrt(kPi)); }

cplx smeared_delta_rhs(const GaussWindow& w1, const GaussWindow& w2,
                       const std::vector<DeltaTerm>& expected) {
  cplx total = 0.0;
  for (const auto& term : expected) {
    // integrand conj(w1(s)) * w2(sign*s) * weight(s); windows are real Gaussians
    auto f = [&](cplx s) -> cplx {
      cplx v = w1(s) * w2(static_cast<double>(term.sign) * s);
      if (term.weight) v *= term.weight(s.real());
      return v;
    };
    // effective support: intersection of the two window supports
    double c1 = w1.center, c2 = static_cast<double>(term.sign) * w2.center;
    double lo = std::max(c1 - w1.support_radius(), c2 - w2.support_radius());
    double hi = std::min(c1 + w1.support_radius(), c2 + w2.support_radius());
    if (lo >= hi) continue;  // negligible overlap
    std::vector<std::pair<double, double>> pieces;
    if (term.clip0 > 0.0) {
      if (lo < -term.clip0) pieces.push_back({lo, std::min(hi, -term.clip0)});
      if (hi > term.clip0) pieces.push_back({std::max(lo, term.clip0), hi});
    } else {
      pieces.push_back({lo, hi});
    }
    for (auto [a, b] : pieces)
      if (a < b)
        total += integrate_segment(f, cplx(a, 0), cplx(b, 0), 1e-12, 1 << 14, 1e-15).value;
  }
  return total;
}

SmearedDeltaResult smeared_delta_check(const std::function<cplx(double, double)>& kernel,
                                       const GaussWindow& w1, const GaussWindow& w2,
                                       const std::vector<DeltaTerm>& expected,
                                       double rel_tol, int node_budget) {
  // Rotate to sum/difference coordinates so sharp diagonal ridges sit at the
  // endpoint d = 0 where tanh-sinh clusters its nodes.
  //   s = u + d/2, s' = u - d/2
  const double ru = w1.support_radius() + w2.support_radius();
  const double cu = 0.5 * (w1.center + w2.center);
  const double cd = w1.center - w2.center;

  SmearedDeltaResult out;
  auto inner_u = [&](double d) -> cplx {
    auto f = [&](cplx u) -> cplx {
      double uu = u.real();
      return std::conj(w1(uu + 0.5 * d)) * w2(uu - 0.5 * d) * kernel(uu + 0.5 * d, uu - 0.5 * d);
    };
    return integrate_segment(f, cplx(cu - ru, 0), cplx(cu + ru, 0), rel_tol, node_budget).value;
  };
  auto g = [&](cplx d) -> cplx { return inner_u(d.real()); };
  double rd = 2.0 * ru + std::abs(cd);
  QuadResult left = integrate_segment(g, cplx(-rd, 0), cplx(0, 0), rel_tol, node_budget);
  QuadResult right = integrate_segment(g, cplx(0, 0), cplx(rd, 0), rel_tol, node_budget);
  out.lhs = left.value + right.value;
  out.quadrature_error = left.error + right.error;
  out.rhs = smeared_delta_rhs(w1, w2, expected);
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace qdl
