#include "qdl/gamma.hpp"

#include <algorithm>
#include <cmath>

namespace qdl {

namespace {

// log(1 + exp(w)) without overflow for large |Re w|.
cplx log1p_exp(cplx w) {
  if (w.real() > 40.0) return w + std::log(1.0 + std::exp(-w));
  if (w.real() < -40.0) {
    cplx e = std::exp(w);
    return e * (1.0 - 0.5 * e);
  }
  return std::log(1.0 + std::exp(w));
}

}  // namespace

GammaEvaluator::GammaEvaluator(const ModularParams& params, GammaConfig cfg)
    : params_(params), cfg_(cfg) {
  const double step = params_.lattice_min_step();
  // Contour elevation: a quarter of the way to the first sinh pole at 2 pi step.
  t0_ = 0.25 * 2.0 * kPi * step;
  landing_max_ = 0.5 * step + 1e-9;
  const double rate = params_.strip_half_width() - landing_max_;
  T_ = 40.0 / rate;

  // Precompute weight * 1/(t sin(omega t) sin(omega' t)) on both half-segments
  // [-T,0] and [0,T] of the shifted line, organized by refinement level.
  const auto& tables = ts::tables();
  levels_.resize(cfg_.max_level + 1);
  const double rad = 0.5 * T_;
  const cplx off{0.0, t0_};
  const cplx mid_left{-rad, t0_}, mid_right{rad, t0_};
  for (int L = 0; L <= cfg_.max_level; ++L) {
    const auto& lv = tables[L];
    auto& dst = levels_[L];
    auto push = [&](cplx t, double w) { dst.push_back({t, w * rad * integrand_factor(t)}); };
    if (L == 0) {
      push(mid_left, lv.w0);
      push(mid_right, lv.w0);
    }
    for (const auto& n : lv.nodes) {
      // segment [-T, 0]: endpoints a=-T, b=0
      push(off - rad * n.uc, n.w);            // x+ = b - rad*uc
      push(-T_ + off + rad * n.uc, n.w);      // x- = a + rad*uc
      // segment [0, T]
      push(T_ + off - rad * n.uc, n.w);
      push(off + rad * n.uc, n.w);
    }
  }
}

cplx GammaEvaluator::integrand_factor(cplx t) const {
  return 1.0 / (t * std::sin(params_.omega * t) * std::sin(params_.omega_prime * t));
}

cplx GammaEvaluator::log_gamma_cached(cplx z, double* err) const {
  const auto& tables = ts::tables();
  cplx sum = 0.0;
  cplx prev = 0.0;
  double delta_prev = 0.0;
  for (int L = 0; L <= cfg_.max_level; ++L) {
    cplx acc = 0.0;
    for (const auto& n : levels_[L]) acc += n.gw * std::exp(kI * n.t * z);
    sum += acc;
    cplx cur = -0.25 * tables[L].h * sum;
    double d = std::abs(cur - prev);
    if (L >= 4 && d <= cfg_.target_log_tol) {
      if (err) *err = d;
      return cur;
    }
    prev = cur;
    delta_prev = d;
  }
  if (err) *err = delta_prev;
  if (delta_prev > 1e5 * cfg_.target_log_tol)
    throw NonConvergenceError("gamma: contour integral did not converge");
  return prev;
}

cplx GammaEvaluator::log_gamma_strip(cplx z, double* err) const {
  const double strip = params_.strip_half_width();
  if (!(std::abs(z.imag()) < strip))
    throw DomainViolationError("log_gamma_strip: argument outside the analyticity strip");
  if (std::abs(z.imag()) <= landing_max_) return log_gamma_cached(z, err);
  // Slow path for arguments near the strip boundary: widen the truncation to
  // match the reduced decay rate.
  const double rate = strip - std::abs(z.imag());
  if (rate < 0.02)
    throw NonConvergenceError("log_gamma_strip: argument too close to the strip boundary");
  const double T = 40.0 / rate;
  auto f = [&](cplx t) { return std::exp(kI * t * z) * integrand_factor(t); };
  const cplx off{0.0, t0_};
  QuadResult r = integrate_path(f, {-T + off, off, T + off}, 1e-13, 1 << 17);
  if (err) *err = 0.25 * r.error;
  return -0.25 * r.value;
}

double GammaEvaluator::singularity_distance(cplx z) const {
  // Poles at -omega'' - 2m omega - 2n omega', zeros mirrored; all on the
  // imaginary axis at ordinates -+(strip + m b + n/b), m, n >= 0.
  const double strip = params_.strip_half_width();
  const double b = params_.b, ib = 1.0 / params_.b;
  auto axis_dist = [&](double target) {
    // min over m,n >= 0 of |target - (m b + n/b)| for target possibly < 0
    if (target < 0.0) return -target;
    double best = target;  // m = n = 0
    int mmax = static_cast<int>(std::floor(target / b)) + 1;
    for (int m = 0; m <= mmax; ++m) {
      double rem = target - m * b;
      if (rem < 0.0) {
        best = std::min(best, -rem);
        continue;
      }
      double n = std::floor(rem * b);  // rem / (1/b)
      for (double nn : {n, n + 1.0}) {
        if (nn < 0) continue;
        best = std::min(best, std::abs(rem - nn * ib));
      }
    }
    return best;
  };
  double x = z.real(), y = z.imag();
  double dp = axis_dist(-y - strip);  // poles at y = -(strip + ...)
  double dz = axis_dist(y - strip);   // zeros at y = +(strip + ...)
  return std::hypot(x, std::min(dp, dz));
}

GammaValue GammaEvaluator::evaluate_impl(cplx z, bool forbid_reflection) const {
  GammaValue out;
  if (singularity_distance(z) < exclusion_radius())
    throw NearSingularityError("gamma: argument within the exclusion radius of a pole/zero");

  if (!forbid_reflection && z.real() < cfg_.reflect_threshold) {
    GammaValue inner = evaluate_impl(-z, true);
    out.value = reflection_product(z) / inner.value;
    out.abs_log_error = inner.abs_log_error + 4e-16;
    out.strategy = GammaStrategy::ReflectionContinuation;
    out.shift_count = inner.shift_count + 1;
    return out;
  }

  // Greedy half-period shifts minimizing |Im z|; the multiplicative factors
  // accumulate in log form to avoid overflow.
  const cplx om = params_.omega, omp = params_.omega_prime;
  cplx w = z;
  cplx log_extra = 0.0;
  int shifts = 0;
  for (;;) {
    const double cur = std::abs(w.imag());
    struct Move {
      cplx next;
      cplx log_factor;
    };
    Move best{w, 0.0};
    double best_im = cur;
    auto consider = [&](cplx next, cplx logf) {
      double im = std::abs(next.imag());
      if (im < best_im - 1e-12) {
        best_im = im;
        best = {next, logf};
      }
    };
    consider(w - 2.0 * omp, log1p_exp(-kI * kPi * (w - omp) / om));
    consider(w + 2.0 * omp, -log1p_exp(-kI * kPi * (w + omp) / om));
    consider(w - 2.0 * om, log1p_exp(-kI * kPi * (w - om) / omp));
    consider(w + 2.0 * om, -log1p_exp(-kI * kPi * (w + om) / omp));
    if (best_im >= cur - 1e-12) break;
    w = best.next;
    log_extra += best.log_factor;
    ++shifts;
    if (shifts > 10000) throw NonConvergenceError("gamma: shift reduction did not terminate");
  }

  double qerr = 0.0;
  cplx lg = log_gamma_cached(w, &qerr);
  out.value = std::exp(lg + log_extra);
  out.abs_log_error = qerr + 3e-16 * shifts;
  out.shift_count = shifts;
  out.strategy = shifts ? GammaStrategy::ShiftContinuation : GammaStrategy::StripIntegral;
  return out;
}

GammaValue GammaEvaluator::evaluate(cplx z) const { return evaluate_impl(z, false); }

GammaValue GammaEvaluator::evaluate_forced(cplx z, GammaStrategy strategy) const {
  switch (strategy) {
    case GammaStrategy::StripIntegral: {
      GammaValue out;
      double err = 0.0;
      out.value = std::exp(log_gamma_strip(z, &err));
      out.abs_log_error = err;
      out.strategy = GammaStrategy::StripIntegral;
      return out;
    }
    case GammaStrategy::ShiftContinuation: {
      // One extra down-shift, evaluated below, then the shift equation back up.
      cplx w = z - 2.0 * params_.omega_prime;
      GammaValue inner = evaluate_impl(w, true);
      GammaValue out;
      cplx factor = std::exp(log1p_exp(-kI * kPi * (z - params_.omega_prime) / params_.omega));
      out.value = inner.value * factor;
      out.abs_log_error = inner.abs_log_error + 4e-16;
      out.shift_count = inner.shift_count + 1;
      out.strategy = GammaStrategy::ShiftContinuation;
      return out;
    }
    case GammaStrategy::ReflectionContinuation: {
      GammaValue inner = evaluate_impl(-z, true);
      GammaValue out;
      out.value = reflection_product(z) / inner.value;
      out.abs_log_error = inner.abs_log_error + 4e-16;
      out.shift_count = inner.shift_count + 1;
      out.strategy = GammaStrategy::ReflectionContinuation;
      return out;
    }
  }
  throw DomainViolationError("evaluate_forced: unknown strategy");
}

PoleDatum GammaEvaluator::pole_expansion(PoleDatum::Kind kind) const {
  PoleDatum d;
  d.kind = kind;
  if (kind == PoleDatum::Kind::Pole) {
    d.location = -params_.omega_dprime;
    d.leading_coefficient = -1.0 / (2.0 * kPi * kI * params_.c);
  } else {
    d.location = params_.omega_dprime;
    d.leading_coefficient = 2.0 * kPi * kI / params_.c;
  }
  return d;
}

cplx GammaEvaluator::reflection_product(cplx z) const {
  return std::exp(kI * params_.beta + kI * kPi * z * z);
}

double GammaEvaluator::conjugation_check(cplx z) const {
  cplx a = evaluate(z).value;
  cplx b = evaluate(std::conj(z)).value;
  return std::abs(std::conj(a) * b - 1.0);
}

}  // namespace qdl
