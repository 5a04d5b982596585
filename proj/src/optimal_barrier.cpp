#include "parisian/optimal_barrier.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "parisian/errors.hpp"
#include "parisian/valuation.hpp"

namespace parisian {

namespace {

using Fn = std::function<double(double)>;

constexpr double kGoldenTol = 1e-10;
constexpr int kFallbackGrid = 10000;

struct Minimum {
  double x;
  std::pair<double, double> bracket;
  bool grid_fallback;
};

// Bisection on the derivative of a convex function. Requires
// slope(a) < 0 < slope(b).
double polish_on_slope(const Fn& slope, double a, double b) {
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    if (slope(m) < 0.0)
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}

// Golden-section on [lo, hi], then a bisection polish on the analytic slope.
// If the final golden bracket does not straddle a slope sign change, the
// unimodality certificate failed and a dense grid picks the basin instead.
Minimum minimize_convex(const Fn& f, const Fn& slope, double lo, double hi) {
  if (slope(lo) >= 0.0) return {lo, {lo, hi}, false};
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > kGoldenTol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }

  // Widen until the slope changes sign inside, staying within [lo, hi].
  double width = std::max(b - a, 1e-12);
  double wa = a, wb = b;
  for (int k = 0; k < 60 && !(slope(wa) < 0.0 && slope(wb) > 0.0); ++k) {
    width *= 2.0;
    wa = std::max(lo, a - width);
    wb = std::min(hi, b + width);
    if (wa == lo && wb == hi) break;
  }
  if (slope(wa) < 0.0 && slope(wb) > 0.0) return {polish_on_slope(slope, wa, wb), {a, b}, false};
  if (slope(hi) <= 0.0) return {hi, {a, b}, false};

  double best = lo, best_f = f(lo);
  const double h = (hi - lo) / kFallbackGrid;
  for (int i = 1; i <= kFallbackGrid; ++i) {
    const double x = lo + i * h;
    const double v = f(x);
    if (v < best_f) {
      best_f = v;
      best = x;
    }
  }
  const double ga = std::max(lo, best - h), gb = std::min(hi, best + h);
  double x = best;
  if (slope(ga) < 0.0 && slope(gb) > 0.0) x = polish_on_slope(slope, ga, gb);
  return {x, {ga, gb}, true};
}

double z_slope_right(const ParisianContext& ctx, double x) {
  // Z_q''(0+) = Phi Z_q'(0) - p W'(0+).
  if (x <= 0.0) return ctx.phi_pq * z_prime_at_phi(ctx, 0.0) - ctx.p * w_prime(ctx.basis, 0.0);
  return z_second_at_phi(ctx, x);
}

BarrierSolution finish_parisian(const ParisianContext& ctx, double b, std::pair<double, double> br,
                                bool fallback) {
  BarrierSolution s;
  s.b_star = b;
  s.objective = z_prime_at_phi(ctx, b);
  s.bracket = br;
  s.grid_fallback = fallback;
  if (b > 0.0)
    s.first_order_residual =
        std::abs(s.objective - ctx.p / ctx.phi_pq * w_prime(ctx.basis, b));
  return s;
}

}  // namespace

BarrierSolution optimal_barrier_classical(const ScaleBasis& basis) {
  const Fn f = [&](double x) { return w_prime(basis, x); };
  const Fn slope = [&](double x) { return w_second(basis, x); };
  BarrierSolution s;
  if (slope(0.0) >= 0.0) {
    s.objective = f(0.0);
    return s;
  }
  double hi = 1.0;
  while (slope(hi) <= 0.0) {
    hi *= 2.0;
    if (hi > 1e6) throw NumericError("optimal_barrier_classical: W' does not turn upward");
  }
  const Minimum m = minimize_convex(f, slope, 0.0, hi);
  s.b_star = m.x;
  s.objective = f(m.x);
  s.bracket = m.bracket;
  s.grid_fallback = m.grid_fallback;
  s.first_order_residual = std::abs(slope(m.x));
  return s;
}

BarrierSolution optimal_barrier_classical(const LevyModel& model, double q) {
  return optimal_barrier_classical(scale_basis(model, q));
}

BarrierSolution minimize_z_prime(const ParisianContext& ctx) {
  const BarrierSolution classical = optimal_barrier_classical(ctx.basis);
  if (classical.b_star == 0.0) return finish_parisian(ctx, 0.0, {0.0, 0.0}, false);
  const Fn f = [&](double x) { return z_prime_at_phi(ctx, x); };
  const Fn slope = [&](double x) { return z_slope_right(ctx, x); };
  const Minimum m = minimize_convex(f, slope, 0.0, classical.b_star);
  return finish_parisian(ctx, m.x, m.bracket, m.grid_fallback);
}

BarrierSolution optimal_barrier_parisian(const ParisianContext& ctx) {
  if (!zero_barrier_criterion(ctx).positive_barrier) return finish_parisian(ctx, 0.0, {0.0, 0.0}, false);
  return minimize_z_prime(ctx);
}

std::string to_string(CriterionCase c) {
  switch (c) {
    case CriterionCase::a: return "a";
    case CriterionCase::b: return "b";
    case CriterionCase::c: return "c";
  }
  return "?";
}

CriterionResult zero_barrier_criterion(const CriterionInputs& in) {
  CriterionResult r;
  const double phi = in.phi_pq;
  if (in.sigma > 0.0) {
    r.which = CriterionCase::a;
    r.lhs = phi * phi / in.p;
    r.rhs = 2.0 / (in.sigma * in.sigma);
  } else if (std::isinf(in.levy_mass)) {
    // W'(0+) = inf: the right-hand side of g(0+) < (p/Phi) W'(0+) is infinite.
    r.which = CriterionCase::b;
    r.lhs = phi;
    r.rhs = std::numeric_limits<double>::infinity();
  } else {
    r.which = CriterionCase::c;
    const double c = in.drift;
    r.lhs = c * phi / in.p * (phi - in.p / c);
    r.rhs = (in.q + in.levy_mass) / c;
  }
  r.boundary = std::isfinite(r.rhs) && std::abs(r.lhs - r.rhs) < 1e-9;
  r.positive_barrier = !r.boundary && r.lhs < r.rhs;
  return r;
}

CriterionResult zero_barrier_criterion(const ParisianContext& ctx) {
  return zero_barrier_criterion(
      {ctx.model.sigma, ctx.model.drift, ctx.levy_mass(), ctx.q, ctx.p, ctx.phi_pq});
}

ConsistencyReport criterion_consistency_report(const ParisianContext& ctx) {
  ConsistencyReport rep;
  rep.criterion = zero_barrier_criterion(ctx);
  rep.numerical_argmin = minimize_z_prime(ctx).b_star;
  if (!rep.criterion.boundary)
    rep.argmin_consistent = rep.criterion.positive_barrier == (rep.numerical_argmin > 1e-6);

  if (rep.criterion.which == CriterionCase::c) {
    rep.rewritten_applicable = true;
    const double c = ctx.model.drift;
    rep.rewritten_lhs = c * ctx.phi_pq / ctx.p * classical_barrier_value(ctx.basis, 0.0, 0.0);
    rep.rewritten_rhs = barrier_value(ctx, 0.0, 0.0);
    if (!rep.criterion.boundary)
      rep.rewritten_consistent =
          (rep.rewritten_lhs < rep.rewritten_rhs) == rep.criterion.positive_barrier;
  }
  return rep;
}

std::vector<SweepPoint> parisian_rate_sweep(const LevyModel& model, double q,
                                            std::span<const double> rates) {
  std::vector<SweepPoint> out(rates.size());
  const auto n = static_cast<long>(rates.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      const ParisianContext ctx = make_context(model, q, rates[i]);
      out[i] = {rates[i], zero_barrier_criterion(ctx), optimal_barrier_parisian(ctx).b_star};
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

int verdict_flips(std::span<const SweepPoint> sweep) {
  int flips = 0;
  const SweepPoint* prev = nullptr;
  for (const auto& s : sweep) {
    if (s.criterion.boundary) continue;
    if (prev && prev->criterion.positive_barrier != s.criterion.positive_barrier) ++flips;
    prev = &s;
  }
  return flips;
}

}  // namespace parisian
