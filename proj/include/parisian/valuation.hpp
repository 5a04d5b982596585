#pragma once

#include "parisian/scale.hpp"

namespace parisian {

/// Value of the barrier strategy at level b under Parisian ruin with rate p:
///   v_b(x) = Z_q(x) / Z_q'(b)      for x <= b,
///   v_b(x) = x - b + v_b(b)        for x > b.
class BarrierValuation {
 public:
  /// Throws DomainError for b < 0.
  BarrierValuation(ParisianContext ctx, double b);

  double operator()(double x) const;
  /// Closed-form v_b'(x); right derivative at x = 0.
  double derivative(double x) const;

  double barrier() const { return b_; }
  double denominator() const { return denom_; }
  const ParisianContext& context() const { return ctx_; }

 private:
  ParisianContext ctx_;
  double b_;
  double denom_;
};

double barrier_value(const ParisianContext& ctx, double b, double x);

/// Barrier value under classical ruin, W(x)/W'(b) with linear continuation
/// above b.
double classical_barrier_value(const LevyModel& model, double q, double b, double x);
double classical_barrier_value(const ScaleBasis& basis, double b, double x);

/// Barrier value without ruin, exp(-Phi(q)(b-x))/Phi(q) for x <= b.
/// Throws DomainError when Phi(q) = 0 or x > b.
double no_ruin_value(const LevyModel& model, double q, double b, double x);

/// E_x[exp(-q tau_a^+); tau_a^+ < kappa_p] = Z_q(x)/Z_q(a).
double two_sided_exit_lt(const ParisianContext& ctx, double x, double a);

/// E_x[exp(-r tau_b^+); tau_b^+ < inf] = exp(-Phi(r)(b-x)).
double first_passage_lt(const LevyModel& model, double r, double x, double b);

}  // namespace parisian
