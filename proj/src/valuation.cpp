#include "parisian/valuation.hpp"

#include <cmath>

#include "parisian/errors.hpp"

namespace parisian {

namespace {
void require_barrier(double b) {
  if (!(b >= 0.0) || !std::isfinite(b))
    throw DomainError("barrier level must be finite and >= 0, got " + std::to_string(b));
}
}  // namespace

BarrierValuation::BarrierValuation(ParisianContext ctx, double b)
    : ctx_(std::move(ctx)), b_(b), denom_(0.0) {
  require_barrier(b);
  denom_ = z_prime_at_phi(ctx_, b);
  if (!(denom_ > 0.0)) throw NumericError("barrier valuation: Z_q'(b) is not positive");
}

double BarrierValuation::operator()(double x) const {
  if (x <= b_) return z_at_phi(ctx_, x) / denom_;
  return x - b_ + z_at_phi(ctx_, b_) / denom_;
}

double BarrierValuation::derivative(double x) const {
  if (x > b_) return 1.0;
  return z_prime_at_phi(ctx_, x) / denom_;
}

double barrier_value(const ParisianContext& ctx, double b, double x) {
  require_barrier(b);
  const double denom = z_prime_at_phi(ctx, b);
  if (x <= b) return z_at_phi(ctx, x) / denom;
  return x - b + z_at_phi(ctx, b) / denom;
}

double classical_barrier_value(const ScaleBasis& basis, double b, double x) {
  require_barrier(b);
  const double denom = w_prime(basis, b);
  if (!(denom > 0.0) || !std::isfinite(denom))
    throw DomainError("classical_barrier_value: W'(b) must be finite and positive");
  if (x <= b) return w(basis, x) / denom;
  return x - b + w(basis, b) / denom;
}

double classical_barrier_value(const LevyModel& model, double q, double b, double x) {
  return classical_barrier_value(scale_basis(model, q), b, x);
}

double no_ruin_value(const LevyModel& model, double q, double b, double x) {
  if (x > b) throw DomainError("no_ruin_value: requires x <= b");
  const double phi_q = phi(model, q).value;
  if (!(phi_q > 0.0)) throw DomainError("no_ruin_value: Phi(q) = 0 gives an infinite value");
  return std::exp(-phi_q * (b - x)) / phi_q;
}

double two_sided_exit_lt(const ParisianContext& ctx, double x, double a) {
  if (x > a) throw DomainError("two_sided_exit_lt: requires x <= a");
  if (x == a) return 1.0;
  return z_at_phi(ctx, x) / z_at_phi(ctx, a);
}

double first_passage_lt(const LevyModel& model, double r, double x, double b) {
  if (x > b) throw DomainError("first_passage_lt: requires x <= b");
  return std::exp(-phi(model, r).value * (b - x));
}

}  // namespace parisian
