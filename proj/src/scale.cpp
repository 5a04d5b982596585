#include "parisian/scale.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parisian/detail/rational.hpp"
#include "parisian/errors.hpp"

namespace parisian {

namespace {

double expand_left_until_positive(const std::function<double(double)>& f, double right) {
  double step = 1.0;
  double left = right - step;
  while (f(left) <= 0.0) {
    step *= 2.0;
    left = right - step;
    if (step > 1e300) throw NumericError("scale_basis: no sign change below the last pole");
  }
  return left;
}

}  // namespace

ScaleBasis scale_basis(const LevyModel& model, double q) {
  require_valid(model);
  if (!(q >= 0.0) || !std::isfinite(q)) throw DomainError("scale_basis: q must be finite and >= 0");
  const PhiRoot root = phi(model, q);
  if (q == 0.0 && root.value <= 0.0)
    throw DomainError("scale_basis: q = 0 requires Phi(0) > 0 (negative mean drift)");

  const auto f = [&](double t) { return detail::psi_rational(model, t) - q; };
  ScaleBasis basis;
  basis.q = q;
  std::vector<double> roots{root.value};

  const auto& j = model.jumps;
  const std::size_t n = j.phases();
  // Poles sit at -mu_i. Between consecutive poles psi - q runs from +inf to
  // -inf, which gives exactly one root per gap; the count matches the degree
  // of the numerator polynomial so no root is missed.
  if (n == 0) {
    // Pure diffusion: the second root of the quadratic.
    const double s2 = model.sigma * model.sigma;
    roots.push_back(-root.value - 2.0 * model.drift / s2);
  } else {
    if (q == 0.0) {
      roots.push_back(0.0);
    } else {
      roots.push_back(detail::bisect_sign_change(f, -j.rates[0], 0.0, true));
    }
    for (std::size_t i = 0; i + 1 < n; ++i)
      roots.push_back(detail::bisect_sign_change(f, -j.rates[i + 1], -j.rates[i], true));
    if (model.sigma > 0.0) {
      const double right = -j.rates[n - 1];
      const double left = expand_left_until_positive(f, right);
      roots.push_back(detail::bisect_sign_change(f, left, right, true));
    }
  }

  std::sort(roots.begin(), roots.end());
  for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
    if (roots[i + 1] - roots[i] < 1e-9) {
      std::ostringstream os;
      os << "scale_basis: roots " << roots[i] << " and " << roots[i + 1]
         << " collide; perturb the model parameters";
      throw NumericError(os.str());
    }
  }
  basis.roots = roots;
  basis.phi_index = static_cast<std::size_t>(
      std::find(roots.begin(), roots.end(), root.value) - roots.begin());
  basis.coefficients.reserve(roots.size());
  for (double t : roots) basis.coefficients.push_back(1.0 / detail::psi_rational_prime(model, t));
  return basis;
}

double w(const ScaleBasis& basis, double x) {
  if (x < 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < basis.roots.size(); ++i)
    s += basis.coefficients[i] * std::exp(basis.roots[i] * x);
  return s;
}

double w_prime(const ScaleBasis& basis, double x) {
  if (x < 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < basis.roots.size(); ++i)
    s += basis.coefficients[i] * basis.roots[i] * std::exp(basis.roots[i] * x);
  return s;
}

double w_second(const ScaleBasis& basis, double x) {
  if (x < 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < basis.roots.size(); ++i) {
    const double t = basis.roots[i];
    s += basis.coefficients[i] * t * t * std::exp(t * x);
  }
  return s;
}

ParisianContext make_context(const LevyModel& model, double q, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("make_context: p must be finite and > 0");
  ParisianContext ctx;
  ctx.model = model;
  ctx.q = q;
  ctx.p = p;
  ctx.basis = scale_basis(model, q);
  ctx.phi_pq = phi(model, p + q).value;
  if (!(ctx.phi_pq > ctx.basis.phi_q()))
    throw NumericError("make_context: Phi(p+q) must exceed Phi(q)");
  ctx.z_coefficients.reserve(ctx.basis.roots.size());
  for (std::size_t i = 0; i < ctx.basis.roots.size(); ++i)
    ctx.z_coefficients.push_back(p * ctx.basis.coefficients[i] / (ctx.phi_pq - ctx.basis.roots[i]));
  return ctx;
}

double z_at_phi(const ParisianContext& ctx, double x) {
  if (x <= 0.0) return std::exp(ctx.phi_pq * x);
  double s = 0.0;
  for (std::size_t i = 0; i < ctx.basis.roots.size(); ++i)
    s += ctx.z_coefficients[i] * std::exp(ctx.basis.roots[i] * x);
  return s;
}

double z_prime_at_phi(const ParisianContext& ctx, double x) {
  if (x < 0.0) return ctx.phi_pq * std::exp(ctx.phi_pq * x);
  if (x == 0.0) return ctx.phi_pq - ctx.p * w(ctx.basis, 0.0);
  double s = 0.0;
  for (std::size_t i = 0; i < ctx.basis.roots.size(); ++i) {
    const double t = ctx.basis.roots[i];
    s += ctx.z_coefficients[i] * t * std::exp(t * x);
  }
  return s;
}

double z_second_at_phi(const ParisianContext& ctx, double x) {
  if (x < 0.0) return ctx.phi_pq * ctx.phi_pq * std::exp(ctx.phi_pq * x);
  double s = 0.0;
  for (std::size_t i = 0; i < ctx.basis.roots.size(); ++i) {
    const double t = ctx.basis.roots[i];
    s += ctx.z_coefficients[i] * t * t * std::exp(t * x);
  }
  return s;
}

}  // namespace parisian
