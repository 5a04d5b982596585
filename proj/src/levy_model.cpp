#include "parisian/levy_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "parisian/errors.hpp"
#include "parisian/detail/rational.hpp"

namespace parisian {

double JumpMix::tail(double x) const {
  if (arrival_rate == 0.0) return 0.0;
  if (x <= 0.0) return arrival_rate;
  double s = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) s += weights[i] * std::exp(-rates[i] * x);
  return arrival_rate * s;
}

double JumpMix::density(double z) const {
  if (z < 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) s += weights[i] * rates[i] * std::exp(-rates[i] * z);
  return s;
}

double JumpMix::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) s += weights[i] / rates[i];
  return s;
}

LevyModel LevyModel::brownian(double drift, double sigma) {
  LevyModel m;
  m.drift = drift;
  m.sigma = sigma;
  require_valid(m);
  return m;
}

LevyModel LevyModel::hyperexponential(double drift, double sigma, double lambda,
                                      std::vector<double> weights,
                                      std::vector<double> rates) {
  LevyModel m;
  m.drift = drift;
  m.sigma = sigma;
  m.jumps.arrival_rate = lambda;
  m.jumps.weights = std::move(weights);
  m.jumps.rates = std::move(rates);
  require_valid(m);
  return m;
}

namespace detail {

double psi_rational(const LevyModel& model, double theta) {
  double v = model.drift * theta + 0.5 * model.sigma * model.sigma * theta * theta;
  const auto& j = model.jumps;
  if (j.arrival_rate > 0.0) {
    // 1 - mu/(mu+theta) = theta/(mu+theta); avoids cancellation near 0.
    double s = 0.0;
    for (std::size_t i = 0; i < j.rates.size(); ++i) s += j.weights[i] * theta / (j.rates[i] + theta);
    v -= j.arrival_rate * s;
  }
  return v;
}

double psi_rational_prime(const LevyModel& model, double theta) {
  double v = model.drift + model.sigma * model.sigma * theta;
  const auto& j = model.jumps;
  if (j.arrival_rate > 0.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < j.rates.size(); ++i) {
      const double d = j.rates[i] + theta;
      s += j.weights[i] * j.rates[i] / (d * d);
    }
    v -= j.arrival_rate * s;
  }
  return v;
}

double bisect_sign_change(const std::function<double(double)>& f, double lo, double hi,
                          bool f_lo_positive) {
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = f(mid);
    if (v == 0.0) return mid;
    if ((v > 0.0) == f_lo_positive)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

double psi(const LevyModel& model, double theta) {
  if (!(theta >= 0.0)) throw DomainError("psi: theta must be >= 0, got " + std::to_string(theta));
  return detail::psi_rational(model, theta);
}

double psi_prime(const LevyModel& model, double theta) {
  if (!(theta >= 0.0)) throw DomainError("psi_prime: theta must be >= 0, got " + std::to_string(theta));
  return detail::psi_rational_prime(model, theta);
}

PhiRoot phi(const LevyModel& model, double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("phi: r must be finite and >= 0");

  // psi is convex on [0, inf); restrict to the increasing branch [lo, inf).
  double lo = 0.0;
  if (detail::psi_rational_prime(model, 0.0) < 0.0) {
    double h = 1.0;
    while (detail::psi_rational_prime(model, h) <= 0.0) {
      h *= 2.0;
      if (h > 1e300) throw NumericError("phi: psi' never becomes positive");
    }
    lo = detail::bisect_sign_change(
        [&](double t) { return detail::psi_rational_prime(model, t); }, 0.0, h, false);
  }
  const auto f = [&](double t) { return detail::psi_rational(model, t) - r; };
  if (f(lo) >= 0.0) return {r, lo, std::abs(f(lo))};

  double hi = std::max(1.0, 2.0 * lo);
  int expansions = 0;
  while (f(hi) <= 0.0) {
    hi *= 2.0;
    if (++expansions > 2000) throw NumericError("phi: bracket expansion failed for r=" + std::to_string(r));
  }

  // Safeguarded Newton, started from the right end where the convex branch
  // makes Newton monotone.
  const double tol = 1e-12 * std::max(1.0, r);
  double x = hi;
  double a = lo, b = hi;
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x);
    if (std::abs(fx) <= tol) return {r, x, std::abs(fx)};
    if (fx > 0.0)
      b = x;
    else
      a = x;
    const double d = detail::psi_rational_prime(model, x);
    double next = d > 0.0 ? x - fx / d : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (next == x || b - a <= 4.0 * std::numeric_limits<double>::epsilon() * b) {
      const double fb = f(next);
      return {r, next, std::abs(fb)};
    }
    x = next;
  }
  std::ostringstream os;
  os << "phi: no convergence for r=" << r << " bracket=[" << a << ", " << b << "] residual=" << f(x);
  throw NumericError(os.str());
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::string ValidationReport::failures() const {
  std::string out;
  for (const auto& c : checks) {
    if (c.passed) continue;
    if (!out.empty()) out += ", ";
    out += c.name;
    if (!c.detail.empty()) out += " (" + c.detail + ")";
  }
  return out;
}

ValidationReport validate(const LevyModel& model) {
  ValidationReport rep;
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    rep.checks.push_back({std::move(name), ok, ok ? std::string{} : std::move(detail)});
  };
  const auto& j = model.jumps;

  add("finite_parameters", std::isfinite(model.drift) && std::isfinite(model.sigma) &&
                               std::isfinite(j.arrival_rate),
      "drift, sigma and lambda must be finite");
  add("sigma_nonnegative", model.sigma >= 0.0, "sigma < 0");
  add("arrival_rate_nonnegative", j.arrival_rate >= 0.0, "lambda < 0");
  add("bounded_variation_positive_drift", model.sigma != 0.0 || model.drift > 0.0,
      "sigma = 0 requires drift > 0");
  add("non_degenerate", !(model.sigma == 0.0 && j.arrival_rate == 0.0),
      "sigma = 0 and lambda = 0 is a deterministic drift");

  if (j.arrival_rate > 0.0) {
    const bool sizes = !j.weights.empty() && j.weights.size() == j.rates.size();
    add("jump_mix_shape", sizes, "jump_weights and jump_rates must be non-empty and equal length");
    if (sizes) {
      add("jump_weights_positive",
          std::all_of(j.weights.begin(), j.weights.end(), [](double w) { return w > 0.0; }),
          "every weight must be > 0");
      const double sum = std::accumulate(j.weights.begin(), j.weights.end(), 0.0);
      add("jump_weights_sum_to_one", std::abs(sum - 1.0) <= 1e-12,
          "sum = " + std::to_string(sum));
      add("jump_rates_positive",
          std::all_of(j.rates.begin(), j.rates.end(),
                      [](double m) { return m > 0.0 && std::isfinite(m); }),
          "every rate must be finite and > 0");
      add("jump_rates_strictly_increasing",
          std::adjacent_find(j.rates.begin(), j.rates.end(), std::greater_equal<>()) ==
              j.rates.end(),
          "rates must be in strictly increasing order");
    }
  }
  // A positive mixture of exponentials is completely monotone, hence log-convex.
  const bool mix_ok = rep.ok();
  add("levy_tail_log_convex", mix_ok, "follows only from a valid hyperexponential mix");
  rep.levy_mass = j.arrival_rate > 0.0 ? j.arrival_rate : 0.0;
  return rep;
}

void require_valid(const LevyModel& model) {
  const auto rep = validate(model);
  if (!rep.ok()) throw ValidationError("invalid model: " + rep.failures());
}

}  // namespace parisian
