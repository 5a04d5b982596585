#include "parisian/hjb_verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "parisian/errors.hpp"
#include "parisian/valuation.hpp"

namespace parisian {

namespace {

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, tol);
}

}  // namespace

double apply_generator(const LevyModel& model, const std::function<double(double)>& v, double x,
                       const GeneratorOptions& opts) {
  double kink_distance = std::numeric_limits<double>::infinity();
  for (double k : opts.kinks) kink_distance = std::min(kink_distance, std::abs(x - k));
  if (kink_distance < opts.kink_exclusion)
    throw DomainError("apply_generator: x = " + std::to_string(x) + " is within " +
                      std::to_string(opts.kink_exclusion) + " of a kink");

  const double scale = std::max(1.0, std::abs(x));
  const double h1 = std::min(opts.first_step * scale, 0.5 * kink_distance);
  const double h2 = std::min(opts.second_step * scale, 0.5 * kink_distance);
  const double vx = v(x);
  const double d1 = (v(x + h1) - v(x - h1)) / (2.0 * h1);
  double out = model.drift * d1;
  if (model.sigma > 0.0) {
    const double d2 = (v(x + h2) - 2.0 * vx + v(x - h2)) / (h2 * h2);
    out += 0.5 * model.sigma * model.sigma * d2;
  }

  const auto& jumps = model.jumps;
  if (jumps.arrival_rate > 0.0) {
    // Breakpoints in z where x - z hits a kink.
    std::vector<double> cuts{0.0};
    for (double k : opts.kinks)
      if (x - k > 0.0) cuts.push_back(x - k);
    std::sort(cuts.begin(), cuts.end());
    const double slowest = *std::min_element(jumps.rates.begin(), jumps.rates.end());
    const double z_end = cuts.back() + 40.0 / slowest;
    // Tail segments of bounded length keep Gauss-Kronrod resolving the decay.
    const double piece = 5.0 / slowest;
    for (double z = cuts.back() + piece; z < z_end; z += piece) cuts.push_back(z);
    cuts.push_back(z_end);

    const auto integrand = [&](double z) { return (v(x - z) - vx) * jumps.density(z); };
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      integral += integrate(integrand, cuts[i], cuts[i + 1], opts.quad_tolerance);
    // Beyond z_end: the -v(x) part in closed form, the v(x - z) part is below
    // v(x) * P(jump > z_end) and dropped.
    integral -= vx * jumps.tail(z_end) / jumps.arrival_rate;
    out += jumps.arrival_rate * integral;
  }
  return out;
}

bool HJBReport::slopes_ok() const {
  return std::all_of(slope_check.begin(), slope_check.end(), [](bool b) { return b; });
}

namespace {

HJBReport residual_report(const ParisianContext& ctx, double b, const GridSpec& spec, bool parallel) {
  if (spec.n < 2 || !(spec.hi > spec.lo)) throw DomainError("hjb grid: need n >= 2 and hi > lo");
  const BarrierValuation value(ctx, b);
  GeneratorOptions opts;
  opts.kinks = {0.0, b};

  HJBReport rep;
  rep.b = b;
  const double step = (spec.hi - spec.lo) / static_cast<double>(spec.n - 1);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double x = spec.lo + step * static_cast<double>(i);
    if (std::abs(x) <= opts.kink_exclusion || std::abs(x - b) <= opts.kink_exclusion) continue;
    rep.grid.push_back(x);
  }
  const auto n = static_cast<long>(rep.grid.size());
  rep.residuals.assign(rep.grid.size(), 0.0);
  rep.slopes.assign(rep.grid.size(), 0.0);
  const std::function<double(double)> v = [&](double y) { return value(y); };

  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < n; ++i) {
    try {
      const double x = rep.grid[i];
      const double killing = ctx.q + (x < 0.0 ? ctx.p : 0.0);
      rep.residuals[i] = apply_generator(ctx.model, v, x, opts) - killing * value(x);
      rep.slopes[i] = value.derivative(x);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  rep.slope_check.reserve(rep.grid.size());
  double above = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rep.grid.size(); ++i) {
    const double x = rep.grid[i];
    rep.slope_check.push_back(x <= 0.0 || rep.slopes[i] >= 1.0 - 1e-8);
    if (x < b)
      rep.max_abs_residual_below_bstar =
          std::max(rep.max_abs_residual_below_bstar, std::abs(rep.residuals[i]));
    else
      above = std::max(above, rep.residuals[i]);
  }
  rep.max_residual_above_bstar = std::isfinite(above) ? above : 0.0;
  return rep;
}

}  // namespace

HJBReport hjb_residual_report(const ParisianContext& ctx, double b, const GridSpec& grid) {
  return residual_report(ctx, b, grid, true);
}

HJBReport hjb_residual_report_serial(const ParisianContext& ctx, double b, const GridSpec& grid) {
  return residual_report(ctx, b, grid, false);
}

}  // namespace parisian
