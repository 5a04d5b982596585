#pragma once

#include <functional>
#include <vector>

#include "parisian/levy_model.hpp"
#include "parisian/scale.hpp"

namespace parisian {

struct GeneratorOptions {
  std::vector<double> kinks;        // non-smooth points of v
  double first_step = 1e-5;         // relative step for v'
  double second_step = 1e-4;        // relative step for v''
  double kink_exclusion = 1e-4;     // x closer than this to a kink is rejected
  double quad_tolerance = 1e-12;
};

/// Gamma v(x) = c v'(x) + sigma^2/2 v''(x) + lambda int_0^inf (v(x-z) - v(x)) f(z) dz
/// with f the hyperexponential jump density. Derivatives by central
/// differences, the jump integral by adaptive Gauss-Kronrod split at the
/// points where x - z crosses a kink.
double apply_generator(const LevyModel& model, const std::function<double(double)>& v, double x,
                       const GeneratorOptions& opts = {});

struct GridSpec {
  double lo = -3.0;
  double hi = 3.0;
  std::size_t n = 200;
};

struct HJBReport {
  double b = 0.0;
  std::vector<double> grid;
  std::vector<double> residuals;   // (Gamma - q - p 1{x<0}) v_b(x)
  std::vector<double> slopes;      // closed-form v_b'(x)
  std::vector<bool> slope_check;   // v_b'(x) >= 1 - 1e-8 for x > 0
  double max_abs_residual_below_bstar = 0.0;
  double max_residual_above_bstar = 0.0;  // signed maximum

  bool slopes_ok() const;
};

/// Lemma-style residual check for the barrier strategy at level b. Grid points
/// within 1e-4 of 0 or b are dropped.
HJBReport hjb_residual_report(const ParisianContext& ctx, double b, const GridSpec& grid);
/// Single-threaded reference of the same computation.
HJBReport hjb_residual_report_serial(const ParisianContext& ctx, double b, const GridSpec& grid);

}  // namespace parisian
