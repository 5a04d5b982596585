#pragma once

#include <functional>

#include "parisian/levy_model.hpp"

namespace parisian::detail {

// psi and psi' continued to the whole real line minus the poles -mu_i.
double psi_rational(const LevyModel& model, double theta);
double psi_rational_prime(const LevyModel& model, double theta);

// Bisection on an open interval whose endpoint signs are known; the endpoints
// themselves are never evaluated (they may be poles).
double bisect_sign_change(const std::function<double(double)>& f, double lo, double hi,
                          bool f_lo_positive);

}  // namespace parisian::detail
