#pragma once

// Closed-form q-scale functions for rational psi.
//
// 1/(psi(theta) - q) has only simple real poles theta_i, so
//   W^(q)(x) = sum_i A_i exp(theta_i x),  A_i = 1 / psi'(theta_i),
// and the second scale function at theta = Phi(p+q) integrates termwise:
//   Z_q(x) = p sum_i A_i exp(theta_i x) / (Phi(p+q) - theta_i),  x >= 0.

#include <vector>

#include "parisian/levy_model.hpp"

namespace parisian {

struct ScaleBasis {
  double q = 0.0;
  std::vector<double> roots;         // ascending; roots[phi_index] == Phi(q)
  std::vector<double> coefficients;  // residues A_i
  std::size_t phi_index = 0;

  double phi_q() const { return roots[phi_index]; }
};

/// Throws DomainError for inadmissible q and NumericError when two roots
/// collide within 1e-9.
ScaleBasis scale_basis(const LevyModel& model, double q);

/// W^(q)(x); zero for x < 0 and the right limit W^(q)(0+) at x = 0.
double w(const ScaleBasis& basis, double x);
/// W^(q)'(x) for x > 0; x = 0 returns W^(q)'(0+), x < 0 returns 0.
double w_prime(const ScaleBasis& basis, double x);
double w_second(const ScaleBasis& basis, double x);

/// Everything a Parisian valuation needs at fixed (q, p).
struct ParisianContext {
  LevyModel model;
  double q = 0.0;
  double p = 0.0;
  double phi_pq = 0.0;  // Phi(p + q)
  ScaleBasis basis;
  std::vector<double> z_coefficients;  // p A_i / (Phi(p+q) - theta_i)

  double levy_mass() const { return model.jumps.total_mass(); }
};

/// Requires p > 0 and an admissible q (q > 0, or q = 0 with Phi(0) > 0).
ParisianContext make_context(const LevyModel& model, double q, double p);

/// Z_q(x, Phi(p+q)).
double z_at_phi(const ParisianContext& ctx, double x);
/// Z_q'(x, Phi(p+q)); at x = 0 uses Phi(p+q) - p W^(q)(0+).
double z_prime_at_phi(const ParisianContext& ctx, double x);
/// Z_q''(x, Phi(p+q)) for x > 0.
double z_second_at_phi(const ParisianContext& ctx, double x);

}  // namespace parisian
