#pragma once

// Spectrally negative Levy models with rational Laplace exponent:
//
//   X_t = c t + sigma B_t - (compound Poisson with rate lambda and
//                            hyperexponential jump sizes)
//
// psi(theta) = c theta + sigma^2 theta^2 / 2 - lambda (1 - sum_i w_i mu_i / (mu_i + theta)).
// The drift c is the compensated drift, so for finite activity gamma is never
// needed. The Levy tail lambda * sum_i w_i exp(-mu_i x) is completely
// monotone, hence log-convex.

#include <string>
#include <vector>

namespace parisian {

struct JumpMix {
  std::vector<double> weights;
  std::vector<double> rates;  // strictly increasing
  double arrival_rate = 0.0;  // lambda

  std::size_t phases() const { return arrival_rate > 0.0 ? rates.size() : 0; }
  /// nu(0, inf)
  double total_mass() const { return arrival_rate; }
  /// nu(x, inf)
  double tail(double x) const;
  /// Density of the jump-size distribution (not multiplied by lambda).
  double density(double z) const;
  /// E[jump size]
  double mean() const;
};

struct LevyModel {
  double drift = 0.0;  // c
  double sigma = 0.0;
  JumpMix jumps;

  bool has_jumps() const { return jumps.arrival_rate > 0.0; }
  bool bounded_variation() const { return sigma == 0.0; }

  /// Brownian motion with drift.
  static LevyModel brownian(double drift, double sigma);
  /// Cramer-Lundberg (sigma = 0) or jump-diffusion with a hyperexponential mix.
  static LevyModel hyperexponential(double drift, double sigma, double lambda,
                                    std::vector<double> weights,
                                    std::vector<double> rates);
};

struct PhiRoot {
  double r = 0.0;
  double value = 0.0;
  double residual = 0.0;  // |psi(value) - r|
};

struct InvariantCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<InvariantCheck> checks;
  double levy_mass = 0.0;  // nu(0, inf), used by the zero-barrier criterion

  bool ok() const;
  /// Names of failed invariants, comma separated.
  std::string failures() const;
};

double psi(const LevyModel& model, double theta);
double psi_prime(const LevyModel& model, double theta);

/// Largest root of psi(lambda) = r. Throws DomainError for r < 0 and
/// NumericError if the bracketed search does not converge.
PhiRoot phi(const LevyModel& model, double r);

ValidationReport validate(const LevyModel& model);

/// Throws ValidationError listing failed invariants.
void require_valid(const LevyModel& model);

}  // namespace parisian
