#pragma once

// Monte Carlo for the surplus reflected at a barrier b and killed by
// exponential Parisian ruin at rate p.
//
// Between events the diffusion part advances by exact Gaussian increments of
// length <= dt; the running maximum inside each increment is drawn from the
// Brownian-bridge law, so reflection at b and first passage above a level are
// monitored continuously. Jump arrivals and Parisian marks are exact event
// times. In bounded variation the path is linear between events and no time
// grid is used at all.

#include <cstdint>
#include <limits>
#include <random>
#include <string>

#include "parisian/levy_model.hpp"

namespace parisian {

/// How Parisian ruin is decided along a path. All three are equal in law.
enum class ParisianClock {
  poisson_marks,       // killed iff U < 0 at an epoch of a rate-p Poisson process
  exposure_threshold,  // killed when time spent below 0 exceeds Exp(1)/p
  per_excursion,       // fresh Exp(p) clock at the start of every excursion below 0
};

struct SimConfig {
  LevyModel model;
  double x0 = 0.0;
  double b = 0.0;
  double q = 0.0;
  double p = 1.0;
  std::size_t n_paths = 10000;
  double dt = 1e-3;
  double horizon = 10.0;
  std::uint64_t seed = 1;
  ParisianClock clock = ParisianClock::poisson_marks;
};

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
  double truncation_bound = 0.0;
  std::uint64_t seed = 0;
  std::string warning;
};

struct PathResult {
  double discounted_dividends = 0.0;
  bool ruined = false;
  double ruin_time = std::numeric_limits<double>::quiet_NaN();
  bool paid_while_negative = false;  // admissibility violations, must stay false
  bool paid_above_surplus = false;
};

/// Throws DomainError on an invalid configuration (q <= 0, p <= 0, b < 0,
/// dt above 1e-2 times the shortest characteristic time, ...).
void validate_config(const SimConfig& cfg);

/// Per-path engine: a 64-bit Mersenne Twister seeded from a hash of
/// (seed, path index), so each path is reproducible in isolation.
std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t path);

PathResult simulate_dividend_path(const SimConfig& cfg, std::mt19937_64& rng);

/// v_b(x0) estimate. Parallel over paths; bit-identical to mc_value_serial.
MCEstimate mc_value(const SimConfig& cfg);
MCEstimate mc_value_serial(const SimConfig& cfg);

/// Fraction of paths ruined before the horizon (for comparing clocks).
MCEstimate mc_ruin_probability(const SimConfig& cfg);

/// E_x0[exp(-q tau_a^+); tau_a^+ < kappa_p] without dividends. cfg.b is unused.
MCEstimate mc_two_sided_exit(const SimConfig& cfg, double a);

/// E_x0[exp(-r tau_b^+); tau_b^+ < T] with r = cfg.q and level cfg.b; no
/// Parisian killing.
MCEstimate mc_first_passage(const SimConfig& cfg);

/// Smallest horizon with exp(-q T)/Phi(q) <= tolerance.
double recommended_horizon(const LevyModel& model, double q, double tolerance);

}  // namespace parisian
