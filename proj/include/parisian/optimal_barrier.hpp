#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "parisian/scale.hpp"

namespace parisian {

struct BarrierSolution {
  double b_star = 0.0;
  double objective = 0.0;  // minimized function at b_star
  std::pair<double, double> bracket{0.0, 0.0};
  double first_order_residual = 0.0;  // only meaningful when b_star > 0
  bool grid_fallback = false;
};

/// b*_inf: argmin of W^(q)' over [0, inf).
BarrierSolution optimal_barrier_classical(const ScaleBasis& basis);
BarrierSolution optimal_barrier_classical(const LevyModel& model, double q);

/// b*_p: argmin of Z_q'(., Phi(p+q)) over [0, b*_inf]. Returns 0 without a
/// search when the zero-barrier criterion is not strictly positive.
BarrierSolution optimal_barrier_parisian(const ParisianContext& ctx);

/// Same minimization without the criterion shortcut; used to cross-check the
/// analytic criterion against the numerical argmin.
BarrierSolution minimize_z_prime(const ParisianContext& ctx);

enum class CriterionCase { a, b, c };

std::string to_string(CriterionCase c);

/// Inputs of the zero-barrier criterion. levy_mass may be +inf, which
/// describes an infinite-activity model that LevyModel itself cannot hold.
struct CriterionInputs {
  double sigma = 0.0;
  double drift = 0.0;
  double levy_mass = 0.0;
  double q = 0.0;
  double p = 0.0;
  double phi_pq = 0.0;
};

struct CriterionResult {
  CriterionCase which = CriterionCase::a;
  double lhs = 0.0;
  double rhs = 0.0;
  bool boundary = false;          // |lhs - rhs| < 1e-9
  bool positive_barrier = false;  // strict inequality holds and not boundary
};

CriterionResult zero_barrier_criterion(const CriterionInputs& in);
CriterionResult zero_barrier_criterion(const ParisianContext& ctx);

struct ConsistencyReport {
  CriterionResult criterion;
  double numerical_argmin = 0.0;
  bool argmin_consistent = true;
  // Case (c) only: (c Phi/p) * classical value at 0 versus v_0(0).
  bool rewritten_applicable = false;
  double rewritten_lhs = 0.0;
  double rewritten_rhs = 0.0;
  bool rewritten_consistent = true;

  bool ok() const { return argmin_consistent && rewritten_consistent; }
};

ConsistencyReport criterion_consistency_report(const ParisianContext& ctx);

struct SweepPoint {
  double p = 0.0;
  CriterionResult criterion;
  double b_star = 0.0;
};

/// Evaluates the criterion and b*_p at every Parisian rate. Points are
/// independent and computed in parallel; output order follows `rates`.
std::vector<SweepPoint> parisian_rate_sweep(const LevyModel& model, double q,
                                            std::span<const double> rates);

/// Number of verdict changes along a sweep (boundary points skipped).
int verdict_flips(std::span<const SweepPoint> sweep);

}  // namespace parisian
