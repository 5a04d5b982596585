#include "parisian/mc_sim.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "parisian/errors.hpp"

namespace parisian {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Mode { value, exit, first_passage };

struct PathOutcome {
  double payoff = 0.0;
  bool ruined = false;
  double ruin_time = std::numeric_limits<double>::quiet_NaN();
  bool paid_while_negative = false;
  bool paid_above_surplus = false;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class PathSimulator {
 public:
  PathSimulator(const SimConfig& cfg, Mode mode, double level)
      : cfg_(cfg), mode_(mode), level_(level) {
    const auto& j = cfg.model.jumps;
    double acc = 0.0;
    for (double w : j.weights) cumulative_.push_back(acc += w);
  }

  PathOutcome run(std::mt19937_64& rng) const {
    const LevyModel& m = cfg_.model;
    const double c = m.drift, s = m.sigma, lambda = m.jumps.arrival_rate;
    const double T = cfg_.horizon;
    const double disc = cfg_.q;
    const bool killing = mode_ != Mode::first_passage;

    std::exponential_distribution<double> exp1(1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    PathOutcome out;
    double t = 0.0;
    double u = cfg_.x0;

    if (mode_ == Mode::value) {
      if (u > cfg_.b) {
        const double lump = u - cfg_.b;
        if (lump > u) out.paid_above_surplus = true;
        out.payoff += lump;
        u = cfg_.b;
      }
    } else if (u >= level_) {
      out.payoff = 1.0;
      return out;
    }

    // The Parisian clock has its own stream, so the surplus path does not
    // depend on p unless the clock can actually bite.
    std::mt19937_64 clock_rng(rng());
    double next_jump = lambda > 0.0 ? exp1(rng) / lambda : kInf;
    const ParisianClock clock = cfg_.clock;
    double next_mark =
        killing && clock == ParisianClock::poisson_marks ? exp1(clock_rng) / cfg_.p : kInf;
    double exposure = 0.0;
    double threshold =
        killing && clock == ParisianClock::exposure_threshold ? exp1(clock_rng) / cfg_.p : kInf;
    bool in_excursion = false;
    double excursion_elapsed = 0.0, excursion_clock = kInf;
    auto update_excursion = [&] {
      if (!killing || clock != ParisianClock::per_excursion) return;
      if (u < 0.0 && !in_excursion) {
        in_excursion = true;
        excursion_elapsed = 0.0;
        excursion_clock = exp1(clock_rng) / cfg_.p;
      } else if (u >= 0.0) {
        in_excursion = false;
      }
    };
    update_excursion();

    while (t < T) {
      double end = std::min(T, next_jump);
      if (s > 0.0) end = std::min(end, t + cfg_.dt);
      if (next_mark <= end) {
        // Marks only matter if the step can reach below 0: never for a
        // bounded-variation path starting at u >= 0, and with probability
        // below 1e-14 for a diffusion step starting 8 sd above 0.
        const double reach = s > 0.0 ? 8.0 * s * std::sqrt(end - t) + std::max(0.0, -c) * (end - t) : 0.0;
        if (u >= reach) {
          while (next_mark <= end) next_mark += exp1(clock_rng) / cfg_.p;
        } else {
          end = next_mark;
        }
      }
      const double h = end - t;

      if (killing && clock != ParisianClock::poisson_marks && u < 0.0) {
        // Time below zero in this step: exact when the path is linear,
        // left-point rule on the diffusion skeleton otherwise.
        const double occupied = s > 0.0 ? h : std::min(h, -u / c);
        const double budget = clock == ParisianClock::exposure_threshold
                                  ? threshold - exposure
                                  : excursion_clock - excursion_elapsed;
        if (occupied >= budget) {
          out.ruined = true;
          out.ruin_time = t + budget;
          return out;
        }
        exposure += occupied;
        excursion_elapsed += occupied;
      }

      double rise, running_max;
      if (s > 0.0) {
        rise = c * h + s * std::sqrt(h) * normal(rng);
        const double v = 1.0 - unif(rng);  // (0, 1]
        running_max = 0.5 * (rise + std::sqrt(rise * rise - 2.0 * s * s * h * std::log(v)));
      } else {
        rise = c * h;
        running_max = std::max(0.0, rise);
      }

      if (mode_ == Mode::value) {
        const double paid = std::max(0.0, u + running_max - cfg_.b);
        if (paid > 0.0) {
          if (cfg_.b < 0.0) out.paid_while_negative = true;
          if (s > 0.0) {
            out.payoff += std::exp(-disc * (t + 0.5 * h)) * paid;
          } else {
            // Paid at rate c from the hitting time of b to the step end.
            const double hit = t + std::max(0.0, cfg_.b - u) / c;
            out.payoff += c / disc * (std::exp(-disc * hit) - std::exp(-disc * end));
          }
        }
        // Reflected end value, anchored at b so b = 0 does not leave u at -ulp.
        u = paid > 0.0 ? cfg_.b - (running_max - rise) : u + rise;
      } else {
        if (u + running_max >= level_) {
          const double tau = s > 0.0 ? t + 0.5 * h : t + (level_ - u) / c;
          out.payoff = std::exp(-disc * tau);
          return out;
        }
        u += rise;
      }
      t = end;

      if (end == next_jump) {
        u -= jump_size(rng, unif, exp1);
        next_jump += exp1(rng) / lambda;
      }
      if (end == next_mark) {
        if (u < 0.0) {
          out.ruined = true;
          out.ruin_time = t;
          return out;
        }
        next_mark += exp1(clock_rng) / cfg_.p;
      }
      update_excursion();
    }
    return out;
  }

 private:
  double jump_size(std::mt19937_64& rng, std::uniform_real_distribution<double>& unif,
                   std::exponential_distribution<double>& exp1) const {
    const double pick = unif(rng) * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), pick);
    const std::size_t k = std::min<std::size_t>(it - cumulative_.begin(), cumulative_.size() - 1);
    return exp1(rng) / cfg_.model.jumps.rates[k];
  }

  const SimConfig& cfg_;
  Mode mode_;
  double level_;
  std::vector<double> cumulative_;
};

void check_common(const SimConfig& cfg, bool uses_p) {
  require_valid(cfg.model);
  if (cfg.n_paths == 0) throw DomainError("simulation: n_paths must be positive");
  if (!(cfg.dt > 0.0) || !(cfg.horizon > 0.0))
    throw DomainError("simulation: dt and horizon must be positive");
  if (uses_p && !(cfg.p > 0.0)) throw DomainError("simulation: p must be > 0");
  double fastest = 0.0;
  if (cfg.q > 0.0) fastest = std::max(fastest, cfg.q);
  if (uses_p) fastest = std::max(fastest, cfg.p);
  fastest = std::max(fastest, cfg.model.jumps.arrival_rate);
  if (fastest > 0.0 && cfg.dt > 1e-2 / fastest)
    throw DomainError("simulation: dt must be <= 1e-2 times the shortest characteristic time");
}

MCEstimate summarize(const std::vector<double>& payoffs, std::uint64_t seed) {
  MCEstimate est;
  est.n_paths = payoffs.size();
  est.seed = seed;
  double sum = 0.0;
  for (double v : payoffs) sum += v;
  est.mean = sum / static_cast<double>(payoffs.size());
  if (payoffs.size() > 1) {
    double ss = 0.0;
    for (double v : payoffs) ss += (v - est.mean) * (v - est.mean);
    est.std_error = std::sqrt(ss / static_cast<double>(payoffs.size() - 1) /
                              static_cast<double>(payoffs.size()));
  }
  return est;
}

// Paths write into fixed slots and are reduced in index order afterwards, so
// the result does not depend on the thread count.
template <typename Extract>
std::vector<double> run_paths(const SimConfig& cfg, Mode mode, double level, bool parallel,
                              Extract extract) {
  const PathSimulator sim(cfg, mode, level);
  std::vector<double> values(cfg.n_paths);
  const auto n = static_cast<long>(cfg.n_paths);
#pragma omp parallel for schedule(static) if (parallel)
  for (long i = 0; i < n; ++i) {
    auto rng = path_engine(cfg.seed, static_cast<std::uint64_t>(i));
    values[i] = extract(sim.run(rng));
  }
  return values;
}

double value_truncation(const SimConfig& cfg) {
  const double phi_q = phi(cfg.model, cfg.q).value;
  return std::exp(-cfg.q * cfg.horizon) / phi_q;
}

MCEstimate value_estimate(const SimConfig& cfg, bool parallel) {
  validate_config(cfg);
  auto est = summarize(
      run_paths(cfg, Mode::value, 0.0, parallel, [](const PathOutcome& o) { return o.payoff; }),
      cfg.seed);
  est.truncation_bound = value_truncation(cfg);
  return est;
}

}  // namespace

void validate_config(const SimConfig& cfg) {
  check_common(cfg, true);
  if (!(cfg.q > 0.0)) throw DomainError("simulation: value estimation requires q > 0");
  if (!(cfg.b >= 0.0)) throw DomainError("simulation: barrier must be >= 0");
}

std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t path) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(path + 0x632be59bd9b4e019ULL)));
}

PathResult simulate_dividend_path(const SimConfig& cfg, std::mt19937_64& rng) {
  validate_config(cfg);
  const PathSimulator sim(cfg, Mode::value, 0.0);
  const PathOutcome o = sim.run(rng);
  return {o.payoff, o.ruined, o.ruin_time, o.paid_while_negative, o.paid_above_surplus};
}

MCEstimate mc_value(const SimConfig& cfg) { return value_estimate(cfg, true); }

MCEstimate mc_value_serial(const SimConfig& cfg) { return value_estimate(cfg, false); }

MCEstimate mc_ruin_probability(const SimConfig& cfg) {
  validate_config(cfg);
  return summarize(run_paths(cfg, Mode::value, 0.0, true,
                             [](const PathOutcome& o) { return o.ruined ? 1.0 : 0.0; }),
                   cfg.seed);
}

MCEstimate mc_two_sided_exit(const SimConfig& cfg, double a) {
  check_common(cfg, true);
  if (!(cfg.q >= 0.0)) throw DomainError("mc_two_sided_exit: q must be >= 0");
  if (cfg.x0 > a) throw DomainError("mc_two_sided_exit: requires x0 <= a");
  auto est = summarize(
      run_paths(cfg, Mode::exit, a, true, [](const PathOutcome& o) { return o.payoff; }), cfg.seed);
  est.truncation_bound = std::exp(-cfg.q * cfg.horizon);
  return est;
}

MCEstimate mc_first_passage(const SimConfig& cfg) {
  check_common(cfg, false);
  if (!(cfg.q >= 0.0)) throw DomainError("mc_first_passage: r must be >= 0");
  if (cfg.x0 > cfg.b) throw DomainError("mc_first_passage: requires x0 <= b");
  auto est = summarize(run_paths(cfg, Mode::first_passage, cfg.b, true,
                                 [](const PathOutcome& o) { return o.payoff; }),
                       cfg.seed);
  est.truncation_bound = std::exp(-cfg.q * cfg.horizon);
  if (cfg.q == 0.0 && psi_prime(cfg.model, 0.0) < 0.0)
    est.warning = "r = 0 with negative mean drift: truncation bias is uncontrolled";
  return est;
}

double recommended_horizon(const LevyModel& model, double q, double tolerance) {
  if (!(q > 0.0) || !(tolerance > 0.0)) throw DomainError("recommended_horizon: q and tolerance must be > 0");
  const double phi_q = phi(model, q).value;
  return std::max(1.0, std::log(1.0 / (tolerance * phi_q)) / q);
}

}  // namespace parisian
