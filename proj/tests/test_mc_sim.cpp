#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "parisian/errors.hpp"
#include "parisian/mc_sim.hpp"
#include "parisian/optimal_barrier.hpp"
#include "parisian/valuation.hpp"

using namespace parisian;
using doctest::Approx;

namespace {

SimConfig brownian_config(std::size_t n) {
  SimConfig cfg;
  cfg.model = oracle::brownian_reference();
  cfg.q = 2.0;
  cfg.p = 4.0;
  cfg.n_paths = n;
  cfg.dt = 1e-3;
  cfg.horizon = recommended_horizon(cfg.model, cfg.q, 1e-5);
  cfg.seed = 17;
  return cfg;
}

bool within(const MCEstimate& est, double target, double k = 3.0) {
  return std::abs(est.mean - target) <= k * est.std_error + est.truncation_bound;
}

}  // namespace

TEST_CASE("configuration checks") {
  auto cfg = brownian_config(10);
  cfg.q = 0.0;
  CHECK_THROWS_AS(mc_value(cfg), DomainError);
  cfg = brownian_config(10);
  cfg.b = -1.0;
  CHECK_THROWS_AS(mc_value(cfg), DomainError);
  cfg = brownian_config(10);
  cfg.dt = 0.1;
  CHECK_THROWS_AS(mc_value(cfg), DomainError);
  cfg = brownian_config(10);
  cfg.p = 0.0;
  CHECK_THROWS_AS(mc_value(cfg), DomainError);
}

TEST_CASE("lump sum above the barrier") {
  auto cfg = brownian_config(1);
  cfg.b = 0.5;
  cfg.x0 = 1.5;
  cfg.horizon = 1e-9;
  auto rng = path_engine(1, 0);
  const auto path = simulate_dividend_path(cfg, rng);
  CHECK(path.discounted_dividends == Approx(1.0).epsilon(1e-3));
  CHECK_FALSE(path.paid_while_negative);
  CHECK_FALSE(path.paid_above_surplus);
}

TEST_CASE("Parisian clock is not consulted while the path stays non-negative") {
  // Large drift and short horizon: paths never dip below 0, so the dividends
  // are the same for any Parisian rate.
  auto cfg = brownian_config(200);
  cfg.model = LevyModel::brownian(20.0, 0.1);
  cfg.x0 = cfg.b = 1.0;
  cfg.horizon = 0.5;
  cfg.p = 1.0;
  cfg.dt = 1e-3;
  const auto slow = mc_value(cfg);
  cfg.p = 9.0;
  const auto fast = mc_value(cfg);
  CHECK(slow.mean == fast.mean);
}

TEST_CASE("admissibility along paths") {
  for (const auto& model : {oracle::brownian_reference(), oracle::cl_two_phase()}) {
    auto cfg = brownian_config(1);
    cfg.model = model;
    cfg.q = 0.5;
    cfg.p = 1.0;
    cfg.b = 0.8;
    cfg.x0 = 2.0;
    cfg.horizon = 5.0;
    for (std::uint64_t i = 0; i < 300; ++i) {
      auto rng = path_engine(5, i);
      const auto path = simulate_dividend_path(cfg, rng);
      CHECK_FALSE(path.paid_while_negative);
      CHECK_FALSE(path.paid_above_surplus);
      CHECK(path.discounted_dividends >= 1.2 - 1e-12);
      if (path.ruined) CHECK(path.ruin_time <= cfg.horizon);
    }
  }
}

TEST_CASE("seed determinism and serial reference") {
  auto cfg = brownian_config(3000);
  cfg.b = 0.2;
  const auto a = mc_value(cfg);
  const auto b = mc_value(cfg);
  const auto s = mc_value_serial(cfg);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.mean == s.mean);
  CHECK(a.std_error == s.std_error);
  cfg.seed = 18;
  CHECK(mc_value(cfg).mean != a.mean);
}

TEST_CASE("Brownian reference value at b = 0") {
  const auto est = mc_value(brownian_config(50000));
  CHECK(within(est, 0.5));
}

TEST_CASE("exit and first passage degenerate starts") {
  auto cfg = brownian_config(100);
  cfg.x0 = 1.0;
  const auto exit = mc_two_sided_exit(cfg, 1.0);
  CHECK(exit.mean == 1.0);
  CHECK(exit.std_error == 0.0);
  cfg.b = 1.0;
  const auto fp = mc_first_passage(cfg);
  CHECK(fp.mean == 1.0);
  CHECK(fp.std_error == 0.0);
  cfg.x0 = 2.0;
  CHECK_THROWS_AS(mc_two_sided_exit(cfg, 1.0), DomainError);
}

TEST_CASE("first passage truncation bound shrinks with the horizon") {
  auto cfg = brownian_config(2000);
  cfg.b = 1.0;
  cfg.horizon = 2.0;
  const double short_bound = mc_first_passage(cfg).truncation_bound;
  cfg.horizon = 4.0;
  const auto est = mc_first_passage(cfg);
  CHECK(est.truncation_bound < short_bound);
  CHECK(within(est, std::exp(-1.0), 4.0));
}

TEST_CASE("first passage with r = 0 and negative drift warns") {
  auto cfg = brownian_config(100);
  cfg.model = LevyModel::brownian(-0.5, 1.0);
  cfg.q = 0.0;
  cfg.b = 0.5;
  cfg.horizon = 2.0;
  CHECK_FALSE(mc_first_passage(cfg).warning.empty());
}

TEST_CASE("Parisian clock variants agree on ruin probability") {
  std::vector<SimConfig> configs;
  const std::vector<LevyModel> models{oracle::cl_reference(), oracle::cl_two_phase(),
                                      LevyModel::hyperexponential(1.0, 0.0, 2.0, {0.5, 0.5}, {1.5, 4.0}),
                                      oracle::brownian_reference(), LevyModel::brownian(0.5, 1.0)};
  for (const auto& m : models) {
    for (double p : {0.5, 3.0}) {
      SimConfig cfg;
      cfg.model = m;
      cfg.q = 0.5;
      cfg.p = p;
      cfg.b = 1.0;
      cfg.x0 = 0.5;
      cfg.dt = 1e-3;
      cfg.horizon = 3.0;
      cfg.n_paths = m.sigma > 0 ? 4000 : 20000;
      configs.push_back(cfg);
    }
  }
  REQUIRE(configs.size() == 10);
  for (auto cfg : configs) {
    cfg.clock = ParisianClock::poisson_marks;
    const auto marks = mc_ruin_probability(cfg);
    cfg.clock = ParisianClock::per_excursion;
    cfg.seed += 1000;
    const auto excursion = mc_ruin_probability(cfg);
    cfg.clock = ParisianClock::exposure_threshold;
    cfg.seed += 1000;
    const auto exposure = mc_ruin_probability(cfg);
    const double s1 = std::hypot(marks.std_error, excursion.std_error);
    const double s2 = std::hypot(marks.std_error, exposure.std_error);
    CHECK(std::abs(marks.mean - excursion.mean) <= 3.0 * s1);
    CHECK(std::abs(marks.mean - exposure.mean) <= 3.0 * s2);
  }
}

TEST_CASE("halving dt leaves the estimate within two standard errors") {
  auto cfg = brownian_config(20000);
  const auto coarse = mc_value(cfg);
  cfg.dt = 5e-4;
  const auto fine = mc_value(cfg);
  CHECK(std::abs(coarse.mean - fine.mean) < 2.0 * std::hypot(coarse.std_error, fine.std_error));
}

TEST_CASE("bounded variation path held at a zero barrier is not killed") {
  // Reflection must leave u exactly at b; a -ulp remainder would expose the
  // path to the Parisian clock while it pays out at the origin.
  SimConfig cfg;
  cfg.model = oracle::cl_two_phase();
  cfg.q = 0.1;
  cfg.p = 1.0;
  cfg.b = 0.0;
  cfg.x0 = 0.0;
  cfg.n_paths = 40000;
  cfg.horizon = recommended_horizon(cfg.model, cfg.q, 1e-5);
  cfg.seed = 23;
  const auto est = mc_value(cfg);
  CHECK(within(est, barrier_value(make_context(cfg.model, cfg.q, cfg.p), 0.0, 0.0)));
}
