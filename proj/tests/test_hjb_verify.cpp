#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "parisian/errors.hpp"
#include "parisian/hjb_verify.hpp"
#include "parisian/optimal_barrier.hpp"
#include "parisian/valuation.hpp"

using namespace parisian;
using doctest::Approx;

namespace {

std::vector<ParisianContext> reference_contexts() {
  return {make_context(oracle::brownian_reference(), 2.0, 8.0),
          make_context(oracle::cl_two_phase(), 0.1, 1.0),
          make_context(LevyModel::hyperexponential(1.5, 0.6, 1.2, {0.7, 0.3}, {1.0, 4.0}), 0.2, 2.0)};
}

}  // namespace

TEST_CASE("exponential eigenfunction of the generator") {
  for (const auto& ctx : reference_contexts()) {
    const double k = ctx.phi_pq;
    const std::function<double(double)> v = [k](double x) { return std::exp(k * x); };
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double x = -3.0 + 6.0 * i / 99.0;
      const double r = apply_generator(ctx.model, v, x) - (ctx.q + ctx.p) * v(x);
      worst = std::max(worst, std::abs(r) / v(x));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("linear functions under pure diffusion") {
  const auto bm = oracle::brownian_reference();
  const std::function<double(double)> v = [](double x) { return x + 3.0; };
  for (double x : {-2.0, 0.5, 4.0}) CHECK(apply_generator(bm, v, x) == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("scale function is q-harmonic on (0, inf)") {
  for (const auto& ctx : reference_contexts()) {
    const auto basis = ctx.basis;
    const std::function<double(double)> v = [&](double x) { return w(basis, x); };
    GeneratorOptions opts;
    opts.kinks = {0.0};
    for (double x = 0.1; x <= 5.0; x += 0.1)
      CHECK(std::abs(apply_generator(ctx.model, v, x, opts) - ctx.q * v(x)) < 5e-5);
  }
}

TEST_CASE("points near kinks are rejected") {
  const auto bm = oracle::brownian_reference();
  GeneratorOptions opts;
  opts.kinks = {0.0, 1.0};
  const std::function<double(double)> v = [](double x) { return x; };
  CHECK_THROWS_AS(apply_generator(bm, v, 5e-5, opts), DomainError);
  CHECK_THROWS_AS(apply_generator(bm, v, 1.0 - 1e-5, opts), DomainError);
  CHECK_NOTHROW(apply_generator(bm, v, 0.5, opts));
}

TEST_CASE("residual report at the optimal barrier") {
  for (const auto& ctx : reference_contexts()) {
    const double b = optimal_barrier_parisian(ctx).b_star;
    const auto rep = hjb_residual_report(ctx, b, {-3.0, b + 5.0, 241});
    REQUIRE(rep.grid.size() == rep.residuals.size());
    for (std::size_t i = 1; i < rep.grid.size(); ++i) CHECK(rep.grid[i] > rep.grid[i - 1]);
    CHECK(rep.max_abs_residual_below_bstar < 5e-5);
    CHECK(rep.max_residual_above_bstar <= 5e-5);
    CHECK(rep.slopes_ok());

    // Finite-difference slopes agree with the closed form away from kinks.
    const BarrierValuation v(ctx, b);
    for (double x : {-1.3, 0.05 + b / 2.0, b + 1.1}) {
      if (std::abs(x) < 1e-3 || std::abs(x - b) < 1e-3) continue;
      const double h = 1e-6;
      CHECK(v.derivative(x) == Approx((v(x + h) - v(x - h)) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("serial and parallel reports agree bit for bit") {
  const auto ctx = reference_contexts()[1];
  const double b = optimal_barrier_parisian(ctx).b_star;
  const auto a = hjb_residual_report(ctx, b, {-2.0, b + 2.0, 50});
  const auto s = hjb_residual_report_serial(ctx, b, {-2.0, b + 2.0, 50});
  CHECK(a.residuals == s.residuals);
  CHECK(a.slopes == s.slopes);
}

TEST_CASE("suboptimal barrier fails the verification conditions") {
  for (const auto& ctx : reference_contexts()) {
    const double b_star = optimal_barrier_parisian(ctx).b_star;
    if (b_star <= 0.0) continue;
    const double b = b_star + 1.0;
    const auto rep = hjb_residual_report(ctx, b, {-3.0, b + 5.0, 241});
    bool violated = false;
    for (std::size_t i = 0; i < rep.grid.size(); ++i) {
      const double x = rep.grid[i];
      if (x > b_star && x < b && (!rep.slope_check[i] || std::abs(rep.residuals[i]) > 5e-5)) violated = true;
    }
    CHECK(violated);
  }
}
