#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "parisian/errors.hpp"
#include "parisian/levy_model.hpp"

using namespace parisian;
using doctest::Approx;

TEST_CASE("psi examples") {
  const auto bm = oracle::brownian_reference();
  const auto cl = oracle::cl_reference();
  CHECK(psi(bm, 1.0) == Approx(2.0).epsilon(1e-15));
  CHECK(psi(bm, 0.0) == 0.0);
  CHECK(psi(cl, 0.0) == 0.0);
  CHECK(psi(cl, 1.0) == Approx(1.5).epsilon(1e-15));
  CHECK_THROWS_AS(psi(bm, -0.1), DomainError);
}

TEST_CASE("psi closed form agrees with the Levy-Khintchine integral") {
  const auto m = oracle::cl_two_phase();
  for (double theta : {0.1, 0.7, 2.0, 5.0})
    CHECK(psi(m, theta) == Approx(oracle::psi_by_quadrature(m, theta)).epsilon(1e-10));
}

TEST_CASE("psi_prime examples") {
  const auto bm = oracle::brownian_reference();
  CHECK(psi_prime(bm, 0.0) == Approx(1.0).epsilon(1e-15));
  CHECK(psi_prime(bm, 2.0) == Approx(5.0).epsilon(1e-14));
  CHECK(psi_prime(oracle::cl_reference(), 0.0) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("phi examples") {
  const auto bm = oracle::brownian_reference();
  // (1/sigma^2)(sqrt(c^2 + 2 sigma^2 r) - c)
  CHECK(phi(bm, 2.0).value == Approx((std::sqrt(9.0) - 1.0) / 2.0).epsilon(1e-14));
  CHECK(phi(bm, 0.0).value == 0.0);
  const auto cl = oracle::cl_reference();
  const double expected = 1.28077640640441513745535246399;  // (1 + sqrt 17)/4
  CHECK(phi(cl, 2.0).value == Approx(expected).epsilon(1e-14));
  const double bisected = oracle::bisect_root([&](double t) { return psi(cl, t) - 2.0; }, 0.0, 10.0);
  CHECK(phi(cl, 2.0).value == Approx(bisected).epsilon(1e-13));
  CHECK(phi(cl, 2.0).residual < 1e-12);
  CHECK_THROWS_AS(phi(bm, -1.0), DomainError);
}

TEST_CASE("phi at r = 0 with negative mean drift is the positive root") {
  const auto m = LevyModel::hyperexponential(0.5, 0.0, 1.0, {1.0}, {1.0});  // psi'(0) = -0.5
  const auto root = phi(m, 0.0);
  CHECK(root.value > 0.0);
  // psi = 0.5 t - t/(1+t) vanishes at t = 1
  CHECK(root.value == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("validate reports every invariant") {
  const auto ok = validate(oracle::brownian_reference());
  CHECK(ok.ok());
  CHECK(ok.levy_mass == 0.0);
  const auto cl = validate(oracle::cl_reference());
  CHECK(cl.ok());
  CHECK(cl.levy_mass == 1.0);

  LevyModel bad;
  bad.drift = 1.0;
  bad.jumps = {{0.5, 0.5}, {1.0, 2.0}, 1.0};
  bad.jumps.weights[1] = -0.5;
  const auto rep = validate(bad);
  CHECK_FALSE(rep.ok());
  CHECK(rep.failures().find("jump_weights_positive") != std::string::npos);
  CHECK_THROWS_AS(require_valid(bad), ValidationError);

  LevyModel degenerate;
  degenerate.drift = 1.0;
  CHECK(validate(degenerate).failures().find("non_degenerate") != std::string::npos);

  LevyModel unordered;
  unordered.drift = 1.0;
  unordered.jumps = {{0.5, 0.5}, {2.0, 1.0}, 1.0};
  CHECK(validate(unordered).failures().find("jump_rates_strictly_increasing") != std::string::npos);

  LevyModel negative_drift;
  negative_drift.drift = -1.0;
  negative_drift.jumps = {{1.0}, {1.0}, 1.0};
  CHECK(validate(negative_drift).failures().find("bounded_variation_positive_drift") != std::string::npos);
}

TEST_CASE("property: psi is convex, phi inverts psi, phi is monotone") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const auto m = oracle::random_model(rng);
    for (int i = 0; i < 50; ++i) {
      const double a = 10.0 * u(rng), b = 10.0 * u(rng), t = u(rng);
      CHECK(psi(m, t * a + (1 - t) * b) <= t * psi(m, a) + (1 - t) * psi(m, b) + 1e-9);
    }
    const double phi0 = phi(m, 0.0).value;
    for (int i = 0; i < 10; ++i) {
      const double lambda = phi0 + 0.01 + 5.0 * u(rng);
      CHECK(phi(m, psi(m, lambda)).value == Approx(lambda).epsilon(1e-8));
    }
    double prev = phi(m, 0.0).value;
    for (double r = 0.1; r < 20.0; r *= 1.7) {
      const double cur = phi(m, r).value;
      CHECK(cur > prev);
      prev = cur;
    }
    for (int i = 0; i < 10; ++i) {
      const double theta = 10.0 * u(rng) + 1e-3;
      const double h = 1e-6 * std::max(1.0, theta);
      const double fd = (psi(m, theta + h) - psi(m, theta - h)) / (2 * h);
      CHECK(psi_prime(m, theta) == Approx(fd).epsilon(1e-6));
    }
  }
}
