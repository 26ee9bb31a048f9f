#include "swapgame/scale.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace swapgame;

namespace {

ModelParams default_params() {
  ModelParams m;
  m.r = 0.03;
  m.nu = 0.2;
  m.lambda = 1.0;
  m.eta = 2.0;
  m.mu = calibrate_drift(m.r, m.nu, m.lambda, m.eta);
  return m;
}

}  // namespace

TEST_CASE("coefficient construction invariants") {
  const ScaleCoefficients sc = build_coefficients(default_params());
  REQUIRE(sc.c.size() == 2);
  CHECK(sc.phi_r == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(sc.c[0] > 0.0);
  CHECK(sc.c[1] > 0.0);
  CHECK(sc.c[0] + sc.c[1] ==
        doctest::Approx(1.0 / sc.phi_prime_at_phi_r).epsilon(1e-13));
  CHECK(sc.xi[0] < sc.model.eta);
  CHECK(sc.xi[1] > sc.model.eta);

  ModelParams degenerate = default_params();
  degenerate.nu = 0.0;
  degenerate.mu = 0.5;
  CHECK_THROWS_AS((void)build_coefficients(degenerate), std::invalid_argument);
}

TEST_CASE("Laplace transform identity (phi(s) - r) int e^{-sx} W(x) dx = 1") {
  const ScaleCoefficients sc = build_coefficients(default_params());
  const ModelParams& m = sc.model;
  for (double gap : {0.5, 1.0, 2.0}) {
    const double s = sc.phi_r + gap;
    const double cutoff = 60.0 / gap;
    const double integral =
        oracles::integrate([&](double x) { return std::exp(-s * x) * W(sc, x); },
                           0.0, cutoff);
    const double product = (laplace_exponent(m, s) - m.r) * integral;
    CHECK(std::abs(product - 1.0) < 1e-6);
  }
}

TEST_CASE("boundary behaviour at zero") {
  const ScaleCoefficients sc = build_coefficients(default_params());
  CHECK(W(sc, 0.0) == 0.0);
  CHECK(W(sc, -0.5) == 0.0);
  const double target = 2.0 / (sc.model.nu * sc.model.nu);
  CHECK(std::abs(W_prime(sc, 0.0) - target) < 1e-10);
  CHECK(Z(sc, 0.0) == 1.0);
  CHECK(Z(sc, -1.0) == 1.0);
  CHECK(zeta(sc, 0.0) == 1.0);
  CHECK(zeta(sc, -2.0) == 1.0);
}

TEST_CASE("derivatives match finite differences") {
  const ScaleCoefficients sc = build_coefficients(default_params());
  for (double x : {0.1, 0.5, 1.5, 3.0, 8.0}) {
    const double h = 1e-6 * std::max(1.0, x);
    const double fd1 = (W(sc, x + h) - W(sc, x - h)) / (2.0 * h);
    CHECK(W_prime(sc, x) == doctest::Approx(fd1).epsilon(1e-8));
    const double fd2 = (W_prime(sc, x + h) - W_prime(sc, x - h)) / (2.0 * h);
    CHECK(W_double_prime(sc, x) == doctest::Approx(fd2).epsilon(1e-8));
  }
}

TEST_CASE("zeta derivative matches finite differences and is negative") {
  const ScaleCoefficients sc = build_coefficients(default_params());
  for (double x : {0.1, 0.5, 1.5, 3.0, 8.0}) {
    const double h = 1e-6 * std::max(1.0, x);
    const double fd = (zeta(sc, x + h) - zeta(sc, x - h)) / (2.0 * h);
    CHECK(zeta_prime(sc, x) == doctest::Approx(fd).epsilon(1e-8));
    CHECK(zeta_prime(sc, x) < 0.0);
  }
  CHECK(zeta_prime(sc, 0.0) == 0.0);
  CHECK(zeta_prime(sc, -1.0) == 0.0);
}

TEST_CASE("Z equals 1 + r * quadrature of W") {
  const ScaleCoefficients sc = build_coefficients(default_params());
  for (double x : {0.25, 1.0, 2.5, 6.0}) {
    const double quad =
        oracles::integrate([&](double y) { return W(sc, y); }, 0.0, x);
    CHECK(Z(sc, x) ==
          doctest::Approx(1.0 + sc.model.r * quad).epsilon(1e-10));
  }
}

TEST_CASE("tilted scale function saturates at the weight sum") {
  const ScaleCoefficients sc = build_coefficients(default_params());
  double prev = 0.0;
  for (double x = 0.0; x <= 10.0; x += 0.25) {
    const double wt = W_tilted(sc, x);
    CHECK(wt >= prev);
    prev = wt;
  }
  CHECK(std::abs(W_tilted(sc, 50.0) - (sc.c[0] + sc.c[1])) < 1e-8);
  // Tilting is exact: e^{-phi_r x} W(x) at a moderate x.
  CHECK(W_tilted(sc, 3.0) ==
        doctest::Approx(std::exp(-sc.phi_r * 3.0) * W(sc, 3.0)).epsilon(1e-12));
}

TEST_CASE("zeta: consistency, bounds, monotonicity, limits") {
  const ScaleCoefficients sc = build_coefficients(default_params());
  double prev = 1.0;
  for (double x = 0.05; x <= 20.0; x += 0.35) {
    const double z = zeta(sc, x);
    CHECK(z > 0.0);
    CHECK(z < 1.0);
    CHECK(z < prev);
    prev = z;
    // Same quantity assembled from the growing pieces.  That route loses
    // about e^{phi_r x} * ulp to cancellation, so the tolerance tracks it.
    const double direct = Z(sc, x) - sc.model.r / sc.phi_r * W(sc, x);
    const double tol = std::max(1e-12, 1e-14 * std::exp(sc.phi_r * x));
    CHECK(std::abs(z - direct) < tol);
  }
  CHECK(zeta(sc, 400.0) < 1e-10);
}

TEST_CASE("asymptotic ratios of Z and W") {
  const ScaleCoefficients sc = build_coefficients(default_params());
  const double x = 50.0;
  CHECK(Z(sc, x) / W(sc, x) ==
        doctest::Approx(sc.model.r / sc.phi_r).epsilon(1e-8));
  CHECK(W_prime(sc, x) / W(sc, x) == doctest::Approx(sc.phi_r).epsilon(1e-8));
}

TEST_CASE("log-concavity: W'/W is nonincreasing") {
  const ScaleCoefficients sc = build_coefficients(default_params());
  double prev = W_prime(sc, 0.01) / W(sc, 0.01);
  for (double x = 0.11; x <= 12.0; x += 0.1) {
    const double ratio = W_prime(sc, x) / W(sc, x);
    CHECK(ratio <= prev + 1e-12);
    prev = ratio;
  }
}

TEST_CASE("Brownian special case matches its closed form and the small-lambda limit") {
  ModelParams m = default_params();
  m.lambda = 0.0;
  m.mu = calibrate_drift(m.r, m.nu, m.lambda, m.eta);
  const ScaleCoefficients sc = build_coefficients(m);
  REQUIRE(sc.c.size() == 1);

  const double disc = std::sqrt(m.mu * m.mu + 2.0 * m.nu * m.nu * m.r);
  const double theta_plus = (-m.mu + disc) / (m.nu * m.nu);
  const double theta_minus = (m.mu + disc) / (m.nu * m.nu);
  for (double x : {0.2, 1.0, 4.0}) {
    const double closed =
        (std::exp(theta_plus * x) - std::exp(-theta_minus * x)) /
        (0.5 * m.nu * m.nu * (theta_plus + theta_minus));
    CHECK(W(sc, x) == doctest::Approx(closed).epsilon(1e-12));
  }

  ModelParams tiny = m;
  tiny.lambda = 1e-8;
  tiny.mu = calibrate_drift(tiny.r, tiny.nu, tiny.lambda, tiny.eta);
  const ScaleCoefficients sct = build_coefficients(tiny);
  for (double x : {0.2, 1.0, 4.0}) {
    CHECK(W(sct, x) == doctest::Approx(W(sc, x)).epsilon(1e-6));
    CHECK(zeta(sct, x) == doctest::Approx(zeta(sc, x)).epsilon(1e-6));
  }
}

TEST_CASE("random admissible parameters keep the structural invariants") {
  std::mt19937 gen(777u);
  std::uniform_real_distribution<double> ur(0.005, 0.08);
  std::uniform_real_distribution<double> unu(0.05, 0.6);
  std::uniform_real_distribution<double> ulam(0.0, 3.0);
  std::uniform_real_distribution<double> ueta(0.3, 6.0);

  for (int trial = 0; trial < 100; ++trial) {
    ModelParams m;
    m.r = ur(gen);
    m.nu = unu(gen);
    m.lambda = ulam(gen);
    m.eta = ueta(gen);
    m.mu = calibrate_drift(m.r, m.nu, m.lambda, m.eta);
    const ScaleCoefficients sc = build_coefficients(m);

    CHECK(W(sc, 0.0) == 0.0);
    CHECK(std::abs(W_prime(sc, 0.0) - 2.0 / (m.nu * m.nu)) <
          1e-10 * std::max(1.0, 2.0 / (m.nu * m.nu)));
    for (double ci : sc.c) CHECK(ci > 0.0);

    double prev = 1.0;
    for (double x = 0.3; x <= 9.0; x += 0.87) {
      const double z = zeta(sc, x);
      CHECK(z > 0.0);
      CHECK(z < prev);
      prev = z;
    }
  }
}
