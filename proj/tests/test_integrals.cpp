#include <cmath>

#include "doctest.h"
#include "mrjd/integrals.hpp"
#include "mrjd/jumps.hpp"
#include "mrjd/quadrature.hpp"
#include "support/oracles.hpp"

using namespace mrjd;

namespace {

ModelParams gaussian_model(double mu_j = 0.0, double sigma_j = 0.2) {
  ModelParams p;
  p.alpha = 1.0;
  p.sigma = 0.3;
  p.lambda = 5.0;
  p.jumps = JumpSpec::gaussian(mu_j, sigma_j);
  return p;
}

ModelParams kou_model(double eta1 = 2.0, double eta2 = 3.0, double q = 0.5) {
  ModelParams p;
  p.alpha = 1.0;
  p.sigma = 0.3;
  p.lambda = 5.0;
  p.jumps = JumpSpec::double_exponential(eta1, eta2, q);
  return p;
}

}  // namespace

TEST_CASE("integral_a1: u = v = 0 integrates 1/y to alpha t") {
  ModelParams p = gaussian_model();
  for (double t : {0.3, 1.0, 4.0}) {
    const cplx v = integral_a1(cplx(0, 0), cplx(0, 0), t, p);
    CHECK(v.real() == doctest::Approx(p.alpha * t).epsilon(1e-12));
    CHECK(std::fabs(v.imag()) < 1e-12);
  }
}

TEST_CASE("integral_a1: matches a dense Simpson reference") {
  ModelParams p = gaussian_model(0.0, 0.2);
  const cplx u(1.0, 0.0), v(0.0, 0.0);
  const double t = 1.0;
  const cplx got = integral_a1(u, v, t, p);
  const cplx ref = oracles::simpson(
      [&](double y) { return jump_cf(p.jumps, u * y) / y; }, std::exp(-t), 1.0);
  CHECK(std::abs(got - ref) < 1e-8);
}

TEST_CASE("integral_a1: conjugate symmetry") {
  ModelParams p = gaussian_model(0.0, 0.15);
  const cplx u(2.0, 0.0), v(0.3, 0.0);
  const cplx a = integral_a1(u, v, 0.8, p);
  const cplx b = integral_a1(-std::conj(u), std::conj(v), 0.8, p);
  CHECK(std::abs(b - std::conj(a)) < 1e-10);
}

TEST_CASE("integral_a23: constant-denominator cases") {
  ModelParams p = kou_model(2.0, 3.0, 0.5);
  // u = 0: A2 = alpha t / (eta1 - theta)
  const cplx a2 = integral_a23(cplx(0, 0), 0.5, 1.5, p, KouIntegral::a2);
  CHECK(a2.real() == doctest::Approx(1.5 / (2.0 - 0.5)).epsilon(1e-12));
  CHECK(std::fabs(a2.imag()) < 1e-12);

  ModelParams p2 = kou_model(2.0, 3.0, 0.5);
  p2.alpha = 0.5;
  const cplx a3 = integral_a23(cplx(0, 0), 0.0, 2.0, p2, KouIntegral::a3);
  CHECK(a3.real() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("integral_a23: closed form equals adaptive quadrature") {
  ModelParams p = kou_model(2.0, 3.0, 0.5);
  for (double ur : {0.5, 1.0, 7.0, 40.0}) {
    for (double theta : {0.0, 0.4, -0.8}) {
      const cplx u(ur, 0.0);
      IntegralDiagnostics diag;
      const cplx closed = integral_a23(u, theta, 1.0, p, KouIntegral::a2, &diag);
      const cplx quad = integrate_gk_or_throw(
          [&](double y) {
            return 1.0 / (y * (cplx(p.jumps.eta1 - theta) - cplx(0, 1) * u * y));
          },
          std::exp(-1.0), 1.0, 1e-12);
      CHECK(std::abs(closed - quad) < 1e-10);
      CHECK(!diag.used_quadrature_fallback);
    }
  }
}

TEST_CASE("integral_a23: complex argument (pricing path) stays accurate") {
  ModelParams p = kou_model(12.0, 9.0, 0.45);
  // u = -x - iR as the damped pricer evaluates it
  const cplx u(-3.0, -1.25);
  const cplx closed = integral_a23(u, 0.1, 1.0, p, KouIntegral::a2);
  const cplx quad = integrate_gk_or_throw(
      [&](double y) {
        return 1.0 / (y * (cplx(p.jumps.eta1 - 0.1) - cplx(0, 1) * u * y));
      },
      std::exp(-1.0), 1.0, 1e-12);
  CHECK(std::abs(closed - quad) < 1e-10);
}

TEST_CASE("integral_a23: pole on the path is reported") {
  ModelParams p = kou_model(2.0, 3.0, 0.5);
  // With theta = 1 and u = -1.6i the denominator 1 - 1.6 y vanishes at
  // y = 0.625, inside [e^{-1}, 1].
  CHECK_THROWS_AS(integral_a23(cplx(0.0, -1.6), 1.0, 1.0, p, KouIntegral::a2),
                  mrjd::domain_error);
}

TEST_CASE("integral_a23: degenerate denominator is a domain error") {
  ModelParams p = kou_model(2.0, 3.0, 0.5);
  CHECK_THROWS_AS(integral_a23(cplx(1, 0), 2.0, 1.0, p, KouIntegral::a2),
                  mrjd::domain_error);
}

TEST_CASE("jump_cf_time_integral: gaussian route equals direct quadrature") {
  ModelParams p = gaussian_model(0.05, 0.25);
  for (double theta : {0.0, 0.7, -0.4}) {
    for (double t : {0.2, 1.0, 3.0}) {
      const cplx u(1.3, 0.0);
      const cplx via_a1 = jump_cf_time_integral(p, theta, t, u);
      const cplx direct = integrate_gk_or_throw(
                              [&](double y) {
                                return jump_cf(p.jumps,
                                               cplx(0.0, -theta) + u * y) /
                                       y;
                              },
                              std::exp(-p.alpha * t), 1.0, 1e-12) /
                          p.alpha;
      CHECK(std::abs(via_a1 - direct) < 1e-10);
    }
  }
}

TEST_CASE("jump_cf_time_integral: kou route equals direct quadrature") {
  ModelParams p = kou_model(12.0, 9.0, 0.45);
  for (double theta : {0.0, 0.5, -0.5}) {
    const cplx u(2.0, 0.0);
    const double t = 0.7;
    const cplx via_a23 = jump_cf_time_integral(p, theta, t, u);
    const cplx direct = integrate_gk_or_throw(
                            [&](double y) {
                              return jump_cf(p.jumps,
                                             cplx(0.0, -theta) + u * y) /
                                     y;
                            },
                            std::exp(-p.alpha * t), 1.0, 1e-12) /
                        p.alpha;
    CHECK(std::abs(via_a23 - direct) < 1e-10);
  }
}

TEST_CASE("jump_cf_time_integral: t = 0 vanishes") {
  ModelParams p = gaussian_model();
  CHECK(jump_cf_time_integral(p, 0.3, 0.0, cplx(1, 0)) == cplx(0.0, 0.0));
}
