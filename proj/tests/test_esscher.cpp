#include <cmath>

#include "doctest.h"
#include "mrjd/charfn.hpp"
#include "mrjd/esscher.hpp"
#include "mrjd/math_utils.hpp"

using namespace mrjd;

namespace {

ModelParams bsch(double alpha, double mu, double sigma) {
  ModelParams p;
  p.alpha = alpha;
  p.mu = mu;
  p.sigma = sigma;
  return p;
}

ModelParams merton_model() {
  ModelParams p;
  p.alpha = 1.0;
  p.mu = 0.0;
  p.sigma = 0.2;
  p.lambda = 5.0;
  p.jumps = JumpSpec::gaussian(0.0, 0.1);
  return p;
}

ModelParams kou_model() {
  ModelParams p;
  p.alpha = 2.0;
  p.mu = 0.0;
  p.sigma = 0.25;
  p.lambda = 8.0;
  p.jumps = JumpSpec::double_exponential(12.0, 9.0, 0.45);
  return p;
}

}  // namespace

TEST_CASE("martingale_residual: vanishes at theta = 0 when rates balance") {
  // rT = mu (1 - e^{-aT}) + sigma^2 (1 - e^{-2aT}) / (4a)
  ModelParams p = bsch(1.0, 0.05, 0.3);
  MarketParams mkt;
  mkt.T = 1.0;
  mkt.s0 = 1.0;
  mkt.r = (p.mu * one_minus_exp(p.alpha * mkt.T) +
           p.sigma * p.sigma * one_minus_exp(2.0 * p.alpha * mkt.T) /
               (4.0 * p.alpha)) /
          mkt.T;
  CHECK(std::fabs(martingale_residual(p, mkt, 0.0)) < 1e-14);
}

TEST_CASE("martingale_residual: zero at the closed-form no-jump theta") {
  ModelParams p = bsch(1.0, 0.05, 0.3);
  MarketParams mkt{0.02, 1.0, 1.0};
  const double theta = bsch_theta_closed_form(p, mkt);
  CHECK(std::fabs(martingale_residual(p, mkt, theta)) < 1e-12);
}

TEST_CASE("solve_theta: matches the closed form on an (alpha, sigma, T) grid") {
  for (double alpha : {0.5, 1.0, 3.0}) {
    for (double sigma : {0.1, 0.3, 0.8}) {
      for (double T : {0.25, 1.0, 2.0}) {
        ModelParams p = bsch(alpha, 0.02, sigma);
        MarketParams mkt{0.03, T, 100.0};
        const EsscherSolution sol = solve_theta(p, mkt);
        CHECK(sol.theta_gs ==
              doctest::Approx(bsch_theta_closed_form(p, mkt)).epsilon(1e-9));
        CHECK(std::fabs(sol.residual) < 1e-10);
      }
    }
  }
}

TEST_CASE("solve_theta: trivial root when the rate balances at zero") {
  ModelParams p = bsch(1.0, 0.05, 0.3);
  MarketParams mkt;
  mkt.T = 1.0;
  mkt.s0 = 1.0;
  mkt.r = (p.mu * one_minus_exp(p.alpha * mkt.T) +
           p.sigma * p.sigma * one_minus_exp(2.0 * p.alpha * mkt.T) /
               (4.0 * p.alpha)) /
          mkt.T;
  const EsscherSolution sol = solve_theta(p, mkt);
  CHECK(std::fabs(sol.theta_gs) < 1e-12);
}

TEST_CASE("solve_theta: Merton root solves the condition") {
  ModelParams p = merton_model();
  MarketParams mkt{0.03, 0.5, 1.0};
  const EsscherSolution sol = solve_theta(p, mkt);
  CHECK(std::fabs(sol.residual) < 1e-10);
  CHECK(std::fabs(martingale_residual(p, mkt, sol.theta_gs)) < 1e-10);
}

TEST_CASE("solve_theta: Kou root, admissible range, dense-scan cross-check") {
  ModelParams p = kou_model();
  MarketParams mkt{0.02, 1.0, 1.0};
  const EsscherSolution sol = solve_theta(p, mkt);
  CHECK(sol.theta_gs > -p.jumps.eta2);
  CHECK(sol.theta_gs <= p.jumps.eta1 - 1.0);
  CHECK(std::fabs(sol.residual) < 1e-10);

  // independent dense-grid sign scan around the root
  const auto [lo, hi] = esscher_theta_interval(p);
  double prev_theta = lo;
  double prev = martingale_residual(p, mkt, prev_theta);
  double found = std::numeric_limits<double>::quiet_NaN();
  const int steps = 4000;
  for (int i = 1; i <= steps; ++i) {
    const double th = lo + (hi - lo) * double(i) / steps;
    const double cur = martingale_residual(p, mkt, th);
    if (prev * cur <= 0.0) {
      found = 0.5 * (prev_theta + th);
      break;
    }
    prev = cur;
    prev_theta = th;
  }
  CHECK(std::isfinite(found));
  CHECK(std::fabs(found - sol.theta_gs) < (hi - lo) / steps);
}

TEST_CASE("solve_theta: residual is monotone across the solved bracket") {
  for (const ModelParams& p : {merton_model(), kou_model()}) {
    MarketParams mkt{0.02, 1.0, 1.0};
    const EsscherSolution sol = solve_theta(p, mkt);
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 64; ++i) {
      const double th =
          sol.bracket.first +
          (sol.bracket.second - sol.bracket.first) * double(i) / 64.0;
      const double r = martingale_residual(p, mkt, th);
      CHECK(r >= prev - 1e-12);
      prev = r;
    }
  }
}

TEST_CASE("solved theta makes the discounted spot a martingale via the CF") {
  for (const ModelParams& p :
       {bsch(1.0, 0.05, 0.3), merton_model(), kou_model()}) {
    MarketParams mkt{0.03, 1.0, 1.0};
    const EsscherSolution sol = solve_theta(p, mkt);
    // E_Q[S_T] = S0 e^{rT}  <=>  phi^theta_{Y_T}(-i) = e^{rT}
    const cplx growth = cf_logprice(p, sol.theta_gs, mkt.T, cplx(0.0, -1.0));
    CHECK(std::abs(growth - std::exp(mkt.r * mkt.T)) <
          1e-8 * std::exp(mkt.r * mkt.T));
  }
}

TEST_CASE("martingale_residual: inadmissible theta throws") {
  ModelParams p = kou_model();
  MarketParams mkt{0.02, 1.0, 1.0};
  CHECK_THROWS_AS(martingale_residual(p, mkt, p.jumps.eta1),
                  mrjd::domain_error);
  CHECK_THROWS_AS(martingale_residual(p, mkt, -p.jumps.eta2 - 0.5),
                  mrjd::domain_error);
}
