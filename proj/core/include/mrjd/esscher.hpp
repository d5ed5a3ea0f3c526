#ifndef MRJD_ESSCHER_HPP
#define MRJD_ESSCHER_HPP

#include <utility>

#include "mrjd/types.hpp"

namespace mrjd {

/// Root of the martingale condition together with solve diagnostics.
struct EsscherSolution {
  double theta_gs = 0.0;
  double residual = 0.0;  // signed martingale-condition defect at theta_gs
  int iterations = 0;
  std::pair<double, double> bracket{0.0, 0.0};
};

struct EsscherOptions {
  double tol_theta = 1e-12;
  double tol_residual = 1e-10;
  int max_iterations = 200;
  double quad_tol = 1e-12;
};

/// Open interval of theta for which the tilted jump law keeps finite
/// exponential moments up to e^{theta + 1}: (-eta2, eta1 - 1) for Kou,
/// effectively all of R otherwise.
std::pair<double, double> esscher_theta_interval(const ModelParams& p);

/// Signed defect of the martingale condition at horizon T:
///   int_0^T l_V^theta(e^{-alpha (T-s)}) ds - [ r T - mu (1 - e^{-alpha T}) ].
/// Zero iff the discounted exchange rate is a Q^theta-martingale at T.
double martingale_residual(const ModelParams& p, const MarketParams& mkt,
                           double theta, double quad_tol = 1e-12);

/// Solve the martingale condition for the Gerber-Shiu parameter theta_GS by
/// bracket expansion plus TOMS-748 bisection/interpolation.
EsscherSolution solve_theta(const ModelParams& p, const MarketParams& mkt,
                            const EsscherOptions& opts = {});

/// Closed-form theta for the no-jump model:
///   theta = (alpha/sigma^2) ( rT/(1-e^{-aT}) - sigma^2 (1+e^{-aT})/(4 alpha) - mu ).
double bsch_theta_closed_form(const ModelParams& p, const MarketParams& mkt);

}  // namespace mrjd

#endif  // MRJD_ESSCHER_HPP
