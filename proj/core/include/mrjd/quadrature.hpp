#ifndef MRJD_QUADRATURE_HPP
#define MRJD_QUADRATURE_HPP

#include <functional>

#include "mrjd/types.hpp"

namespace mrjd {

struct QuadratureResult {
  cplx value{0.0, 0.0};
  double error = 0.0;  // achieved absolute error estimate
  int intervals = 0;
  bool converged = false;
};

/// Adaptive Gauss-Kronrod (G7,K15) integration of a complex-valued integrand
/// over [a, b].  Intervals are bisected until the local error estimate fits
/// within its share of abs_tol or max_levels bisections are reached.
QuadratureResult integrate_gk(const std::function<cplx(double)>& f, double a,
                              double b, double abs_tol = 1e-10,
                              int max_levels = 20);

/// As integrate_gk, but throws numeric_error (carrying the achieved error
/// estimate) when the tolerance is not met.
cplx integrate_gk_or_throw(const std::function<cplx(double)>& f, double a,
                           double b, double abs_tol = 1e-10,
                           int max_levels = 20);

}  // namespace mrjd

#endif  // MRJD_QUADRATURE_HPP
