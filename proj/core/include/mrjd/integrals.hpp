#ifndef MRJD_INTEGRALS_HPP
#define MRJD_INTEGRALS_HPP

#include "mrjd/types.hpp"

namespace mrjd {

enum class KouIntegral { a2, a3 };

struct IntegralDiagnostics {
  bool used_quadrature_fallback = false;
};

/// A1(u, v, t) = int_{e^{-alpha t}}^{1} y^{-1} phi_xi(u y) exp(-v y) dy for a
/// Gaussian jump law, by adaptive quadrature.
cplx integral_a1(cplx u, cplx v, double t, const ModelParams& p,
                 double abs_tol = 1e-10);

/// A2(u, theta, t) = int_{e^{-alpha t}}^{1} dy / (y (eta1 - i u y - theta)) and
/// A3(u, theta, t) = int_{e^{-alpha t}}^{1} dy / (y (eta2 + i u y + theta))
/// for a double-exponential jump law.  Evaluated through the antiderivative
/// (1/c)(log y - log(c + b y)) with a branch-continuity monitor along the real
/// path; falls back to adaptive quadrature when a branch jump is detected.
cplx integral_a23(cplx u, double theta, double t, const ModelParams& p,
                  KouIntegral which, IntegralDiagnostics* diag = nullptr,
                  double abs_tol = 1e-10);

/// int_0^t phi_xi(-i theta + u e^{-alpha (t - s)}) ds, the time integral every
/// characteristic-function exponent is built from.  Dispatches to A1 or A2/A3.
cplx jump_cf_time_integral(const ModelParams& p, double theta, double t, cplx u,
                           double abs_tol = 1e-10);

}  // namespace mrjd

#endif  // MRJD_INTEGRALS_HPP
