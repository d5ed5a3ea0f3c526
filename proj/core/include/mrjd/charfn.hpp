#ifndef MRJD_CHARFN_HPP
#define MRJD_CHARFN_HPP

#include <cstdint>

#include "mrjd/types.hpp"

namespace mrjd {

/// Laplace exponent of the driving Levy process,
///   l_V(z) = (1/2) sigma^2 z^2 + lambda (phi_xi(-i z) - 1).
cplx laplace_exponent(const ModelParams& p, cplx z);

/// Largest open interval of Esscher parameters theta for which the tilted
/// law exists: all of R for Gaussian/no jumps, (-eta2, eta1) for Kou.
/// Throws domain_error when theta is outside.
void require_admissible_theta(const ModelParams& p, double theta);

struct KIntegrals {
  cplx k1;  // int_{jD}^{(j+1)D} phi_xi(-i theta + u e^{-alpha((j+1)D - s)}) ds
  cplx k2;  // int_0^{jD} phi_xi(-i theta + u (e^{-alpha D}-1) e^{-alpha(jD-s)}) ds
};

/// The two jump time-integrals of the j-th log-return exponent.
KIntegrals k_integrals(const ModelParams& p, double theta, double delta,
                       std::int64_t j, cplx u, double abs_tol = 1e-10);

/// Characteristic function of the log-price Y_t (Y_0 = 0) under the Esscher
/// measure Q^theta; theta = 0 gives the historic measure.
cplx cf_logprice(const ModelParams& p, double theta, double t, cplx u,
                 double abs_tol = 1e-10);

/// Characteristic function of the j-th log-return X_{j Delta} under Q^theta.
cplx cf_logreturn(const ModelParams& p, double theta, double delta,
                  std::int64_t j, cplx u, double abs_tol = 1e-10);

inline cplx cf_logreturn(const ModelParams& p, double theta,
                         const SeriesGrid& grid, std::int64_t j, cplx u,
                         double abs_tol = 1e-10) {
  return cf_logreturn(p, theta, grid.delta, j, u, abs_tol);
}

}  // namespace mrjd

#endif  // MRJD_CHARFN_HPP
