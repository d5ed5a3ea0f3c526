#ifndef MRJD_MOMENTS_HPP
#define MRJD_MOMENTS_HPP

#include <cstdint>

#include "mrjd/types.hpp"

namespace mrjd {

/// Closed-form raw moment E[X_{j Delta}^k] under the historic measure,
/// assembled from the cumulants of the log-return characteristic exponent.
double theoretical_moment(const ModelParams& p, double delta, std::int64_t j,
                          int k);

inline double theoretical_moment(const ModelParams& p, const SeriesGrid& grid,
                                 std::int64_t j, int k) {
  return theoretical_moment(p, grid.delta, j, k);
}

/// Same moment through the derivative recursion
///   D^k phi = sum_l C(k-1,l) D^{l+1}T1 D^{k-l-1} phi
/// evaluated at zero; an independent algebraic route used for cross-checks.
double moment_by_cf_recursion(const ModelParams& p, double delta,
                              std::int64_t j, int k);

/// mu_k = (1/n) sum_{j=1..n} E[X_{j Delta}^k] via the closed-form averages of
/// the decay factors (geometric sums), no j-loop.
double averaged_moment(const ModelParams& p, const SeriesGrid& grid, int k);

/// Raw sample moments (1/n) sum x^k, k = 1..kmax.
MomentSet empirical_moments(const LogReturnSeries& x, int kmax = 4);

/// Sample autocovariance of squared returns at lag 0 or 1, and its model
/// counterpart; the pair supplies the two extra matching conditions the
/// six-parameter fits need beyond the four raw moments.
double squared_autocov_empirical(const LogReturnSeries& x, int lag);
double squared_autocov_theoretical(const ModelParams& p, const SeriesGrid& grid,
                                   int lag);

struct MomFitOptions {
  bool fix_q = false;       // Kou: hold q at the initial value
  bool fix_mu_j = false;    // Merton: hold mu_j at the initial value
  int max_iterations = 400;
};

/// Method-of-moments calibration: weighted least squares matching of sample
/// and model moments (first three for the no-jump model; four moments plus
/// the two squared-return autocovariances for the jump models).
CalibrationResult mom_fit(const LogReturnSeries& x, JumpKind model,
                          const ModelParams& init, const MomFitOptions& opts = {});

}  // namespace mrjd

#endif  // MRJD_MOMENTS_HPP
