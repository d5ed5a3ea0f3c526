#ifndef MRJD_ECF_GMM_HPP
#define MRJD_ECF_GMM_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mrjd/types.hpp"

namespace mrjd {

/// Frequency grid u_k = -eta + (2 eta / L) k, k = 1..L (right-closed, matching
/// the estimating-equation convention).
struct FrequencyGrid {
  double eta = 20.0;
  int L = 10;

  double point(int k) const {  // k = 1..L
    if (k < 1 || k > L) throw invalid_input("FrequencyGrid: k out of range");
    return -eta + 2.0 * eta / double(L) * double(k);
  }
  std::vector<double> points() const {
    std::vector<double> u(L);
    for (int k = 1; k <= L; ++k) u[k - 1] = point(k);
    return u;
  }
  void validate() const {
    if (L < 2) throw invalid_input("FrequencyGrid: L must be >= 2");
    if (!(eta > 0.0)) throw invalid_input("FrequencyGrid: eta must be > 0");
  }

  /// eta = 20 / std(x), L = 10: covers the informative band of the CF.
  static FrequencyGrid default_for(const LogReturnSeries& x);
};

/// Empirical characteristic function (1/n) sum_j exp(i u X_j).
cplx ecf(const LogReturnSeries& x, double u);

/// Stacked residuals (Re h(u_1..u_L), Im h(u_1..u_L)) of observation j, with
/// h(u, X_j; theta) = e^{i u X_j} - phi_{X_j}(u; theta).
std::vector<double> estimating_functions(const LogReturnSeries& x,
                                         const ModelParams& p,
                                         const FrequencyGrid& fg,
                                         std::int64_t j);

/// Exact covariance matrix of the trigonometric moments
/// (cos(u_1 X)..cos(u_L X), sin(u_1 X)..sin(u_L X)) of X_{j Delta} under the
/// model CF, the 2L x 2L weight-matrix building block.
Eigen::MatrixXd omega(const ModelParams& p, const SeriesGrid& grid,
                      const FrequencyGrid& fg, std::int64_t j);

/// (1/n) sum_{j=1..n} omega_j, the single weight used for the averaged
/// estimating equation.
Eigen::MatrixXd omega_averaged(const ModelParams& p, const SeriesGrid& grid,
                               const FrequencyGrid& fg);

struct PsdInverse {
  Eigen::MatrixXd inverse;
  bool ridged = false;  // rank-deficient input; null directions dropped
};

/// Pseudo-inverse after clipping negative eigenvalues at zero.  Null and
/// near-null directions are dropped (weight zero), never amplified; a ridge
/// identity is the fallback only when the whole spectrum is degenerate.
PsdInverse psd_pseudo_inverse(const Eigen::MatrixXd& m);

struct GmmOptions {
  bool literal_weighting = false;  // weight BY omega instead of its inverse
  int max_iterations = 400;
};

struct GmmExtras {
  double j_statistic = 0.0;
  bool weight_ridged = false;
};

CalibrationResult gmm_fit(const LogReturnSeries& x, JumpKind model,
                          const FrequencyGrid& fg, const ModelParams& init,
                          const GmmOptions& opts = {},
                          GmmExtras* extras = nullptr);

enum class ContinuumWeight { gaussian, paper_literal };

/// Continuum objective int |ecf(u) - avg_j phi_j(u)|^2 w(u) du with
/// w = e^{-u^2} on a symmetric domain (gaussian) or w = e^{-u} on [0, u_max]
/// (paper_literal).
double continuum_objective(const LogReturnSeries& x, const ModelParams& p,
                           ContinuumWeight weight, double u_max = 0.0);

/// Same objective against an arbitrary empirical-side function (n gives the
/// number of per-j model CFs averaged on the model side).
double continuum_objective_fn(const std::function<cplx(double)>& empirical,
                              const ModelParams& p, double delta,
                              std::size_t n, ContinuumWeight weight,
                              double u_max = 0.0);

}  // namespace mrjd

#endif  // MRJD_ECF_GMM_HPP
