#ifndef MRJD_DENSITY_HPP
#define MRJD_DENSITY_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "mrjd/fourier.hpp"
#include "mrjd/types.hpp"

namespace mrjd {

enum class DensityMode {
  normalized,    // inverse transform of the exact log-return CF; proper density
  paper_literal  // displayed prefactor form, for fidelity comparisons only
};

struct DensityConfig {
  double u_max = 0.0;        // frequency half-width; 0 = auto-tune
  std::size_t nodes = 4096;  // power of two, >= 256
  DensityMode mode = DensityMode::normalized;
  double quad_tol = 1e-10;
  double tail_tol = 1e-12;  // required CF magnitude at u_max

  void validate() const {
    if (nodes < 256) throw invalid_input("DensityConfig: nodes must be >= 256");
    if ((nodes & (nodes - 1)) != 0)
      throw invalid_input("DensityConfig: nodes must be a power of two");
  }
};

/// Gaussian/jump split of the j-th log-return, X = beta_j + eta_j.
struct BetaEtaDecomposition {
  double mu_beta = 0.0;   // mu (1-e^{-aD}) e^{-a j D}
  double var_beta = 0.0;  // sigma^2 E_{j,2} / (2 alpha)
  std::int64_t j = 0;
};

BetaEtaDecomposition beta_eta(const ModelParams& p, double delta, std::int64_t j);

/// Law of the jump part eta_j: point mass exp(-lambda (j+1) Delta) at zero
/// plus a diffuse part on a grid.
class EtaDensity {
 public:
  EtaDensity(const ModelParams& p, double delta, std::int64_t j,
             const DensityConfig& cfg = {});

  double atom() const { return atom_; }
  double diffuse(double x) const;       // diffuse part density
  double diffuse_integral() const;      // trapezoid over the grid
  double u_max() const { return u_max_; }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& values() const { return ys_; }

 private:
  double atom_ = 1.0;
  double u_max_ = 0.0;
  std::vector<double> xs_, ys_;
  CubicInterpolant interp_;
};

/// Point evaluation (atom mass, diffuse density at x).
std::pair<double, double> density_eta(const ModelParams& p,
                                      const SeriesGrid& grid, std::int64_t j,
                                      double x, const DensityConfig& cfg = {});

/// Fourier-inverted density of the j-th log-return on a grid.
class LogReturnDensity {
 public:
  LogReturnDensity(const ModelParams& p, double delta, std::int64_t j,
                   const DensityConfig& cfg = {});

  double operator()(double x) const;  // clamped at zero
  double integral() const;            // trapezoid over the grid
  double u_max() const { return u_max_; }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& values() const { return ys_; }  // unclamped

 private:
  double u_max_ = 0.0;
  std::vector<double> xs_, ys_;
  CubicInterpolant interp_;
};

double density_logreturn(const ModelParams& p, const SeriesGrid& grid,
                         std::int64_t j, double x, const DensityConfig& cfg = {});

struct LoglikDiagnostics {
  std::vector<std::size_t> clipped_observations;  // 1-based j indices
};

/// Log-likelihood of the series under the model.  The no-jump model uses the
/// closed-form Gaussian law; jump models evaluate the Fourier inversion at
/// each observation on a shared frequency grid.
double loglik(const LogReturnSeries& x, const ModelParams& p,
              const DensityConfig& cfg = {}, LoglikDiagnostics* diag = nullptr);

/// Closed-form Gaussian log-likelihood of the no-jump model.
double bsch_loglik(const LogReturnSeries& x, const ModelParams& p);

/// Analytic scores (dl/d sigma^2, dl/d mu, dl/d alpha) of the no-jump
/// log-likelihood.
std::array<double, 3> bsch_score(const LogReturnSeries& x, const ModelParams& p);

struct MleFitOptions {
  int max_iterations = 800;
  DensityConfig density;
  bool compute_std_errors = true;
};

CalibrationResult mle_fit(const LogReturnSeries& x, JumpKind model,
                          const ModelParams& init, const MleFitOptions& opts = {});

}  // namespace mrjd

#endif  // MRJD_DENSITY_HPP
