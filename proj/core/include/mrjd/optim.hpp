#ifndef MRJD_OPTIM_HPP
#define MRJD_OPTIM_HPP

#include <functional>
#include <vector>

#include "mrjd/types.hpp"

namespace mrjd {

/// Per-coordinate box constraints.
struct Box {
  std::vector<double> lo, hi;
  void clamp(std::vector<double>& x) const;
};

struct LmOptions {
  int max_iterations = 300;
  double tol_grad = 1e-12;
  double tol_step = 1e-14;
  // Jacobian step: large enough that quadrature-level noise (~1e-9) in the
  // residuals does not swamp the difference quotients.
  double fd_step = 1e-6;
};

struct LmResult {
  std::vector<double> x;
  double objective = 0.0;  // sum of squared residuals
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Box-constrained Levenberg-Marquardt least squares with a finite-difference
/// Jacobian.  Residuals are free to throw domain/numeric errors; such trial
/// points are rejected.
LmResult levenberg_marquardt(
    const std::function<std::vector<double>(const std::vector<double>&)>& residuals,
    std::vector<double> x0, const Box& box, const LmOptions& opts = {});

struct NmOptions {
  int max_iterations = 2000;
  double tol_simplex = 1e-10;  // relative simplex diameter
  double initial_scale = 0.1;  // initial simplex size, relative per coordinate
};

struct NmResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead minimization with points clamped to the box.  Objective may
/// throw; those points are treated as +inf.
NmResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, const Box& box, const NmOptions& opts = {});

/// Newton iteration on a d-dimensional root problem g(x) = 0 with a
/// finite-difference Jacobian, clamped to the box.  Used to polish stationary
/// points after a derivative-free search.
struct NewtonResult {
  std::vector<double> x;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

NewtonResult newton_polish(
    const std::function<std::vector<double>(const std::vector<double>&)>& g,
    std::vector<double> x0, const Box& box, int max_iterations = 60,
    double tol = 1e-11, double fd_step = 1e-6);

}  // namespace mrjd

#endif  // MRJD_OPTIM_HPP
