#ifndef MRJD_FOURIER_HPP
#define MRJD_FOURIER_HPP

#include <vector>

#include "mrjd/types.hpp"

namespace mrjd {

/// In-place forward DFT, out_j = sum_k in_k exp(-2 pi i j k / n); n must be a
/// power of two.
void fft_forward_inplace(std::vector<cplx>& a);

/// Trapezoid discretization of (1/2pi) int_{-U}^{U} e^{-i u x} F(u) du on the
/// conjugate grid.  F is sampled at u_k = -U + eta k, k = 0..n-1, eta = 2U/n;
/// the result lands on x_j = x_min + delta j, delta = pi / U, j = 0..n-1, with
/// endpoint weights 1/2.
struct InversionGrid {
  double x_min = 0.0;
  double dx = 0.0;
  std::vector<cplx> values;

  double x(std::size_t j) const { return x_min + dx * double(j); }
};

InversionGrid fourier_inversion_grid(const std::vector<cplx>& F, double umax,
                                     double x_min);

/// Natural cubic-spline interpolation through (x_min + dx*j, y_j); clamps to
/// the boundary values outside the grid.
class CubicInterpolant {
 public:
  CubicInterpolant() = default;
  CubicInterpolant(double x_min, double dx, std::vector<double> y);
  double operator()(double x) const;

 private:
  double x_min_ = 0.0, dx_ = 1.0;
  std::vector<double> y_, m_;  // values and second derivatives
};

}  // namespace mrjd

#endif  // MRJD_FOURIER_HPP
