#include "mrjd/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace mrjd {

namespace {
std::mutex fftw_plan_mutex;  // FFTW planning is not thread-safe

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

void fft_forward_inplace(std::vector<cplx>& a) {
  if (!is_pow2(a.size()))
    throw invalid_input("fft_forward_inplace: size must be a power of two");
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    plan = fftw_plan_dft_1d(int(a.size()),
                            reinterpret_cast<fftw_complex*>(a.data()),
                            reinterpret_cast<fftw_complex*>(a.data()),
                            FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_destroy_plan(plan);
  }
}

InversionGrid fourier_inversion_grid(const std::vector<cplx>& F, double umax,
                                     double x_min) {
  const std::size_t n = F.size();
  if (!is_pow2(n) || n < 4)
    throw invalid_input("fourier_inversion_grid: need a power-of-two grid");
  if (!(umax > 0.0)) throw invalid_input("fourier_inversion_grid: umax must be > 0");

  const double eta = 2.0 * umax / double(n);
  const double dx = M_PI / umax;

  std::vector<cplx> h(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
    const double phase = -eta * double(k) * x_min;
    h[k] = w * eta * F[k] * cplx(std::cos(phase), std::sin(phase));
  }
  fft_forward_inplace(h);

  InversionGrid out;
  out.x_min = x_min;
  out.dx = dx;
  out.values.resize(n);
  const double inv2pi = 1.0 / (2.0 * M_PI);
  for (std::size_t j = 0; j < n; ++j) {
    const double xj = x_min + dx * double(j);
    const cplx rot(std::cos(umax * xj), std::sin(umax * xj));
    out.values[j] = inv2pi * rot * h[j];
  }
  return out;
}

CubicInterpolant::CubicInterpolant(double x_min, double dx,
                                   std::vector<double> y)
    : x_min_(x_min), dx_(dx), y_(std::move(y)) {
  const std::size_t n = y_.size();
  if (n < 4) throw invalid_input("CubicInterpolant: need at least 4 points");
  // Natural spline: tridiagonal solve for second derivatives.
  m_.assign(n, 0.0);
  std::vector<double> c(n, 0.0), rhs(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i)
    rhs[i] = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (dx_ * dx_);
  // Thomas algorithm with diagonal 4, off-diagonal 1 (uniform spacing).
  c[1] = 0.25;
  rhs[1] = rhs[1] / 4.0;
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double piv = 4.0 - c[i - 1];
    c[i] = 1.0 / piv;
    rhs[i] = (rhs[i] - rhs[i - 1]) / piv;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = rhs[i] - c[i] * m_[i + 1];
    if (i == 1) break;
  }
}

double CubicInterpolant::operator()(double x) const {
  const std::size_t n = y_.size();
  const double t = (x - x_min_) / dx_;
  if (t <= 0.0) return y_.front();
  if (t >= double(n - 1)) return y_.back();
  const std::size_t i = std::size_t(t);
  const double a = t - double(i);
  const double b = 1.0 - a;
  return b * y_[i] + a * y_[i + 1] +
         dx_ * dx_ / 6.0 *
             ((b * b * b - b) * m_[i] + (a * a * a - a) * m_[i + 1]);
}

}  // namespace mrjd
