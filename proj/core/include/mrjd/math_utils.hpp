#ifndef MRJD_MATH_UTILS_HPP
#define MRJD_MATH_UTILS_HPP

#include <cmath>
#include <cstdint>

#include "mrjd/types.hpp"

namespace mrjd {

/// 1 - exp(-x) without cancellation for small x.
inline double one_minus_exp(double x) { return -std::expm1(-x); }

/// (1 - exp(-x)) / x, continuous through x -> 0.
inline double one_minus_exp_over(double x) {
  if (std::fabs(x) < 1e-12) return 1.0 - 0.5 * x + x * x / 6.0;
  return -std::expm1(-x) / x;
}

/// Decay-combination factor of the log-return characteristic exponent:
///   E_{j,k}(alpha) = (1 - e^{-k a D}) + (-1)^k (1 - e^{-a D})^k (1 - e^{-k a j D}).
inline double ejk(double alpha, double delta, std::int64_t j, int k) {
  if (!(alpha > 0.0)) throw invalid_input("ejk: alpha must be > 0");
  if (!(delta > 0.0)) throw invalid_input("ejk: delta must be > 0");
  if (j < 0) throw invalid_input("ejk: j must be >= 0");
  if (k < 1 || k > 4) throw invalid_input("ejk: k must be in 1..4");
  const double ad = alpha * delta;
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return one_minus_exp(double(k) * ad) +
         sign * std::pow(one_minus_exp(ad), k) *
             one_minus_exp(double(k) * alpha * double(j) * delta);
}

/// dE_{j,2}/dalpha, used by the closed-form likelihood scores.
inline double dejk2_dalpha(double alpha, double delta, std::int64_t j) {
  const double ad = alpha * delta;
  const double g = std::exp(-ad);
  const double jd = double(j) * delta;
  const double e2j = std::exp(-2.0 * alpha * jd);
  const double omg = one_minus_exp(ad);
  return 2.0 * delta * g * g + 2.0 * delta * g * omg * one_minus_exp(2.0 * alpha * jd) +
         2.0 * jd * omg * omg * e2j;
}

/// Gaussian variance of the j-th log-return's diffusive part,
/// sigma^2 E_{j,2}(alpha) / (2 alpha).
inline double logreturn_gaussian_variance(const ModelParams& p, double delta,
                                          std::int64_t j) {
  return p.sigma * p.sigma * ejk(p.alpha, delta, j, 2) / (2.0 * p.alpha);
}

/// Mean of the j-th log-return's drift part, mu (1 - e^{-a D}) e^{-a j D}.
inline double logreturn_drift_mean(const ModelParams& p, double delta,
                                   std::int64_t j) {
  return p.mu * one_minus_exp(p.alpha * delta) *
         std::exp(-p.alpha * double(j) * delta);
}

/// splitmix64 step, used to derive independent RNG stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace mrjd

#endif  // MRJD_MATH_UTILS_HPP
