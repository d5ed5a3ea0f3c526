#include "mrjd/charfn.hpp"

#include <cmath>

#include "mrjd/integrals.hpp"
#include "mrjd/jumps.hpp"
#include "mrjd/math_utils.hpp"

namespace mrjd {

namespace {
constexpr cplx kI{0.0, 1.0};
}

cplx laplace_exponent(const ModelParams& p, cplx z) {
  cplx out = 0.5 * p.sigma * p.sigma * z * z;
  if (p.has_jumps()) out += p.lambda * (jump_cf(p.jumps, -kI * z) - 1.0);
  return out;
}

void require_admissible_theta(const ModelParams& p, double theta) {
  if (p.jumps.kind == JumpKind::double_exponential) {
    if (!(theta < p.jumps.eta1 && theta > -p.jumps.eta2))
      throw domain_error("theta outside the admissible interval (-eta2, eta1)");
  }
}

KIntegrals k_integrals(const ModelParams& p, double theta, double delta,
                       std::int64_t j, cplx u, double abs_tol) {
  if (!p.has_jumps()) throw invalid_input("k_integrals: model has no jumps");
  if (j < 0) throw invalid_input("k_integrals: j must be >= 0");
  require_admissible_theta(p, theta);
  KIntegrals out;
  out.k1 = jump_cf_time_integral(p, theta, delta, u, abs_tol);
  const cplx u2 = -u * one_minus_exp(p.alpha * delta);
  out.k2 = jump_cf_time_integral(p, theta, double(j) * delta, u2, abs_tol);
  return out;
}

cplx cf_logprice(const ModelParams& p, double theta, double t, cplx u,
                 double abs_tol) {
  if (!(t > 0.0)) throw invalid_input("cf_logprice: t must be > 0");
  require_admissible_theta(p, theta);
  if (u == cplx(0.0, 0.0)) return {1.0, 0.0};

  const double omt = one_minus_exp(p.alpha * t);
  const double drift = p.mu + p.sigma * p.sigma * theta / p.alpha;
  cplx expo = kI * drift * omt * u -
              p.sigma * p.sigma * one_minus_exp(2.0 * p.alpha * t) /
                  (4.0 * p.alpha) * (u * u);
  if (p.has_jumps()) {
    const cplx jint = jump_cf_time_integral(p, theta, t, u, abs_tol);
    expo += p.lambda * (jint - t * jump_mgf(p.jumps, theta));
  }
  return std::exp(expo);
}

cplx cf_logreturn(const ModelParams& p, double theta, double delta,
                  std::int64_t j, cplx u, double abs_tol) {
  if (!(delta > 0.0)) throw invalid_input("cf_logreturn: delta must be > 0");
  if (j < 0) throw invalid_input("cf_logreturn: j must be >= 0");
  require_admissible_theta(p, theta);
  if (u == cplx(0.0, 0.0)) return {1.0, 0.0};

  const double omd = one_minus_exp(p.alpha * delta);
  const double decay = std::exp(-p.alpha * double(j) * delta);
  const double drift = p.mu + p.sigma * p.sigma * theta / p.alpha;
  cplx expo = kI * drift * decay * omd * u -
              p.sigma * p.sigma * ejk(p.alpha, delta, j, 2) / (4.0 * p.alpha) *
                  (u * u);
  if (p.has_jumps()) {
    const KIntegrals k = k_integrals(p, theta, delta, j, u, abs_tol);
    expo += p.lambda * (k.k1 + k.k2 -
                        double(j + 1) * delta * jump_mgf(p.jumps, theta));
  }
  return std::exp(expo);
}

}  // namespace mrjd
