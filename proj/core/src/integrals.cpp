#include "mrjd/integrals.hpp"

#include <cmath>

#include "mrjd/jumps.hpp"
#include "mrjd/quadrature.hpp"

namespace mrjd {

namespace {

constexpr cplx kI{0.0, 1.0};

// Continuous log of (c + b y) along y in [y0, y1], relative to the principal
// branch at y0.  The image is a straight segment, so the argument can only
// wrap if the segment passes near the origin; that case is reported so the
// caller can fall back to quadrature.
bool unwrapped_log_diff(cplx c, cplx b, double y0, double y1, cplx* out) {
  constexpr int kCheckpoints = 32;
  cplx prev = c + b * y0;
  if (std::abs(prev) == 0.0) return false;
  double arg = std::arg(prev);
  const double arg0 = arg;
  const double mag0 = std::abs(prev);
  for (int i = 1; i <= kCheckpoints; ++i) {
    const double y = y0 + (y1 - y0) * double(i) / kCheckpoints;
    const cplx w = c + b * y;
    if (std::abs(w) < 1e-14 * (std::abs(c) + std::abs(b))) return false;
    const double step = std::arg(w / prev);
    if (std::fabs(step) > 3.141592653589793) return false;
    arg += step;
    prev = w;
  }
  *out = cplx(std::log(std::abs(prev) / mag0), arg - arg0);
  return true;
}

}  // namespace

cplx integral_a1(cplx u, cplx v, double t, const ModelParams& p,
                 double abs_tol) {
  if (p.jumps.kind != JumpKind::gaussian)
    throw invalid_input("integral_a1: requires a Gaussian jump law");
  if (!(t > 0.0)) throw invalid_input("integral_a1: t must be > 0");
  const double y0 = std::exp(-p.alpha * t);
  const JumpSpec jumps = p.jumps;
  // The integrand behaves like 1/y as y -> 0; subtracting that limit leaves
  // a bounded integrand (the log mass alpha*t is exact), which keeps the
  // adaptive rule convergent for arbitrarily small e^{-alpha t}.
  const cplx reduced = integrate_gk_or_throw(
      [&](double y) {
        return (jump_cf(jumps, u * y) * std::exp(-v * y) - 1.0) / y;
      },
      y0, 1.0, abs_tol);
  return reduced + p.alpha * t;
}

cplx integral_a23(cplx u, double theta, double t, const ModelParams& p,
                  KouIntegral which, IntegralDiagnostics* diag,
                  double abs_tol) {
  if (p.jumps.kind != JumpKind::double_exponential)
    throw invalid_input("integral_a23: requires a double-exponential jump law");
  if (!(t > 0.0)) throw invalid_input("integral_a23: t must be > 0");

  // Integrand is 1 / (y (c + b y)).
  const cplx b = (which == KouIntegral::a2) ? -kI * u : kI * u;
  const cplx c = (which == KouIntegral::a2) ? cplx(p.jumps.eta1 - theta)
                                            : cplx(p.jumps.eta2 + theta);
  if (std::abs(c) < 1e-12)
    throw domain_error(which == KouIntegral::a2
                           ? "integral_a23: eta1 - theta vanishes"
                           : "integral_a23: eta2 + theta vanishes");

  const double y0 = std::exp(-p.alpha * t);

  // Pole on the integration path: c + b y = 0 with y real in [y0, 1].
  if (std::abs(b) > 0.0) {
    const cplx ystar = -c / b;
    if (std::fabs(ystar.imag()) < 1e-12 * std::abs(ystar) + 1e-300 &&
        ystar.real() >= y0 - 1e-12 && ystar.real() <= 1.0 + 1e-12)
      throw domain_error("integral_a23: pole on the integration path");
  }

  // int 1/(y(c+by)) dy = (1/c) [log y - log(c + b y)]
  cplx logw;
  if (unwrapped_log_diff(c, b, y0, 1.0, &logw)) {
    return (-std::log(y0) - logw) / c;
  }

  if (diag) diag->used_quadrature_fallback = true;
  // partial fractions: 1/(y(c+by)) = 1/(cy) - b/(c(c+by)); the log mass is
  // exact so the quadrature sees a bounded integrand
  const cplx reduced = integrate_gk_or_throw(
      [&](double y) { return -b / (c * (c + b * y)); }, y0, 1.0, abs_tol);
  return reduced + p.alpha * t / c;
}

cplx jump_cf_time_integral(const ModelParams& p, double theta, double t, cplx u,
                           double abs_tol) {
  if (!(t >= 0.0)) throw invalid_input("jump_cf_time_integral: t must be >= 0");
  if (t == 0.0) return {0.0, 0.0};
  switch (p.jumps.kind) {
    case JumpKind::none:
      throw invalid_input("jump_cf_time_integral: jump law is none");
    case JumpKind::gaussian: {
      // phi_xi(-i theta + w) = M_xi(theta) phi_xi(w) e^{i sigma_J^2 theta w}
      const cplx mgf = jump_mgf(p.jumps, theta);
      const cplx v = -kI * p.jumps.sigma_j * p.jumps.sigma_j * theta * u;
      return mgf * integral_a1(u, v, t, p, abs_tol) / p.alpha;
    }
    case JumpKind::double_exponential: {
      const cplx a2 = integral_a23(u, theta, t, p, KouIntegral::a2, nullptr, abs_tol);
      const cplx a3 = integral_a23(u, theta, t, p, KouIntegral::a3, nullptr, abs_tol);
      return (p.jumps.q * p.jumps.eta1 * a2 +
              (1.0 - p.jumps.q) * p.jumps.eta2 * a3) /
             p.alpha;
    }
  }
  throw invalid_input("jump_cf_time_integral: unknown jump kind");
}

}  // namespace mrjd
