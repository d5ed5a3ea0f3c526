#include "mrjd/esscher.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <string>

#include "mrjd/integrals.hpp"
#include "mrjd/jumps.hpp"
#include "mrjd/math_utils.hpp"

namespace mrjd {

std::pair<double, double> esscher_theta_interval(const ModelParams& p) {
  constexpr double eps = 1e-6;
  constexpr double wide = 1e8;
  if (p.jumps.kind == JumpKind::double_exponential)
    return {-p.jumps.eta2 + eps, p.jumps.eta1 - 1.0 - eps};
  return {-wide, wide};
}

double martingale_residual(const ModelParams& p, const MarketParams& mkt,
                           double theta, double quad_tol) {
  p.validate();
  mkt.validate();
  const auto [lo, hi] = esscher_theta_interval(p);
  if (theta < lo || theta > hi)
    throw domain_error("martingale_residual: theta outside (" +
                       std::to_string(lo) + ", " + std::to_string(hi) + ")");

  const double T = mkt.T;
  const double omt = one_minus_exp(p.alpha * T);
  double lhs = p.sigma * p.sigma * theta * omt / p.alpha +
               p.sigma * p.sigma * one_minus_exp(2.0 * p.alpha * T) /
                   (4.0 * p.alpha);
  if (p.has_jumps()) {
    // u = -i turns the kernel into the MGF along the decay path:
    // phi_xi(-i theta - i y) = E exp((theta + y) xi).
    const cplx jint = jump_cf_time_integral(p, theta, T, cplx(0.0, -1.0), quad_tol);
    const double mgf = jump_mgf(p.jumps, theta).real();
    lhs += p.lambda * (jint.real() - T * mgf);
  }
  return lhs - (mkt.r * T - p.mu * omt);
}

double bsch_theta_closed_form(const ModelParams& p, const MarketParams& mkt) {
  if (p.has_jumps())
    throw invalid_input("bsch_theta_closed_form: model must have no jumps");
  if (!(p.sigma > 0.0))
    throw invalid_input("bsch_theta_closed_form: sigma must be > 0");
  const double T = mkt.T;
  const double omt = one_minus_exp(p.alpha * T);
  return p.alpha / (p.sigma * p.sigma) *
         (mkt.r * T / omt -
          p.sigma * p.sigma * (1.0 + std::exp(-p.alpha * T)) / (4.0 * p.alpha) -
          p.mu);
}

EsscherSolution solve_theta(const ModelParams& p, const MarketParams& mkt,
                            const EsscherOptions& opts) {
  p.validate();
  mkt.validate();
  const auto [lo_adm, hi_adm] = esscher_theta_interval(p);

  auto f = [&](double th) {
    return martingale_residual(p, mkt, th, opts.quad_tol);
  };

  // Expand [-1, 1] by doubling, clipped to the admissible interval, until the
  // residual changes sign.
  double lo = std::max(-1.0, lo_adm);
  double hi = std::min(1.0, hi_adm);
  double flo = f(lo);
  double fhi = f(hi);
  for (int round = 0; round < 80 && flo * fhi > 0.0; ++round) {
    const bool at_lo = lo <= lo_adm;
    const bool at_hi = hi >= hi_adm;
    if (at_lo && at_hi) break;
    if (!at_lo) {
      lo = std::max(2.0 * lo - hi, lo_adm);
      flo = f(lo);
    }
    if (!at_hi && flo * fhi > 0.0) {
      hi = std::min(2.0 * hi - lo, hi_adm);
      fhi = f(hi);
    }
  }
  if (flo * fhi > 0.0)
    throw numeric_error(
        "solve_theta: no sign change of the martingale residual on scanned "
        "range [" +
        std::to_string(lo) + ", " + std::to_string(hi) + "]");

  std::uintmax_t iter = std::uintmax_t(opts.max_iterations);
  auto tol = [&](double a, double b) {
    return std::fabs(b - a) <= opts.tol_theta * (1.0 + std::fabs(a));
  };
  const auto bracket =
      boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iter);

  EsscherSolution sol;
  sol.theta_gs = 0.5 * (bracket.first + bracket.second);
  sol.residual = f(sol.theta_gs);
  sol.iterations = int(iter);
  sol.bracket = {lo, hi};
  if (std::fabs(sol.residual) > opts.tol_residual)
    throw numeric_error("solve_theta: residual " +
                        std::to_string(sol.residual) +
                        " above tolerance after convergence");
  return sol;
}

}  // namespace mrjd
