#include "mrjd/pricer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrjd/charfn.hpp"
#include "mrjd/esscher.hpp"
#include "mrjd/fourier.hpp"
#include "mrjd/quadrature.hpp"

namespace mrjd {

namespace {

constexpr cplx kI{0.0, 1.0};

// Transform of the damped payoff written against log K only (x0 = 0); the
// spot dependence enters the pricing formula through e^{R x0} e^{-i x0 x}.
cplx payoff_transform_logstrike(double strike, double R, double x) {
  const cplx a(-R, x);  // ix - R
  return std::exp(a * std::log(strike)) * strike * (1.0 / a - 1.0 / (a + 1.0));
}

void check_damping_admissible(const ModelParams& p, double theta, double R) {
  if (!(R > 1.0)) throw invalid_input("pricing: damping R must be > 1");
  if (p.jumps.kind == JumpKind::double_exponential &&
      !(R < p.jumps.eta1 - theta))
    throw invalid_input(
        "pricing: damping R violates the moment condition R < eta1 - theta");
}

double esscher_theta(const ModelParams& p, const MarketParams& mkt,
                     const OptionSpec& opt) {
  MarketParams m = mkt;
  m.T = opt.maturity;  // the martingale condition is imposed at the contract horizon
  return solve_theta(p, m).theta_gs;
}

}  // namespace

double select_damping(const ModelParams& p, double theta_gs) {
  constexpr double kDefault = 1.25;
  if (p.jumps.kind != JumpKind::double_exponential) return kDefault;
  const double lo = 1.0 + 1e-3;
  const double hi = p.jumps.eta1 - theta_gs - 1e-3;
  if (!(hi > lo))
    throw numeric_error("select_damping: empty admissible damping interval");
  return std::min(std::max(kDefault, lo), hi);
}

cplx payoff_transform(const OptionSpec& opt, const MarketParams& mkt, double R,
                      double x) {
  opt.validate();
  mkt.validate();
  if (!(R > 1.0)) throw invalid_input("payoff_transform: R must be > 1");
  const cplx a(-R, x);  // ix - R
  const double k = opt.log_strike();
  return std::exp(a * (k - mkt.x0())) * opt.strike *
         (1.0 / a - 1.0 / (a + 1.0));
}

QuadPriceResult price_call_quadrature(const ModelParams& p,
                                      const MarketParams& mkt,
                                      const OptionSpec& opt, double R,
                                      double quad_tol) {
  p.validate();
  mkt.validate();
  opt.validate();
  if (!(p.sigma > 0.0))
    throw invalid_input("price_call_quadrature: requires sigma > 0");

  QuadPriceResult out;
  out.theta_gs = esscher_theta(p, mkt, opt);
  out.damping = R > 0.0 ? R : select_damping(p, out.theta_gs);
  check_damping_admissible(p, out.theta_gs, out.damping);

  const double T = opt.maturity;
  auto integrand = [&](double x) {
    return cf_logprice(p, out.theta_gs, T, cplx(-x, -out.damping), quad_tol) *
           payoff_transform(opt, mkt, out.damping, x);
  };

  // Truncation: the Gaussian factor of the CF dominates the tail.
  double xmax = 16.0;
  double tail = std::abs(integrand(xmax));
  for (int rounds = 0; rounds < 40 && tail * xmax > 1e-13; ++rounds) {
    xmax *= 2.0;
    tail = std::abs(integrand(xmax));
  }
  out.tail_estimate = tail * xmax;
  if (out.tail_estimate > 1e-10)
    throw numeric_error("price_call_quadrature: integrand tail " +
                        std::to_string(out.tail_estimate) +
                        " has not decayed at the truncation point");

  // The integrand is Hermitian in x, so twice the real half-line integral.
  const cplx half = integrate_gk_or_throw(
      [&](double x) { return integrand(x); }, 0.0, xmax, quad_tol, 24);
  out.price = std::exp(-mkt.r * T) / M_PI * half.real();
  return out;
}

FftPriceResult price_call_fft(const ModelParams& p, const MarketParams& mkt,
                              const OptionSpec& opt, PricingGrid grid) {
  p.validate();
  mkt.validate();
  opt.validate();
  grid.validate();
  if (!(p.sigma > 0.0)) throw invalid_input("price_call_fft: requires sigma > 0");

  FftPriceResult out;
  out.theta_gs = esscher_theta(p, mkt, opt);
  out.damping = grid.R;
  check_damping_admissible(p, out.theta_gs, out.damping);

  const double T = opt.maturity;
  const double rT = mkt.r * T;
  const double x0_spot = mkt.x0();

  // Reference for the refinement gate.
  const double ref =
      price_call_quadrature(p, mkt, opt, out.damping).price;

  for (;;) {
    const double eta = grid.eta();
    const double dx0 = grid.dx0();
    const std::size_t n = grid.n;
    // Anchor the output ladder so that log S0 sits exactly on a node.
    double x0_min = std::isnan(grid.x0_min)
                        ? x0_spot - 0.5 * double(n) * dx0
                        : grid.x0_min;
    const double spot_offset = std::round((x0_spot - x0_min) / dx0);
    x0_min = x0_spot - spot_offset * dx0;

    std::vector<cplx> h(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double xk = -grid.M + eta * double(k);
      const double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
      const cplx phi =
          cf_logprice(p, out.theta_gs, T, cplx(-xk, -out.damping), 1e-10);
      const cplx hk = w * eta * phi *
                      payoff_transform_logstrike(opt.strike, out.damping, xk);
      const double phase = -x0_min * eta * double(k);
      h[k] = hk * cplx(std::cos(phase), std::sin(phase));
    }
    fft_forward_inplace(h);

    if (spot_offset < 0.0 || spot_offset >= double(n))
      throw invalid_input("price_call_fft: spot falls outside the output ladder");

    // Emit only the window around the spot where the e^{R x0} prefactor does
    // not amplify FFT round-off into the output.
    const std::size_t spot_j = std::size_t(spot_offset);
    const std::size_t halfwin =
        std::min<std::size_t>(std::size_t(grid.window / dx0), n / 2);
    const std::size_t j_lo = spot_j > halfwin ? spot_j - halfwin : 0;
    const std::size_t j_hi = std::min(n - 1, spot_j + halfwin);

    out.points.clear();
    out.points.reserve(j_hi - j_lo + 1);
    double max_imag = 0.0;
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
      const double x0j = x0_min + dx0 * double(j);
      const cplx rot(std::cos(grid.M * x0j), std::sin(grid.M * x0j));
      const cplx cj =
          std::exp(out.damping * x0j - rT) / (2.0 * M_PI) * rot * h[j];
      out.points.push_back({x0j, std::exp(x0j), cj.real()});
      max_imag = std::max(max_imag, std::fabs(cj.imag()));
    }
    out.spot_index = spot_j - j_lo;
    out.n_used = n;
    // a real price must emerge: residue measured against the at-spot premium
    out.max_imag_ratio =
        max_imag / std::max(out.points[out.spot_index].price, 1e-300);

    const double got = out.points[out.spot_index].price;
    out.quad_gap = std::fabs(got - ref) / std::max(std::fabs(ref), 1e-300);
    if (out.quad_gap <= 1e-6) break;
    if (grid.n >= (std::size_t(1) << 20)) {
      if (out.quad_gap > 1e-4)
        throw numeric_error(
            "price_call_fft: aliasing detected, FFT/quadrature gap " +
            std::to_string(out.quad_gap) + "; suggest M >= " +
            std::to_string(2.0 * grid.M) + " and n = " +
            std::to_string(grid.n));
      break;  // within the loose gate; reported via quad_gap
    }
    grid.n <<= 1;
  }
  return out;
}

}  // namespace mrjd
