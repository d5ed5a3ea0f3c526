// Acceptance suite: one line per criterion, PASS/FAIL with timing, nonzero
// exit when anything fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mrjd/charfn.hpp"
#include "mrjd/density.hpp"
#include "mrjd/ecf_gmm.hpp"
#include "mrjd/esscher.hpp"
#include "mrjd/jumps.hpp"
#include "mrjd/math_utils.hpp"
#include "mrjd/moments.hpp"
#include "mrjd/pricer.hpp"
#include "mrjd/simulate.hpp"
#include "mrjd/stats.hpp"
#include "support/oracles.hpp"

using namespace mrjd;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << what;
    }
  }
};

ModelParams make_bsch(double alpha, double mu, double sigma) {
  ModelParams p;
  p.alpha = alpha;
  p.mu = mu;
  p.sigma = sigma;
  return p;
}

ModelParams make_merton(double alpha, double mu, double sigma, double lambda,
                        double mu_j, double sigma_j) {
  ModelParams p = make_bsch(alpha, mu, sigma);
  p.lambda = lambda;
  p.jumps = JumpSpec::gaussian(mu_j, sigma_j);
  return p;
}

ModelParams make_kou(double alpha, double mu, double sigma, double lambda,
                     double eta1, double eta2, double q) {
  ModelParams p = make_bsch(alpha, mu, sigma);
  p.lambda = lambda;
  p.jumps = JumpSpec::double_exponential(eta1, eta2, q);
  return p;
}

std::vector<ModelParams> parameter_grid() {
  std::vector<ModelParams> grid;
  for (double alpha : {0.5, 2.0, 10.0})
    for (double sigma : {0.1, 0.3, 0.6}) {
      grid.push_back(make_bsch(alpha, 0.02, sigma));
      grid.push_back(make_merton(alpha, 0.02, sigma, 15.0, -0.01, 0.06));
      grid.push_back(make_kou(alpha, 0.02, sigma, 15.0, 14.0, 9.0, 0.4));
    }
  return grid;  // 27 combinations, 9 per model
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------------------

void a1_cf_sanity(Check& c) {
  const double delta = 1.0 / 252.0;
  for (const ModelParams& p : parameter_grid()) {
    c.require(cf_logreturn(p, 0.0, delta, 5, cplx(0, 0)) == cplx(1.0, 0.0),
              "phi_X(0) != 1");
    c.require(cf_logprice(p, 0.0, 0.7, cplx(0, 0)) == cplx(1.0, 0.0),
              "phi_Y(0) != 1");
    for (double u : {0.4, 3.0, 21.0, 48.0}) {
      const cplx a = cf_logreturn(p, 0.0, delta, 5, cplx(u, 0.0));
      const cplx b = cf_logreturn(p, 0.0, delta, 5, cplx(-u, 0.0));
      c.require(std::abs(a) <= 1.0 + 1e-12, "|phi_X| > 1");
      c.require(std::abs(b - std::conj(a)) < 1e-13, "phi_X not hermitian");
      const cplx ap = cf_logprice(p, 0.0, 0.7, cplx(u, 0.0));
      const cplx bp = cf_logprice(p, 0.0, 0.7, cplx(-u, 0.0));
      c.require(std::abs(ap) <= 1.0 + 1e-12, "|phi_Y| > 1");
      c.require(std::abs(bp - std::conj(ap)) < 1e-13, "phi_Y not hermitian");
    }
  }
}

void a2_moment_consistency(Check& c) {
  const double delta = 1.0 / 252.0;
  const std::int64_t j = 10;
  for (const ModelParams& p : parameter_grid()) {
    const double m1 = theoretical_moment(p, delta, j, 1);
    double scale = std::sqrt(theoretical_moment(p, delta, j, 2) - m1 * m1);
    if (p.has_jumps())
      scale = std::max(scale, std::sqrt(jump_moment(p.jumps, 2)));
    auto phi = [&](double u) {
      return cf_logreturn(p, 0.0, delta, j, cplx(u, 0.0), 1e-15);
    };
    const auto fd = oracles::moments_by_fd(phi, scale);
    for (int k = 1; k <= 4; ++k) {
      const double closed = theoretical_moment(p, delta, j, k);
      const double rel = std::fabs(fd[std::size_t(k - 1)] - closed) /
                         std::max(std::fabs(closed), 1e-300);
      if (rel >= 1e-5) {
        std::ostringstream os;
        os << "moment k=" << k << " rel err " << rel;
        c.require(false, os.str());
      }
    }
  }
}

void a3_esscher(Check& c) {
  for (double alpha : {0.5, 1.0, 3.0})
    for (double sigma : {0.1, 0.3, 0.8})
      for (double T : {0.25, 1.0, 2.0}) {
        ModelParams p = make_bsch(alpha, 0.02, sigma);
        MarketParams mkt{0.03, T, 100.0};
        const EsscherSolution sol = solve_theta(p, mkt);
        const double closed = bsch_theta_closed_form(p, mkt);
        c.require(std::fabs(sol.theta_gs - closed) <=
                      1e-9 * std::max(1.0, std::fabs(closed)),
                  "no-jump root differs from the closed form");
      }
  {
    ModelParams p = make_merton(1.0, 0.0, 0.2, 5.0, 0.0, 0.1);
    MarketParams mkt{0.03, 0.5, 1.0};
    c.require(std::fabs(solve_theta(p, mkt).residual) < 1e-10,
              "Merton residual above 1e-10");
  }
  {
    ModelParams p = make_kou(2.0, 0.0, 0.25, 8.0, 12.0, 9.0, 0.45);
    MarketParams mkt{0.02, 1.0, 1.0};
    c.require(std::fabs(solve_theta(p, mkt).residual) < 1e-10,
              "Kou residual above 1e-10");
  }
}

void a4_martingale_end_to_end(Check& c) {
  MarketParams mkt{0.02, 1.0, 100.0};
  const double strike = 100.0 * std::exp(-20.0);
  const OptionSpec opt{strike, 1.0};
  const ModelParams models[] = {
      make_bsch(1.0, 0.05, 0.3),
      make_merton(1.0, 0.02, 0.3, 6.0, -0.02, 0.07),
      make_kou(2.0, 0.0, 0.25, 8.0, 12.0, 9.0, 0.45)};
  const char* names[] = {"bsch", "merton", "kou"};
  for (int i = 0; i < 3; ++i) {
    const double price = price_call_quadrature(models[i], mkt, opt).price;
    const double rel = std::fabs(price - mkt.s0) / mkt.s0;
    if (rel >= 1e-5)
      c.require(false, std::string("zero-strike limit broken for ") + names[i]);
  }
}

void a5_estimator_recovery(Check& c) {
  // Synthetic truth chosen inside the statistically identifiable region:
  // the transient carries the alpha/mu information, so mu must dominate the
  // noise floor and alpha must act within the sample.
  const ModelParams truth = make_bsch(20.0, 2.0, 0.25);
  const SeriesGrid grid{1.0 / 252.0, 5000};
  const int seeds = 20;

  std::vector<double> e_mom[3], e_mle[3], e_gmm[3];
  for (std::uint64_t seed = 0; seed < std::uint64_t(seeds); ++seed) {
    const LogReturnSeries data = simulate_logreturn_series(truth, grid, seed);
    const ModelParams init = make_bsch(10.0, 1.2, 0.4);

    const CalibrationResult mom = mom_fit(data, JumpKind::none, init);
    const CalibrationResult mle = mle_fit(data, JumpKind::none, init);
    FrequencyGrid fg;
    const DescriptiveStats ds = describe(data);
    fg.eta = 1.0 / ds.std_dev;  // small-u band where the transient phases stay unwrapped
    fg.L = 10;
    const CalibrationResult gmm = gmm_fit(data, JumpKind::none, fg, init);

    const double t[3] = {truth.alpha, truth.mu, truth.sigma};
    const double vm[3] = {mom.params.alpha, mom.params.mu, mom.params.sigma};
    const double vl[3] = {mle.params.alpha, mle.params.mu, mle.params.sigma};
    const double vg[3] = {gmm.params.alpha, gmm.params.mu, gmm.params.sigma};
    for (int i = 0; i < 3; ++i) {
      e_mom[i].push_back(std::fabs(vm[i] - t[i]) / std::fabs(t[i]));
      e_mle[i].push_back(std::fabs(vl[i] - t[i]) / std::fabs(t[i]));
      e_gmm[i].push_back(std::fabs(vg[i] - t[i]) / std::fabs(t[i]));
    }
  }
  const char* pname[3] = {"alpha", "mu", "sigma"};
  for (int i = 0; i < 3; ++i) {
    std::ostringstream os;
    os.precision(3);
    if (median(e_mom[i]) > 0.15) {
      os << "mom median err on " << pname[i] << " = " << median(e_mom[i]);
      c.require(false, os.str());
    }
    if (median(e_mle[i]) > 0.15) {
      os << "mle median err on " << pname[i] << " = " << median(e_mle[i]);
      c.require(false, os.str());
    }
    if (median(e_gmm[i]) > 0.15) {
      os << "gmm median err on " << pname[i] << " = " << median(e_gmm[i]);
      c.require(false, os.str());
    }
  }
  c.require(median(e_mle[2]) <= 0.10, "mle sigma error above 10%");
}

void a6_density_correctness(Check& c) {
  const ModelParams p = make_merton(1.0, 0.0, 0.3, 20.0, 0.0, 0.05);
  const double delta = 1.0 / 252.0;
  const std::int64_t j = 5;
  const LogReturnDensity d(p, delta, j);

  c.require(std::fabs(d.integral() - 1.0) <= 1e-6, "density mass != 1");
  const double floor =
      *std::min_element(d.values().begin(), d.values().end());
  c.require(floor > -1e-9, "density visibly negative");

  // 10^7-path histogram band
  const std::size_t n = 10000000;
  Rng rng = make_stream(606, 0);
  const double lo = -0.12, hi = 0.12;
  const int bins = 96;
  const double w = (hi - lo) / bins;
  std::vector<double> count(bins, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = oracles::draw_logreturn(p, delta, j, rng);
    if (x >= lo && x < hi) count[int((x - lo) / w)] += 1.0;
  }
  for (int b = 0; b < bins; ++b) {
    const double prob = count[b] / double(n);
    const double se =
        std::sqrt(std::max(prob * (1.0 - prob), 1e-12) / double(n));
    double avg = 0.0;
    for (int t = 0; t < 5; ++t) avg += d(lo + w * (b + (t + 0.5) / 5.0));
    avg /= 5.0;
    if (std::fabs(avg * w - prob) >= 3.0 * se + 1e-6) {
      std::ostringstream os;
      os << "histogram bin " << b << " outside the 3-sigma band";
      c.require(false, os.str());
      break;
    }
  }

  // no-jump path equals the closed-form Gaussian on the native grid
  const ModelParams p0 = make_bsch(1.0, 0.05, 0.3);
  const BetaEtaDecomposition be = beta_eta(p0, delta, 4);
  const LogReturnDensity d0(p0, delta, 4);
  double sup = 0.0;
  for (std::size_t i = 0; i < d0.xs().size(); ++i) {
    const double x = d0.xs()[i];
    const double gauss =
        std::exp(-0.5 * (x - be.mu_beta) * (x - be.mu_beta) / be.var_beta) /
        std::sqrt(2.0 * M_PI * be.var_beta);
    sup = std::max(sup, std::fabs(d0.values()[i] - gauss));
  }
  c.require(sup < 1e-8, "no-jump Fourier path differs from the Gaussian");
}

void a7_pricer_triangulation(Check& c) {
  MarketParams mkt{0.02, 1.0, 100.0};
  const ModelParams models[] = {
      make_bsch(1.0, 0.05, 0.3),
      make_merton(1.0, 0.02, 0.3, 6.0, -0.02, 0.07),
      make_kou(2.0, 0.0, 0.25, 8.0, 12.0, 9.0, 0.45)};
  const char* names[] = {"bsch", "merton", "kou"};
  for (int m = 0; m < 3; ++m) {
    const FftPriceResult fft =
        price_call_fft(models[m], mkt, OptionSpec{100.0, 1.0});
    for (double strike : {90.0, 100.0, 110.0}) {
      const OptionSpec opt{strike, 1.0};
      const double quad =
          price_call_quadrature(models[m], mkt, opt, fft.damping).price;
      // FFT across strikes: reprice on the spot ladder by scale invariance
      // C(s0, K) = (K/100) C(s0 * 100/K, 100); the ladder holds the strike
      // fixed, so use a fresh FFT run per strike at its own node.
      const FftPriceResult f2 = price_call_fft(models[m], mkt, opt);
      const double fft_price = f2.points[f2.spot_index].price;
      if (std::fabs(fft_price - quad) / quad > 1e-6) {
        std::ostringstream os;
        os << names[m] << " K=" << strike << " fft/quad gap "
           << std::fabs(fft_price - quad) / quad;
        c.require(false, os.str());
      }
      SimConfig cfg;
      cfg.paths = 10000000;
      cfg.seed = 4242 + std::uint64_t(m * 10 + int(strike));
      cfg.measure = Measure::esscher;
      cfg.threads = 2;
      const McPrice mc = mc_price_call(models[m], mkt, opt, cfg);
      if (std::fabs(quad - mc.price) >= 3.0 * mc.std_error) {
        std::ostringstream os;
        os << names[m] << " K=" << strike << " quad vs MC gap "
           << std::fabs(quad - mc.price) << " > 3*" << mc.std_error;
        c.require(false, os.str());
      }
    }
  }
  // small-alpha no-jump limit against matched-variance Black-Scholes
  const ModelParams p = make_bsch(1e-6, 0.0, 0.3);
  const OptionSpec opt{100.0, 1.0};
  const double var = p.sigma * p.sigma *
                     one_minus_exp(2.0 * p.alpha * mkt.T) / (2.0 * p.alpha);
  const double bs =
      oracles::black_scholes_call(mkt.s0, opt.strike, mkt.r, mkt.T, var);
  const double got = price_call_quadrature(p, mkt, opt).price;
  c.require(std::fabs(got - bs) / bs < 0.005,
            "small-alpha limit misses Black-Scholes");
}

void a8_damping_invariance(Check& c) {
  const ModelParams p = make_kou(2.0, 0.0, 0.25, 8.0, 12.0, 9.0, 0.45);
  MarketParams mkt{0.02, 1.0, 100.0};
  const OptionSpec opt{105.0, 1.0};
  const double a = price_call_quadrature(p, mkt, opt, 1.25).price;
  const double b = price_call_quadrature(p, mkt, opt, 2.0).price;
  c.require(std::fabs(a - b) / a < 1e-6, "quadrature price depends on R");

  PricingGrid g1, g2;
  g1.R = 1.25;
  g2.R = 2.0;
  const FftPriceResult fa = price_call_fft(p, mkt, opt, g1);
  const FftPriceResult fb = price_call_fft(p, mkt, opt, g2);
  const double pa = fa.points[fa.spot_index].price;
  const double pb = fb.points[fb.spot_index].price;
  c.require(std::fabs(pa - pb) / pa < 1e-6, "FFT price depends on R");
}

void a9_score_check(Check& c) {
  const ModelParams truth = make_bsch(20.0, 2.0, 0.25);
  const SeriesGrid grid{1.0 / 252.0, 3000};
  const LogReturnSeries data = simulate_logreturn_series(truth, grid, 271);

  // analytic scores vs central differences of the log-likelihood
  const ModelParams at = make_bsch(17.0, 0.4, 0.3);
  const auto score = bsch_score(data, at);
  auto ll = [&](double alpha, double mu, double sigma) {
    return bsch_loglik(data, make_bsch(alpha, mu, sigma));
  };
  const double h = 1e-6;
  const double fd_s2 = (ll(at.alpha, at.mu, std::sqrt(at.sigma * at.sigma + h)) -
                        ll(at.alpha, at.mu, std::sqrt(at.sigma * at.sigma - h))) /
                       (2.0 * h);
  const double fd_mu =
      (ll(at.alpha, at.mu + h, at.sigma) - ll(at.alpha, at.mu - h, at.sigma)) /
      (2.0 * h);
  const double fd_al =
      (ll(at.alpha + h, at.mu, at.sigma) - ll(at.alpha - h, at.mu, at.sigma)) /
      (2.0 * h);
  c.require(std::fabs(score[0] - fd_s2) <= 1e-5 * std::fabs(fd_s2),
            "sigma^2 score mismatch");
  c.require(std::fabs(score[1] - fd_mu) <= 1e-5 * std::fabs(fd_mu),
            "mu score mismatch");
  c.require(std::fabs(score[2] - fd_al) <= 1e-5 * std::fabs(fd_al),
            "alpha score mismatch");

  // scores vanish at the fitted optimum
  const CalibrationResult fit =
      mle_fit(data, JumpKind::none, make_bsch(10.0, 1.2, 0.4));
  const auto opt_score = bsch_score(data, fit.params);
  c.require(std::fabs(opt_score[0]) < 1e-4, "sigma^2 score not vanishing");
  c.require(std::fabs(opt_score[1]) < 1e-4, "mu score not vanishing");
  c.require(std::fabs(opt_score[2]) < 1e-4, "alpha score not vanishing");
}

void a10_omega_validity(Check& c) {
  const ModelParams p = make_merton(1.5, 0.0, 0.25, 10.0, 0.01, 0.08);
  const SeriesGrid grid{1.0 / 52.0, 30};
  const std::int64_t j = 6;
  FrequencyGrid fg;  // odd L keeps u = 0 off the grid
  fg.eta = 18.0;
  fg.L = 5;
  const Eigen::MatrixXd om = omega(p, grid, fg, j);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(om);
  c.require(es.eigenvalues().minCoeff() > -1e-10, "omega not PSD");

  // 5 random frequency pairs against batched simulation covariances
  std::mt19937_64 pick(2027);
  std::uniform_int_distribution<int> coord(0, 2 * fg.L - 1);
  const std::vector<double> u = fg.points();
  const int batches = 60;
  const std::size_t per_batch = 40000;
  for (int rep = 0; rep < 5; ++rep) {
    const int a = coord(pick), b = coord(pick);
    std::vector<double> cov_batches(batches);
    Rng rng = make_stream(8000 + rep, 0);
    for (int bt = 0; bt < batches; ++bt) {
      std::vector<double> fa(per_batch), fb(per_batch);
      for (std::size_t i = 0; i < per_batch; ++i) {
        const double x = oracles::draw_logreturn(p, grid.delta, j, rng);
        fa[i] = (a < fg.L) ? std::cos(u[a] * x) : std::sin(u[a - fg.L] * x);
        fb[i] = (b < fg.L) ? std::cos(u[b] * x) : std::sin(u[b - fg.L] * x);
      }
      double ma = 0.0, mb = 0.0;
      for (std::size_t i = 0; i < per_batch; ++i) {
        ma += fa[i];
        mb += fb[i];
      }
      ma /= double(per_batch);
      mb /= double(per_batch);
      double cv = 0.0;
      for (std::size_t i = 0; i < per_batch; ++i)
        cv += (fa[i] - ma) * (fb[i] - mb);
      cov_batches[bt] = cv / double(per_batch - 1);
    }
    const auto ms = oracles::mean_se(cov_batches);
    if (std::fabs(om(a, b) - ms.mean) >= 3.0 * ms.se + 1e-12) {
      std::ostringstream os;
      os << "omega(" << a << "," << b << ") = " << om(a, b)
         << " vs simulated " << ms.mean << " +- " << ms.se;
      c.require(false, os.str());
    }
  }
}

struct Criterion {
  const char* id;
  const char* description;
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"A1", "CF sanity: phi(0)=1, |phi|<=1, hermitian symmetry (27-point grid)",
       a1_cf_sanity},
      {"A2", "moment consistency: closed forms vs Richardson differences (1e-5)",
       a2_moment_consistency},
      {"A3", "Esscher: closed-form match (1e-9) and residuals under 1e-10",
       a3_esscher},
      {"A4", "martingale end-to-end: near-zero strike returns the spot (1e-5)",
       a4_martingale_end_to_end},
      {"A5", "estimator recovery: MoM/MLE/ECF medians within 15% (MLE sigma 10%)",
       a5_estimator_recovery},
      {"A6", "density correctness: mass, positivity, 3-sigma histogram band",
       a6_density_correctness},
      {"A7", "pricer triangulation: FFT/quadrature 1e-6, MC 3 SE, BS limit 0.5%",
       a7_pricer_triangulation},
      {"A8", "damping invariance: R=1.25 vs R=2.0 within 1e-6", a8_damping_invariance},
      {"A9", "score check: analytic vs numeric (1e-5), vanishing at optimum (1e-4)",
       a9_score_check},
      {"A10", "omega validity: simulation covariance within 3 SE, PSD",
       a10_omega_validity},
  };

  int failures = 0;
  for (const Criterion& cr : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("%-4s %-4s (%7.2fs)  %s%s%s\n", cr.id,
                check.ok ? "PASS" : "FAIL", secs, cr.description,
                check.ok ? "" : " -- ", check.ok ? "" : check.detail.str().c_str());
    std::fflush(stdout);
    if (!check.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
