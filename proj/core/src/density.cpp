#include "mrjd/density.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "mrjd/charfn.hpp"
#include "mrjd/integrals.hpp"
#include "mrjd/jumps.hpp"
#include "mrjd/math_utils.hpp"
#include "mrjd/moments.hpp"
#include "mrjd/optim.hpp"
#include "mrjd/quadrature.hpp"

namespace mrjd {

namespace {

constexpr cplx kI{0.0, 1.0};

std::size_t next_pow2(double x) {
  std::size_t n = 256;
  while (double(n) < x && n < (std::size_t(1) << 26)) n <<= 1;
  return n;
}

// Spatial reach of a single jump, for sizing density grids.
double jump_reach(const JumpSpec& jumps) {
  switch (jumps.kind) {
    case JumpKind::gaussian: return std::fabs(jumps.mu_j) + 8.0 * jumps.sigma_j;
    case JumpKind::double_exponential:
      return 12.0 / std::min(jumps.eta1, jumps.eta2);
    default: return 0.0;
  }
}

// K1(u) - Delta = (1/alpha) int_{e^{-aD}}^1 (phi_xi(u y) - 1) / y dy.  The
// subtraction keeps the integrand bounded and makes exp(lambda(K1+K2-(j+1)D))
// assemble from pieces that each vanish as |u| grows.
cplx k1_reduced(const ModelParams& p, double delta, cplx u, double tol) {
  const double y0 = std::exp(-p.alpha * delta);
  const JumpSpec jumps = p.jumps;
  return integrate_gk_or_throw(
             [&](double y) { return (jump_cf(jumps, u * y) - 1.0) / y; }, y0,
             1.0, tol) /
         p.alpha;
}

// K2(u) - jD over the window [e^{-a j D}, 1] with the scaled argument.
cplx k2_reduced(const ModelParams& p, double delta, std::int64_t j, cplx u,
                double tol) {
  if (j == 0) return {0.0, 0.0};
  const double y0 = std::exp(-p.alpha * double(j) * delta);
  const cplx u2 = -u * one_minus_exp(p.alpha * delta);
  const JumpSpec jumps = p.jumps;
  return integrate_gk_or_throw(
             [&](double y) { return (jump_cf(jumps, u2 * y) - 1.0) / y; },
             y0, 1.0, tol) /
         p.alpha;
}

// exp(lambda (K1 + K2 - (j+1) Delta)) at theta = 0.
cplx eta_cf(const ModelParams& p, double delta, std::int64_t j, double u,
            double tol) {
  return std::exp(p.lambda * (k1_reduced(p, delta, cplx(u, 0.0), tol) +
                              k2_reduced(p, delta, j, cplx(u, 0.0), tol)));
}

}  // namespace

BetaEtaDecomposition beta_eta(const ModelParams& p, double delta,
                              std::int64_t j) {
  if (j < 0) throw invalid_input("beta_eta: j must be >= 0");
  BetaEtaDecomposition d;
  d.j = j;
  d.mu_beta = logreturn_drift_mean(p, delta, j);
  d.var_beta = logreturn_gaussian_variance(p, delta, j);
  return d;
}

// ---------------------------------------------------------------------------
// eta_j density

EtaDensity::EtaDensity(const ModelParams& p, double delta, std::int64_t j,
                       const DensityConfig& cfg) {
  p.validate();
  cfg.validate();
  if (!(p.lambda > 0.0)) throw invalid_input("EtaDensity: requires lambda > 0");
  if (j < 0) throw invalid_input("EtaDensity: j must be >= 0");

  const double horizon = double(j + 1) * delta;
  atom_ = std::exp(-p.lambda * horizon);

  // Auto-tune the frequency cutoff on the tail of |psi(u) - atom|.
  double umax = cfg.u_max;
  if (umax <= 0.0) {
    const double scale =
        (p.jumps.kind == JumpKind::gaussian)
            ? p.jumps.sigma_j * one_minus_exp(p.alpha * delta) *
                  std::exp(-p.alpha * double(j) * delta)
            : 0.0;
    umax = scale > 0.0 ? 8.0 / scale : 1024.0;
    bool decayed = false;
    for (int rounds = 0; rounds < 24; ++rounds) {
      if (std::abs(eta_cf(p, delta, j, umax, cfg.quad_tol) - atom_) <
          cfg.tail_tol) {
        decayed = true;
        break;
      }
      umax *= 2.0;
    }
    if (!decayed)
      throw numeric_error(
          "EtaDensity: characteristic function tail has not decayed below " +
          std::to_string(cfg.tail_tol) + " by u = " + std::to_string(umax) +
          "; the jump law admits no practical inversion grid");
  } else if (std::abs(eta_cf(p, delta, j, umax, cfg.quad_tol) - atom_) >=
             cfg.tail_tol) {
    throw numeric_error("EtaDensity: grid too small, increase u_max beyond " +
                        std::to_string(umax));
  }
  u_max_ = umax;

  const double mean_eta =
      p.lambda * jump_moment(p.jumps, 1) * ejk(p.alpha, delta, j, 1) / p.alpha;
  const double var_eta = p.lambda * jump_moment(p.jumps, 2) *
                         ejk(p.alpha, delta, j, 2) / (2.0 * p.alpha);
  const double half = std::fabs(mean_eta) + 30.0 * std::sqrt(var_eta) +
                      3.0 * jump_reach(p.jumps);
  const double dx = M_PI / umax;
  const std::size_t n = std::max(cfg.nodes, next_pow2(2.0 * half / dx));
  const double x_min = mean_eta - 0.5 * double(n) * dx;

  // Hermitian fill from the positive-frequency half.
  const double eta_step = 2.0 * umax / double(n);
  std::vector<cplx> half_cf(n / 2 + 1);
  for (std::size_t m = 0; m <= n / 2; ++m)
    half_cf[m] =
        eta_cf(p, delta, j, eta_step * double(m), cfg.quad_tol) - atom_;
  std::vector<cplx> F(n);
  for (std::size_t m = 0; m < n / 2; ++m) F[n / 2 + m] = half_cf[m];
  for (std::size_t m = 1; m <= n / 2; ++m) F[n / 2 - m] = std::conj(half_cf[m]);

  const InversionGrid inv = fourier_inversion_grid(F, umax, x_min);
  xs_.resize(n);
  ys_.resize(n);
  const double literal = (cfg.mode == DensityMode::paper_literal)
                             ? one_minus_exp(p.lambda * horizon)
                             : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    xs_[i] = inv.x(i);
    ys_[i] = literal * inv.values[i].real();
  }
  interp_ = CubicInterpolant(x_min, dx, ys_);
}

double EtaDensity::diffuse(double x) const { return std::max(interp_(x), 0.0); }

double EtaDensity::diffuse_integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < ys_.size(); ++i) {
    const double w = (i == 0 || i == ys_.size() - 1) ? 0.5 : 1.0;
    s += w * ys_[i];
  }
  return s * (xs_[1] - xs_[0]);
}

std::pair<double, double> density_eta(const ModelParams& p,
                                      const SeriesGrid& grid, std::int64_t j,
                                      double x, const DensityConfig& cfg) {
  const EtaDensity d(p, grid.delta, j, cfg);
  return {d.atom(), d.diffuse(x)};
}

// ---------------------------------------------------------------------------
// full log-return density

LogReturnDensity::LogReturnDensity(const ModelParams& p, double delta,
                                   std::int64_t j, const DensityConfig& cfg) {
  p.validate();
  cfg.validate();
  if (!(p.sigma > 0.0))
    throw invalid_input("LogReturnDensity: requires sigma > 0");
  if (j < 0) throw invalid_input("LogReturnDensity: j must be >= 0");

  const BetaEtaDecomposition be = beta_eta(p, delta, j);
  double umax = cfg.u_max;
  if (umax <= 0.0)
    umax = 1.1 * std::sqrt(2.0 * std::log(1.0 / cfg.tail_tol) / be.var_beta);

  const double mean = theoretical_moment(p, delta, j, 1);
  const double var = theoretical_moment(p, delta, j, 2) - mean * mean;
  const double half =
      std::fabs(mean) + 16.0 * std::sqrt(var) + 2.0 * jump_reach(p.jumps);
  const double dx = M_PI / umax;
  const std::size_t n = std::max(cfg.nodes, next_pow2(2.0 * half / dx));
  const double x_min = mean - 0.5 * double(n) * dx;
  const double eta_step = 2.0 * umax / double(n);

  const bool literal = (cfg.mode == DensityMode::paper_literal);
  const double horizon = double(j + 1) * delta;
  const double a = std::exp(-p.lambda * horizon);

  std::vector<cplx> half_cf(n / 2 + 1);
  for (std::size_t m = 0; m <= n / 2; ++m) {
    const double u = eta_step * double(m);
    cplx f = cf_logreturn(p, 0.0, delta, j, cplx(u, 0.0), cfg.quad_tol);
    if (literal && p.has_jumps()) f /= a;  // e^{lambda(K1+K2)} carries no atom discount
    half_cf[m] = f;
  }
  if (std::abs(half_cf[n / 2]) >= cfg.tail_tol)
    throw numeric_error("LogReturnDensity: grid too small, increase u_max");

  std::vector<cplx> F(n);
  for (std::size_t m = 0; m < n / 2; ++m) F[n / 2 + m] = half_cf[m];
  for (std::size_t m = 1; m <= n / 2; ++m) F[n / 2 - m] = std::conj(half_cf[m]);

  const InversionGrid inv = fourier_inversion_grid(F, umax, x_min);
  u_max_ = umax;
  xs_.resize(n);
  ys_.resize(n);
  const double pref = literal && p.has_jumps() ? a * one_minus_exp(p.lambda * horizon) : 1.0;
  const double shift = literal && p.has_jumps() ? a : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xs_[i] = inv.x(i);
    ys_[i] = pref * inv.values[i].real() + shift;
  }
  interp_ = CubicInterpolant(x_min, dx, ys_);
}

double LogReturnDensity::operator()(double x) const {
  return std::max(interp_(x), 0.0);
}

double LogReturnDensity::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < ys_.size(); ++i) {
    const double w = (i == 0 || i == ys_.size() - 1) ? 0.5 : 1.0;
    s += w * ys_[i];
  }
  return s * (xs_[1] - xs_[0]);
}

double density_logreturn(const ModelParams& p, const SeriesGrid& grid,
                         std::int64_t j, double x, const DensityConfig& cfg) {
  const LogReturnDensity d(p, grid.delta, j, cfg);
  return d(x);
}

// ---------------------------------------------------------------------------
// likelihood

double bsch_loglik(const LogReturnSeries& x, const ModelParams& p) {
  if (p.has_jumps()) throw invalid_input("bsch_loglik: model must have no jumps");
  if (!(p.sigma > 0.0)) throw invalid_input("bsch_loglik: sigma must be > 0");
  const double d = x.delta;
  double l = 0.0;
  for (std::size_t idx = 0; idx < x.values.size(); ++idx) {
    const std::int64_t j = std::int64_t(idx) + 1;
    const double m = logreturn_drift_mean(p, d, j);
    const double v = logreturn_gaussian_variance(p, d, j);
    const double r = x.values[idx] - m;
    l += -0.5 * std::log(2.0 * M_PI * v) - r * r / (2.0 * v);
  }
  return l;
}

std::array<double, 3> bsch_score(const LogReturnSeries& x, const ModelParams& p) {
  if (p.has_jumps()) throw invalid_input("bsch_score: model must have no jumps");
  const double d = x.delta;
  const double a = p.alpha, s2 = p.sigma * p.sigma;
  const double omd = one_minus_exp(a * d);
  double d_s2 = 0.0, d_mu = 0.0, d_al = 0.0;
  for (std::size_t idx = 0; idx < x.values.size(); ++idx) {
    const std::int64_t j = std::int64_t(idx) + 1;
    const double e2 = ejk(a, d, j, 2);
    const double de2 = dejk2_dalpha(a, d, j);
    const double decay = std::exp(-a * double(j) * d);
    const double m = p.mu * omd * decay;
    const double v = s2 * e2 / (2.0 * a);
    const double r = x.values[idx] - m;

    d_s2 += -0.5 / s2 + r * r * a / (s2 * s2 * e2);
    d_mu += r * omd * decay / v;
    // dv/dalpha = v (E'/E - 1/a); dm/dalpha = mu D ((j+1)e^{-a(j+1)D} - j e^{-ajD})
    const double dv_rel = de2 / e2 - 1.0 / a;
    const double dm = p.mu * d *
                      (double(j + 1) * std::exp(-a * double(j + 1) * d) -
                       double(j) * decay);
    d_al += (-0.5 + r * r / (2.0 * v)) * dv_rel + r * dm / v;
  }
  return {d_s2, d_mu, d_al};
}

namespace {

// Gauss-Legendre 3-point nodes on [0, 1].
const double kGl3X[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
const double kGl3W[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

// Shared-grid likelihood for the jump models: one frequency grid serves every
// observation; the j-dependent integral K2 - jD accumulates over the
// geometric segments [e^{-a j D}, e^{-a (j-1) D}].
double jump_loglik(const LogReturnSeries& x, const ModelParams& p,
                   const DensityConfig& cfg, LoglikDiagnostics* diag) {
  const double d = x.delta;
  const std::size_t n = x.values.size();
  const double a = p.alpha;
  const double omd = one_minus_exp(a * d);

  // Frequency cutoff from the Gaussian factor at the tightest variance (j=1).
  const double v1 = logreturn_gaussian_variance(p, d, 1);
  double umax = cfg.u_max > 0.0
                    ? cfg.u_max
                    : 1.1 * std::sqrt(2.0 * std::log(1e13) / v1);

  // Periodization length: images must land beyond every |x_j - mu_beta_j|.
  double maxdev = 0.0;
  for (std::size_t idx = 0; idx < n; ++idx) {
    const double m = logreturn_drift_mean(p, d, std::int64_t(idx) + 1);
    maxdev = std::max(maxdev, std::fabs(x.values[idx] - m));
  }
  const double var_all = theoretical_moment(p, d, 1, 2);
  const double period = 2.0 * (maxdev + 14.0 * std::sqrt(var_all) +
                               jump_reach(p.jumps) + 0.1);
  const std::size_t mu = std::max<std::size_t>(
      512, std::size_t(std::ceil(umax * period / (2.0 * M_PI))) + 1);
  if (mu > (std::size_t(1) << 22))
    throw numeric_error("loglik: frequency grid too large; increase u_max or "
                        "check parameters");
  const double du = umax / double(mu - 1);

  // j-independent pieces per frequency node.
  std::vector<cplx> base(mu);  // lambda * (K1(u) - Delta)
  for (std::size_t m = 0; m < mu; ++m)
    base[m] = p.lambda * k1_reduced(p, d, cplx(du * double(m), 0.0), cfg.quad_tol);

  // Running lambda * (K2(u) - jD), advanced one geometric segment per j.
  std::vector<cplx> running(mu, cplx(0.0, 0.0));
  const JumpSpec jumps = p.jumps;

  double l = 0.0;
  const bool literal = (cfg.mode == DensityMode::paper_literal);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const std::int64_t j = std::int64_t(idx) + 1;
    // segment [e^{-a j D}, e^{-a (j-1) D}] of (phi_xi(-u omd y) - 1)/y
    const double y_hi = std::exp(-a * double(j - 1) * d);
    const double y_lo = std::exp(-a * double(j) * d);
    const double len = y_hi - y_lo;
    for (std::size_t m = 0; m < mu; ++m) {
      const double u = du * double(m);
      cplx seg{0.0, 0.0};
      for (int gp = 0; gp < 3; ++gp) {
        const double y = y_lo + len * kGl3X[gp];
        seg += kGl3W[gp] * (jump_cf(jumps, cplx(-u * omd * y, 0.0)) - 1.0) / y;
      }
      running[m] += p.lambda * seg * len / a;
    }

    const double mb = logreturn_drift_mean(p, d, j);
    const double vb = logreturn_gaussian_variance(p, d, j);
    const double dev = x.values[idx] - mb;
    double acc = 0.0;
    for (std::size_t m = 0; m < mu; ++m) {
      const double u = du * double(m);
      const double w = (m == 0 || m == mu - 1) ? 0.5 : 1.0;
      const cplx val = std::exp(base[m] + running[m] - 0.5 * vb * u * u -
                                kI * u * dev);
      acc += w * val.real();
    }
    double f = acc * du / M_PI;

    if (f < 1e-300) {
      f = 1e-300;
      if (diag) diag->clipped_observations.push_back(std::size_t(j));
    }
    if (literal) {
      // l = -lambda D n(n+3)/2 + sum log(1 - e^{-lambda(j+1)D}) + sum log J
      const double horizon = double(j + 1) * d;
      l += std::log(one_minus_exp(p.lambda * horizon)) +
           std::log(2.0 * M_PI * f) + p.lambda * horizon;
    } else {
      l += std::log(f);
    }
  }
  if (literal) {
    l -= p.lambda * d * double(n) * double(n + 3) / 2.0;
    // the two lambda-horizon terms cancel: sum lambda (j+1) D == lambda D n(n+3)/2
  }
  return l;
}

}  // namespace

double loglik(const LogReturnSeries& x, const ModelParams& p,
              const DensityConfig& cfg, LoglikDiagnostics* diag) {
  x.validate();
  p.validate();
  if (x.values.empty()) throw invalid_input("loglik: empty series");
  if (!(p.sigma > 0.0)) throw invalid_input("loglik: requires sigma > 0");
  if (!p.has_jumps()) return bsch_loglik(x, p);
  return jump_loglik(x, p, cfg, diag);
}

// ---------------------------------------------------------------------------
// maximum likelihood

namespace {

struct MleLayout {
  std::vector<std::string> names;
  std::vector<double> lo, hi;
};

MleLayout mle_layout(JumpKind model) {
  MleLayout m;
  m.names = {"alpha", "mu", "sigma"};
  m.lo = {1e-4, -100.0, 1e-8};
  m.hi = {500.0, 100.0, 10.0};
  if (model == JumpKind::gaussian) {
    m.names.insert(m.names.end(), {"lambda", "mu_j", "sigma_j"});
    m.lo.insert(m.lo.end(), {1e-8, -10.0, 1e-5});
    m.hi.insert(m.hi.end(), {5000.0, 10.0, 10.0});
  } else if (model == JumpKind::double_exponential) {
    m.names.insert(m.names.end(), {"lambda", "eta1", "eta2", "q"});
    m.lo.insert(m.lo.end(), {1e-8, 1.0 + 1e-6, 1e-6, 0.0});
    m.hi.insert(m.hi.end(), {5000.0, 500.0, 500.0, 1.0});
  }
  return m;
}

ModelParams mle_unpack(const std::vector<double>& v, JumpKind model) {
  ModelParams p;
  p.alpha = v[0];
  p.mu = v[1];
  p.sigma = v[2];
  if (model == JumpKind::gaussian) {
    p.lambda = v[3];
    p.jumps = JumpSpec::gaussian(v[4], v[5]);
  } else if (model == JumpKind::double_exponential) {
    p.lambda = v[3];
    p.jumps = JumpSpec::double_exponential(v[4], v[5], v[6]);
  }
  return p;
}

std::vector<double> mle_pack(const ModelParams& p, JumpKind model) {
  if (model == JumpKind::none) return {p.alpha, p.mu, p.sigma};
  if (model == JumpKind::gaussian)
    return {p.alpha, p.mu, p.sigma, p.lambda, p.jumps.mu_j, p.jumps.sigma_j};
  return {p.alpha, p.mu,         p.sigma,      p.lambda,
          p.jumps.eta1, p.jumps.eta2, p.jumps.q};
}

}  // namespace

CalibrationResult mle_fit(const LogReturnSeries& x, JumpKind model,
                          const ModelParams& init, const MleFitOptions& opts) {
  x.validate();
  if (x.values.empty()) throw invalid_input("mle_fit: empty series");
  const MleLayout layout = mle_layout(model);
  Box box{layout.lo, layout.hi};

  auto negll = [&](const std::vector<double>& v) {
    return -loglik(x, mle_unpack(v, model), opts.density);
  };

  NmOptions nm;
  nm.max_iterations = opts.max_iterations;
  nm.tol_simplex = 1e-9;
  NmResult nmres = nelder_mead(negll, mle_pack(init, model), box, nm);

  CalibrationResult out;
  out.model = model;
  out.estimator = "mle";
  out.param_names = layout.names;
  out.iterations = nmres.iterations;

  std::vector<double> xopt = nmres.x;
  double grad_norm = 0.0;

  if (model == JumpKind::none) {
    // Polish to a stationary point of the analytic scores.
    auto score = [&](const std::vector<double>& v) -> std::vector<double> {
      const ModelParams p = mle_unpack(v, model);
      const auto s = bsch_score(x, p);
      return {s[2], s[1], 2.0 * v[2] * s[0]};  // d/d alpha, d/d mu, d/d sigma
    };
    const NewtonResult nr = newton_polish(score, xopt, box, 80, 1e-9);
    xopt = nr.x;
    grad_norm = nr.residual_norm;
    out.converged = nr.converged || nmres.converged;
  } else {
    // Central-difference gradient at the optimum, for reporting.
    for (std::size_t i = 0; i < xopt.size(); ++i) {
      const double h = 1e-5 * std::max(1.0, std::fabs(xopt[i]));
      std::vector<double> xp = xopt, xm = xopt;
      xp[i] += h;
      xm[i] -= h;
      box.clamp(xp);
      box.clamp(xm);
      const double g = (negll(xp) - negll(xm)) / (xp[i] - xm[i]);
      grad_norm += g * g;
    }
    grad_norm = std::sqrt(grad_norm);
    out.converged = nmres.converged;
  }

  out.params = mle_unpack(xopt, model);
  out.objective = -negll(xopt);
  out.grad_norm = grad_norm;

  if (opts.compute_std_errors) {
    // Fisher information from the numeric Hessian of the log-likelihood.
    const std::size_t dpar = xopt.size();
    Eigen::MatrixXd H(dpar, dpar);
    auto ll = [&](const std::vector<double>& v) { return -negll(v); };
    const double l0 = ll(xopt);
    std::vector<double> hs(dpar);
    for (std::size_t i = 0; i < dpar; ++i)
      hs[i] = 1e-4 * std::max(1.0, std::fabs(xopt[i]));
    for (std::size_t i = 0; i < dpar; ++i) {
      for (std::size_t k = i; k < dpar; ++k) {
        std::vector<double> v = xopt;
        if (i == k) {
          v[i] = xopt[i] + hs[i];
          const double lp = ll(v);
          v[i] = xopt[i] - hs[i];
          const double lm = ll(v);
          H(i, i) = (lp - 2.0 * l0 + lm) / (hs[i] * hs[i]);
        } else {
          double acc = 0.0;
          for (int si = -1; si <= 1; si += 2)
            for (int sk = -1; sk <= 1; sk += 2) {
              v = xopt;
              v[i] += si * hs[i];
              v[k] += sk * hs[k];
              acc += si * sk * ll(v);
            }
          H(i, k) = H(k, i) = acc / (4.0 * hs[i] * hs[k]);
        }
      }
    }
    Eigen::MatrixXd info = -H;
    const Eigen::MatrixXd cov = info.completeOrthogonalDecomposition().pseudoInverse();
    out.std_errors.resize(dpar);
    for (std::size_t i = 0; i < dpar; ++i)
      out.std_errors[i] = cov(i, i) > 0.0 ? std::sqrt(cov(i, i)) : 0.0;
  }
  if (!out.converged)
    out.diagnostics = "line search/simplex did not fully converge; best iterate";
  return out;
}

}  // namespace mrjd
