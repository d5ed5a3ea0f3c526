#include "mrjd/moments.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "mrjd/jumps.hpp"
#include "mrjd/math_utils.hpp"
#include "mrjd/optim.hpp"

namespace mrjd {

namespace {

constexpr cplx kI{0.0, 1.0};

// First four cumulants of X_{j Delta} under the historic measure.
std::array<double, 4> cumulants(const ModelParams& p, double delta,
                                std::int64_t j) {
  const double a = p.alpha;
  std::array<double, 4> xi_m{0.0, 0.0, 0.0, 0.0};
  if (p.has_jumps())
    for (int k = 1; k <= 4; ++k) xi_m[k - 1] = jump_moment(p.jumps, k);

  std::array<double, 4> c;
  c[0] = logreturn_drift_mean(p, delta, j) +
         p.lambda * xi_m[0] * ejk(a, delta, j, 1) / a;
  c[1] = (p.sigma * p.sigma + p.lambda * xi_m[1]) * ejk(a, delta, j, 2) /
         (2.0 * a);
  c[2] = p.lambda * xi_m[2] * ejk(a, delta, j, 3) / (3.0 * a);
  c[3] = p.lambda * xi_m[3] * ejk(a, delta, j, 4) / (4.0 * a);
  return c;
}

double raw_from_cumulants(const std::array<double, 4>& c, int k) {
  const double k1 = c[0], k2 = c[1], k3 = c[2], k4 = c[3];
  switch (k) {
    case 1: return k1;
    case 2: return k2 + k1 * k1;
    case 3: return k3 + 3.0 * k2 * k1 + k1 * k1 * k1;
    case 4:
      return k4 + 4.0 * k3 * k1 + 3.0 * k2 * k2 + 6.0 * k1 * k1 * k2 +
             k1 * k1 * k1 * k1;
    default: throw invalid_input("moment order must be in 1..4");
  }
}

}  // namespace

double theoretical_moment(const ModelParams& p, double delta, std::int64_t j,
                          int k) {
  p.validate();
  if (!(delta > 0.0)) throw invalid_input("theoretical_moment: delta must be > 0");
  if (j < 0) throw invalid_input("theoretical_moment: j must be >= 0");
  if (k < 1 || k > 4) throw invalid_input("theoretical_moment: k must be in 1..4");
  return raw_from_cumulants(cumulants(p, delta, j), k);
}

double moment_by_cf_recursion(const ModelParams& p, double delta,
                              std::int64_t j, int k) {
  if (k < 1 || k > 4) throw invalid_input("moment order must be in 1..4");
  const double a = p.alpha;

  // c[m] = D^{m+1} T1(0), T1 the characteristic exponent at theta = 0.
  std::array<cplx, 4> c{};
  for (int m = 1; m <= 4; ++m) {
    cplx im = std::pow(kI, m);
    cplx val{0.0, 0.0};
    if (m == 1) val += kI * logreturn_drift_mean(p, delta, j);
    if (m == 2)
      val += -p.sigma * p.sigma * ejk(a, delta, j, 2) / (2.0 * a);
    if (p.has_jumps())
      val += p.lambda * im * jump_moment(p.jumps, m) * ejk(a, delta, j, m) /
             (double(m) * a);
    c[m - 1] = val;
  }

  static const double binom[4][4] = {
      {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  std::array<cplx, 5> dphi{};
  dphi[0] = 1.0;
  for (int m = 1; m <= k; ++m) {
    cplx s{0.0, 0.0};
    for (int l = 0; l <= m - 1; ++l)
      s += binom[m - 1][l] * c[l] * dphi[m - 1 - l];
    dphi[m] = s;
  }
  return (dphi[k] / std::pow(kI, k)).real();
}

double averaged_moment(const ModelParams& p, const SeriesGrid& grid, int k) {
  p.validate();
  grid.validate();
  if (k < 1 || k > 4) throw invalid_input("averaged_moment: k must be in 1..4");

  const double a = p.alpha, d = grid.delta;
  const double n = double(grid.n);
  const double omd = one_minus_exp(a * d);

  // G(m) = (1/n) sum_{j=1..n} e^{-m alpha j Delta}, the geometric averages all
  // bar identities reduce to.
  auto G = [&](int m) {
    const double x = double(m) * a * d;
    return std::exp(-x) * one_minus_exp(double(m) * a * d * n) /
           (n * one_minus_exp(x));
  };
  const double g1 = G(1), g2 = G(2), g3 = G(3), g4 = G(4);

  std::array<double, 4> xi_m{0.0, 0.0, 0.0, 0.0};
  if (p.has_jumps())
    for (int m = 1; m <= 4; ++m) xi_m[m - 1] = jump_moment(p.jumps, m);

  // E_{j,k} = A_k + B_k e^{-k alpha j Delta}
  auto Ak = [&](int m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    return one_minus_exp(double(m) * a * d) + sign * std::pow(omd, m);
  };
  auto Bk = [&](int m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    return -sign * std::pow(omd, m);
  };

  // Cumulants as polynomials in t = e^{-alpha j Delta}:
  //   kappa_1 = C t, kappa_m = S_m (A_m + B_m t^m) for m >= 2.
  const double C = (p.mu + p.lambda * xi_m[0] / a) * omd;
  const double S2 = (p.sigma * p.sigma + p.lambda * xi_m[1]) / (2.0 * a);
  const double S3 = p.lambda * xi_m[2] / (3.0 * a);
  const double S4 = p.lambda * xi_m[3] / (4.0 * a);
  const double A2 = S2 * Ak(2), B2 = S2 * Bk(2);
  const double A3 = S3 * Ak(3), B3 = S3 * Bk(3);
  const double A4 = S4 * Ak(4), B4 = S4 * Bk(4);

  switch (k) {
    case 1:
      return C * g1;
    case 2:
      return A2 + B2 * g2 + C * C * g2;
    case 3:
      return A3 + B3 * g3 + 3.0 * C * (A2 * g1 + B2 * g3) + C * C * C * g3;
    case 4:
      return A4 + B4 * g4 + 4.0 * C * (A3 * g1 + B3 * g4) +
             3.0 * (A2 * A2 + 2.0 * A2 * B2 * g2 + B2 * B2 * g4) +
             6.0 * C * C * (A2 * g2 + B2 * g4) + C * C * C * C * g4;
  }
  return 0.0;  // unreachable
}

MomentSet empirical_moments(const LogReturnSeries& x, int kmax) {
  if (x.values.empty()) throw invalid_input("empirical_moments: empty series");
  if (kmax < 1 || kmax > 4)
    throw invalid_input("empirical_moments: kmax must be in 1..4");
  MomentSet m;
  const double n = double(x.values.size());
  for (double v : x.values) {
    double pw = v;
    m.m1 += pw;
    if (kmax >= 2) m.m2 += (pw *= v);
    if (kmax >= 3) m.m3 += (pw *= v);
    if (kmax >= 4) m.m4 += (pw *= v);
  }
  m.m1 /= n;
  m.m2 /= n;
  m.m3 /= n;
  m.m4 /= n;
  return m;
}

double squared_autocov_empirical(const LogReturnSeries& x, int lag) {
  if (lag != 0 && lag != 1)
    throw invalid_input("squared_autocov_empirical: lag must be 0 or 1");
  const std::size_t n = x.values.size();
  if (n <= std::size_t(lag))
    throw invalid_input("squared_autocov_empirical: series too short");
  const double m2 = empirical_moments(x, 2).m2;
  double s = 0.0;
  for (std::size_t j = 0; j + lag < n; ++j) {
    const double a = x.values[j] * x.values[j] - m2;
    const double b = x.values[j + lag] * x.values[j + lag] - m2;
    s += a * b;
  }
  return s / double(n - lag);
}

double squared_autocov_theoretical(const ModelParams& p, const SeriesGrid& grid,
                                   int lag) {
  if (lag != 0 && lag != 1)
    throw invalid_input("squared_autocov_theoretical: lag must be 0 or 1");
  const double mu2 = averaged_moment(p, grid, 2);
  if (lag == 0) return averaged_moment(p, grid, 4) - mu2 * mu2;
  // Observations are independent, so only the j-drift of E[X_j^2] enters.
  double s = 0.0;
  for (std::size_t j = 1; j < grid.n; ++j) {
    const double a = theoretical_moment(p, grid.delta, std::int64_t(j), 2) - mu2;
    const double b =
        theoretical_moment(p, grid.delta, std::int64_t(j + 1), 2) - mu2;
    s += a * b;
  }
  return s / double(grid.n - 1);
}

namespace {

struct ParamLayout {
  std::vector<std::string> names;
  std::vector<double> lo, hi;
};

ParamLayout layout_for(JumpKind model, const MomFitOptions& opts) {
  ParamLayout pl;
  pl.names = {"alpha", "mu", "sigma"};
  pl.lo = {1e-4, -100.0, 1e-8};
  pl.hi = {500.0, 100.0, 10.0};
  if (model == JumpKind::gaussian) {
    pl.names.push_back("lambda");
    pl.lo.push_back(1e-8);
    pl.hi.push_back(5000.0);
    if (!opts.fix_mu_j) {
      pl.names.push_back("mu_j");
      pl.lo.push_back(-10.0);
      pl.hi.push_back(10.0);
    }
    pl.names.push_back("sigma_j");
    pl.lo.push_back(1e-8);
    pl.hi.push_back(10.0);
  } else if (model == JumpKind::double_exponential) {
    pl.names.push_back("lambda");
    pl.lo.push_back(1e-8);
    pl.hi.push_back(5000.0);
    pl.names.push_back("eta1");
    pl.lo.push_back(1.0 + 1e-6);
    pl.hi.push_back(500.0);
    pl.names.push_back("eta2");
    pl.lo.push_back(1e-6);
    pl.hi.push_back(500.0);
    if (!opts.fix_q) {
      pl.names.push_back("q");
      pl.lo.push_back(0.0);
      pl.hi.push_back(1.0);
    }
  }
  return pl;
}

std::vector<double> pack(const ModelParams& p, JumpKind model,
                         const MomFitOptions& opts) {
  std::vector<double> x = {p.alpha, p.mu, p.sigma};
  if (model == JumpKind::gaussian) {
    x.push_back(p.lambda);
    if (!opts.fix_mu_j) x.push_back(p.jumps.mu_j);
    x.push_back(p.jumps.sigma_j);
  } else if (model == JumpKind::double_exponential) {
    x.push_back(p.lambda);
    x.push_back(p.jumps.eta1);
    x.push_back(p.jumps.eta2);
    if (!opts.fix_q) x.push_back(p.jumps.q);
  }
  return x;
}

ModelParams unpack(const std::vector<double>& x, JumpKind model,
                   const ModelParams& init, const MomFitOptions& opts) {
  ModelParams p;
  p.alpha = x[0];
  p.mu = x[1];
  p.sigma = x[2];
  if (model == JumpKind::none) {
    p.lambda = 0.0;
    p.jumps = JumpSpec::none();
  } else if (model == JumpKind::gaussian) {
    p.lambda = x[3];
    std::size_t i = 4;
    const double mu_j = opts.fix_mu_j ? init.jumps.mu_j : x[i++];
    p.jumps = JumpSpec::gaussian(mu_j, x[i]);
  } else {
    p.lambda = x[3];
    const double q = opts.fix_q ? init.jumps.q : x[6];
    p.jumps = JumpSpec::double_exponential(x[4], x[5], q);
  }
  return p;
}

}  // namespace

CalibrationResult mom_fit(const LogReturnSeries& x, JumpKind model,
                          const ModelParams& init, const MomFitOptions& opts) {
  x.validate();
  if (x.values.size() < 4) throw invalid_input("mom_fit: series too short");
  const SeriesGrid grid = x.grid();
  const MomentSet mhat = empirical_moments(x, 4);

  const int n_moments = (model == JumpKind::none) ? 3 : 4;
  const bool use_autocov = (model != JumpKind::none);
  const double gamma0_hat = use_autocov ? squared_autocov_empirical(x, 0) : 0.0;
  const double gamma1_hat = use_autocov ? squared_autocov_empirical(x, 1) : 0.0;

  // value^-2 weighting, guarded by the natural scale m2^{k/2} so near-zero
  // sample moments cannot dominate the objective.
  std::vector<double> scale(n_moments);
  for (int k = 1; k <= n_moments; ++k)
    scale[k - 1] = std::max(std::fabs(mhat[k]),
                            std::pow(std::max(mhat.m2, 1e-300), 0.5 * k));
  const double scale_g = std::max(std::fabs(gamma0_hat),
                                  std::max(mhat.m2 * mhat.m2, 1e-300));

  const ParamLayout pl = layout_for(model, opts);

  auto residuals = [&](const std::vector<double>& v) {
    const ModelParams p = unpack(v, model, init, opts);
    p.validate();
    std::vector<double> r;
    r.reserve(n_moments + 2);
    for (int k = 1; k <= n_moments; ++k)
      r.push_back((mhat[k] - averaged_moment(p, grid, k)) / scale[k - 1]);
    if (use_autocov) {
      r.push_back((gamma0_hat - squared_autocov_theoretical(p, grid, 0)) /
                  scale_g);
      r.push_back((gamma1_hat - squared_autocov_theoretical(p, grid, 1)) /
                  scale_g);
    }
    return r;
  };

  Box box{pl.lo, pl.hi};
  LmOptions lm;
  lm.max_iterations = opts.max_iterations;
  const LmResult res =
      levenberg_marquardt(residuals, pack(init, model, opts), box, lm);

  CalibrationResult out;
  out.model = model;
  out.estimator = "mom";
  out.params = unpack(res.x, model, init, opts);
  out.param_names = pl.names;
  out.objective = res.objective;
  out.grad_norm = res.grad_norm;
  out.iterations = res.iterations;
  out.converged = res.converged;
  if (!res.converged)
    out.diagnostics = "moment matching did not fully converge; best iterate";
  return out;
}

}  // namespace mrjd
