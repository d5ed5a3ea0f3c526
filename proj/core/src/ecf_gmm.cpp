#include "mrjd/ecf_gmm.hpp"

#include <cmath>

#include "mrjd/charfn.hpp"
#include "mrjd/moments.hpp"
#include "mrjd/optim.hpp"
#include "mrjd/quadrature.hpp"
#include "mrjd/stats.hpp"

namespace mrjd {

FrequencyGrid FrequencyGrid::default_for(const LogReturnSeries& x) {
  const DescriptiveStats s = describe(x);
  FrequencyGrid fg;
  fg.eta = s.std_dev > 0.0 ? 20.0 / s.std_dev : 20.0;
  fg.L = 10;
  return fg;
}

cplx ecf(const LogReturnSeries& x, double u) {
  if (x.values.empty()) throw invalid_input("ecf: empty series");
  cplx s{0.0, 0.0};
  for (double v : x.values) s += cplx(std::cos(u * v), std::sin(u * v));
  return s / double(x.values.size());
}

std::vector<double> estimating_functions(const LogReturnSeries& x,
                                         const ModelParams& p,
                                         const FrequencyGrid& fg,
                                         std::int64_t j) {
  fg.validate();
  if (j < 1 || std::size_t(j) > x.values.size())
    throw invalid_input("estimating_functions: j out of range");
  const double xj = x.values[std::size_t(j) - 1];
  const int L = fg.L;
  std::vector<double> f(2 * L);
  for (int k = 1; k <= L; ++k) {
    const double u = fg.point(k);
    const cplx h = cplx(std::cos(u * xj), std::sin(u * xj)) -
                   cf_logreturn(p, 0.0, x.delta, j, cplx(u, 0.0));
    f[k - 1] = h.real();
    f[L + k - 1] = h.imag();
  }
  return f;
}

namespace {

// Exact covariance blocks of (cos(u_a X), sin(u_b X)) from the model CF.
Eigen::MatrixXd omega_from_cf(
    const std::function<cplx(double)>& phi, const FrequencyGrid& fg) {
  const int L = fg.L;
  const std::vector<double> u = fg.points();
  std::vector<cplx> phi1(L);
  for (int a = 0; a < L; ++a) phi1[a] = phi(u[a]);

  Eigen::MatrixXd m(2 * L, 2 * L);
  for (int a = 0; a < L; ++a) {
    for (int b = 0; b < L; ++b) {
      const cplx plus = phi(u[a] + u[b]);
      const cplx minus = phi(u[a] - u[b]);
      const double rr = 0.5 * (plus.real() + minus.real()) -
                        phi1[a].real() * phi1[b].real();
      const double ri = 0.5 * (plus.imag() - minus.imag()) -
                        phi1[a].real() * phi1[b].imag();
      const double ii = 0.5 * (minus.real() - plus.real()) -
                        phi1[a].imag() * phi1[b].imag();
      m(a, b) = rr;
      m(a, L + b) = ri;
      m(L + a, L + b) = ii;
    }
  }
  for (int a = 0; a < L; ++a)
    for (int b = 0; b < L; ++b) m(L + a, b) = m(b, L + a);
  return m;
}

}  // namespace

Eigen::MatrixXd omega(const ModelParams& p, const SeriesGrid& grid,
                      const FrequencyGrid& fg, std::int64_t j) {
  fg.validate();
  return omega_from_cf(
      [&](double u) {
        return cf_logreturn(p, 0.0, grid.delta, j, cplx(u, 0.0));
      },
      fg);
}

Eigen::MatrixXd omega_averaged(const ModelParams& p, const SeriesGrid& grid,
                               const FrequencyGrid& fg) {
  fg.validate();
  grid.validate();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(2 * fg.L, 2 * fg.L);
  for (std::size_t j = 1; j <= grid.n; ++j)
    acc += omega(p, grid, fg, std::int64_t(j));
  return acc / double(grid.n);
}

PsdInverse psd_pseudo_inverse(const Eigen::MatrixXd& m) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double max_ev = ev.maxCoeff();

  PsdInverse out;
  if (!(max_ev > 0.0)) {
    // No usable spectrum at all: ridge keeps the objective well-defined.
    const double ridge = 1e-8 * std::fabs(m.trace()) / double(m.rows()) + 1e-300;
    out.inverse = Eigen::MatrixXd::Identity(m.rows(), m.cols()) / ridge;
    out.ridged = true;
    return out;
  }
  // Negative eigenvalues are numerical noise (clipped); directions with a
  // negligible share of the spectrum are dropped, never amplified.  The floor
  // also caps the weight put on near-duplicate frequency conditions.
  const double floor = 1e-8 * max_ev;
  Eigen::VectorXd inv_ev(ev.size());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) > floor) {
      inv_ev(i) = 1.0 / ev(i);
    } else {
      inv_ev(i) = 0.0;
      out.ridged = true;  // rank-deficient weight, reported to the caller
    }
  }
  out.inverse = es.eigenvectors() * inv_ev.asDiagonal() *
                es.eigenvectors().transpose();
  return out;
}

namespace {

struct GmmLayout {
  std::vector<std::string> names;
  std::vector<double> lo, hi;
};

GmmLayout gmm_layout(JumpKind model) {
  GmmLayout g;
  g.names = {"alpha", "mu", "sigma"};
  g.lo = {1e-4, -100.0, 1e-8};
  g.hi = {500.0, 100.0, 10.0};
  if (model == JumpKind::gaussian) {
    g.names.insert(g.names.end(), {"lambda", "mu_j", "sigma_j"});
    g.lo.insert(g.lo.end(), {1e-8, -10.0, 1e-5});
    g.hi.insert(g.hi.end(), {5000.0, 10.0, 10.0});
  } else if (model == JumpKind::double_exponential) {
    g.names.insert(g.names.end(), {"lambda", "eta1", "eta2", "q"});
    g.lo.insert(g.lo.end(), {1e-8, 1.0 + 1e-6, 1e-6, 0.0});
    g.hi.insert(g.hi.end(), {5000.0, 500.0, 500.0, 1.0});
  }
  return g;
}

ModelParams gmm_unpack(const std::vector<double>& v, JumpKind model) {
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

std::vector<double> gmm_pack(const ModelParams& p, JumpKind model) {
  if (model == JumpKind::none) return {p.alpha, p.mu, p.sigma};
  if (model == JumpKind::gaussian)
    return {p.alpha, p.mu, p.sigma, p.lambda, p.jumps.mu_j, p.jumps.sigma_j};
  return {p.alpha, p.mu,         p.sigma,      p.lambda,
          p.jumps.eta1, p.jumps.eta2, p.jumps.q};
}

// Averaged estimating equation: gbar_k = Re/Im( ecf(u_k) - avg_j phi_j(u_k) ).
Eigen::VectorXd gbar(const LogReturnSeries& x, const ModelParams& p,
                     const FrequencyGrid& fg,
                     const std::vector<cplx>& ecf_cache) {
  const int L = fg.L;
  const std::size_t n = x.values.size();
  Eigen::VectorXd g(2 * L);
  for (int k = 1; k <= L; ++k) {
    const double u = fg.point(k);
    cplx avg{0.0, 0.0};
    for (std::size_t j = 1; j <= n; ++j)
      avg += cf_logreturn(p, 0.0, x.delta, std::int64_t(j), cplx(u, 0.0));
    avg /= double(n);
    const cplx h = ecf_cache[k - 1] - avg;
    g(k - 1) = h.real();
    g(L + k - 1) = h.imag();
  }
  return g;
}

}  // namespace

CalibrationResult gmm_fit(const LogReturnSeries& x, JumpKind model,
                          const FrequencyGrid& fg, const ModelParams& init,
                          const GmmOptions& opts, GmmExtras* extras) {
  x.validate();
  fg.validate();
  if (2 * fg.L < int(gmm_layout(model).names.size()))
    throw invalid_input("gmm_fit: 2L must be at least the parameter count");

  std::vector<cplx> ecf_cache(fg.L);
  for (int k = 1; k <= fg.L; ++k) ecf_cache[k - 1] = ecf(x, fg.point(k));

  const GmmLayout layout = gmm_layout(model);
  Box box{layout.lo, layout.hi};
  LmOptions lm;
  lm.max_iterations = opts.max_iterations;

  // Step 1: identity weight.  The CF-residual surface flattens once the
  // transient phases wrap, so the search is multi-started from the user init
  // and from a method-of-moments pilot.
  auto resid_identity = [&](const std::vector<double>& v) {
    const Eigen::VectorXd g = gbar(x, gmm_unpack(v, model), fg, ecf_cache);
    return std::vector<double>(g.data(), g.data() + g.size());
  };
  std::vector<std::vector<double>> starts{gmm_pack(init, model)};
  try {
    const CalibrationResult pilot = mom_fit(x, model, init);
    starts.push_back(gmm_pack(pilot.params, model));
  } catch (const std::exception&) {
  }
  LmResult step1;
  bool have_step1 = false;
  for (const auto& start : starts) {
    const LmResult candidate = levenberg_marquardt(resid_identity, start, box, lm);
    if (!have_step1 || candidate.objective < step1.objective) {
      step1 = candidate;
      have_step1 = true;
    }
  }

  // Step 2: weight by the (pseudo-)inverse of the averaged omega at the
  // step-1 estimate; the literal flag restores the displayed omega weighting.
  const ModelParams p1 = gmm_unpack(step1.x, model);
  const Eigen::MatrixXd om = omega_averaged(p1, x.grid(), fg);
  Eigen::MatrixXd W;
  bool ridged = false;
  if (opts.literal_weighting) {
    W = 0.5 * (om + om.transpose());
  } else {
    PsdInverse pi = psd_pseudo_inverse(0.5 * (om + om.transpose()));
    W = pi.inverse;
    ridged = pi.ridged;
  }
  // Square root of the weight for least-squares residuals.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W);
  Eigen::VectorXd sq = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd Wh =
      es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose();

  auto resid_weighted = [&](const std::vector<double>& v) {
    const Eigen::VectorXd g = gbar(x, gmm_unpack(v, model), fg, ecf_cache);
    const Eigen::VectorXd r = Wh * g;
    return std::vector<double>(r.data(), r.data() + r.size());
  };
  LmResult step2 = levenberg_marquardt(resid_weighted, step1.x, box, lm);

  // Sanity guard: the efficient step must stay near the consistent step-1
  // estimate in the unweighted metric; a blow-up means the weight was
  // misestimated, in which case the step-1 estimate is kept.
  bool kept_step1 = false;
  {
    const Eigen::VectorXd g2 =
        gbar(x, gmm_unpack(step2.x, model), fg, ecf_cache);
    if (g2.squaredNorm() > 10.0 * step1.objective + 1e-12) {
      const std::vector<double> r1 = resid_weighted(step1.x);
      double s = 0.0;
      for (double v : r1) s += v * v;
      step2.x = step1.x;
      step2.objective = s;
      kept_step1 = true;
    }
  }

  CalibrationResult out;
  out.model = model;
  out.estimator = "ecf";
  out.params = gmm_unpack(step2.x, model);
  out.param_names = layout.names;
  out.objective = step2.objective;
  out.grad_norm = step2.grad_norm;
  out.iterations = step1.iterations + step2.iterations;
  out.converged = step2.converged || kept_step1;
  if (kept_step1)
    out.diagnostics =
        "efficient weighting diverged; kept the first-step estimate";
  if (ridged)
    out.diagnostics = "weight matrix was rank-deficient; null directions dropped";
  if (extras) {
    extras->j_statistic = double(x.values.size()) * step2.objective;
    extras->weight_ridged = ridged;
  }
  return out;
}

double continuum_objective(const LogReturnSeries& x, const ModelParams& p,
                           ContinuumWeight weight, double u_max) {
  x.validate();
  if (x.values.empty()) throw invalid_input("continuum_objective: empty series");
  return continuum_objective_fn([&](double u) { return ecf(x, u); }, p,
                                x.delta, x.values.size(), weight, u_max);
}

double continuum_objective_fn(const std::function<cplx(double)>& empirical,
                              const ModelParams& p, double delta,
                              std::size_t n, ContinuumWeight weight,
                              double u_max) {
  p.validate();
  if (n == 0) throw invalid_input("continuum_objective: n must be >= 1");

  auto fdiff = [&](double u) {
    cplx avg{0.0, 0.0};
    for (std::size_t j = 1; j <= n; ++j)
      avg += cf_logreturn(p, 0.0, delta, std::int64_t(j), cplx(u, 0.0));
    avg /= double(n);
    const cplx d = empirical(u) - avg;
    return std::norm(d);
  };

  if (weight == ContinuumWeight::gaussian) {
    const double U = u_max > 0.0 ? u_max : 7.5;
    if (4.0 * std::exp(-U * U) > 1e-12)
      throw numeric_error("continuum_objective: domain too small for the "
                          "gaussian weight tail");
    return integrate_gk_or_throw(
               [&](double u) {
                 return cplx(fdiff(u) * std::exp(-u * u), 0.0);
               },
               -U, U, 1e-10)
        .real();
  }
  const double U = u_max > 0.0 ? u_max : 40.0;
  if (4.0 * std::exp(-U) > 1e-12)
    throw numeric_error("continuum_objective: domain too small for the "
                        "exponential weight tail");
  return integrate_gk_or_throw(
             [&](double u) { return cplx(fdiff(u) * std::exp(-u), 0.0); }, 0.0,
             U, 1e-10)
      .real();
}

}  // namespace mrjd
