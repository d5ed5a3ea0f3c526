#include "mrjd/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>

#include "mrjd/charfn.hpp"
#include "mrjd/esscher.hpp"
#include "mrjd/math_utils.hpp"

namespace mrjd {

namespace {

// Neumaier compensated accumulator.
struct KahanSum {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

constexpr std::size_t kChunk = 8192;  // paths per RNG stream

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  std::seed_seq seq{std::uint32_t(s), std::uint32_t(s >> 32),
                    std::uint32_t(splitmix64(s)), std::uint32_t(s >> 32)};
  return Rng(seq);
}

double draw_jump(const JumpSpec& jumps, Rng& rng) {
  switch (jumps.kind) {
    case JumpKind::none:
      throw invalid_input("draw_jump: jump law is none");
    case JumpKind::gaussian: {
      std::normal_distribution<double> n(jumps.mu_j, jumps.sigma_j);
      return n(rng);
    }
    case JumpKind::double_exponential: {
      std::uniform_real_distribution<double> u01(0.0, 1.0);
      std::exponential_distribution<double> e1(jumps.eta1), e2(jumps.eta2);
      return (u01(rng) < jumps.q) ? e1(rng) : -e2(rng);
    }
  }
  throw invalid_input("draw_jump: unknown jump kind");
}

double simulate_increment(const ModelParams& p, double t0, double t1, Rng& rng) {
  if (!(t1 > t0)) throw invalid_input("simulate_increment: need t1 > t0");
  const double dt = t1 - t0;
  double x = 0.0;
  if (p.sigma > 0.0) {
    const double var =
        p.sigma * p.sigma * one_minus_exp(2.0 * p.alpha * dt) / (2.0 * p.alpha);
    std::normal_distribution<double> n(0.0, std::sqrt(var));
    x += n(rng);
  }
  if (p.has_jumps()) {
    std::poisson_distribution<int> pois(p.lambda * dt);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const int count = pois(rng);
    for (int i = 0; i < count; ++i) {
      const double s = t0 + dt * u01(rng);
      x += draw_jump(p.jumps, rng) * std::exp(-p.alpha * (t1 - s));
    }
  }
  return x;
}

LogReturnSeries simulate_logreturn_series(const ModelParams& p,
                                          const SeriesGrid& grid,
                                          std::uint64_t seed) {
  return simulate_logreturns(p, grid, 0.0, Measure::historic, seed).series;
}

WeightedSeries simulate_logreturns(const ModelParams& p, const SeriesGrid& grid,
                                   double theta, Measure measure,
                                   std::uint64_t seed) {
  p.validate();
  grid.validate();
  Rng rng = make_stream(seed, 0);
  WeightedSeries out;
  out.series.delta = grid.delta;
  out.series.values.reserve(grid.n);

  const double g = std::exp(-p.alpha * grid.delta);
  const double level = p.mu * one_minus_exp(p.alpha * grid.delta);
  const bool tilted = (measure == Measure::esscher);

  // Observations are X_{j Delta} = Y_{(j+1)Delta} - Y_{j Delta}, j = 1..n, so
  // the path is advanced once before recording starts.
  double y = 0.0;
  double v_total = 0.0;  // driving-process increment sum, for the tilt weight
  std::normal_distribution<double> bm(0.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double ou_sd =
      p.sigma > 0.0 ? std::sqrt(p.sigma * p.sigma *
                                one_minus_exp(2.0 * p.alpha * grid.delta) /
                                (2.0 * p.alpha))
                    : 0.0;
  const double cov =  // Cov(OU increment, plain BM increment) per step
      p.sigma > 0.0 ? p.sigma * p.sigma * one_minus_exp(p.alpha * grid.delta) /
                          p.alpha
                    : 0.0;
  const double bm_var = p.sigma * p.sigma * grid.delta;

  std::poisson_distribution<int> pois(p.lambda * grid.delta);
  for (std::size_t step = 0; step <= grid.n; ++step) {
    double inc = 0.0;  // int e^{-alpha((j+1)D - s)} dV over this step
    if (p.sigma > 0.0) {
      const double z1 = bm(rng);
      inc += ou_sd * z1;
      if (tilted) {
        const double z2 = bm(rng);
        const double c1 = cov / ou_sd;
        const double c2 = std::sqrt(std::max(bm_var - c1 * c1, 0.0));
        v_total += c1 * z1 + c2 * z2;
      }
    }
    if (p.has_jumps()) {
      const int count = pois(rng);
      for (int i = 0; i < count; ++i) {
        const double s = grid.delta * u01(rng);  // offset within the step
        const double xi = draw_jump(p.jumps, rng);
        inc += xi * std::exp(-p.alpha * (grid.delta - s));
        if (tilted) v_total += xi;
      }
    }
    const double y_next = level + g * y + inc;
    if (step >= 1) out.series.values.push_back(y_next - y);
    y = y_next;
  }

  if (tilted) {
    require_admissible_theta(p, theta);
    const double horizon = double(grid.n + 1) * grid.delta;
    const double lv = laplace_exponent(p, cplx(theta, 0.0)).real();
    out.weight = std::exp(theta * v_total - horizon * lv);
  }
  return out;
}

double effective_sample_size(const std::vector<double>& weights) {
  double s = 0.0, s2 = 0.0;
  for (double w : weights) {
    s += w;
    s2 += w * w;
  }
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

McPrice mc_price_call(const ModelParams& p, const MarketParams& mkt,
                      const OptionSpec& opt, const SimConfig& cfg) {
  p.validate();
  mkt.validate();
  opt.validate();
  if (cfg.paths < 1) throw invalid_input("mc_price_call: paths must be >= 1");

  const double T = opt.maturity;
  double theta = 0.0;
  if (cfg.measure == Measure::esscher) {
    MarketParams m = mkt;
    m.T = T;
    theta = solve_theta(p, m).theta_gs;
  }
  const double lv = laplace_exponent(p, cplx(theta, 0.0)).real();
  const double drift = p.mu * one_minus_exp(p.alpha * T);
  const double disc = std::exp(-mkt.r * T);

  // Joint Gaussian part of (Y_T, V_T).
  const double vy =
      p.sigma > 0.0
          ? p.sigma * p.sigma * one_minus_exp(2.0 * p.alpha * T) / (2.0 * p.alpha)
          : 0.0;
  const double cyv =
      p.sigma > 0.0 ? p.sigma * p.sigma * one_minus_exp(p.alpha * T) / p.alpha
                    : 0.0;
  const double vv = p.sigma * p.sigma * T;

  const std::size_t n_chunks = (cfg.paths + kChunk - 1) / kChunk;
  struct Partial {
    KahanSum pay, pay2, w, w2;
  };

  auto run_chunk = [&](std::size_t chunk) {
    Partial part;
    Rng rng = make_stream(cfg.seed, chunk);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::poisson_distribution<int> pois(p.lambda * T);
    const std::size_t lo = chunk * kChunk;
    const std::size_t hi = std::min(cfg.paths, lo + kChunk);
    for (std::size_t i = lo; i < hi; ++i) {
      double y = drift, v = 0.0;
      if (p.sigma > 0.0) {
        const double z1 = n01(rng), z2 = n01(rng);
        const double sy = std::sqrt(vy);
        y += sy * z1;
        const double c1 = cyv / sy;
        v += c1 * z1 + std::sqrt(std::max(vv - c1 * c1, 0.0)) * z2;
      }
      if (p.has_jumps()) {
        const int count = pois(rng);
        for (int k = 0; k < count; ++k) {
          const double s = T * u01(rng);
          const double xi = draw_jump(p.jumps, rng);
          y += xi * std::exp(-p.alpha * (T - s));
          v += xi;
        }
      }
      const double w = (cfg.measure == Measure::esscher)
                           ? std::exp(theta * v - T * lv)
                           : 1.0;
      const double pay = w * std::max(mkt.s0 * std::exp(y) - opt.strike, 0.0);
      part.pay.add(pay);
      part.pay2.add(pay * pay);
      part.w.add(w);
      part.w2.add(w * w);
    }
    return part;
  };

  std::vector<Partial> partials(n_chunks);
  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) partials[c] = run_chunk(c);
  } else {
    std::vector<std::future<void>> futs;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < threads; ++t)
      futs.push_back(std::async(std::launch::async, [&] {
        for (std::size_t c = next.fetch_add(1); c < n_chunks;
             c = next.fetch_add(1))
          partials[c] = run_chunk(c);
      }));
    for (auto& f : futs) f.get();
  }

  KahanSum pay, pay2, w, w2;
  for (const Partial& part : partials) {
    pay.add(part.pay.value());
    pay2.add(part.pay2.value());
    w.add(part.w.value());
    w2.add(part.w2.value());
  }

  const double n = double(cfg.paths);
  const double mean = pay.value() / n;
  const double var = std::max(pay2.value() / n - mean * mean, 0.0);

  McPrice out;
  out.price = disc * mean;
  out.std_error = disc * std::sqrt(var / n);
  out.theta = theta;
  out.paths = cfg.paths;
  out.ess = w2.value() > 0.0 ? w.value() * w.value() / w2.value() : 0.0;
  out.weight_degeneracy = out.ess < 0.01 * n;
  return out;
}

void write_paths_csv(const ModelParams& p, double horizon, std::size_t steps,
                     std::size_t paths, std::uint64_t seed, std::ostream& os) {
  if (!(horizon > 0.0) || steps < 1)
    throw invalid_input("write_paths_csv: need horizon > 0 and steps >= 1");
  const double dt = horizon / double(steps);
  const double g = std::exp(-p.alpha * dt);
  const double level = p.mu * one_minus_exp(p.alpha * dt);
  os << "path_id,t,Y_t\n";
  for (std::size_t id = 0; id < paths; ++id) {
    Rng rng = make_stream(seed, id);
    double y = 0.0;
    os << id << ",0," << y << "\n";
    for (std::size_t k = 1; k <= steps; ++k) {
      y = level + g * y + simulate_increment(p, (k - 1) * dt, k * dt, rng);
      os << id << "," << k * dt << "," << y << "\n";
    }
  }
}

}  // namespace mrjd
