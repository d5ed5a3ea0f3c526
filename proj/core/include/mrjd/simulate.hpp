#ifndef MRJD_SIMULATE_HPP
#define MRJD_SIMULATE_HPP

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "mrjd/types.hpp"

namespace mrjd {

enum class Measure { historic, esscher };

struct SimConfig {
  std::size_t paths = 100000;
  std::uint64_t seed = 12345;
  int threads = 1;
  Measure measure = Measure::historic;
};

using Rng = std::mt19937_64;

/// Deterministic independent stream: one engine per (seed, stream id) pair.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

/// One exact draw of int_{t0}^{t1} e^{-alpha (t1 - s)} dV_s: the Gaussian part
/// has variance sigma^2 (1 - e^{-2 alpha (t1-t0)}) / (2 alpha); jumps are drawn
/// as a Poisson count with uniform arrival times, each decayed to t1.
double simulate_increment(const ModelParams& p, double t0, double t1, Rng& rng);

/// One jump size from the model's jump law.
double draw_jump(const JumpSpec& jumps, Rng& rng);

/// One path of the log-return series X_{j Delta}, j = 1..n (historic measure).
LogReturnSeries simulate_logreturn_series(const ModelParams& p,
                                          const SeriesGrid& grid,
                                          std::uint64_t seed);

struct WeightedSeries {
  LogReturnSeries series;
  double weight = 1.0;  // Esscher importance weight exp(theta V_T - T l_V(theta))
};

/// As simulate_logreturn_series; in Esscher mode the path carries the
/// importance weight for reweighting historic draws to Q^theta.
WeightedSeries simulate_logreturns(const ModelParams& p, const SeriesGrid& grid,
                                   double theta, Measure measure,
                                   std::uint64_t seed);

/// (Sum w)^2 / Sum w^2 of a weight vector.
double effective_sample_size(const std::vector<double>& weights);

struct McPrice {
  double price = 0.0;
  double std_error = 0.0;
  double theta = 0.0;       // Esscher parameter used for the tilt
  double ess = 0.0;         // effective sample size of the weights
  std::size_t paths = 0;
  bool weight_degeneracy = false;  // ess < 1% of paths
};

/// Monte-Carlo price of a European call under Q^{theta_GS} via importance
/// weighting of historic paths; exact in law (no Euler discretization).
McPrice mc_price_call(const ModelParams& p, const MarketParams& mkt,
                      const OptionSpec& opt, const SimConfig& cfg);

/// Dump simulated log-price paths as CSV (columns: path_id,t,Y_t).
void write_paths_csv(const ModelParams& p, double horizon, std::size_t steps,
                     std::size_t paths, std::uint64_t seed, std::ostream& os);

}  // namespace mrjd

#endif  // MRJD_SIMULATE_HPP
