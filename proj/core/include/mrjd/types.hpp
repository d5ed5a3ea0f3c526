#ifndef MRJD_TYPES_HPP
#define MRJD_TYPES_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrjd {

using cplx = std::complex<double>;

/// Bad user input (wrong argument ranges, malformed data).
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation requested outside the mathematical domain (poles, inadmissible
/// Esscher parameters).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed to reach its target accuracy.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class JumpKind { none, gaussian, double_exponential };

/// Law of a single jump size.
///
/// gaussian:           xi ~ N(mu_j, sigma_j^2)
/// double_exponential: density q*eta1*exp(-eta1 x) on x>=0 plus
///                     (1-q)*eta2*exp(eta2 x) on x<0, eta1 > 1, eta2 > 0.
struct JumpSpec {
  JumpKind kind = JumpKind::none;
  double mu_j = 0.0;
  double sigma_j = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double q = 0.0;

  static JumpSpec none() { return JumpSpec{}; }

  static JumpSpec gaussian(double mu_j, double sigma_j) {
    JumpSpec s;
    s.kind = JumpKind::gaussian;
    s.mu_j = mu_j;
    s.sigma_j = sigma_j;
    s.validate();
    return s;
  }

  static JumpSpec double_exponential(double eta1, double eta2, double q) {
    JumpSpec s;
    s.kind = JumpKind::double_exponential;
    s.eta1 = eta1;
    s.eta2 = eta2;
    s.q = q;
    s.validate();
    return s;
  }

  void validate() const {
    switch (kind) {
      case JumpKind::none:
        break;
      case JumpKind::gaussian:
        if (!(sigma_j > 0.0)) throw invalid_input("JumpSpec: sigma_j must be > 0");
        break;
      case JumpKind::double_exponential:
        if (!(eta1 > 1.0)) throw invalid_input("JumpSpec: eta1 must be > 1");
        if (!(eta2 > 0.0)) throw invalid_input("JumpSpec: eta2 must be > 0");
        if (!(q >= 0.0 && q <= 1.0)) throw invalid_input("JumpSpec: q must be in [0,1]");
        break;
    }
  }
};

/// Full parameter set of the mean-reverting jump-diffusion
///   dY_t = alpha (mu - Y_t) dt + sigma dB_t + dZ_t,  Y_0 = 0,
/// with Z a compound Poisson process of intensity lambda and jump law `jumps`.
struct ModelParams {
  double alpha = 1.0;   // mean-reversion rate, per unit time
  double mu = 0.0;      // mean-reversion level of log-price
  double sigma = 0.0;   // diffusion volatility, per sqrt(time)
  double lambda = 0.0;  // jump intensity, per unit time
  JumpSpec jumps;

  void validate() const {
    if (!(alpha > 0.0)) throw invalid_input("ModelParams: alpha must be > 0");
    if (!(sigma >= 0.0)) throw invalid_input("ModelParams: sigma must be >= 0");
    if (!(lambda >= 0.0)) throw invalid_input("ModelParams: lambda must be >= 0");
    if (lambda > 0.0 && jumps.kind == JumpKind::none)
      throw invalid_input("ModelParams: lambda > 0 requires a jump law");
    if (lambda == 0.0 && jumps.kind != JumpKind::none)
      throw invalid_input("ModelParams: lambda == 0 requires jumps == none");
    jumps.validate();
  }

  bool has_jumps() const { return lambda > 0.0; }
};

/// Sampling layout of an observed log-return series: X_{j Delta}, j = 1..n.
struct SeriesGrid {
  double delta = 1.0 / 252.0;  // sampling interval, in years
  std::size_t n = 0;           // number of observations

  void validate() const {
    if (!(delta > 0.0)) throw invalid_input("SeriesGrid: delta must be > 0");
    if (n < 1) throw invalid_input("SeriesGrid: n must be >= 1");
  }
};

/// Market environment for pricing: constant rate, horizon and spot.
struct MarketParams {
  double r = 0.0;   // risk-free rate, per unit time
  double T = 1.0;   // horizon, in years
  double s0 = 1.0;  // spot exchange rate

  void validate() const {
    if (!(r >= 0.0)) throw invalid_input("MarketParams: r must be >= 0");
    if (!(T > 0.0)) throw invalid_input("MarketParams: T must be > 0");
    if (!(s0 > 0.0)) throw invalid_input("MarketParams: s0 must be > 0");
  }

  double x0() const { return std::log(s0); }
};

/// European call contract.
struct OptionSpec {
  double strike = 1.0;
  double maturity = 1.0;

  void validate() const {
    if (!(strike > 0.0)) throw invalid_input("OptionSpec: strike must be > 0");
    if (!(maturity > 0.0)) throw invalid_input("OptionSpec: maturity must be > 0");
  }

  double log_strike() const { return std::log(strike); }
};

/// Observed log-returns X_{j Delta}; values[0] is the j = 1 observation.
struct LogReturnSeries {
  std::vector<double> values;
  double delta = 1.0 / 252.0;

  std::size_t size() const { return values.size(); }
  SeriesGrid grid() const { return SeriesGrid{delta, values.size()}; }

  void validate() const {
    if (!(delta > 0.0)) throw invalid_input("LogReturnSeries: delta must be > 0");
    for (double v : values)
      if (!std::isfinite(v)) throw invalid_input("LogReturnSeries: non-finite value");
  }
};

/// Raw sample or theoretical moments m_1..m_4 of the log-returns.
struct MomentSet {
  double m1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;

  double operator[](int k) const {
    switch (k) {
      case 1: return m1;
      case 2: return m2;
      case 3: return m3;
      case 4: return m4;
      default: throw invalid_input("MomentSet: moment order must be in 1..4");
    }
  }
};

/// Outcome of a calibration run (any of the three estimators).
struct CalibrationResult {
  JumpKind model = JumpKind::none;
  std::string estimator;  // "mom" | "mle" | "ecf"
  ModelParams params;
  std::vector<double> std_errors;  // empty when not available
  std::vector<std::string> param_names;
  double objective = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string diagnostics;
};

}  // namespace mrjd

#endif  // MRJD_TYPES_HPP
