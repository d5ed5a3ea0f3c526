#include "mrjd/stats.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mrjd {

DescriptiveStats describe(const LogReturnSeries& x) {
  const std::size_t n = x.values.size();
  if (n < 2) throw invalid_input("describe: need at least 2 observations");

  DescriptiveStats s;
  s.n = n;
  for (double v : x.values) s.mean += v;
  s.mean /= double(n);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x.values) {
    const double d = v - s.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  s.std_dev = std::sqrt(m2 / double(n - 1));
  m2 /= double(n);
  m3 /= double(n);
  m4 /= double(n);
  if (m2 > 0.0) {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2);
  } else {
    s.skewness = std::numeric_limits<double>::quiet_NaN();
    s.kurtosis = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

LogReturnSeries to_logreturns(const std::vector<double>& prices, double delta) {
  if (prices.size() < 2)
    throw invalid_input("to_logreturns: need at least 2 prices");
  if (!(delta > 0.0)) throw invalid_input("to_logreturns: delta must be > 0");
  LogReturnSeries out;
  out.delta = delta;
  out.values.reserve(prices.size() - 1);
  for (std::size_t i = 0; i + 1 < prices.size(); ++i) {
    if (!(prices[i] > 0.0) || !(prices[i + 1] > 0.0))
      throw invalid_input("to_logreturns: non-positive price at row " +
                          std::to_string(prices[i] > 0.0 ? i + 1 : i));
    out.values.push_back(std::log(prices[i + 1] / prices[i]));
  }
  return out;
}

}  // namespace mrjd
