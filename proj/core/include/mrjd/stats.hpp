#ifndef MRJD_STATS_HPP
#define MRJD_STATS_HPP

#include <vector>

#include "mrjd/types.hpp"

namespace mrjd {

/// Table-style descriptive statistics of a return series.  Kurtosis is the
/// raw standardized fourth moment (Gaussian = 3); the standard deviation uses
/// the n-1 divisor.  Skewness/kurtosis are NaN for a constant series.
struct DescriptiveStats {
  std::size_t n = 0;
  double mean = 0.0;
  double std_dev = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
};

DescriptiveStats describe(const LogReturnSeries& x);

/// X_{j Delta} = log(S_{(j+1)Delta} / S_{j Delta}); length n-1 for n prices.
LogReturnSeries to_logreturns(const std::vector<double>& prices, double delta);

}  // namespace mrjd

#endif  // MRJD_STATS_HPP
