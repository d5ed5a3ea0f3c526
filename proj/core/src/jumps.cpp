#include "mrjd/jumps.hpp"

#include <cmath>
#include <string>

namespace mrjd {

namespace {
constexpr cplx kI{0.0, 1.0};
}

cplx jump_cf(const JumpSpec& jumps, cplx z) {
  switch (jumps.kind) {
    case JumpKind::none:
      throw invalid_input("jump_cf: jump law is none");
    case JumpKind::gaussian:
      return std::exp(kI * jumps.mu_j * z -
                      0.5 * jumps.sigma_j * jumps.sigma_j * z * z);
    case JumpKind::double_exponential: {
      const cplx d1 = jumps.eta1 - kI * z;  // pole at z = -i eta1
      const cplx d2 = jumps.eta2 + kI * z;  // pole at z =  i eta2
      const double guard = 1e-9 * (1.0 + std::abs(z));
      if (std::abs(d1) < guard)
        throw domain_error("jump_cf: argument too close to the pole z = -i eta1");
      if (std::abs(d2) < guard)
        throw domain_error("jump_cf: argument too close to the pole z = i eta2");
      return jumps.q * jumps.eta1 / d1 + (1.0 - jumps.q) * jumps.eta2 / d2;
    }
  }
  throw invalid_input("jump_cf: unknown jump kind");
}

cplx jump_mgf(const JumpSpec& jumps, cplx z) { return jump_cf(jumps, -kI * z); }

double jump_moment(const JumpSpec& jumps, int k) {
  if (k < 1 || k > 4) throw invalid_input("jump_moment: k must be in 1..4");
  switch (jumps.kind) {
    case JumpKind::none:
      throw invalid_input("jump_moment: jump law is none");
    case JumpKind::gaussian: {
      const double m = jumps.mu_j, s2 = jumps.sigma_j * jumps.sigma_j;
      switch (k) {
        case 1: return m;
        case 2: return m * m + s2;
        case 3: return m * m * m + 3.0 * m * s2;
        default: return m * m * m * m + 6.0 * m * m * s2 + 3.0 * s2 * s2;
      }
    }
    case JumpKind::double_exponential: {
      // E[xi^k] = k! ( q / eta1^k + (-1)^k (1-q) / eta2^k )
      static const double fact[5] = {1, 1, 2, 6, 24};
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      return fact[k] * (jumps.q / std::pow(jumps.eta1, k) +
                        sign * (1.0 - jumps.q) / std::pow(jumps.eta2, k));
    }
  }
  throw invalid_input("jump_moment: unknown jump kind");
}

}  // namespace mrjd
