#ifndef MRJD_JUMPS_HPP
#define MRJD_JUMPS_HPP

#include "mrjd/types.hpp"

namespace mrjd {

/// Characteristic function of a single jump, phi_xi(z) = E[exp(i z xi)],
/// evaluated at a genuinely complex argument z.  The model requires values at
/// z = -i theta + u e^{-alpha (t-s)}.
///
/// Throws domain_error near the double-exponential poles z = -i eta1 and
/// z = i eta2, invalid_input for a JumpSpec without jumps.
cplx jump_cf(const JumpSpec& jumps, cplx z);

/// Moment generating function E[exp(z xi)] = phi_xi(-i z).
cplx jump_mgf(const JumpSpec& jumps, cplx z);

/// Raw jump moment E[xi^k] for k in 1..4.
double jump_moment(const JumpSpec& jumps, int k);

}  // namespace mrjd

#endif  // MRJD_JUMPS_HPP
