#pragma once

// Right-hand side of the truncated system by dense convolution.  The
// viscosity enters through its full discrete spectrum on the same grid the
// solver uses; with N >= M (2n - 1) > 6n - 6 points no aliased term can reach
// a mode |k| < n, so this agrees with the pseudo-spectral rhs to roundoff.

#include "kolmo/galerkin.hpp"

namespace oracle {

kolmo::StateRate dense_rhs(const kolmo::SimState& state, const kolmo::ModelParams& params,
                           const kolmo::CutoffProfile& profile);

}  // namespace oracle
