// Direct evaluation of the interference alignment conditions for concrete
// channels and beamformers: total zero-forcing leakage and per-user signal
// rank margins.

#pragma once

#include <vector>

#include "ia/types.hpp"

namespace ia {

// Sum over all cross pairs (k,j), k != j, of ||U_k^H H_kj V_j||_F^2.
// Zero exactly when every zero-forcing condition holds.
// Throws DimensionError naming the offending (k,j) on shape mismatch.
double leakage(const ChannelRealization& ch, const BeamformerSet& bf);

// Entry k is the d_k-th singular value of U_k^H H_kk V_k; positive (above
// the rank tolerance) iff the direct-signal rank condition holds for user k.
std::vector<double> signal_rank_margin(const ChannelRealization& ch, const BeamformerSet& bf);

}  // namespace ia
