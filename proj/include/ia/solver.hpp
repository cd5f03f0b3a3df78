// Alternating interference-leakage minimization and independent verification
// of the alignment conditions. The receiver step replaces each U_k with the
// d_k least-dominant eigenvectors of the interference covariance at receiver
// k; the transmitter step is the mirror image on the reciprocal channel.
// Both steps are exact minimizers of the total leakage over orthonormal
// frames, so the leakage trace never increases.

#pragma once

#include <cstdint>
#include <vector>

#include "ia/types.hpp"

namespace ia {

struct SolveOptions {
    int max_iters = 5000;
    double leakage_tol = 1e-10;
    double rank_tol = 1e-6;
    std::uint64_t seed = 0;
};

struct SolveResult {
    BeamformerSet beamformers;
    std::vector<double> leakage_trace;  // entry 0 is the post-initialization leakage
    bool converged = false;
    bool rank_ok = false;
    int iterations = 0;
};

// Requires min{M_k,N_k} >= d_k for every user. Deterministic given opts.seed:
// V is initialized to seeded random orthonormal frames. Stops when the
// leakage reaches opts.leakage_tol, after opts.max_iters iterations, or when
// the relative decrease over 50 iterations falls below 1e-12 (stall).
SolveResult min_leakage(const ChannelRealization& ch, const SystemConfig& cfg,
                        const SolveOptions& opts);

struct AlignmentCheck {
    double max_zf_residual = 0.0;  // max over cross pairs of ||U_k^H H_kj V_j||_F^2
    std::vector<bool> ranks_ok;
    bool aligned = false;
};

// Recomputes all residuals from scratch; does not trust any SolveResult.
// ranks_ok uses the scale-aware rank tolerance on the d_k-th singular value
// of U_k^H H_kk V_k.
AlignmentCheck verify_alignment(const ChannelRealization& ch, const BeamformerSet& bf,
                                double tol);

}  // namespace ia
