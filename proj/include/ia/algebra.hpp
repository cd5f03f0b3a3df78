// The reduced bilinear alignment system: channel partition into the four
// per-pair blocks, the polynomial map F, its analytic Jacobian, the block
// graph whose complete matchings certify properness, the explicit channel
// construction that makes the Jacobian a signed permutation, and numeric
// full-rank certification at random points.
//
// Beamformers are normalized to [I; Ubar_k] and [I; Vbar_k] form (identity
// permutations; generic channels need no row reshuffling). The alignment
// equation for cross pair (k,j) then reads
//
//   H1_kj + Ubar_k^H H3_kj + H2_kj Vbar_j + Ubar_k^H H4_kj Vbar_j = 0,
//
// and F_kj(Ubar,Vbar) = -(Ubar_k^H H3 + H2 Vbar_j + Ubar_k^H H4 Vbar_j),
// so alignment holds exactly when F equals the stacked H1 blocks.
//
// The map is holomorphic in the entries of W_k := Ubar_k^H and Vbar_k; the
// Jacobian treats those entries as the complex coordinates, which keeps the
// variable count at sum_k (M_k + N_k - 2 d_k) d_k complex dimensions.

#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "ia/types.hpp"

namespace ia {

// Channel partition for one cross pair (k,j):
//   H1: d_k x d_j          H2: d_k x (M_j - d_j)
//   H3: (N_k - d_k) x d_j  H4: (N_k - d_k) x (M_j - d_j)
struct PairBlocks {
    CMatrix H1, H2, H3, H4;
};

struct ReducedSystem {
    SystemConfig cfg;
    std::vector<std::vector<PairBlocks>> blocks;  // [k][j], diagonal unused
};

// Reduced beamformer variables. Frozen coordinates (removed redundant
// variables, by global index) hold the value 0.
struct ReducedVars {
    std::vector<CMatrix> Ubar;  // (N_k - d_k) x d_k
    std::vector<CMatrix> Vbar;  // (M_k - d_k) x d_k
    std::set<int> frozen;
};

// Global indexing of the scalar variables: all W_k = Ubar_k^H entries
// (column-major, users in order), then all Vbar_k entries (column-major).
struct VariableLayout {
    std::vector<int> w_offset, v_offset;
    std::vector<int> dk, wk_cols, vk_rows;  // d_k, N_k - d_k, M_k - d_k
    int total = 0;

    int w_index(int k, int row, int col) const { return w_offset[k] + col * dk[k] + row; }
    int v_index(int k, int row, int col) const { return v_offset[k] + col * vk_rows[k] + row; }
};

VariableLayout layout_of(const SystemConfig& cfg);

Complex get_variable(const ReducedVars& rv, const VariableLayout& lay, int index);
void set_variable(ReducedVars& rv, const VariableLayout& lay, int index, Complex value);

// Zero-initialized variables for cfg.
ReducedVars zero_vars(const SystemConfig& cfg);

// Equation count sum_{k != j} d_k d_j and the stacking order of equations:
// pairs sorted lexicographically, entries of each F_kj column-major.
int equation_count(const SystemConfig& cfg);

// Splits every cross channel H_kj into the four blocks. Diagonal channels
// are not part of the reduced system. Throws when some d_k exceeds an
// antenna count.
ReducedSystem partition_channels(const ChannelRealization& ch, const SystemConfig& cfg);

// Stacked evaluation of F at rv; length equation_count(cfg).
CVector eval_polymap(const ReducedSystem& rs, const ReducedVars& rv);

// Stacked H1 blocks in the same ordering; alignment holds at rv iff
// eval_polymap(rs, rv) equals this vector.
CVector stacked_h1(const ReducedSystem& rs);

// Analytic Jacobian of the stacked map with respect to the non-frozen
// variables, equations x free variables. Column c corresponds to the c-th
// smallest non-frozen global index.
CMatrix jacobian(const ReducedSystem& rs, const ReducedVars& rv);

// Count of singular values >= rel_tol * max(sigma_max, 1).
int numeric_rank(const CMatrix& A, double rel_tol = 1e-8);

// Bipartite graph for the equal-stream divisible case: one X node per d x d
// block of each Ubar_k (N_k/d - 1 blocks) and each Vbar_j (M_j/d - 1 blocks),
// one Y node per cross pair. Ubar_k blocks meet every equation (k,*), Vbar_j
// blocks every equation (*,j).
struct BlockGraph {
    SystemConfig cfg;
    int d = 1;
    struct XNode {
        bool is_u = true;  // Ubar block when true, Vbar block otherwise
        int user = 0;
        int block = 0;  // 0-based block index within the user
    };
    std::vector<XNode> xnodes;
    std::vector<OrderedPair> ynodes;          // lex order
    std::vector<std::vector<int>> adjacency;  // per Y node, X indices ascending
};

BlockGraph build_block_graph(const SystemConfig& cfg);

// Maximum matching covering Y if one exists (Kuhn's augmenting paths over
// the stable node ordering, hence deterministic). Otherwise hall_violator
// is a set of Y nodes with fewer neighbours than members (the union of the
// alternating-reachable sets from unmatched Y nodes, which has maximum
// deficiency).
struct MatchingResult {
    bool complete = false;
    std::vector<int> match_of_y;  // X index per Y node, -1 if unmatched
    std::vector<int> hall_violator;
};

MatchingResult complete_matching(const BlockGraph& g);

// Channel instance realizing a complete matching: H4 = 0 everywhere, the
// matched block of each equation set to the d x d identity, every other
// H2/H3 block zero; unmatched variable blocks are frozen at zero. The
// Jacobian restricted to the remaining variables is a block permutation of
// -I_d blocks with |det| = 1.
struct Certificate {
    ReducedSystem system;
    ReducedVars vars;
    std::set<int> removed;  // frozen global variable indices
};

Certificate construct_certificate(const BlockGraph& g, const MatchingResult& m);

enum class CertifyOutcome { CertifiedFullRank, RankDeficient };

struct CertifyResult {
    CertifyOutcome outcome = CertifyOutcome::RankDeficient;
    std::vector<int> observed_ranks;  // one per trial
    int equations = 0;
    int variables = 0;
};

// Samples (channel, variable) points from seeded continuous distributions
// and certifies generic feasibility when the Jacobian reaches full row rank
// at any of them. Trial t uses the seed derived from (seed, t).
CertifyResult certify_generic_feasibility(const SystemConfig& cfg, int trials,
                                          std::uint64_t seed);

}  // namespace ia
