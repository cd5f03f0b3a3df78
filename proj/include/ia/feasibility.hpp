// Necessary conditions on a DoF tuple for linear interference alignment
// without channel extension, properness of the reduced bilinear system,
// sufficiency in the equal-stream divisible case, and the maximum-DoF
// upper bound by enumeration.
//
// The subset condition is evaluated exactly as stated: for every nonempty
// subset I of the cross pairs,
//
//   sum_{k in rx(I)} (M_k - d_k) d_k + sum_{j in tx(I)} (N_j - d_j) d_j
//       >= sum_{(k,j) in I} d_k d_j,
//
// where rx(I) / tx(I) are the distinct first / second indices appearing
// in I. The condition quantified over all subsets is invariant under
// transposing every pair, so this reading and the variable-count reading
// (M and N swapped between the two sums) accept exactly the same systems;
// witnesses are always reported in the form above.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ia/types.hpp"

namespace ia {

enum class SubsetStrategy {
    Brute,      // all 2^|J|-1 nonempty subsets; |J| <= 20
    MaximalTR,  // maximal subsets I(T,R) over nonempty index-set pairs; K <= 14
    Matching,   // Hall's condition on the block graph; equal d dividing all antennas
};

enum class Verdict { InfeasibleGeneric, FeasibleGeneric, Unknown };

std::string to_string(Verdict v);
std::string to_string(SubsetStrategy s);

struct SubsetCheckResult {
    bool ok = true;
    std::optional<PairSet> witness;  // a violating subset, present iff !ok
};

struct FeasibilityReport {
    std::vector<bool> per_user_ok;                            // stream-count condition
    std::vector<std::pair<OrderedPair, bool>> pairwise_ok;    // lex order over ordered pairs
    bool subset_ok = true;
    std::optional<PairSet> subset_witness;
    bool proper = true;  // equals subset_ok
    Verdict verdict = Verdict::Unknown;
    std::string reason;  // human-readable cause for InfeasibleGeneric / Unknown
};

struct DofBoundResult {
    long long max_total = 0;
    std::vector<int> argmax_tuple;
    long long enumeration_count = 0;
};

struct CorollaryBounds {
    // Part (a): exact rational bound on the common stream count d.
    long long a_num = 0;
    long long a_den = 1;
    // Part (b): only meaningful when M_k + N_k is constant across users.
    bool b_applicable = false;
    bool b_holds = false;
    long long b_strict_total = 0;  // M + N - 1 when applicable
};

// Per-user condition: min{M_k, N_k} >= d_k.
std::vector<bool> check_per_user(const SystemConfig& cfg);

// Ordered-pair condition: max{M_k, N_j} >= d_k + d_j for every (k,j), k != j.
// Both orderings of each pair appear in the result, so the conjunction is
// independent of the transmitter/receiver indexing convention.
std::vector<std::pair<OrderedPair, bool>> check_pairwise(const SystemConfig& cfg);

// Subset condition over every nonempty I. On failure the returned witness
// maximizes the violation (then earliest in enumeration order).
SubsetCheckResult check_subsets(const SystemConfig& cfg, SubsetStrategy strategy);

// Subset condition via the best applicable strategy (Matching when the
// block graph is defined, MaximalTR otherwise).
bool is_proper(const SystemConfig& cfg);

CorollaryBounds corollary_bounds(const SystemConfig& cfg);

// Maximizes sum(d) over all integer tuples 0 <= d_k <= min{M_k, N_k}
// satisfying the per-user, pairwise and subset conditions. Zero entries are
// allowed (a zero-stream user simply drops out of every condition). Ties are
// broken toward more active users, then the lexicographically largest tuple.
// Guard: prod(min{M_k,N_k}+1) <= 10^7.
DofBoundResult max_dof_bound(int K, const std::vector<int>& M, const std::vector<int>& N);

// Full report: necessary conditions, properness, and the tri-state verdict.
// FeasibleGeneric is claimed only under the sufficiency hypotheses (equal
// streams d with either d dividing every M_k and N_k, or the symmetric case
// with at least one of M, N divisible by d).
FeasibilityReport feasibility_verdict(const SystemConfig& cfg);

// --- tuple-level predicates -------------------------------------------------
// These operate on raw (M, N, d) vectors and allow d_k = 0, which the
// enumeration in max_dof_bound needs; SystemConfig-based operations wrap them.

bool tuple_per_user_ok(const std::vector<int>& M, const std::vector<int>& N,
                       const std::vector<int>& d);
bool tuple_pairwise_ok(const std::vector<int>& M, const std::vector<int>& N,
                       const std::vector<int>& d);
// The subset inequality for one specific subset I; used to validate witnesses.
bool subset_inequality_holds(const std::vector<int>& M, const std::vector<int>& N,
                             const std::vector<int>& d, const PairSet& I);
SubsetCheckResult tuple_check_subsets(const std::vector<int>& M, const std::vector<int>& N,
                                      const std::vector<int>& d, SubsetStrategy strategy);

}  // namespace ia
