#include "ia/feasibility.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "ia/algebra.hpp"

namespace ia {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::InfeasibleGeneric: return "InfeasibleGeneric";
        case Verdict::FeasibleGeneric: return "FeasibleGeneric";
        case Verdict::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::string to_string(SubsetStrategy s) {
    switch (s) {
        case SubsetStrategy::Brute: return "Brute";
        case SubsetStrategy::MaximalTR: return "MaximalTR";
        case SubsetStrategy::Matching: return "Matching";
    }
    return "?";
}

bool tuple_per_user_ok(const std::vector<int>& M, const std::vector<int>& N,
                       const std::vector<int>& d) {
    for (std::size_t k = 0; k < d.size(); ++k)
        if (std::min(M[k], N[k]) < d[k]) return false;
    return true;
}

bool tuple_pairwise_ok(const std::vector<int>& M, const std::vector<int>& N,
                       const std::vector<int>& d) {
    const int K = static_cast<int>(d.size());
    for (int k = 0; k < K; ++k)
        for (int j = 0; j < K; ++j)
            if (k != j && std::max(M[k], N[j]) < d[k] + d[j]) return false;
    return true;
}

bool subset_inequality_holds(const std::vector<int>& M, const std::vector<int>& N,
                             const std::vector<int>& d, const PairSet& I) {
    const int K = static_cast<int>(d.size());
    std::vector<char> rx(K, 0), tx(K, 0);
    long long rhs = 0;
    for (const auto& p : I.pairs) {
        rx[p.k] = 1;
        tx[p.j] = 1;
        rhs += static_cast<long long>(d[p.k]) * d[p.j];
    }
    long long lhs = 0;
    for (int k = 0; k < K; ++k) {
        if (rx[k]) lhs += static_cast<long long>(M[k] - d[k]) * d[k];
        if (tx[k]) lhs += static_cast<long long>(N[k] - d[k]) * d[k];
    }
    return lhs >= rhs;
}

namespace {

// Per-index-subset sums of f(k), indexed by bitmask over K <= 14 users.
std::vector<long long> subset_sums(int K, const std::vector<long long>& f) {
    std::vector<long long> s(std::size_t{1} << K, 0);
    for (std::uint32_t mask = 1; mask < s.size(); ++mask) {
        const int low = std::countr_zero(mask);
        s[mask] = s[mask & (mask - 1)] + f[low];
    }
    return s;
}

SubsetCheckResult brute_subsets(const std::vector<int>& M, const std::vector<int>& N,
                                const std::vector<int>& d) {
    const int K = static_cast<int>(d.size());
    PairSet J = PairSet::all_cross(K);
    const int nJ = static_cast<int>(J.size());
    if (nJ > 20)
        throw PreconditionError("Brute subset strategy allows at most 20 cross pairs, got " +
                                std::to_string(nJ));
    if (nJ == 0) return {};

    std::vector<long long> fM(K), fN(K);
    for (int k = 0; k < K; ++k) {
        fM[k] = static_cast<long long>(M[k] - d[k]) * d[k];
        fN[k] = static_cast<long long>(N[k] - d[k]) * d[k];
    }
    const auto sumM = subset_sums(K, fM);
    const auto sumN = subset_sums(K, fN);

    const std::size_t total = std::size_t{1} << nJ;
    std::vector<std::uint32_t> rx(total, 0), tx(total, 0);
    std::vector<long long> rhs(total, 0);
    long long best_viol = 0;
    std::size_t best_mask = 0;
    for (std::size_t mask = 1; mask < total; ++mask) {
        const int low = std::countr_zero(mask);
        const std::size_t rest = mask & (mask - 1);
        rx[mask] = rx[rest] | (1u << J.pairs[low].k);
        tx[mask] = tx[rest] | (1u << J.pairs[low].j);
        rhs[mask] = rhs[rest] + static_cast<long long>(d[J.pairs[low].k]) * d[J.pairs[low].j];
        const long long viol = rhs[mask] - (sumM[rx[mask]] + sumN[tx[mask]]);
        if (viol > best_viol) {
            best_viol = viol;
            best_mask = mask;
        }
    }
    if (best_viol <= 0) return {};
    std::vector<OrderedPair> w;
    for (int b = 0; b < nJ; ++b)
        if (best_mask >> b & 1) w.push_back(J.pairs[b]);
    SubsetCheckResult r;
    r.ok = false;
    r.witness = PairSet(std::move(w));
    return r;
}

SubsetCheckResult maximal_tr_subsets(const std::vector<int>& M, const std::vector<int>& N,
                                     const std::vector<int>& d) {
    const int K = static_cast<int>(d.size());
    if (K > 14)
        throw PreconditionError("MaximalTR subset strategy allows at most 14 users, got " +
                                std::to_string(K));
    if (K == 1) return {};

    std::vector<long long> fM(K), fN(K), fd(K), fd2(K);
    for (int k = 0; k < K; ++k) {
        fM[k] = static_cast<long long>(M[k] - d[k]) * d[k];
        fN[k] = static_cast<long long>(N[k] - d[k]) * d[k];
        fd[k] = d[k];
        fd2[k] = static_cast<long long>(d[k]) * d[k];
    }
    const auto sumM = subset_sums(K, fM);
    const auto sumN = subset_sums(K, fN);
    const auto sumd = subset_sums(K, fd);
    const auto sumd2 = subset_sums(K, fd2);

    const std::uint32_t full = (1u << K) - 1;
    long long best_viol = 0;
    std::uint32_t best_T = 0, best_R = 0;
    for (std::uint32_t T = 1; T <= full; ++T) {
        for (std::uint32_t R = 1; R <= full; ++R) {
            // rx/tx of the maximal set I(T,R) = {(k,j): k in T, j in R, k != j}.
            const std::uint32_t rxm = (std::popcount(R) == 1) ? (T & ~R) : T;
            const std::uint32_t txm = (std::popcount(T) == 1) ? (R & ~T) : R;
            if (rxm == 0 || txm == 0) continue;  // I(T,R) empty
            const long long rhs = sumd[T] * sumd[R] - sumd2[T & R];
            const long long viol = rhs - (sumM[rxm] + sumN[txm]);
            if (viol > best_viol) {
                best_viol = viol;
                best_T = T;
                best_R = R;
            }
        }
    }
    if (best_viol <= 0) return {};
    std::vector<OrderedPair> w;
    for (int k = 0; k < K; ++k)
        for (int j = 0; j < K; ++j)
            if (k != j && (best_T >> k & 1) && (best_R >> j & 1)) w.push_back({k, j});
    SubsetCheckResult r;
    r.ok = false;
    r.witness = PairSet(std::move(w));
    return r;
}

SubsetCheckResult matching_subsets(const std::vector<int>& M, const std::vector<int>& N,
                                   const std::vector<int>& d) {
    const int K = static_cast<int>(d.size());
    for (int k = 0; k < K; ++k) {
        if (d[k] < 1 || d[k] != d[0])
            throw PreconditionError("Matching subset strategy requires equal positive streams");
        if (M[k] % d[0] != 0 || N[k] % d[0] != 0)
            throw PreconditionError(
                "Matching subset strategy requires streams dividing every antenna count");
    }
    SystemConfig cfg(K, M, N, d);
    BlockGraph g = build_block_graph(cfg);
    MatchingResult m = complete_matching(g);
    if (m.complete) return {};
    // The Hall violator certifies a shortfall of variables for its equation
    // set; transposing expresses it against the inequality as reported here.
    std::vector<OrderedPair> w;
    for (int yi : m.hall_violator) w.push_back(g.ynodes[yi]);
    SubsetCheckResult r;
    r.ok = false;
    r.witness = PairSet(std::move(w)).transposed();
    return r;
}

bool matching_applicable(const SystemConfig& cfg) {
    if (!cfg.equal_streams()) return false;
    const int dd = cfg.d[0];
    for (int k = 0; k < cfg.K; ++k)
        if (cfg.M[k] % dd != 0 || cfg.N[k] % dd != 0) return false;
    return true;
}

}  // namespace

SubsetCheckResult tuple_check_subsets(const std::vector<int>& M, const std::vector<int>& N,
                                      const std::vector<int>& d, SubsetStrategy strategy) {
    switch (strategy) {
        case SubsetStrategy::Brute: return brute_subsets(M, N, d);
        case SubsetStrategy::MaximalTR: return maximal_tr_subsets(M, N, d);
        case SubsetStrategy::Matching: return matching_subsets(M, N, d);
    }
    throw Error("unknown subset strategy");
}

std::vector<bool> check_per_user(const SystemConfig& cfg) {
    std::vector<bool> ok(cfg.K);
    for (int k = 0; k < cfg.K; ++k) ok[k] = std::min(cfg.M[k], cfg.N[k]) >= cfg.d[k];
    return ok;
}

std::vector<std::pair<OrderedPair, bool>> check_pairwise(const SystemConfig& cfg) {
    std::vector<std::pair<OrderedPair, bool>> out;
    out.reserve(static_cast<std::size_t>(cfg.K) * (cfg.K - 1));
    for (int k = 0; k < cfg.K; ++k)
        for (int j = 0; j < cfg.K; ++j)
            if (k != j)
                out.push_back({{k, j}, std::max(cfg.M[k], cfg.N[j]) >= cfg.d[k] + cfg.d[j]});
    return out;
}

SubsetCheckResult check_subsets(const SystemConfig& cfg, SubsetStrategy strategy) {
    return tuple_check_subsets(cfg.M, cfg.N, cfg.d, strategy);
}

bool is_proper(const SystemConfig& cfg) {
    const auto strategy =
        matching_applicable(cfg) ? SubsetStrategy::Matching : SubsetStrategy::MaximalTR;
    return check_subsets(cfg, strategy).ok;
}

CorollaryBounds corollary_bounds(const SystemConfig& cfg) {
    CorollaryBounds b;
    long long sumMN = 0;
    for (int k = 0; k < cfg.K; ++k) sumMN += cfg.M[k] + cfg.N[k];
    b.a_num = sumMN;
    b.a_den = static_cast<long long>(cfg.K) * (cfg.K + 1);
    const long long g = std::gcd(b.a_num, b.a_den);
    if (g > 0) {
        b.a_num /= g;
        b.a_den /= g;
    }

    bool constant_sum = true;
    for (int k = 1; k < cfg.K; ++k)
        if (cfg.M[k] + cfg.N[k] != cfg.M[0] + cfg.N[0]) constant_sum = false;
    b.b_applicable = constant_sum;
    if (constant_sum) {
        const long long MN = cfg.M[0] + cfg.N[0];
        long long sd = 0, sd2 = 0;
        for (int k = 0; k < cfg.K; ++k) {
            sd += cfg.d[k];
            sd2 += static_cast<long long>(cfg.d[k]) * cfg.d[k];
        }
        b.b_holds = sd * sd + sd2 <= MN * sd;
        b.b_strict_total = MN - 1;
    }
    return b;
}

DofBoundResult max_dof_bound(int K, const std::vector<int>& M, const std::vector<int>& N) {
    if (K < 1 || static_cast<int>(M.size()) != K || static_cast<int>(N.size()) != K)
        throw Error("max_dof_bound: M and N must each have K entries");
    if (K > 14)
        throw PreconditionError("max_dof_bound enumeration allows at most 14 users");
    std::vector<int> cap(K);
    double combos = 1.0;
    for (int k = 0; k < K; ++k) {
        if (M[k] < 1 || N[k] < 1) throw Error("max_dof_bound: antenna counts must be positive");
        cap[k] = std::min(M[k], N[k]);
        combos *= cap[k] + 1;
    }
    if (combos > 1e7)
        throw PreconditionError("max_dof_bound enumeration guard exceeded (" +
                                std::to_string(static_cast<long long>(combos)) + " tuples)");

    std::vector<int> d(K, 0), best(K, 0);
    long long best_total = 0;
    int best_active = 0;
    long long visited = 0;

    auto better = [&](long long total, int active, const std::vector<int>& tuple) {
        if (total != best_total) return total > best_total;
        if (active != best_active) return active > best_active;
        return tuple > best;
    };

    while (true) {
        ++visited;
        long long total = 0;
        int active = 0;
        for (int k = 0; k < K; ++k) {
            total += d[k];
            if (d[k] > 0) ++active;
        }
        if (better(total, active, d) && tuple_pairwise_ok(M, N, d) &&
            tuple_check_subsets(M, N, d, SubsetStrategy::MaximalTR).ok) {
            best_total = total;
            best_active = active;
            best = d;
        }
        int pos = K - 1;
        while (pos >= 0 && d[pos] == cap[pos]) d[pos--] = 0;
        if (pos < 0) break;
        ++d[pos];
    }

    DofBoundResult r;
    r.max_total = best_total;
    r.argmax_tuple = best;
    r.enumeration_count = visited;
    return r;
}

FeasibilityReport feasibility_verdict(const SystemConfig& cfg) {
    FeasibilityReport rep;
    rep.per_user_ok = check_per_user(cfg);
    rep.pairwise_ok = check_pairwise(cfg);

    const bool use_matching = matching_applicable(cfg) &&
                              std::all_of(rep.per_user_ok.begin(), rep.per_user_ok.end(),
                                          [](bool b) { return b; });
    auto sub = check_subsets(
        cfg, use_matching ? SubsetStrategy::Matching : SubsetStrategy::MaximalTR);
    rep.subset_ok = sub.ok;
    rep.subset_witness = sub.witness;
    rep.proper = sub.ok;

    const bool per_user_all =
        std::all_of(rep.per_user_ok.begin(), rep.per_user_ok.end(), [](bool b) { return b; });
    const bool pairwise_all = std::all_of(rep.pairwise_ok.begin(), rep.pairwise_ok.end(),
                                          [](const auto& e) { return e.second; });

    if (!per_user_all) {
        int k = 0;
        while (rep.per_user_ok[k]) ++k;
        rep.verdict = Verdict::InfeasibleGeneric;
        rep.reason = "stream count exceeds min{M,N} for user " + std::to_string(k + 1);
        return rep;
    }
    if (!pairwise_all) {
        auto it = std::find_if(rep.pairwise_ok.begin(), rep.pairwise_ok.end(),
                               [](const auto& e) { return !e.second; });
        rep.verdict = Verdict::InfeasibleGeneric;
        rep.reason = "pairwise antenna condition fails at " + pair_to_string(it->first);
        return rep;
    }
    if (!rep.subset_ok) {
        rep.verdict = Verdict::InfeasibleGeneric;
        rep.reason = "subset condition violated by a subsystem of " +
                     std::to_string(rep.subset_witness->size()) + " pairs";
        return rep;
    }

    // Sufficiency hypotheses: equal streams d with either d | M_k and d | N_k
    // for every k, or a symmetric system with one of M, N divisible by d.
    if (cfg.equal_streams()) {
        const int dd = cfg.d[0];
        bool div_all = true;
        for (int k = 0; k < cfg.K; ++k)
            if (cfg.M[k] % dd != 0 || cfg.N[k] % dd != 0) div_all = false;
        const bool one_sided =
            cfg.symmetric() && (cfg.M[0] % dd == 0 || cfg.N[0] % dd == 0);
        if (div_all) {
            rep.verdict = Verdict::FeasibleGeneric;
            rep.reason = "proper with equal streams dividing all antenna counts";
            return rep;
        }
        if (one_sided) {
            rep.verdict = Verdict::FeasibleGeneric;
            rep.reason = "proper symmetric system with one-sided divisibility";
            return rep;
        }
    }
    rep.verdict = Verdict::Unknown;
    rep.reason = "necessary conditions hold but the sufficiency hypotheses do not apply";
    return rep;
}

}  // namespace ia
