#include "ia/types.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace ia {

SystemConfig::SystemConfig(int K_, std::vector<int> M_, std::vector<int> N_, std::vector<int> d_)
    : K(K_), M(std::move(M_)), N(std::move(N_)), d(std::move(d_)) {
    if (K < 1) throw Error("SystemConfig: K must be at least 1");
    if (static_cast<int>(M.size()) != K || static_cast<int>(N.size()) != K ||
        static_cast<int>(d.size()) != K) {
        throw Error("SystemConfig: M, N, d must each have K entries");
    }
    for (int k = 0; k < K; ++k) {
        if (M[k] < 1 || N[k] < 1)
            throw Error("SystemConfig: antenna counts must be positive (user " +
                        std::to_string(k + 1) + ")");
        if (d[k] < 1)
            throw Error("SystemConfig: stream counts must be at least 1 (user " +
                        std::to_string(k + 1) + "); zero-stream users are not supported");
    }
}

bool SystemConfig::symmetric() const {
    for (int k = 1; k < K; ++k)
        if (M[k] != M[0] || N[k] != N[0]) return false;
    return true;
}

bool SystemConfig::equal_streams() const {
    for (int k = 1; k < K; ++k)
        if (d[k] != d[0]) return false;
    return true;
}

long long SystemConfig::total_streams() const {
    long long t = 0;
    for (int k = 0; k < K; ++k) t += d[k];
    return t;
}

PairSet::PairSet(std::vector<OrderedPair> p) : pairs(std::move(p)) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    for (const auto& pr : pairs)
        if (pr.k == pr.j)
            throw Error("PairSet: diagonal pair " + pair_to_string(pr) + " is not allowed");
}

PairSet PairSet::all_cross(int K) {
    std::vector<OrderedPair> p;
    p.reserve(static_cast<std::size_t>(K) * (K - 1));
    for (int k = 0; k < K; ++k)
        for (int j = 0; j < K; ++j)
            if (k != j) p.push_back({k, j});
    return PairSet(std::move(p));
}

PairSet PairSet::transposed() const {
    std::vector<OrderedPair> p;
    p.reserve(pairs.size());
    for (const auto& pr : pairs) p.push_back({pr.j, pr.k});
    return PairSet(std::move(p));
}

void PairSet::validate(int K) const {
    for (const auto& pr : pairs) {
        if (pr.k < 0 || pr.k >= K || pr.j < 0 || pr.j >= K)
            throw Error("PairSet: pair " + pair_to_string(pr) + " out of range for K=" +
                        std::to_string(K));
        if (pr.k == pr.j)
            throw Error("PairSet: diagonal pair " + pair_to_string(pr));
    }
}

void ChannelRealization::validate(const SystemConfig& cfg) const {
    if (users() != cfg.K)
        throw DimensionError(-1, -1, "channel grid has " + std::to_string(users()) +
                                         " rows, expected K=" + std::to_string(cfg.K));
    for (int k = 0; k < cfg.K; ++k) {
        if (static_cast<int>(H[k].size()) != cfg.K)
            throw DimensionError(k, -1, "channel row " + std::to_string(k + 1) +
                                            " has wrong length");
        for (int j = 0; j < cfg.K; ++j) {
            const CMatrix& Hkj = H[k][j];
            if (Hkj.rows() != cfg.N[k] || Hkj.cols() != cfg.M[j])
                throw DimensionError(
                    k, j, "channel H" + pair_to_string({k, j}) + " has shape " +
                              std::to_string(Hkj.rows()) + "x" + std::to_string(Hkj.cols()) +
                              ", expected " + std::to_string(cfg.N[k]) + "x" +
                              std::to_string(cfg.M[j]));
            if (!Hkj.allFinite())
                throw DimensionError(k, j, "channel H" + pair_to_string({k, j}) +
                                               " contains non-finite entries");
        }
    }
}

void BeamformerSet::validate(const SystemConfig& cfg) const {
    if (users() != cfg.K || static_cast<int>(U.size()) != cfg.K)
        throw DimensionError(-1, -1, "beamformer set does not have K entries");
    for (int k = 0; k < cfg.K; ++k) {
        if (V[k].rows() != cfg.M[k] || V[k].cols() != cfg.d[k])
            throw DimensionError(k, -1, "V_" + std::to_string(k + 1) + " has shape " +
                                            std::to_string(V[k].rows()) + "x" +
                                            std::to_string(V[k].cols()) + ", expected " +
                                            std::to_string(cfg.M[k]) + "x" +
                                            std::to_string(cfg.d[k]));
        if (U[k].rows() != cfg.N[k] || U[k].cols() != cfg.d[k])
            throw DimensionError(k, -1, "U_" + std::to_string(k + 1) + " has shape " +
                                            std::to_string(U[k].rows()) + "x" +
                                            std::to_string(U[k].cols()) + ", expected " +
                                            std::to_string(cfg.N[k]) + "x" +
                                            std::to_string(cfg.d[k]));
        if (!V[k].allFinite() || !U[k].allFinite())
            throw DimensionError(k, -1, "beamformers of user " + std::to_string(k + 1) +
                                            " contain non-finite entries");
    }
}

bool BeamformerSet::full_column_rank() const {
    auto ok = [](const CMatrix& A) {
        if (A.cols() == 0) return true;
        Eigen::JacobiSVD<CMatrix> svd(A);
        const auto& s = svd.singularValues();
        if (s.size() < A.cols()) return false;
        return s(A.cols() - 1) >= rank_tolerance(s(0));
    };
    for (const auto& Vk : V)
        if (!ok(Vk)) return false;
    for (const auto& Uk : U)
        if (!ok(Uk)) return false;
    return true;
}

double rank_tolerance(double sigma_max, double rel) {
    return rel * std::max(sigma_max, 1.0);
}

std::string pair_to_string(const OrderedPair& p) {
    return "(" + std::to_string(p.k + 1) + "," + std::to_string(p.j + 1) + ")";
}

}  // namespace ia
