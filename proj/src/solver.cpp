#include "ia/solver.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ia/feasibility.hpp"
#include "ia/model.hpp"
#include "ia/rng.hpp"

namespace ia {

namespace {

// d least-dominant eigenvectors of a Hermitian PSD matrix.
CMatrix least_eigenvectors(const CMatrix& Q, int d) {
    CMatrix Qh = (Q + Q.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(Qh);
    return es.eigenvectors().leftCols(d);
}

}  // namespace

SolveResult min_leakage(const ChannelRealization& ch, const SystemConfig& cfg,
                        const SolveOptions& opts) {
    ch.validate(cfg);
    if (opts.max_iters < 1) throw PreconditionError("min_leakage: max_iters must be >= 1");
    if (opts.leakage_tol <= 0 || opts.rank_tol <= 0)
        throw PreconditionError("min_leakage: tolerances must be positive");
    const auto per_user = check_per_user(cfg);
    for (int k = 0; k < cfg.K; ++k)
        if (!per_user[k])
            throw PreconditionError("min_leakage: no full-rank beamformers exist for user " +
                                    std::to_string(k + 1) + " (d exceeds min{M,N})");

    const int K = cfg.K;
    std::mt19937_64 eng(derive_seed(opts.seed, SeedStream::SolverInit));
    BeamformerSet bf;
    bf.V.resize(K);
    bf.U.resize(K);
    for (int k = 0; k < K; ++k) bf.V[k] = random_orthonormal(cfg.M[k], cfg.d[k], eng);

    auto receiver_step = [&]() {
        for (int k = 0; k < K; ++k) {
            CMatrix Q = CMatrix::Zero(cfg.N[k], cfg.N[k]);
            for (int j = 0; j < K; ++j) {
                if (j == k) continue;
                CMatrix T = ch.H[k][j] * bf.V[j];
                Q += T * T.adjoint();
            }
            bf.U[k] = least_eigenvectors(Q, cfg.d[k]);
        }
    };
    auto transmitter_step = [&]() {
        for (int j = 0; j < K; ++j) {
            CMatrix Q = CMatrix::Zero(cfg.M[j], cfg.M[j]);
            for (int k = 0; k < K; ++k) {
                if (k == j) continue;
                CMatrix T = ch.H[k][j].adjoint() * bf.U[k];
                Q += T * T.adjoint();
            }
            bf.V[j] = least_eigenvectors(Q, cfg.d[j]);
        }
    };

    constexpr int kStallWindow = 50;
    constexpr double kStallRel = 1e-12;

    SolveResult res;
    receiver_step();
    res.leakage_trace.push_back(leakage(ch, bf));
    int it = 0;
    while (res.leakage_trace.back() > opts.leakage_tol && it < opts.max_iters) {
        transmitter_step();
        receiver_step();
        res.leakage_trace.push_back(leakage(ch, bf));
        ++it;
        if (it >= kStallWindow) {
            const double then = res.leakage_trace[res.leakage_trace.size() - 1 - kStallWindow];
            const double now = res.leakage_trace.back();
            if (then - now < kStallRel * std::max(then, 1e-300)) break;
        }
    }
    res.iterations = it;
    res.converged = res.leakage_trace.back() <= opts.leakage_tol;
    const auto margins = signal_rank_margin(ch, bf);
    res.rank_ok =
        std::all_of(margins.begin(), margins.end(), [&](double m) { return m > opts.rank_tol; });
    res.beamformers = std::move(bf);
    return res;
}

AlignmentCheck verify_alignment(const ChannelRealization& ch, const BeamformerSet& bf,
                                double tol) {
    const int K = ch.users();
    if (bf.users() != K || static_cast<int>(bf.U.size()) != K)
        throw DimensionError(-1, -1, "beamformer set size does not match channel grid");
    AlignmentCheck out;
    for (int k = 0; k < K; ++k) {
        for (int j = 0; j < K; ++j) {
            if (k == j) continue;
            if (ch.H[k][j].rows() != bf.U[k].rows() || ch.H[k][j].cols() != bf.V[j].rows())
                throw DimensionError(k, j, "verify_alignment: shape mismatch at " +
                                               pair_to_string({k, j}));
            const double r = (bf.U[k].adjoint() * ch.H[k][j] * bf.V[j]).squaredNorm();
            out.max_zf_residual = std::max(out.max_zf_residual, r);
        }
    }
    out.ranks_ok.resize(K);
    for (int k = 0; k < K; ++k) {
        if (ch.H[k][k].rows() != bf.U[k].rows() || ch.H[k][k].cols() != bf.V[k].rows())
            throw DimensionError(k, k, "verify_alignment: shape mismatch at " +
                                           pair_to_string({k, k}));
        CMatrix D = bf.U[k].adjoint() * ch.H[k][k] * bf.V[k];
        Eigen::JacobiSVD<CMatrix> svd(D);
        const auto& s = svd.singularValues();
        const auto dk = D.cols();
        out.ranks_ok[k] = dk > 0 && s.size() >= dk && s(dk - 1) >= rank_tolerance(s(0));
    }
    out.aligned = out.max_zf_residual <= tol &&
                  std::all_of(out.ranks_ok.begin(), out.ranks_ok.end(),
                              [](bool b) { return b; });
    return out;
}

}  // namespace ia
