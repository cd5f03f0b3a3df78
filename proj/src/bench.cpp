#include "ia/bench.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "ia/feasibility.hpp"
#include "ia/rng.hpp"

namespace ia {

void BenchConfig::validate() const {
    if (K < 1 || static_cast<int>(M.size()) != K || static_cast<int>(N.size()) != K)
        throw Error("BenchConfig: M and N must each have K entries");
    for (int k = 0; k < K; ++k)
        if (M[k] < 1 || N[k] < 1) throw Error("BenchConfig: antenna counts must be positive");
    if (snr_grid_db.size() < 1) throw Error("BenchConfig: empty snr grid");
    for (std::size_t i = 1; i < snr_grid_db.size(); ++i)
        if (snr_grid_db[i] <= snr_grid_db[i - 1])
            throw Error("BenchConfig: snr grid must be strictly increasing");
    if (trials < 1) throw Error("BenchConfig: trials must be >= 1");
    if (noise_power <= 0) throw Error("BenchConfig: noise power must be positive");
}

ChannelRealization sample_rayleigh(const SystemConfig& cfg, std::uint64_t seed) {
    std::mt19937_64 eng(derive_seed(seed, SeedStream::Channel));
    ChannelRealization ch;
    ch.H.assign(cfg.K, std::vector<CMatrix>(cfg.K));
    for (int k = 0; k < cfg.K; ++k)
        for (int j = 0; j < cfg.K; ++j) ch.H[k][j] = gaussian_matrix(cfg.N[k], cfg.M[j], eng);
    return ch;
}

namespace {

double logdet_hermitian(const CMatrix& A) {
    Eigen::LLT<CMatrix> llt((A + A.adjoint()) * 0.5);
    if (llt.info() != Eigen::Success)
        throw Error("sum_rate: covariance is not positive definite");
    double ld = 0.0;
    const auto& L = llt.matrixLLT();
    for (Eigen::Index i = 0; i < L.rows(); ++i) ld += std::log(std::real(L(i, i)));
    return 2.0 * ld;
}

// Sum rate from explicit per-user transmit covariances.
double rate_from_covariances(const ChannelRealization& ch,
                             const std::vector<CMatrix>& Sigma, double noise_power) {
    const int K = ch.users();
    double total = 0.0;
    for (int k = 0; k < K; ++k) {
        const int Nk = static_cast<int>(ch.H[k][k].rows());
        CMatrix R = noise_power * CMatrix::Identity(Nk, Nk);
        for (int j = 0; j < K; ++j) {
            if (j == k) continue;
            R += ch.H[k][j] * Sigma[j] * ch.H[k][j].adjoint();
        }
        CMatrix S = ch.H[k][k] * Sigma[k] * ch.H[k][k].adjoint();
        total += (logdet_hermitian(R + S) - logdet_hermitian(R)) / std::log(2.0);
    }
    return total;
}

}  // namespace

double sum_rate(const ChannelRealization& ch, const BeamformerSet& bf, double snr,
                double noise_power) {
    if (snr <= 0) throw Error("sum_rate: snr must be positive");
    if (noise_power <= 0) throw Error("sum_rate: noise power must be positive");
    const int K = ch.users();
    if (bf.users() != K) throw DimensionError(-1, -1, "beamformer set size mismatch");
    std::vector<CMatrix> Sigma(K);
    for (int k = 0; k < K; ++k) {
        const auto dk = bf.V[k].cols();
        if (ch.H[k][k].cols() != bf.V[k].rows())
            throw DimensionError(k, k, "sum_rate: V_" + std::to_string(k + 1) +
                                           " does not match the channel");
        const double p = dk > 0 ? snr * noise_power / static_cast<double>(dk) : 0.0;
        Sigma[k] = p * (bf.V[k] * bf.V[k].adjoint());
    }
    return rate_from_covariances(ch, Sigma, noise_power);
}

namespace {

// V = (A + mu I)^{-1} B with the smallest mu >= 0 satisfying
// tr(V V^H) <= budget; A Hermitian PSD.
CMatrix power_constrained_solve(const CMatrix& A, const CMatrix& B, double budget) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es((A + A.adjoint()) * 0.5);
    const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    const CMatrix Bt = es.eigenvectors().adjoint() * B;
    Eigen::VectorXd c(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) c(i) = Bt.row(i).squaredNorm();

    auto power_at = [&](double mu) {
        double p = 0.0;
        for (Eigen::Index i = 0; i < lam.size(); ++i) {
            const double den = lam(i) + mu;
            if (den > 0) p += c(i) / (den * den);
        }
        return p;
    };

    double mu = 0.0;
    const double eps = 1e-14;
    bool zero_ok = lam.minCoeff() > eps && power_at(0.0) <= budget;
    if (!zero_ok) {
        double lo = 0.0, hi = 1.0;
        while (power_at(hi) > budget) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (power_at(mid) > budget ? lo : hi) = mid;
        }
        mu = hi;
    }
    CMatrix D = CMatrix::Zero(lam.size(), lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        const double den = lam(i) + mu;
        D(i, i) = den > 0 ? 1.0 / den : 0.0;
    }
    return es.eigenvectors() * D * Bt;
}

}  // namespace

std::pair<BeamformerSet, double> wmmse_maximize(const ChannelRealization& ch, double snr,
                                                double noise_power, const WmmseOptions& opts) {
    const int K = ch.users();
    if (snr <= 0 || noise_power <= 0) throw Error("wmmse_maximize: snr and noise must be positive");
    std::vector<int> M(K), N(K), d(K);
    for (int k = 0; k < K; ++k) {
        N[k] = static_cast<int>(ch.H[k][k].rows());
        M[k] = static_cast<int>(ch.H[k][k].cols());
        if (!ch.H[k][k].allFinite()) throw Error("wmmse_maximize: non-finite channel");
        d[k] = std::min(M[k], N[k]);
    }
    for (int k = 0; k < K; ++k)
        for (int j = 0; j < K; ++j)
            if (!ch.H[k][j].allFinite() || ch.H[k][j].rows() != N[k] || ch.H[k][j].cols() != M[j])
                throw DimensionError(k, j, "wmmse_maximize: bad channel grid");

    const double P = snr * noise_power;  // per-user power budget
    std::mt19937_64 eng(derive_seed(opts.seed, SeedStream::WmmseInit));
    std::vector<CMatrix> V(K), U(K), W(K);
    for (int k = 0; k < K; ++k)
        V[k] = std::sqrt(P / d[k]) * random_orthonormal(M[k], d[k], eng);

    auto current_rate = [&]() {
        std::vector<CMatrix> Sigma(K);
        for (int k = 0; k < K; ++k) Sigma[k] = V[k] * V[k].adjoint();
        return rate_from_covariances(ch, Sigma, noise_power);
    };

    double rate = current_rate();
    for (int it = 0; it < opts.max_iters; ++it) {
        // Receiver MMSE filters.
        for (int k = 0; k < K; ++k) {
            CMatrix J = noise_power * CMatrix::Identity(N[k], N[k]);
            for (int j = 0; j < K; ++j) {
                CMatrix T = ch.H[k][j] * V[j];
                J += T * T.adjoint();
            }
            U[k] = J.ldlt().solve(ch.H[k][k] * V[k]);
        }
        // MMSE weights.
        for (int k = 0; k < K; ++k) {
            CMatrix E = CMatrix::Identity(d[k], d[k]) - U[k].adjoint() * ch.H[k][k] * V[k];
            E = (E + E.adjoint()) * 0.5;
            W[k] = E.inverse();
            W[k] = (W[k] + W[k].adjoint()) * 0.5;
        }
        // Transmit covariances under per-user power.
        for (int k = 0; k < K; ++k) {
            CMatrix A = CMatrix::Zero(M[k], M[k]);
            for (int j = 0; j < K; ++j) {
                CMatrix T = ch.H[j][k].adjoint() * U[j];
                A += T * W[j] * T.adjoint();
            }
            CMatrix B = ch.H[k][k].adjoint() * U[k] * W[k];
            V[k] = power_constrained_solve(A, B, P);
        }
        const double next = current_rate();
        if (next < rate - 1e-9 * std::max(1.0, std::abs(rate)))
            throw Error("wmmse_maximize: sum rate decreased across an iteration");
        const bool settled = std::abs(next - rate) <= opts.rel_tol * std::max(1.0, std::abs(rate));
        rate = next;
        if (settled) break;
    }

    // Return precoders in the sum_rate power convention (see header).
    BeamformerSet bf;
    bf.V.resize(K);
    bf.U = U;
    for (int k = 0; k < K; ++k) bf.V[k] = V[k] / std::sqrt(P / d[k]);
    const double reported = sum_rate(ch, bf, snr, noise_power);
    return {std::move(bf), reported};
}

double estimate_dof_slope(const std::vector<double>& snr_grid_db,
                          const std::vector<double>& mean_rates, int top_points) {
    if (snr_grid_db.size() != mean_rates.size())
        throw Error("estimate_dof_slope: grid and rates differ in length");
    if (snr_grid_db.size() < 2)
        throw Error("estimate_dof_slope: at least 2 grid points required");
    const int n = static_cast<int>(snr_grid_db.size());
    const int use = std::min(std::max(top_points, 2), n);
    double mx = 0, my = 0;
    for (int i = n - use; i < n; ++i) {
        mx += snr_grid_db[i] * std::log2(10.0) / 10.0;  // log2(snr)
        my += mean_rates[i];
    }
    mx /= use;
    my /= use;
    double sxx = 0, sxy = 0;
    for (int i = n - use; i < n; ++i) {
        const double x = snr_grid_db[i] * std::log2(10.0) / 10.0 - mx;
        sxx += x * x;
        sxy += x * (mean_rates[i] - my);
    }
    if (sxx == 0) throw Error("estimate_dof_slope: degenerate grid");
    return sxy / sxx;
}

BenchmarkRecord run_benchmark(const BenchConfig& bc) {
    bc.validate();
    BenchmarkRecord rec;
    rec.config = bc;

    std::vector<int> dfull(bc.K);
    for (int k = 0; k < bc.K; ++k) dfull[k] = std::min(bc.M[k], bc.N[k]);
    const SystemConfig cfg(bc.K, bc.M, bc.N, dfull);

    const auto bound = max_dof_bound(bc.K, bc.M, bc.N);
    rec.theoretical_bound = bound.max_total;
    rec.bound_tuple = bound.argmax_tuple;

    const int S = static_cast<int>(bc.snr_grid_db.size());
    rec.rates.assign(S, std::vector<double>(bc.trials, 0.0));
    rec.mean_rates.assign(S, 0.0);
    for (int si = 0; si < S; ++si) {
        const double snr = std::pow(10.0, bc.snr_grid_db[si] / 10.0);
        for (int t = 0; t < bc.trials; ++t) {
            const std::uint64_t cell_seed =
                derive_seed(bc.seed, SeedStream::Bench, static_cast<std::uint64_t>(t),
                            static_cast<std::uint64_t>(si));
            const ChannelRealization ch = sample_rayleigh(cfg, cell_seed);
            WmmseOptions wo;
            wo.seed = derive_seed(cell_seed, SeedStream::WmmseInit);
            rec.rates[si][t] = wmmse_maximize(ch, snr, bc.noise_power, wo).second;
            rec.mean_rates[si] += rec.rates[si][t];
        }
        rec.mean_rates[si] /= bc.trials;
    }
    rec.estimated_dof_slope =
        bc.snr_grid_db.size() >= 2 ? estimate_dof_slope(bc.snr_grid_db, rec.mean_rates) : 0.0;
    return rec;
}

}  // namespace ia
