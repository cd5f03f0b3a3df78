#include "ia/algebra.hpp"

#include <algorithm>

#include <Eigen/SVD>

#include "ia/rng.hpp"

namespace ia {

VariableLayout layout_of(const SystemConfig& cfg) {
    VariableLayout lay;
    lay.w_offset.resize(cfg.K);
    lay.v_offset.resize(cfg.K);
    lay.dk.resize(cfg.K);
    lay.wk_cols.resize(cfg.K);
    lay.vk_rows.resize(cfg.K);
    int at = 0;
    for (int k = 0; k < cfg.K; ++k) {
        lay.dk[k] = cfg.d[k];
        lay.wk_cols[k] = cfg.N[k] - cfg.d[k];
        lay.w_offset[k] = at;
        at += cfg.d[k] * lay.wk_cols[k];
    }
    for (int k = 0; k < cfg.K; ++k) {
        lay.vk_rows[k] = cfg.M[k] - cfg.d[k];
        lay.v_offset[k] = at;
        at += lay.vk_rows[k] * cfg.d[k];
    }
    lay.total = at;
    return lay;
}

Complex get_variable(const ReducedVars& rv, const VariableLayout& lay, int index) {
    const int K = static_cast<int>(lay.dk.size());
    for (int k = 0; k < K; ++k) {
        const int wn = lay.dk[k] * lay.wk_cols[k];
        if (index >= lay.w_offset[k] && index < lay.w_offset[k] + wn) {
            const int local = index - lay.w_offset[k];
            const int col = local / lay.dk[k];  // W_k column = Ubar_k row
            const int row = local % lay.dk[k];
            return std::conj(rv.Ubar[k](col, row));
        }
    }
    for (int k = 0; k < K; ++k) {
        const int vn = lay.vk_rows[k] * lay.dk[k];
        if (index >= lay.v_offset[k] && index < lay.v_offset[k] + vn) {
            const int local = index - lay.v_offset[k];
            const int col = local / lay.vk_rows[k];
            const int row = local % lay.vk_rows[k];
            return rv.Vbar[k](row, col);
        }
    }
    throw Error("variable index out of range");
}

void set_variable(ReducedVars& rv, const VariableLayout& lay, int index, Complex value) {
    const int K = static_cast<int>(lay.dk.size());
    for (int k = 0; k < K; ++k) {
        const int wn = lay.dk[k] * lay.wk_cols[k];
        if (index >= lay.w_offset[k] && index < lay.w_offset[k] + wn) {
            const int local = index - lay.w_offset[k];
            const int col = local / lay.dk[k];
            const int row = local % lay.dk[k];
            rv.Ubar[k](col, row) = std::conj(value);
            return;
        }
    }
    for (int k = 0; k < K; ++k) {
        const int vn = lay.vk_rows[k] * lay.dk[k];
        if (index >= lay.v_offset[k] && index < lay.v_offset[k] + vn) {
            const int local = index - lay.v_offset[k];
            const int col = local / lay.vk_rows[k];
            const int row = local % lay.vk_rows[k];
            rv.Vbar[k](row, col) = value;
            return;
        }
    }
    throw Error("variable index out of range");
}

ReducedVars zero_vars(const SystemConfig& cfg) {
    ReducedVars rv;
    rv.Ubar.resize(cfg.K);
    rv.Vbar.resize(cfg.K);
    for (int k = 0; k < cfg.K; ++k) {
        rv.Ubar[k] = CMatrix::Zero(cfg.N[k] - cfg.d[k], cfg.d[k]);
        rv.Vbar[k] = CMatrix::Zero(cfg.M[k] - cfg.d[k], cfg.d[k]);
    }
    return rv;
}

int equation_count(const SystemConfig& cfg) {
    int n = 0;
    for (int k = 0; k < cfg.K; ++k)
        for (int j = 0; j < cfg.K; ++j)
            if (k != j) n += cfg.d[k] * cfg.d[j];
    return n;
}

ReducedSystem partition_channels(const ChannelRealization& ch, const SystemConfig& cfg) {
    ch.validate(cfg);
    for (int k = 0; k < cfg.K; ++k)
        if (cfg.d[k] > std::min(cfg.M[k], cfg.N[k]))
            throw PreconditionError("partition_channels: d_" + std::to_string(k + 1) +
                                    " exceeds min{M,N}");
    ReducedSystem rs;
    rs.cfg = cfg;
    rs.blocks.assign(cfg.K, std::vector<PairBlocks>(cfg.K));
    for (int k = 0; k < cfg.K; ++k) {
        for (int j = 0; j < cfg.K; ++j) {
            if (k == j) continue;
            const CMatrix& Hkj = ch.H[k][j];
            const int dk = cfg.d[k], dj = cfg.d[j];
            PairBlocks b;
            b.H1 = Hkj.topLeftCorner(dk, dj);
            b.H2 = Hkj.topRightCorner(dk, cfg.M[j] - dj);
            b.H3 = Hkj.bottomLeftCorner(cfg.N[k] - dk, dj);
            b.H4 = Hkj.bottomRightCorner(cfg.N[k] - dk, cfg.M[j] - dj);
            rs.blocks[k][j] = std::move(b);
        }
    }
    return rs;
}

namespace {

void check_vars(const ReducedSystem& rs, const ReducedVars& rv) {
    const auto& cfg = rs.cfg;
    if (static_cast<int>(rv.Ubar.size()) != cfg.K || static_cast<int>(rv.Vbar.size()) != cfg.K)
        throw DimensionError(-1, -1, "reduced variables do not have K entries");
    for (int k = 0; k < cfg.K; ++k) {
        if (rv.Ubar[k].rows() != cfg.N[k] - cfg.d[k] || rv.Ubar[k].cols() != cfg.d[k])
            throw DimensionError(k, -1, "Ubar_" + std::to_string(k + 1) + " has wrong shape");
        if (rv.Vbar[k].rows() != cfg.M[k] - cfg.d[k] || rv.Vbar[k].cols() != cfg.d[k])
            throw DimensionError(k, -1, "Vbar_" + std::to_string(k + 1) + " has wrong shape");
    }
}

}  // namespace

CVector eval_polymap(const ReducedSystem& rs, const ReducedVars& rv) {
    check_vars(rs, rv);
    const auto& cfg = rs.cfg;
    CVector out(equation_count(cfg));
    int at = 0;
    for (int k = 0; k < cfg.K; ++k) {
        for (int j = 0; j < cfg.K; ++j) {
            if (k == j) continue;
            const PairBlocks& b = rs.blocks[k][j];
            const CMatrix W = rv.Ubar[k].adjoint();
            CMatrix F = -(W * b.H3 + b.H2 * rv.Vbar[j] + W * b.H4 * rv.Vbar[j]);
            for (int c = 0; c < F.cols(); ++c)
                for (int r = 0; r < F.rows(); ++r) out(at++) = F(r, c);
        }
    }
    return out;
}

CVector stacked_h1(const ReducedSystem& rs) {
    const auto& cfg = rs.cfg;
    CVector out(equation_count(cfg));
    int at = 0;
    for (int k = 0; k < cfg.K; ++k) {
        for (int j = 0; j < cfg.K; ++j) {
            if (k == j) continue;
            const CMatrix& H1 = rs.blocks[k][j].H1;
            for (int c = 0; c < H1.cols(); ++c)
                for (int r = 0; r < H1.rows(); ++r) out(at++) = H1(r, c);
        }
    }
    return out;
}

CMatrix jacobian(const ReducedSystem& rs, const ReducedVars& rv) {
    check_vars(rs, rv);
    const auto& cfg = rs.cfg;
    const VariableLayout lay = layout_of(cfg);

    // Map global variable index -> Jacobian column, -1 for frozen.
    std::vector<int> col_of(lay.total, -1);
    int ncols = 0;
    for (int i = 0; i < lay.total; ++i)
        if (!rv.frozen.count(i)) col_of[i] = ncols++;

    CMatrix J = CMatrix::Zero(equation_count(cfg), ncols);
    int eq0 = 0;
    for (int k = 0; k < cfg.K; ++k) {
        for (int j = 0; j < cfg.K; ++j) {
            if (k == j) continue;
            const PairBlocks& b = rs.blocks[k][j];
            const int dk = cfg.d[k], dj = cfg.d[j];
            const CMatrix W = rv.Ubar[k].adjoint();
            // dF(a,b)/dW_k(a,t) = -(H3 + H4 Vbar_j)(t,b)
            const CMatrix G3 = b.H3 + b.H4 * rv.Vbar[j];
            // dF(a,b)/dVbar_j(s,b) = -(H2 + W H4)(a,s)
            const CMatrix G2 = b.H2 + W * b.H4;
            for (int bcol = 0; bcol < dj; ++bcol) {
                for (int a = 0; a < dk; ++a) {
                    const int eq = eq0 + bcol * dk + a;
                    for (int t = 0; t < lay.wk_cols[k]; ++t) {
                        const int c = col_of[lay.w_index(k, a, t)];
                        if (c >= 0) J(eq, c) = -G3(t, bcol);
                    }
                    for (int s = 0; s < lay.vk_rows[j]; ++s) {
                        const int c = col_of[lay.v_index(j, s, bcol)];
                        if (c >= 0) J(eq, c) = -G2(a, s);
                    }
                }
            }
            eq0 += dk * dj;
        }
    }
    return J;
}

int numeric_rank(const CMatrix& A, double rel_tol) {
    if (A.rows() == 0 || A.cols() == 0) return 0;
    if (!A.allFinite()) throw Error("numeric_rank: non-finite entries");
    Eigen::JacobiSVD<CMatrix> svd(A);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return 0;
    const double tol = rank_tolerance(s(0), rel_tol);
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) >= tol) ++r;
    return r;
}

BlockGraph build_block_graph(const SystemConfig& cfg) {
    if (!cfg.equal_streams())
        throw PreconditionError("block graph requires equal stream counts");
    const int d = cfg.d[0];
    for (int k = 0; k < cfg.K; ++k)
        if (cfg.M[k] % d != 0 || cfg.N[k] % d != 0)
            throw PreconditionError("block graph requires d dividing every antenna count");

    BlockGraph g;
    g.cfg = cfg;
    g.d = d;
    for (int k = 0; k < cfg.K; ++k)
        for (int p = 0; p < cfg.N[k] / d - 1; ++p) g.xnodes.push_back({true, k, p});
    for (int k = 0; k < cfg.K; ++k)
        for (int q = 0; q < cfg.M[k] / d - 1; ++q) g.xnodes.push_back({false, k, q});
    for (int k = 0; k < cfg.K; ++k)
        for (int j = 0; j < cfg.K; ++j)
            if (k != j) g.ynodes.push_back({k, j});

    g.adjacency.resize(g.ynodes.size());
    for (std::size_t yi = 0; yi < g.ynodes.size(); ++yi) {
        const auto [k, j] = g.ynodes[yi];
        for (std::size_t xi = 0; xi < g.xnodes.size(); ++xi) {
            const auto& x = g.xnodes[xi];
            if ((x.is_u && x.user == k) || (!x.is_u && x.user == j))
                g.adjacency[yi].push_back(static_cast<int>(xi));
        }
    }
    return g;
}

namespace {

bool try_augment(const BlockGraph& g, int y, std::vector<char>& visited_x,
                 std::vector<int>& match_of_x) {
    for (int x : g.adjacency[y]) {
        if (visited_x[x]) continue;
        visited_x[x] = 1;
        if (match_of_x[x] < 0 || try_augment(g, match_of_x[x], visited_x, match_of_x)) {
            match_of_x[x] = y;
            return true;
        }
    }
    return false;
}

}  // namespace

MatchingResult complete_matching(const BlockGraph& g) {
    const int nx = static_cast<int>(g.xnodes.size());
    const int ny = static_cast<int>(g.ynodes.size());
    std::vector<int> match_of_x(nx, -1);
    std::vector<char> matched_y(ny, 0);
    for (int y = 0; y < ny; ++y) {
        std::vector<char> visited(nx, 0);
        matched_y[y] = try_augment(g, y, visited, match_of_x) ? 1 : 0;
    }

    MatchingResult r;
    r.match_of_y.assign(ny, -1);
    for (int x = 0; x < nx; ++x)
        if (match_of_x[x] >= 0) r.match_of_y[match_of_x[x]] = x;
    r.complete = std::all_of(matched_y.begin(), matched_y.end(), [](char c) { return c != 0; });
    if (r.complete) return r;

    // Union of alternating-reachable Y sets from every unmatched Y node:
    // a maximum-deficiency Hall violator.
    std::vector<char> in_s(ny, 0), x_seen(nx, 0);
    std::vector<int> stack;
    for (int y = 0; y < ny; ++y)
        if (!matched_y[y] && !in_s[y]) {
            in_s[y] = 1;
            stack.push_back(y);
        }
    while (!stack.empty()) {
        const int y = stack.back();
        stack.pop_back();
        for (int x : g.adjacency[y]) {
            if (x_seen[x]) continue;
            x_seen[x] = 1;
            const int y2 = match_of_x[x];
            if (y2 >= 0 && !in_s[y2]) {
                in_s[y2] = 1;
                stack.push_back(y2);
            }
        }
    }
    for (int y = 0; y < ny; ++y)
        if (in_s[y]) r.hall_violator.push_back(y);
    return r;
}

Certificate construct_certificate(const BlockGraph& g, const MatchingResult& m) {
    if (!m.complete)
        throw PreconditionError("construct_certificate requires a complete matching");
    const auto& cfg = g.cfg;
    const int d = g.d;
    const VariableLayout lay = layout_of(cfg);

    Certificate cert;
    cert.system.cfg = cfg;
    cert.system.blocks.assign(cfg.K, std::vector<PairBlocks>(cfg.K));
    for (int k = 0; k < cfg.K; ++k) {
        for (int j = 0; j < cfg.K; ++j) {
            if (k == j) continue;
            PairBlocks b;
            b.H1 = CMatrix::Zero(d, d);
            b.H2 = CMatrix::Zero(d, cfg.M[j] - d);
            b.H3 = CMatrix::Zero(cfg.N[k] - d, d);
            b.H4 = CMatrix::Zero(cfg.N[k] - d, cfg.M[j] - d);
            cert.system.blocks[k][j] = std::move(b);
        }
    }
    for (std::size_t yi = 0; yi < g.ynodes.size(); ++yi) {
        const auto [k, j] = g.ynodes[yi];
        const auto& x = g.xnodes[m.match_of_y[yi]];
        if (x.is_u)
            cert.system.blocks[k][j].H3.middleRows(x.block * d, d) = CMatrix::Identity(d, d);
        else
            cert.system.blocks[k][j].H2.middleCols(x.block * d, d) = CMatrix::Identity(d, d);
    }

    cert.vars = zero_vars(cfg);
    std::vector<char> x_matched(g.xnodes.size(), 0);
    for (int x : m.match_of_y) x_matched[x] = 1;
    for (std::size_t xi = 0; xi < g.xnodes.size(); ++xi) {
        if (x_matched[xi]) continue;
        const auto& x = g.xnodes[xi];
        if (x.is_u) {
            // Ubar_k block rows [block*d, block*d+d) = W_k columns of the same range.
            for (int t = x.block * d; t < (x.block + 1) * d; ++t)
                for (int r = 0; r < d; ++r) cert.removed.insert(lay.w_index(x.user, r, t));
        } else {
            for (int s = x.block * d; s < (x.block + 1) * d; ++s)
                for (int c = 0; c < d; ++c) cert.removed.insert(lay.v_index(x.user, s, c));
        }
    }
    cert.vars.frozen = cert.removed;
    return cert;
}

CertifyResult certify_generic_feasibility(const SystemConfig& cfg, int trials,
                                          std::uint64_t seed) {
    if (trials < 1) throw PreconditionError("certify_generic_feasibility requires trials >= 1");
    for (int k = 0; k < cfg.K; ++k)
        if (cfg.d[k] > std::min(cfg.M[k], cfg.N[k]))
            throw PreconditionError("certify: d_" + std::to_string(k + 1) +
                                    " exceeds min{M,N}");

    CertifyResult res;
    res.equations = equation_count(cfg);
    const VariableLayout lay = layout_of(cfg);
    res.variables = lay.total;
    if (res.equations == 0) {
        res.outcome = CertifyOutcome::CertifiedFullRank;
        return res;
    }

    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 eng(derive_seed(seed, SeedStream::Certify, static_cast<std::uint64_t>(t)));
        ChannelRealization ch;
        ch.H.assign(cfg.K, std::vector<CMatrix>(cfg.K));
        for (int k = 0; k < cfg.K; ++k)
            for (int j = 0; j < cfg.K; ++j) ch.H[k][j] = gaussian_matrix(cfg.N[k], cfg.M[j], eng);
        ReducedVars rv = zero_vars(cfg);
        for (int k = 0; k < cfg.K; ++k) {
            rv.Ubar[k] = gaussian_matrix(cfg.N[k] - cfg.d[k], cfg.d[k], eng);
            rv.Vbar[k] = gaussian_matrix(cfg.M[k] - cfg.d[k], cfg.d[k], eng);
        }
        const ReducedSystem rs = partition_channels(ch, cfg);
        res.observed_ranks.push_back(numeric_rank(jacobian(rs, rv)));
    }
    const bool full = std::any_of(res.observed_ranks.begin(), res.observed_ranks.end(),
                                  [&](int r) { return r == res.equations; });
    res.outcome = full ? CertifyOutcome::CertifiedFullRank : CertifyOutcome::RankDeficient;
    return res;
}

}  // namespace ia
