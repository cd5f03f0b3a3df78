#include "ia/model.hpp"

#include <Eigen/SVD>

namespace ia {

namespace {

void check_link_shapes(const ChannelRealization& ch, const BeamformerSet& bf, int k, int j) {
    const CMatrix& Hkj = ch.H[k][j];
    if (Hkj.rows() != bf.U[k].rows())
        throw DimensionError(k, j, "H" + pair_to_string({k, j}) + " has " +
                                       std::to_string(Hkj.rows()) + " rows but U_" +
                                       std::to_string(k + 1) + " has " +
                                       std::to_string(bf.U[k].rows()));
    if (Hkj.cols() != bf.V[j].rows())
        throw DimensionError(k, j, "H" + pair_to_string({k, j}) + " has " +
                                       std::to_string(Hkj.cols()) + " columns but V_" +
                                       std::to_string(j + 1) + " has " +
                                       std::to_string(bf.V[j].rows()) + " rows");
}

}  // namespace

double leakage(const ChannelRealization& ch, const BeamformerSet& bf) {
    const int K = ch.users();
    if (bf.users() != K || static_cast<int>(bf.U.size()) != K)
        throw DimensionError(-1, -1, "beamformer set size does not match channel grid");
    double total = 0.0;
    for (int k = 0; k < K; ++k) {
        for (int j = 0; j < K; ++j) {
            if (k == j) continue;
            check_link_shapes(ch, bf, k, j);
            total += (bf.U[k].adjoint() * ch.H[k][j] * bf.V[j]).squaredNorm();
        }
    }
    return total;
}

std::vector<double> signal_rank_margin(const ChannelRealization& ch, const BeamformerSet& bf) {
    const int K = ch.users();
    if (bf.users() != K || static_cast<int>(bf.U.size()) != K)
        throw DimensionError(-1, -1, "beamformer set size does not match channel grid");
    std::vector<double> margins(K, 0.0);
    for (int k = 0; k < K; ++k) {
        check_link_shapes(ch, bf, k, k);
        const int dk = static_cast<int>(bf.V[k].cols());
        if (bf.U[k].cols() != dk)
            throw DimensionError(k, k, "U_" + std::to_string(k + 1) + " and V_" +
                                           std::to_string(k + 1) + " have different widths");
        CMatrix D = bf.U[k].adjoint() * ch.H[k][k] * bf.V[k];
        Eigen::JacobiSVD<CMatrix> svd(D);
        const auto& s = svd.singularValues();
        margins[k] = (s.size() >= dk && dk > 0) ? s(dk - 1) : 0.0;
    }
    return margins;
}

}  // namespace ia
