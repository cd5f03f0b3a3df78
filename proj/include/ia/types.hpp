// Core domain types for linear interference alignment analysis in K-user
// MIMO interference channels: system dimensions, channel grids, beamformer
// sets, and ordered cross-link pair sets.
//
// Conventions used throughout the library:
//   - H[k][j] is the channel from transmitter j to receiver k and has shape
//     N_k x M_j (receive antennas x transmit antennas).
//   - User indices are 0-based internally; all serialized output and error
//     messages use 1-based indices.
//   - All types are immutable values after construction; every operation on
//     them is a pure function and safe to call concurrently.

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ia {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shape mismatch between a channel/beamformer and the system dimensions.
// Carries the offending (receiver, transmitter) link, 0-based, -1 if n/a.
class DimensionError : public Error {
public:
    DimensionError(int k, int j, const std::string& what)
        : Error(what), k_(k), j_(j) {}
    int k() const { return k_; }
    int j() const { return j_; }

private:
    int k_;
    int j_;
};

// Violated operation precondition (strategy guards, enumeration limits, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// System dimensions: K users, per-user transmit antennas M_k, receive
// antennas N_k, and requested streams d_k (the DoF tuple).
// Zero-stream users are rejected; d_k >= 1 for every user.
struct SystemConfig {
    int K = 0;
    std::vector<int> M;
    std::vector<int> N;
    std::vector<int> d;

    SystemConfig() = default;
    SystemConfig(int K_, std::vector<int> M_, std::vector<int> N_, std::vector<int> d_);

    bool symmetric() const;      // M_k and N_k constant across users
    bool equal_streams() const;  // all d_k equal
    long long total_streams() const;
};

// An ordered cross pair (k, j), k != j: the zero-forcing equation at
// receiver k for the signal of transmitter j.
struct OrderedPair {
    int k = 0;
    int j = 0;

    friend bool operator==(const OrderedPair&, const OrderedPair&) = default;
    friend auto operator<=>(const OrderedPair&, const OrderedPair&) = default;
};

// A subset of the cross pairs {(k,j) : k != j}; kept sorted and duplicate-free.
struct PairSet {
    std::vector<OrderedPair> pairs;

    PairSet() = default;
    explicit PairSet(std::vector<OrderedPair> p);

    static PairSet all_cross(int K);

    // Same pairs with each (k,j) flipped to (j,k).
    PairSet transposed() const;

    bool empty() const { return pairs.empty(); }
    std::size_t size() const { return pairs.size(); }

    // Throws if any pair is diagonal or out of range for K users.
    void validate(int K) const;

    friend bool operator==(const PairSet&, const PairSet&) = default;
};

// The K x K grid of channel matrices; H[k][j] has shape N_k x M_j.
struct ChannelRealization {
    std::vector<std::vector<CMatrix>> H;

    int users() const { return static_cast<int>(H.size()); }

    // Checks grid shape against cfg and rejects non-finite entries.
    void validate(const SystemConfig& cfg) const;
};

// Transmit beamformers V_k (M_k x d_k) and receive filters U_k (N_k x d_k).
// Shapes are validated against a SystemConfig; full column rank is a
// precondition of the operations that require it (checked there), because
// rate-maximizing algorithms legitimately produce rank-reduced precoders.
struct BeamformerSet {
    std::vector<CMatrix> V;
    std::vector<CMatrix> U;

    int users() const { return static_cast<int>(V.size()); }

    void validate(const SystemConfig& cfg) const;

    // True when every V_k and U_k has smallest singular value above the
    // scale-aware rank tolerance.
    bool full_column_rank() const;
};

// Scale-aware rank tolerance: a singular value counts as nonzero when it is
// at least rel * max(sigma_max, 1).
double rank_tolerance(double sigma_max, double rel = 1e-8);

std::string pair_to_string(const OrderedPair& p);  // 1-based, "(k,j)"

}  // namespace ia
