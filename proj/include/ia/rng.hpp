// Deterministic randomness. Every random quantity in the library derives
// from a single 64-bit seed through derive_seed(base, {stream tag, indices}),
// so identical seeds reproduce identical runs bit for bit.
//
// Uniform doubles come straight from mt19937_64 output bits and complex
// Gaussians from a Box-Muller transform on those, keeping the sample
// sequence independent of standard-library distribution internals.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "ia/types.hpp"

namespace ia {

// Stream tags for per-component seed derivation.
enum class SeedStream : std::uint64_t {
    Channel = 1,
    SolverInit = 2,
    Certify = 3,
    WmmseInit = 4,
    Bench = 5,
};

// splitmix64 finalizer; stateless mixing step.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Hash-chains the base seed with a path of indices (stream tag first).
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = mix64(base);
    for (std::uint64_t v : path) s = mix64(s ^ mix64(v + 0x632BE59BD9B4E019ULL));
    return s;
}

inline std::uint64_t derive_seed(std::uint64_t base, SeedStream tag,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
    return derive_seed(base, {static_cast<std::uint64_t>(tag), a, b});
}

// Uniform double in [0,1) from the top 53 bits of the engine output.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Circularly symmetric complex Gaussian CN(0,1): E|z|^2 = 1.
inline Complex complex_gaussian(std::mt19937_64& g) {
    double u1 = 1.0 - uniform01(g);  // (0,1]
    double u2 = uniform01(g);
    double r = std::sqrt(-std::log(u1));
    double th = 2.0 * M_PI * u2;
    return Complex(r * std::cos(th), r * std::sin(th));
}

// Matrix with i.i.d. CN(0,1) entries, drawn in column-major order.
inline CMatrix gaussian_matrix(int rows, int cols, std::mt19937_64& g) {
    CMatrix A(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) A(r, c) = complex_gaussian(g);
    return A;
}

// First `cols` columns of the Q factor of a random Gaussian matrix:
// a seeded random orthonormal frame.
inline CMatrix random_orthonormal(int rows, int cols, std::mt19937_64& g) {
    CMatrix A = gaussian_matrix(rows, cols, g);
    Eigen::HouseholderQR<CMatrix> qr(A);
    CMatrix Q = qr.householderQ() * CMatrix::Identity(rows, cols);
    return Q;
}

}  // namespace ia
