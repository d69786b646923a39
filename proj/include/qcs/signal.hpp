#pragma once

#include <cstdint>
#include <vector>

#include "qcs/kernels.hpp"

namespace qcs {

// Unit-norm K-sparse vector in R^N.
struct SparseSignal {
    std::vector<double> values;
    std::size_t ambient_dim = 0;
    std::size_t sparsity = 0;
};

// M x N matrix with i.i.d. standard normal entries.
struct SensingMatrix {
    Matrix entries;
    std::uint64_t seed = 0;
};

// Sign pattern in {-1,+1}^M.
struct BitVector {
    std::vector<std::int8_t> signs;
    std::size_t size() const { return signs.size(); }
};

// Support of size exactly K drawn uniformly (Fisher-Yates partial shuffle),
// nonzero part uniform on the unit sphere of R^K.
SparseSignal gen_sparse_signal(std::size_t ambient_dim, std::size_t sparsity,
                               std::uint64_t seed);

SensingMatrix gen_gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

// Best K-term approximation: keeps the K largest-magnitude entries unchanged
// and zeroes the rest. Ties keep the lower index. k >= length is the identity.
std::vector<double> hard_threshold(const std::vector<double>& u, std::size_t k);

// Angular reconstruction quality -20 log10 || x0 - x / ||x|| || in dB.
// Exact angular recovery returns +infinity; a zero estimate throws because
// its SNR is undefined.
double snr_db(const SparseSignal& reference, const std::vector<double>& estimate);

// Componentwise sign with sign(0) = -1.
BitVector sign_vector(const std::vector<double>& v);

// Fraction of disagreeing positions, in [0, 1].
double hamming_distance(const BitVector& a, const BitVector& b);

}  // namespace qcs
