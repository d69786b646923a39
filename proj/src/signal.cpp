#include "qcs/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qcs/rng.hpp"

namespace qcs {

SparseSignal gen_sparse_signal(std::size_t ambient_dim, std::size_t sparsity,
                               std::uint64_t seed) {
    if (sparsity == 0 || sparsity > ambient_dim) {
        throw std::invalid_argument("gen_sparse_signal: need 1 <= sparsity <= ambient_dim");
    }
    Rng rng(seed);

    // Partial Fisher-Yates: the first `sparsity` entries are a uniform support.
    std::vector<std::size_t> idx(ambient_dim);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < sparsity; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(ambient_dim - i));
        std::swap(idx[i], idx[j]);
    }

    std::vector<double> coef(sparsity);
    double nrm = 0.0;
    do {
        for (std::size_t i = 0; i < sparsity; ++i) coef[i] = rng.normal();
        nrm = norm2(coef);
    } while (nrm == 0.0);

    SparseSignal s;
    s.ambient_dim = ambient_dim;
    s.sparsity = sparsity;
    s.values.assign(ambient_dim, 0.0);
    for (std::size_t i = 0; i < sparsity; ++i) s.values[idx[i]] = coef[i] / nrm;
    return s;
}

SensingMatrix gen_gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("gen_gaussian_matrix: dimensions must be positive");
    }
    SensingMatrix m;
    m.seed = seed;
    m.entries = Matrix(rows, cols);
    Rng rng(seed);
    for (double& v : m.entries.data) v = rng.normal();
    return m;
}

std::vector<double> hard_threshold(const std::vector<double>& u, std::size_t k) {
    if (k == 0) throw std::invalid_argument("hard_threshold: k must be positive");
    if (k >= u.size()) return u;

    std::vector<std::size_t> order(u.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k) - 1,
                     order.end(), [&u](std::size_t a, std::size_t b) {
                         const double ma = std::abs(u[a]);
                         const double mb = std::abs(u[b]);
                         if (ma != mb) return ma > mb;
                         return a < b;
                     });

    std::vector<double> out(u.size(), 0.0);
    for (std::size_t i = 0; i < k; ++i) out[order[i]] = u[order[i]];
    return out;
}

double snr_db(const SparseSignal& reference, const std::vector<double>& estimate) {
    if (estimate.size() != reference.values.size()) {
        throw std::invalid_argument("snr_db: dimension mismatch");
    }
    const double nrm = norm2(estimate);
    if (nrm == 0.0) {
        throw std::invalid_argument("snr_db: zero estimate, SNR undefined");
    }
    double d2 = 0.0;
    for (std::size_t i = 0; i < estimate.size(); ++i) {
        const double d = reference.values[i] - estimate[i] / nrm;
        d2 += d * d;
    }
    const double dist = std::sqrt(d2);
    if (dist == 0.0) return std::numeric_limits<double>::infinity();
    return -20.0 * std::log10(dist);
}

BitVector sign_vector(const std::vector<double>& v) {
    BitVector b;
    b.signs.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        b.signs[i] = v[i] > 0.0 ? std::int8_t{1} : std::int8_t{-1};
    }
    return b;
}

double hamming_distance(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("hamming_distance: length mismatch");
    }
    if (a.size() == 0) return 0.0;
    std::size_t diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) diff += a.signs[i] != b.signs[i];
    return static_cast<double>(diff) / static_cast<double>(a.size());
}

}  // namespace qcs
