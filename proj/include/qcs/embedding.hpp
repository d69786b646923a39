#pragma once

#include <cstdint>
#include <vector>

#include "qcs/signal.hpp"

namespace qcs {

// How the (u, v) pairs for the sign-product check are drawn. `mixed`
// alternates shared and independent supports; `identical` sets v = u, which
// makes the product an estimator of <u, u> = 1; `disjoint` forces
// non-overlapping supports so the expected product is 0.
enum class SpePairMode { mixed, shared_support, disjoint_support, identical };

const char* to_string(SpePairMode m);

// Deviation statistics of mu* <sign(Phi u), Phi v> from <u, v> over sampled
// unit K-sparse pairs, with mu* = 1 / (q0 M).
struct SpeReport {
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t num_pairs = 0;
    double max_deviation = 0.0;
    double mean_deviation = 0.0;
    double mean_product = 0.0;  // mean of mu* <sign(Phi u), Phi v>
    double mu_star = 0.0;
    SpePairMode pair_mode = SpePairMode::mixed;
};

SpeReport spe_deviation(const SensingMatrix& phi, std::size_t k, std::size_t num_pairs,
                        std::uint64_t seed, SpePairMode mode = SpePairMode::mixed);

// For pairs of unit K-sparse vectors whose 1-bit sign patterns disagree in at
// most r of M positions, the largest Euclidean distance observed. Pairs are
// built as small sparse perturbations of a common vector so that some survive
// the Hamming filter.
struct ConsistencyProximityReport {
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t r = 0;
    std::size_t num_trials = 0;
    std::size_t num_pairs = 0;  // pairs kept by the filter
    double max_distance_given_consistency = 0.0;
    double bound_factor = 0.0;  // (K + r) / K
    bool empty = true;          // no pair passed the filter
};

ConsistencyProximityReport consistency_proximity(std::uint64_t phi_seed, std::size_t m,
                                                 std::size_t n, std::size_t k, std::size_t r,
                                                 std::size_t num_trials);

// d_H(sign(Phi a), sign(Phi b)).
double pair_hamming(const SensingMatrix& phi, const std::vector<double>& a,
                    const std::vector<double>& b);

}  // namespace qcs
