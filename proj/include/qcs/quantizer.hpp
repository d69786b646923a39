#pragma once

#include <vector>

#include "qcs/errors.hpp"

namespace qcs {

// Level magnitude of the optimal 1-bit quantizer for a unit-variance
// Gaussian source: E|g| = sqrt(2/pi).
double one_bit_level();

// Optimal b-bit scalar quantizer for the standard normal source.
//
// thresholds: 2^b + 1 sorted edges with -inf / +inf sentinels at the ends;
//             bin k (1-based) is the half-open cell [thresholds[k-1], thresholds[k]).
// levels:     2^b sorted reproduction values, one per bin.
// weights:    2^b - 1 gaps between consecutive levels (all positive).
//
// At the design fixed point every interior threshold is the midpoint of its
// neighboring levels and every level is the conditional mean of a standard
// normal restricted to its bin. Thresholds and levels are antisymmetric about
// zero by construction (the design runs on the positive half-line and mirrors).
struct Quantizer {
    int bits = 0;
    std::vector<double> thresholds;
    std::vector<double> levels;
    std::vector<double> weights;
};

// Lloyd fixed-point design, 1 <= bits <= 12. Alternates conditional-mean level
// updates (closed form through the normal pdf/cdf) with midpoint threshold
// updates until the largest level change drops below `tolerance`. bits == 1
// returns the closed form directly. Throws convergence_error (carrying the
// last distortion) if max_iters sweeps are not enough.
Quantizer design_lloyd_max(int bits, double tolerance = 1e-10, int max_iters = 10000);

// 1-based index k of the bin containing `value`. A value equal to an interior
// threshold lands in the upper bin. Rejects non-finite input.
int bin_index(const Quantizer& q, double value);

// The level of the bin containing `value`.
double quantize(const Quantizer& q, double value);

// Componentwise quantize.
std::vector<double> quantize_vector(const Quantizer& q, const std::vector<double>& z);

// E[(g - Q(g))^2] for g ~ N(0,1), evaluated in closed form per bin.
double expected_distortion(const Quantizer& q);

namespace detail {

// The iterative path behind design_lloyd_max, exposed so the 1-bit closed
// form can serve as a golden test of it. Optionally records the distortion
// after every sweep.
Quantizer design_lloyd_max_iterative(int bits, double tolerance, int max_iters,
                                     std::vector<double>* distortion_trace = nullptr);

}  // namespace detail

}  // namespace qcs
