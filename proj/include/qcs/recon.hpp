#pragma once

#include <cstddef>
#include <vector>

#include "qcs/consistency.hpp"
#include "qcs/quantizer.hpp"
#include "qcs/signal.hpp"

namespace qcs {

enum class Termination { tolerance, max_iters };

const char* to_string(Termination t);

struct ReconConfig {
    std::size_t sparsity = 0;
    double step_size = 0.0;
    double rel_tol = 1e-4;
    std::size_t max_iters = 1000;
};

struct ReconResult {
    std::vector<double> estimate;
    std::size_t iterations = 0;
    Termination terminated_by = Termination::max_iters;
    std::vector<double> cost_trace;  // objective at each produced iterate
};

// mu = (1/M) (1 - sqrt(2K/M)); requires 2K < M, otherwise the formula is
// nonpositive and the caller has to pick a step size explicitly.
double default_step_size(std::size_t m, std::size_t k);

// Iterative hard thresholding for y ~ Phi x:
//   x <- H_K[ x + mu Phi^T (y - Phi x) ],  x(0) = 0.
// Stops when ||x(n+1) - x(n)|| / ||x(n+1)|| < rel_tol (a 0/0 step counts as
// converged) or after max_iters updates. cost_trace holds 0.5 ||y - Phi x||^2.
ReconResult iht(const SensingMatrix& phi, const std::vector<double>& y,
                const ReconConfig& cfg);

// Quantized IHT: the residual is taken against the re-quantized projection,
//   x <- H_K[ x + mu Phi^T (y - Q_b(Phi x)) ],  x(0) = 0,
// which descends the quantization-consistency objective recorded in
// cost_trace. y must be a vector of quantizer levels. At one bit this is
// exactly the binary IHT recursion.
ReconResult qiht(const SensingMatrix& phi, const std::vector<double>& y,
                 const Quantizer& q, const ReconConfig& cfg);

// One-shot 1-bit estimator: (1 / (q0^2 M)) H_K(Phi^T y). Requires a 1-bit
// quantizer.
std::vector<double> single_threshold_estimate(const SensingMatrix& phi,
                                              const std::vector<double>& y,
                                              const Quantizer& q, std::size_t k);

// Basis pursuit denoise: min ||u||_1 subject to ||Phi u - y|| <= epsilon.
// Solved as a LASSO path: FISTA (fixed step 1/L, L from 100 power iterations,
// adaptive restart) warm-started across an outer bisection on the l1 penalty
// that drives the residual into |r - epsilon| <= tol * max(epsilon, 1e-6).
struct BpdnResult {
    std::vector<double> estimate;
    std::size_t inner_iterations = 0;
    std::size_t outer_steps = 0;
    double residual = 0.0;
    double penalty = 0.0;  // final l1 weight
};

BpdnResult bpdn_solve(const SensingMatrix& phi, const std::vector<double>& y,
                      double epsilon, double tol = 1e-3);

std::vector<double> bpdn(const SensingMatrix& phi, const std::vector<double>& y,
                         double epsilon, double tol = 1e-3);

}  // namespace qcs
