#pragma once

#include <vector>

#include "qcs/quantizer.hpp"
#include "qcs/signal.hpp"

namespace qcs {

// Quantization-consistency cost built on a b-bit quantizer.
//
// The scalar cost J(nu, lambda) accumulates w_j * |nu - tau_j| over the
// thresholds tau_j that separate the bins of nu and lambda, so it is zero
// exactly when both fall in the same bin, convex and piecewise linear in nu,
// and depends on lambda only through its bin. At one bit it reduces to the
// one-sided l1 sign-consistency cost; as bits grow it approaches the
// quadratic (nu - lambda)^2 / 2.
class ConsistencyCost {
public:
    explicit ConsistencyCost(Quantizer q) : q_(std::move(q)) {}

    const Quantizer& quantizer() const { return q_; }

    double scalar_cost(double nu, double lambda) const;

    // Sum of scalar costs over components; equal lengths required.
    double vector_cost(const std::vector<double>& u, const std::vector<double>& v) const;

    // E_b(u) = vector_cost(Phi u, y).
    double objective(const SensingMatrix& phi, const std::vector<double>& u,
                     const std::vector<double>& y) const;

    // Subgradient of the objective with respect to u: Phi^T (Q_b(Phi u) - y).
    // Zero exactly when the quantized projection reproduces y (away from
    // threshold boundaries).
    std::vector<double> subgradient(const SensingMatrix& phi, const std::vector<double>& u,
                                    const std::vector<double>& y) const;

private:
    Quantizer q_;
};

}  // namespace qcs
