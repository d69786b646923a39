#include "qcs/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcs {

double ConsistencyCost::scalar_cost(double nu, double lambda) const {
    const int knu = bin_index(q_, nu);  // validates finiteness
    const int kla = bin_index(q_, lambda);
    if (knu == kla) return 0.0;
    const int lo = std::min(knu, kla);
    const int hi = std::max(knu, kla);
    double s = 0.0;
    for (int j = lo + 1; j <= hi; ++j) {
        s += q_.weights[static_cast<std::size_t>(j) - 2] *
             std::abs(nu - q_.thresholds[static_cast<std::size_t>(j) - 1]);
    }
    return s;
}

double ConsistencyCost::vector_cost(const std::vector<double>& u,
                                    const std::vector<double>& v) const {
    if (u.size() != v.size()) {
        throw std::invalid_argument("vector_cost: length mismatch");
    }
    double s = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) s += scalar_cost(u[k], v[k]);
    return s;
}

double ConsistencyCost::objective(const SensingMatrix& phi, const std::vector<double>& u,
                                  const std::vector<double>& y) const {
    if (u.size() != phi.entries.cols || y.size() != phi.entries.rows) {
        throw std::invalid_argument("objective: dimension mismatch");
    }
    return vector_cost(matvec(phi.entries, u), y);
}

std::vector<double> ConsistencyCost::subgradient(const SensingMatrix& phi,
                                                 const std::vector<double>& u,
                                                 const std::vector<double>& y) const {
    if (u.size() != phi.entries.cols || y.size() != phi.entries.rows) {
        throw std::invalid_argument("subgradient: dimension mismatch");
    }
    std::vector<double> d = quantize_vector(q_, matvec(phi.entries, u));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= y[i];
    return tmatvec(phi.entries, d);
}

}  // namespace qcs
