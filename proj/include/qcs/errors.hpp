#pragma once

#include <stdexcept>
#include <string>

namespace qcs {

// Thrown when an iterative procedure exhausts its iteration budget before
// reaching its tolerance. Carries the last value of the quantity being
// driven down (distortion for quantizer design, residual for solvers).
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& msg, double last)
        : std::runtime_error(msg), last_value(last) {}

    double last_value;
};

}  // namespace qcs
