#pragma once

#include <cstddef>
#include <vector>

namespace qcs {

// Dense row-major matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// Matrix-vector kernels. Each has an OpenMP entry point and a serial
// reference. Both accumulate every output element in the same (ascending)
// order, so results are bitwise identical for any thread count; the serial
// versions exist as the ground truth the parallel ones are tested against.

// out = A x, length rows.
void matvec(const Matrix& a, const std::vector<double>& x, std::vector<double>& out);
void matvec_serial(const Matrix& a, const std::vector<double>& x, std::vector<double>& out);
std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);

// out = A^T x, length cols.
void tmatvec(const Matrix& a, const std::vector<double>& x, std::vector<double>& out);
void tmatvec_serial(const Matrix& a, const std::vector<double>& x, std::vector<double>& out);
std::vector<double> tmatvec(const Matrix& a, const std::vector<double>& x);

// Serial reductions with a fixed summation order.
double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);
double norm1(const std::vector<double>& a);

}  // namespace qcs
