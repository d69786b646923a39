#include "qcs/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <omp.h>

namespace qcs {

namespace {

// Below this many multiply-adds the parallel region costs more than it saves.
constexpr std::ptrdiff_t kParallelCutoff = 1 << 14;

void check_matvec(const Matrix& a, std::size_t xlen, const char* who, std::size_t want) {
    if (xlen != want) {
        throw std::invalid_argument(std::string(who) + ": vector length does not match matrix");
    }
    if (a.data.size() != a.rows * a.cols) {
        throw std::invalid_argument(std::string(who) + ": malformed matrix");
    }
}

}  // namespace

void matvec_serial(const Matrix& a, const std::vector<double>& x, std::vector<double>& out) {
    check_matvec(a, x.size(), "matvec", a.cols);
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(a.rows);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.cols);
    out.resize(a.rows);
    const double* ad = a.data.data();
    for (std::ptrdiff_t i = 0; i < m; ++i) {
        const double* row = ad + i * n;
        double s = 0.0;
        for (std::ptrdiff_t j = 0; j < n; ++j) s += row[j] * x[j];
        out[static_cast<std::size_t>(i)] = s;
    }
}

void matvec(const Matrix& a, const std::vector<double>& x, std::vector<double>& out) {
    check_matvec(a, x.size(), "matvec", a.cols);
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(a.rows);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.cols);
    out.resize(a.rows);
    const double* ad = a.data.data();
    const double* xd = x.data();
    double* od = out.data();
#pragma omp parallel for schedule(static) if (m * n > kParallelCutoff)
    for (std::ptrdiff_t i = 0; i < m; ++i) {
        const double* row = ad + i * n;
        double s = 0.0;
        for (std::ptrdiff_t j = 0; j < n; ++j) s += row[j] * xd[j];
        od[i] = s;
    }
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
    std::vector<double> out;
    matvec(a, x, out);
    return out;
}

void tmatvec_serial(const Matrix& a, const std::vector<double>& x, std::vector<double>& out) {
    check_matvec(a, x.size(), "tmatvec", a.rows);
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(a.rows);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.cols);
    out.assign(a.cols, 0.0);
    const double* ad = a.data.data();
    for (std::ptrdiff_t i = 0; i < m; ++i) {
        const double* row = ad + i * n;
        const double xi = x[static_cast<std::size_t>(i)];
        for (std::ptrdiff_t j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] += row[j] * xi;
    }
}

// Each thread owns a contiguous block of output columns and walks the rows in
// order, so per-element accumulation order matches the serial reference.
void tmatvec(const Matrix& a, const std::vector<double>& x, std::vector<double>& out) {
    check_matvec(a, x.size(), "tmatvec", a.rows);
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(a.rows);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.cols);
    out.assign(a.cols, 0.0);
    const double* ad = a.data.data();
    const double* xd = x.data();
    double* od = out.data();
#pragma omp parallel if (m * n > kParallelCutoff)
    {
        const std::ptrdiff_t nt = omp_get_num_threads();
        const std::ptrdiff_t tid = omp_get_thread_num();
        const std::ptrdiff_t j0 = n * tid / nt;
        const std::ptrdiff_t j1 = n * (tid + 1) / nt;
        for (std::ptrdiff_t i = 0; i < m; ++i) {
            const double* row = ad + i * n;
            const double xi = xd[i];
            for (std::ptrdiff_t j = j0; j < j1; ++j) od[j] += row[j] * xi;
        }
    }
}

std::vector<double> tmatvec(const Matrix& a, const std::vector<double>& x) {
    std::vector<double> out;
    tmatvec(a, x, out);
    return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

double norm1(const std::vector<double>& a) {
    double s = 0.0;
    for (double v : a) s += std::abs(v);
    return s;
}

}  // namespace qcs
