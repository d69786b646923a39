#include <doctest.h>

#include <omp.h>

#include <stdexcept>

#include "qcs/kernels.hpp"
#include "qcs/rng.hpp"

using namespace qcs;

namespace {

Matrix random_matrix(std::size_t m, std::size_t n, std::uint64_t seed) {
    Matrix a(m, n);
    Rng rng(seed);
    for (double& v : a.data) v = rng.normal();
    return a;
}

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
    std::vector<double> v(n);
    Rng rng(seed);
    for (double& x : v) x = rng.normal();
    return v;
}

}  // namespace

TEST_CASE("parallel matvec matches serial reference bitwise") {
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{3, 5},
                        {64, 128},
                        {257, 129},
                        {512, 1024}}) {
        const Matrix a = random_matrix(m, n, 11 * m + n);
        const std::vector<double> x = random_vec(n, 17 * n + m);
        std::vector<double> par, ser;
        matvec(a, x, par);
        matvec_serial(a, x, ser);
        REQUIRE(par.size() == m);
        for (std::size_t i = 0; i < m; ++i) CHECK(par[i] == ser[i]);
    }
}

TEST_CASE("parallel tmatvec matches serial reference bitwise") {
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{3, 5},
                        {64, 128},
                        {257, 129},
                        {512, 1024}}) {
        const Matrix a = random_matrix(m, n, 3 * m + 7 * n);
        const std::vector<double> x = random_vec(m, m + 23 * n);
        std::vector<double> par, ser;
        tmatvec(a, x, par);
        tmatvec_serial(a, x, ser);
        REQUIRE(par.size() == n);
        for (std::size_t j = 0; j < n; ++j) CHECK(par[j] == ser[j]);
    }
}

TEST_CASE("kernel output is independent of thread count") {
    const Matrix a = random_matrix(300, 700, 99);
    const std::vector<double> xr = random_vec(700, 5);
    const std::vector<double> xl = random_vec(300, 6);

    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const std::vector<double> f1 = matvec(a, xr);
    const std::vector<double> t1 = tmatvec(a, xl);
    omp_set_num_threads(saved > 1 ? saved : 2);
    const std::vector<double> f2 = matvec(a, xr);
    const std::vector<double> t2 = tmatvec(a, xl);
    omp_set_num_threads(saved);

    CHECK(f1 == f2);
    CHECK(t1 == t2);
}

TEST_CASE("dimension mismatches are rejected") {
    const Matrix a = random_matrix(4, 6, 1);
    std::vector<double> out;
    CHECK_THROWS_AS(matvec(a, random_vec(5, 2), out), std::invalid_argument);
    CHECK_THROWS_AS(tmatvec(a, random_vec(6, 2), out), std::invalid_argument);
    CHECK_THROWS_AS(dot(random_vec(3, 1), random_vec(4, 1)), std::invalid_argument);
}

TEST_CASE("reductions agree with direct formulas") {
    const std::vector<double> a{1.0, -2.0, 3.0};
    const std::vector<double> b{0.5, 4.0, -1.0};
    CHECK(dot(a, b) == doctest::Approx(0.5 - 8.0 - 3.0));
    CHECK(norm2(a) == doctest::Approx(std::sqrt(14.0)));
    CHECK(norm1(a) == doctest::Approx(6.0));
}
