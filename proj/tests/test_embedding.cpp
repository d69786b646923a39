#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qcs/embedding.hpp"
#include "qcs/quantizer.hpp"

using namespace qcs;

TEST_CASE("mu_star is the reciprocal of q0 M") {
    const SensingMatrix phi = gen_gaussian_matrix(64, 32, 1);
    const SpeReport r = spe_deviation(phi, 4, 10, 2);
    CHECK(std::abs(r.mu_star * one_bit_level() * 64.0 - 1.0) <= 1e-15);
    CHECK(r.m == 64);
    CHECK(r.n == 32);
    CHECK(r.num_pairs == 10);
    CHECK(r.mean_deviation <= r.max_deviation);
}

TEST_CASE("spe reports are deterministic in matrix and seed") {
    const SensingMatrix phi = gen_gaussian_matrix(128, 64, 3);
    const SpeReport a = spe_deviation(phi, 4, 50, 7);
    const SpeReport b = spe_deviation(phi, 4, 50, 7);
    CHECK(a.max_deviation == b.max_deviation);
    CHECK(a.mean_deviation == b.mean_deviation);
    CHECK(a.mean_product == b.mean_product);
}

TEST_CASE("identical pairs estimate the unit self product") {
    // one long matrix acts as many fresh rows; expectation of
    // mu* <sign(Phi u), Phi u> is exactly 1
    const SensingMatrix phi = gen_gaussian_matrix(10000, 64, 5);
    const SpeReport r = spe_deviation(phi, 4, 20, 9, SpePairMode::identical);
    CHECK(r.mean_product == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("disjoint-support pairs have vanishing mean product") {
    const std::size_t m = 512, pairs = 200;
    const SensingMatrix phi = gen_gaussian_matrix(m, 128, 11);
    const SpeReport r = spe_deviation(phi, 4, pairs, 13, SpePairMode::disjoint_support);
    CHECK(std::abs(r.mean_product) <=
          4.0 / std::sqrt(static_cast<double>(m) * static_cast<double>(pairs)));
}

TEST_CASE("spe deviation shrinks as measurements grow") {
    double prev = 1e9;
    for (std::size_t m : {256, 1024, 4096}) {
        const SensingMatrix phi = gen_gaussian_matrix(m, 1024, 17);
        const SpeReport r = spe_deviation(phi, 8, 1000, 19);
        CHECK(r.max_deviation < prev);
        prev = r.max_deviation;
    }
}

TEST_CASE("spe rejects bad arguments") {
    const SensingMatrix phi = gen_gaussian_matrix(16, 8, 1);
    CHECK_THROWS_AS(spe_deviation(phi, 0, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(spe_deviation(phi, 9, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(spe_deviation(phi, 4, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(spe_deviation(phi, 5, 10, 1, SpePairMode::disjoint_support),
                    std::invalid_argument);
}

TEST_CASE("identical vectors are consistent at distance zero") {
    const SensingMatrix phi = gen_gaussian_matrix(64, 32, 23);
    const SparseSignal a = gen_sparse_signal(32, 4, 29);
    CHECK(pair_hamming(phi, a.values, a.values) == 0.0);
}

TEST_CASE("relaxing the hamming filter can only grow the kept set") {
    const std::uint64_t phi_seed = 31;
    const ConsistencyProximityReport strict =
        consistency_proximity(phi_seed, 256, 128, 4, 0, 400);
    const ConsistencyProximityReport loose =
        consistency_proximity(phi_seed, 256, 128, 4, 8, 400);
    CHECK(loose.num_pairs >= strict.num_pairs);
    CHECK(loose.max_distance_given_consistency >= strict.max_distance_given_consistency);
    CHECK(strict.bound_factor == doctest::Approx(1.0));
    CHECK(loose.bound_factor == doctest::Approx(3.0));
}

TEST_CASE("proximity reports are deterministic and well formed") {
    const ConsistencyProximityReport a = consistency_proximity(37, 128, 64, 4, 2, 200);
    const ConsistencyProximityReport b = consistency_proximity(37, 128, 64, 4, 2, 200);
    CHECK(a.num_pairs == b.num_pairs);
    CHECK(a.max_distance_given_consistency == b.max_distance_given_consistency);
    CHECK(a.max_distance_given_consistency >= 0.0);
    CHECK(a.max_distance_given_consistency <= 2.0);
    CHECK(a.num_trials == 200);
}

TEST_CASE("an empty kept set is flagged, not poisoned") {
    // with r = 0 and only far pairs surviving construction, a tiny trial
    // budget at large M keeps nothing
    const ConsistencyProximityReport r = consistency_proximity(41, 4096, 64, 4, 0, 3);
    if (r.num_pairs == 0) {
        CHECK(r.empty);
        CHECK(r.max_distance_given_consistency == 0.0);
    } else {
        CHECK_FALSE(r.empty);
    }
}

TEST_CASE("proximity rejects r beyond half the measurements") {
    CHECK_THROWS_AS(consistency_proximity(1, 16, 8, 2, 9, 10), std::invalid_argument);
    CHECK_THROWS_AS(consistency_proximity(1, 16, 8, 0, 2, 10), std::invalid_argument);
    CHECK_THROWS_AS(consistency_proximity(1, 16, 8, 2, 2, 0), std::invalid_argument);
}
