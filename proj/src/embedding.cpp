#include "qcs/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qcs/quantizer.hpp"
#include "qcs/rng.hpp"

namespace qcs {

const char* to_string(SpePairMode m) {
    switch (m) {
        case SpePairMode::mixed: return "mixed";
        case SpePairMode::shared_support: return "shared";
        case SpePairMode::disjoint_support: return "disjoint";
        case SpePairMode::identical: return "identical";
    }
    return "?";
}

namespace {

// Uniform support of size k over [0, n) excluding `avoid` (pass empty to
// allow everything), then unit sphere values on it.
std::vector<double> unit_sparse(Rng& rng, std::size_t n, std::size_t k,
                                const std::vector<std::size_t>& avoid,
                                std::vector<std::size_t>* support_out) {
    std::vector<std::size_t> pool;
    if (avoid.empty()) {
        pool.resize(n);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
    } else {
        std::vector<char> banned(n, 0);
        for (std::size_t i : avoid) banned[i] = 1;
        pool.reserve(n - avoid.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (!banned[i]) pool.push_back(i);
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    std::vector<std::size_t> support(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));

    std::vector<double> coef(k);
    double nrm = 0.0;
    do {
        for (double& c : coef) c = rng.normal();
        nrm = norm2(coef);
    } while (nrm == 0.0);

    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < k; ++i) v[support[i]] = coef[i] / nrm;
    if (support_out) *support_out = std::move(support);
    return v;
}

std::vector<double> unit_sparse_on(Rng& rng, std::size_t n,
                                   const std::vector<std::size_t>& support) {
    std::vector<double> coef(support.size());
    double nrm = 0.0;
    do {
        for (double& c : coef) c = rng.normal();
        nrm = norm2(coef);
    } while (nrm == 0.0);
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < support.size(); ++i) v[support[i]] = coef[i] / nrm;
    return v;
}

double signed_product(const SensingMatrix& phi, const std::vector<double>& u,
                      const std::vector<double>& v) {
    const BitVector su = sign_vector(matvec(phi.entries, u));
    const std::vector<double> av = matvec(phi.entries, v);
    double s = 0.0;
    for (std::size_t i = 0; i < av.size(); ++i) {
        s += su.signs[i] > 0 ? av[i] : -av[i];
    }
    return s;
}

}  // namespace

SpeReport spe_deviation(const SensingMatrix& phi, std::size_t k, std::size_t num_pairs,
                        std::uint64_t seed, SpePairMode mode) {
    const std::size_t n = phi.entries.cols;
    if (k == 0 || k > n) throw std::invalid_argument("spe_deviation: need 1 <= k <= n");
    if (num_pairs == 0) throw std::invalid_argument("spe_deviation: need at least one pair");
    if (mode == SpePairMode::disjoint_support && 2 * k > n) {
        throw std::invalid_argument("spe_deviation: disjoint supports need 2k <= n");
    }

    const double mu_star = 1.0 / (one_bit_level() * static_cast<double>(phi.entries.rows));

    std::vector<double> deviation(num_pairs);
    std::vector<double> product(num_pairs);

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(num_pairs); ++p) {
        Rng rng(splitmix64(seed ^ (0x5350455000000000ull + static_cast<std::uint64_t>(p))));
        std::vector<std::size_t> support;
        const std::vector<double> u = unit_sparse(rng, n, k, {}, &support);

        const bool share = mode == SpePairMode::shared_support ||
                           (mode == SpePairMode::mixed && p % 2 == 0);
        std::vector<double> v;
        if (mode == SpePairMode::identical) {
            v = u;
        } else if (share) {
            v = unit_sparse_on(rng, n, support);
        } else if (mode == SpePairMode::disjoint_support) {
            v = unit_sparse(rng, n, k, support, nullptr);
        } else {
            v = unit_sparse(rng, n, k, {}, nullptr);
        }

        const double prod = mu_star * signed_product(phi, u, v);
        product[static_cast<std::size_t>(p)] = prod;
        deviation[static_cast<std::size_t>(p)] = std::abs(prod - dot(u, v));
    }

    SpeReport rep;
    rep.m = phi.entries.rows;
    rep.n = n;
    rep.k = k;
    rep.num_pairs = num_pairs;
    rep.mu_star = mu_star;
    rep.pair_mode = mode;
    for (std::size_t p = 0; p < num_pairs; ++p) {
        rep.max_deviation = std::max(rep.max_deviation, deviation[p]);
        rep.mean_deviation += deviation[p];
        rep.mean_product += product[p];
    }
    rep.mean_deviation /= static_cast<double>(num_pairs);
    rep.mean_product /= static_cast<double>(num_pairs);
    return rep;
}

ConsistencyProximityReport consistency_proximity(std::uint64_t phi_seed, std::size_t m,
                                                 std::size_t n, std::size_t k, std::size_t r,
                                                 std::size_t num_trials) {
    if (k == 0 || k > n) throw std::invalid_argument("consistency_proximity: need 1 <= k <= n");
    if (2 * r > m) throw std::invalid_argument("consistency_proximity: needs r <= M/2");
    if (num_trials == 0) throw std::invalid_argument("consistency_proximity: need trials >= 1");

    const SensingMatrix phi = gen_gaussian_matrix(m, n, phi_seed);
    static constexpr double kSigma[] = {0.01, 0.05, 0.1, 0.3};

    std::vector<char> kept(num_trials, 0);
    std::vector<double> dist(num_trials, 0.0);

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(num_trials); ++t) {
        // Pair stream independent of M so sweeps over M see the same pairs.
        Rng rng(splitmix64(phi_seed ^ (0x50524f5800000000ull + static_cast<std::uint64_t>(t))));
        std::vector<std::size_t> support;
        const std::vector<double> a = unit_sparse(rng, n, k, {}, &support);
        const std::vector<double> dir = unit_sparse_on(rng, n, support);
        const double sigma = kSigma[static_cast<std::size_t>(t) % 4];

        std::vector<double> b(n);
        for (std::size_t j = 0; j < n; ++j) b[j] = a[j] + sigma * dir[j];
        const double nb = norm2(b);
        for (double& v : b) v /= nb;

        const BitVector sa = sign_vector(matvec(phi.entries, a));
        const BitVector sb = sign_vector(matvec(phi.entries, b));
        std::size_t flips = 0;
        for (std::size_t i = 0; i < m; ++i) flips += sa.signs[i] != sb.signs[i];
        if (flips <= r) {
            kept[static_cast<std::size_t>(t)] = 1;
            double d2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double d = a[j] - b[j];
                d2 += d * d;
            }
            dist[static_cast<std::size_t>(t)] = std::sqrt(d2);
        }
    }

    ConsistencyProximityReport rep;
    rep.m = m;
    rep.n = n;
    rep.k = k;
    rep.r = r;
    rep.num_trials = num_trials;
    rep.bound_factor = static_cast<double>(k + r) / static_cast<double>(k);
    for (std::size_t t = 0; t < num_trials; ++t) {
        if (kept[t]) {
            ++rep.num_pairs;
            rep.max_distance_given_consistency =
                std::max(rep.max_distance_given_consistency, dist[t]);
        }
    }
    rep.empty = rep.num_pairs == 0;
    return rep;
}

double pair_hamming(const SensingMatrix& phi, const std::vector<double>& a,
                    const std::vector<double>& b) {
    return hamming_distance(sign_vector(matvec(phi.entries, a)),
                            sign_vector(matvec(phi.entries, b)));
}

}  // namespace qcs
