#include "qcs/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qcs/gaussian.hpp"

namespace qcs {

double one_bit_level() { return std::sqrt(2.0 / std::numbers::pi); }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Integral of (g - q)^2 phi(g) over [a, b), with a = -inf / b = +inf allowed.
double bin_distortion(double a, double b, double q) {
    const double pa = std::isinf(a) ? 0.0 : normal_pdf(a);
    const double pb = std::isinf(b) ? 0.0 : normal_pdf(b);
    const double ca = a == -kInf ? 0.0 : normal_cdf(a);
    const double cb = b == kInf ? 1.0 : normal_cdf(b);
    const double apa = std::isinf(a) ? 0.0 : a * pa;
    const double bpb = std::isinf(b) ? 0.0 : b * pb;
    const double mass = cb - ca;
    return (1.0 + q * q) * mass - (bpb - apa) - 2.0 * q * (pa - pb);
}

Quantizer assemble_from_half(int bits, const std::vector<double>& edge,
                             const std::vector<double>& lev) {
    // edge[0] = 0 plus the interior positive edges; lev holds the positive levels.
    const int half = 1 << (bits - 1);
    Quantizer q;
    q.bits = bits;
    q.thresholds.reserve((std::size_t{1} << bits) + 1);
    q.thresholds.push_back(-kInf);
    for (int m = half - 1; m >= 1; --m) q.thresholds.push_back(-edge[static_cast<std::size_t>(m)]);
    q.thresholds.push_back(0.0);
    for (int m = 1; m < half; ++m) q.thresholds.push_back(edge[static_cast<std::size_t>(m)]);
    q.thresholds.push_back(kInf);

    q.levels.reserve(std::size_t{1} << bits);
    for (int m = half - 1; m >= 0; --m) q.levels.push_back(-lev[static_cast<std::size_t>(m)]);
    for (int m = 0; m < half; ++m) q.levels.push_back(lev[static_cast<std::size_t>(m)]);

    q.weights.resize(q.levels.size() - 1);
    for (std::size_t j = 0; j + 1 < q.levels.size(); ++j) {
        q.weights[j] = q.levels[j + 1] - q.levels[j];
    }
    return q;
}

}  // namespace

namespace {

// Upper tail mass P(g >= x), accurate to a few ulps everywhere.
double tail_mass(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

// Gaussian mass of [a, b]. A plain cdf difference loses most of its bits for
// narrow bins and for far-tail bins, so narrow bins go through composite
// Simpson around the midpoint and one-sided bins through tail differences.
double bin_mass(double a, double b) {
    if (std::isinf(b)) return tail_mass(a);
    const double w = b - a;
    if (w <= 0.25) {
        const int steps = 8;
        const double h = w / steps;
        double s = normal_pdf(a) + normal_pdf(b);
        for (int i = 1; i < steps; ++i) s += (i % 2 ? 4.0 : 2.0) * normal_pdf(a + h * i);
        return s * h / 3.0;
    }
    if (a >= 0.0) return tail_mass(a) - tail_mass(b);
    if (b <= 0.0) return tail_mass(-b) - tail_mass(-a);
    return normal_cdf(b) - normal_cdf(a);
}

// Conditional mean of a standard normal over [a, b), b possibly infinite.
// The pdf difference in the numerator is evaluated as
//   phi(a) - phi(b) = 2 phi(c) exp(-h^2/2) sinh(c h),  c = (a+b)/2, h = (b-a)/2,
// which stays fully accurate when the bin is narrow.
double bin_centroid(double a, double b) {
    double num;
    if (std::isinf(b)) {
        num = normal_pdf(a);
    } else {
        const double c = 0.5 * (a + b);
        const double h = 0.5 * (b - a);
        num = 2.0 * normal_pdf(c) * std::exp(-0.5 * h * h) * std::sinh(c * h);
    }
    return num / bin_mass(a, b);
}

struct HalfDesign {
    std::vector<double> edge;  // edge[0] = 0, interior edges; the top edge is +inf
    std::vector<double> lev;   // one level per bin, kept at the bin centroids

    void refresh_levels() {
        const std::size_t h = lev.size();
        for (std::size_t m = 0; m < h; ++m) {
            lev[m] = bin_centroid(edge[m], m + 1 == h ? kInf : edge[m + 1]);
        }
    }

    double distortion() const {
        const std::size_t h = lev.size();
        double d = 0.0;
        for (std::size_t m = 0; m < h; ++m) {
            d += bin_distortion(edge[m], m + 1 == h ? kInf : edge[m + 1], lev[m]);
        }
        return 2.0 * d;
    }
};

// d centroid / d a and / d b for a bin [a, b).
double dcentroid_da(double a, double b, double q) {
    return normal_pdf(a) * (q - a) / bin_mass(a, b);
}

double dcentroid_db(double a, double b, double q) {
    if (std::isinf(b)) return 0.0;
    return normal_pdf(b) * (b - q) / bin_mass(a, b);
}

// One Newton step on the midpoint residuals
//   F_m = 2 e_m - q_{m-1}(e) - q_m(e),  m = 1 .. h-1,
// whose Jacobian is tridiagonal. Returns the infinity norm of the applied
// step, or a negative value when no damped step keeps the edges ordered.
double newton_step(HalfDesign& d) {
    const std::size_t h = d.lev.size();
    if (h < 2) return 0.0;
    const std::size_t n = h - 1;  // unknown interior edges e_1 .. e_{h-1}

    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    for (std::size_t m = 1; m <= n; ++m) {
        const double a0 = d.edge[m - 1];
        const double b0 = d.edge[m];
        const double a1 = d.edge[m];
        const double b1 = m + 1 == h ? kInf : d.edge[m + 1];
        const double qlo = d.lev[m - 1];
        const double qhi = d.lev[m];

        rhs[m - 1] = -(2.0 * d.edge[m] - qlo - qhi);
        diag[m - 1] = 2.0 - dcentroid_db(a0, b0, qlo) - dcentroid_da(a1, b1, qhi);
        if (m >= 2) lower[m - 1] = -dcentroid_da(a0, b0, qlo);
        if (m + 1 <= n) upper[m - 1] = -dcentroid_db(a1, b1, qhi);
    }

    // Thomas solve
    for (std::size_t i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> step(n);
    step[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        step[i] = (rhs[i] - upper[i] * step[i + 1]) / diag[i];
    }

    for (double s = 1.0; s > 1e-6; s *= 0.5) {
        std::vector<double> cand = d.edge;
        double applied = 0.0;
        for (std::size_t m = 1; m <= n; ++m) {
            cand[m] += s * step[m - 1];
            applied = std::max(applied, std::abs(s * step[m - 1]));
        }
        bool ordered = cand[1] > 0.0;
        for (std::size_t m = 1; m < n && ordered; ++m) ordered = cand[m] < cand[m + 1];
        if (ordered) {
            d.edge = std::move(cand);
            return applied;
        }
    }
    return -1.0;
}

}  // namespace

namespace detail {

// Solves the midpoint/centroid fixed point in two phases. Newton sweeps with
// a tridiagonal Jacobian do the heavy lifting (the plain Lloyd map contracts
// its slowest tail mode at a rate of roughly 1 - 1/4^b, which is hopeless at
// high resolution). Once the Newton step stops shrinking it has hit the
// amplified-roundoff floor of the system, so the design switches to plain
// Lloyd sweeps; those polish off the remaining fast modes and keep the
// distortion non-increasing. Convergence is declared when no level moves by
// more than `tolerance` in one iteration.
Quantizer design_lloyd_max_iterative(int bits, double tolerance, int max_iters,
                                     std::vector<double>* distortion_trace) {
    const int half = 1 << (bits - 1);
    const double denom = static_cast<double>(2 * half);

    HalfDesign cur;
    cur.edge.resize(static_cast<std::size_t>(half));
    cur.edge[0] = 0.0;
    for (int m = 1; m < half; ++m) {
        cur.edge[static_cast<std::size_t>(m)] = normal_quantile((half + m) / denom);
    }
    cur.lev.resize(static_cast<std::size_t>(half));
    cur.refresh_levels();
    double dist = cur.distortion();

    if (distortion_trace) {
        distortion_trace->clear();
        distortion_trace->push_back(dist);
    }

    bool lloyd_phase = false;
    double prev_step = kInf;
    bool converged = false;
    for (int it = 0; it < max_iters && !converged; ++it) {
        HalfDesign next = cur;
        bool accepted = false;
        if (!lloyd_phase) {
            const double applied = newton_step(next);
            if (applied < 0.0 || applied > 0.5 * prev_step) {
                lloyd_phase = true;  // stalled or unusable step
            } else {
                next.refresh_levels();
                const double nd = next.distortion();
                if (nd <= dist + 1e-12 * std::max(1.0, dist)) {
                    dist = nd;
                    prev_step = std::max(applied, 1e-300);
                    accepted = true;
                } else {
                    lloyd_phase = true;
                }
            }
        }
        if (!accepted) {
            // Lloyd sweep: midpoint edges from the current levels, then
            // centroid levels; never increases the distortion.
            next = cur;
            for (int m = 1; m < half; ++m) {
                next.edge[static_cast<std::size_t>(m)] =
                    0.5 * (cur.lev[static_cast<std::size_t>(m - 1)] +
                           cur.lev[static_cast<std::size_t>(m)]);
            }
            next.refresh_levels();
            dist = next.distortion();
        }

        double delta = 0.0;
        for (std::size_t m = 0; m < cur.lev.size(); ++m) {
            delta = std::max(delta, std::abs(next.lev[m] - cur.lev[m]));
        }
        cur = std::move(next);
        if (distortion_trace) distortion_trace->push_back(dist);
        if (delta < tolerance) converged = true;
    }

    Quantizer q = assemble_from_half(bits, cur.edge, cur.lev);
    if (!converged) {
        throw convergence_error("design_lloyd_max: no convergence within max_iters",
                                expected_distortion(q));
    }
    return q;
}

}  // namespace detail

Quantizer design_lloyd_max(int bits, double tolerance, int max_iters) {
    if (bits < 1 || bits > 12) {
        throw std::invalid_argument("design_lloyd_max: bits must lie in [1, 12]");
    }
    if (!(tolerance > 0.0)) {
        throw std::invalid_argument("design_lloyd_max: tolerance must be positive");
    }
    if (max_iters < 1) {
        throw std::invalid_argument("design_lloyd_max: max_iters must be positive");
    }
    if (bits == 1) {
        const double q0 = one_bit_level();
        Quantizer q;
        q.bits = 1;
        q.thresholds = {-kInf, 0.0, kInf};
        q.levels = {-q0, q0};
        q.weights = {q0 + q0};
        return q;
    }
    return detail::design_lloyd_max_iterative(bits, tolerance, max_iters, nullptr);
}

int bin_index(const Quantizer& q, double value) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument("bin_index: value must be finite");
    }
    const auto it = std::upper_bound(q.thresholds.begin(), q.thresholds.end(), value);
    return static_cast<int>(it - q.thresholds.begin());
}

double quantize(const Quantizer& q, double value) {
    return q.levels[static_cast<std::size_t>(bin_index(q, value)) - 1];
}

std::vector<double> quantize_vector(const Quantizer& q, const std::vector<double>& z) {
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = quantize(q, z[i]);
    return out;
}

double expected_distortion(const Quantizer& q) {
    double d = 0.0;
    for (std::size_t k = 0; k < q.levels.size(); ++k) {
        d += bin_distortion(q.thresholds[k], q.thresholds[k + 1], q.levels[k]);
    }
    return d;
}

}  // namespace qcs
