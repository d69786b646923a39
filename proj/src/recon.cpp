#include "qcs/recon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qcs/rng.hpp"

namespace qcs {

const char* to_string(Termination t) {
    return t == Termination::tolerance ? "tolerance" : "max_iters";
}

double default_step_size(std::size_t m, std::size_t k) {
    if (m == 0 || k == 0) {
        throw std::invalid_argument("default_step_size: dimensions must be positive");
    }
    if (2 * k >= m) {
        throw std::invalid_argument(
            "default_step_size: needs 2K < M; supply a step size explicitly");
    }
    const double md = static_cast<double>(m);
    const double kd = static_cast<double>(k);
    return (1.0 / md) * (1.0 - std::sqrt(2.0 * kd / md));
}

namespace {

void validate_config(const ReconConfig& cfg) {
    if (cfg.sparsity == 0) throw std::invalid_argument("recon: sparsity must be positive");
    if (!(cfg.step_size > 0.0)) throw std::invalid_argument("recon: step size must be positive");
    if (!(cfg.rel_tol > 0.0) || cfg.rel_tol >= 1.0) {
        throw std::invalid_argument("recon: rel_tol must lie in (0, 1)");
    }
    if (cfg.max_iters == 0) throw std::invalid_argument("recon: max_iters must be positive");
}

// Shared gradient-projection loop. `residual` maps the current projection
// Phi x to the correction applied before back-projection, `cost` scores the
// next projection.
template <typename ResidualFn, typename CostFn>
ReconResult run_thresholding(const SensingMatrix& phi, const std::vector<double>& y,
                             const ReconConfig& cfg, ResidualFn&& residual, CostFn&& cost) {
    const std::size_t n = phi.entries.cols;
    ReconResult res;
    res.cost_trace.reserve(std::min<std::size_t>(cfg.max_iters, 1024));

    std::vector<double> x(n, 0.0);
    std::vector<double> ax(y.size(), 0.0);  // Phi x, maintained across iterations
    std::vector<double> corr(n);
    std::vector<double> step(n);

    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        residual(ax, corr);  // corr = Phi^T (y - r(ax)), writes into corr
        for (std::size_t j = 0; j < n; ++j) step[j] = x[j] + cfg.step_size * corr[j];
        std::vector<double> xn = hard_threshold(step, cfg.sparsity);

        matvec(phi.entries, xn, ax);
        res.cost_trace.push_back(cost(ax));
        res.iterations = it + 1;

        double nd2 = 0.0;
        double nx2 = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = xn[j] - x[j];
            nd2 += d * d;
            nx2 += xn[j] * xn[j];
        }
        x = std::move(xn);
        const double nd = std::sqrt(nd2);
        const double nx = std::sqrt(nx2);
        if (nd == 0.0 || (nx > 0.0 && nd < cfg.rel_tol * nx)) {
            res.terminated_by = Termination::tolerance;
            res.estimate = std::move(x);
            return res;
        }
    }
    res.terminated_by = Termination::max_iters;
    res.estimate = std::move(x);
    return res;
}

}  // namespace

ReconResult iht(const SensingMatrix& phi, const std::vector<double>& y,
                const ReconConfig& cfg) {
    validate_config(cfg);
    if (y.size() != phi.entries.rows) {
        throw std::invalid_argument("iht: measurement length mismatch");
    }
    std::vector<double> diff(y.size());
    return run_thresholding(
        phi, y, cfg,
        [&](const std::vector<double>& ax, std::vector<double>& corr) {
            for (std::size_t i = 0; i < y.size(); ++i) diff[i] = y[i] - ax[i];
            tmatvec(phi.entries, diff, corr);
        },
        [&](const std::vector<double>& ax) {
            double c = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) {
                const double d = y[i] - ax[i];
                c += d * d;
            }
            return 0.5 * c;
        });
}

ReconResult qiht(const SensingMatrix& phi, const std::vector<double>& y,
                 const Quantizer& q, const ReconConfig& cfg) {
    validate_config(cfg);
    if (y.size() != phi.entries.rows) {
        throw std::invalid_argument("qiht: measurement length mismatch");
    }
    for (double v : y) {
        const auto it = std::lower_bound(q.levels.begin(), q.levels.end(), v);
        if (it == q.levels.end() || *it != v) {
            throw std::invalid_argument("qiht: y contains a value that is not a quantizer level");
        }
    }
    ConsistencyCost cost(q);
    std::vector<double> diff(y.size());
    return run_thresholding(
        phi, y, cfg,
        [&](const std::vector<double>& ax, std::vector<double>& corr) {
            for (std::size_t i = 0; i < y.size(); ++i) diff[i] = y[i] - quantize(q, ax[i]);
            tmatvec(phi.entries, diff, corr);
        },
        [&](const std::vector<double>& ax) { return cost.vector_cost(ax, y); });
}

std::vector<double> single_threshold_estimate(const SensingMatrix& phi,
                                              const std::vector<double>& y,
                                              const Quantizer& q, std::size_t k) {
    if (q.bits != 1) {
        throw std::invalid_argument("single_threshold_estimate: needs a 1-bit quantizer");
    }
    if (y.size() != phi.entries.rows) {
        throw std::invalid_argument("single_threshold_estimate: measurement length mismatch");
    }
    const double q0 = q.levels[1];
    const double scale = 1.0 / (q0 * q0 * static_cast<double>(phi.entries.rows));
    std::vector<double> est = hard_threshold(tmatvec(phi.entries, y), k);
    for (double& v : est) v *= scale;
    return est;
}

namespace {

// Squared spectral norm of A via power iteration on A^T A.
double spectral_norm_sq(const Matrix& a, int iters) {
    Rng rng(0x9e3779b97f4a7c15ull);
    std::vector<double> v(a.cols);
    for (double& x : v) x = rng.normal();
    std::vector<double> av(a.rows);
    std::vector<double> w(a.cols);
    double lam = 0.0;
    for (int it = 0; it < iters; ++it) {
        const double nv = norm2(v);
        for (double& x : v) x /= nv;
        matvec(a, v, av);
        lam = dot(av, av);
        tmatvec(a, av, w);
        std::swap(v, w);
    }
    return lam;
}

double soft(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

// FISTA with adaptive (function) restart on 0.5 ||Phi u - y||^2 + lam ||u||_1,
// warm-started from x. Terminates when the relative objective change drops
// below 1e-8. Returns the residual norm at the final iterate.
double fista(const Matrix& phi, const std::vector<double>& y, double lam, double lip,
             std::vector<double>& x, std::size_t max_inner, std::size_t& used) {
    const std::size_t m = phi.rows;
    const std::size_t n = phi.cols;
    const double inv_l = 1.0 / lip;
    const double thresh = lam * inv_l;

    std::vector<double> ax(m);
    matvec(phi, x, ax);
    std::vector<double> xprev = x;
    std::vector<double> axprev = ax;
    std::vector<double> z(n), az(m), grad(n), xn(n), axn(m);

    auto objective = [&](const std::vector<double>& a, const std::vector<double>& u) {
        double r2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = a[i] - y[i];
            r2 += d * d;
        }
        return 0.5 * r2 + lam * norm1(u);
    };

    double fprev = objective(ax, x);
    double tk = 1.0;
    double theta = 0.0;
    double resid = 0.0;

    for (std::size_t it = 0; it < max_inner; ++it) {
        ++used;
        for (std::size_t j = 0; j < n; ++j) z[j] = x[j] + theta * (x[j] - xprev[j]);
        for (std::size_t i = 0; i < m; ++i) az[i] = ax[i] + theta * (ax[i] - axprev[i]) - y[i];
        tmatvec(phi, az, grad);
        for (std::size_t j = 0; j < n; ++j) xn[j] = soft(z[j] - inv_l * grad[j], thresh);
        matvec(phi, xn, axn);

        double r2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = axn[i] - y[i];
            r2 += d * d;
        }
        const double f = 0.5 * r2 + lam * norm1(xn);

        const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
        if (f > fprev) {
            theta = 0.0;  // restart momentum
            tk = 1.0;
        } else {
            theta = (tk - 1.0) / tn;
            tk = tn;
        }
        xprev.swap(x);
        axprev.swap(ax);
        x = xn;
        ax = axn;
        resid = std::sqrt(r2);
        if (std::abs(f - fprev) < 1e-8 * std::max(f, 1e-30)) break;
        fprev = f;
    }
    return resid;
}

}  // namespace

BpdnResult bpdn_solve(const SensingMatrix& phi, const std::vector<double>& y,
                      double epsilon, double tol) {
    if (epsilon < 0.0) throw std::invalid_argument("bpdn: epsilon must be nonnegative");
    if (!(tol > 0.0)) throw std::invalid_argument("bpdn: tol must be positive");
    if (y.size() != phi.entries.rows) {
        throw std::invalid_argument("bpdn: measurement length mismatch");
    }

    const std::size_t n = phi.entries.cols;
    BpdnResult out;
    out.estimate.assign(n, 0.0);

    const double ynorm = norm2(y);
    if (epsilon >= ynorm) {
        // 0 is feasible and no vector has smaller l1 norm.
        out.residual = ynorm;
        return out;
    }

    const double lip = spectral_norm_sq(phi.entries, 100);
    std::vector<double> aty = tmatvec(phi.entries, y);
    double lam_hi = 0.0;
    for (double v : aty) lam_hi = std::max(lam_hi, std::abs(v));
    double lam_lo = 0.0;

    const double window = tol * std::max(epsilon, 1e-6);
    constexpr std::size_t kMaxOuter = 200;
    constexpr std::size_t kMaxInner = 50000;

    double resid = ynorm;
    for (std::size_t outer = 0; outer < kMaxOuter; ++outer) {
        const double lam = 0.5 * (lam_lo + lam_hi);
        resid = fista(phi.entries, y, lam, lip, out.estimate, kMaxInner, out.inner_iterations);
        ++out.outer_steps;
        out.penalty = lam;
        out.residual = resid;
        if (std::abs(resid - epsilon) <= window) return out;
        if (resid > epsilon) {
            lam_hi = lam;
        } else {
            lam_lo = lam;
        }
    }
    throw convergence_error("bpdn: bisection did not reach the target residual", resid);
}

std::vector<double> bpdn(const SensingMatrix& phi, const std::vector<double>& y,
                         double epsilon, double tol) {
    return bpdn_solve(phi, y, epsilon, tol).estimate;
}

}  // namespace qcs
