// Command-line front end: quantizer design, single reconstructions, embedding
// checks and full SNR sweeps. Reports are JSON on stdout; sweeps write CSV.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcs/embedding.hpp"
#include "qcs/harness.hpp"
#include "qcs/quantizer.hpp"
#include "qcs/recon.hpp"
#include "qcs/rng.hpp"

using nlohmann::json;

namespace {

json finite_or_string(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    if (std::isnan(v)) return json("nan");
    return json(v);
}

int run_design_quantizer(int bits, double tol, int max_iters) {
    const qcs::Quantizer q = qcs::design_lloyd_max(bits, tol, max_iters);
    json out;
    out["bits"] = q.bits;
    json thresholds = json::array();
    for (double t : q.thresholds) thresholds.push_back(finite_or_string(t));
    out["thresholds"] = thresholds;
    out["levels"] = q.levels;
    out["weights"] = q.weights;
    out["distortion"] = qcs::expected_distortion(q);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_reconstruct(const std::string& method, int bits, std::size_t m, std::size_t n,
                    std::size_t k, std::uint64_t seed, double mu, double rel_tol,
                    std::size_t max_iters, double bpdn_tol) {
    const bool is_biht = method == "biht";
    if (is_biht && bits != 1) {
        throw std::invalid_argument("biht is the 1-bit case; use --bits 1");
    }
    if (method == "ht" && bits != 1) {
        throw std::invalid_argument("ht is defined for 1-bit measurements only");
    }

    const qcs::Quantizer q = qcs::design_lloyd_max(bits);
    const qcs::SparseSignal x0 = qcs::gen_sparse_signal(n, k, qcs::splitmix64(seed ^ 0x7369676eull));
    const qcs::SensingMatrix phi =
        qcs::gen_gaussian_matrix(m, n, qcs::splitmix64(seed ^ 0x6d617472ull));
    const std::vector<double> z = qcs::matvec(phi.entries, x0.values);
    const std::vector<double> y = qcs::quantize_vector(q, z);

    if (mu <= 0.0) mu = qcs::default_step_size(m, k);

    json out;
    out["method"] = method;
    out["bits"] = bits;
    out["m"] = m;
    out["n"] = n;
    out["k"] = k;
    out["seed"] = seed;

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> estimate;
    if (method == "iht") {
        const qcs::ReconResult r = qcs::iht(phi, y, {k, mu, rel_tol, max_iters});
        out["mu"] = mu;
        out["iterations"] = r.iterations;
        out["terminated_by"] = qcs::to_string(r.terminated_by);
        estimate = r.estimate;
    } else if (method == "qiht" || is_biht) {
        const qcs::ReconResult r = qcs::qiht(phi, y, q, {k, mu, rel_tol, max_iters});
        out["mu"] = mu;
        out["iterations"] = r.iterations;
        out["terminated_by"] = qcs::to_string(r.terminated_by);
        estimate = r.estimate;
    } else if (method == "bpdn") {
        double e2 = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) e2 += (z[i] - y[i]) * (z[i] - y[i]);
        const qcs::BpdnResult r = qcs::bpdn_solve(phi, y, std::sqrt(e2), bpdn_tol);
        out["epsilon"] = std::sqrt(e2);
        out["iterations"] = r.inner_iterations;
        out["terminated_by"] = "tolerance";
        estimate = r.estimate;
    } else if (method == "ht") {
        estimate = qcs::single_threshold_estimate(phi, y, q, k);
        out["iterations"] = 0;
        out["terminated_by"] = "tolerance";
    } else {
        throw std::invalid_argument("unknown method: " + method);
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    out["snr_db"] = finite_or_string(qcs::snr_db(x0, estimate));
    out["wall_time_s"] = wall;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_embed_check(const std::string& mode, std::size_t m, std::size_t n, std::size_t k,
                    std::size_t pairs, std::size_t r, std::size_t trials,
                    std::uint64_t seed, const std::string& pair_mode) {
    json out;
    if (mode == "spe") {
        qcs::SpePairMode pm = qcs::SpePairMode::mixed;
        if (pair_mode == "shared") pm = qcs::SpePairMode::shared_support;
        else if (pair_mode == "disjoint") pm = qcs::SpePairMode::disjoint_support;
        else if (pair_mode == "identical") pm = qcs::SpePairMode::identical;
        else if (pair_mode != "mixed") {
            throw std::invalid_argument("unknown pair mode: " + pair_mode);
        }
        const qcs::SensingMatrix phi =
            qcs::gen_gaussian_matrix(m, n, qcs::splitmix64(seed ^ 0x6d617472ull));
        const qcs::SpeReport rep = qcs::spe_deviation(phi, k, pairs, seed, pm);
        out["mode"] = "spe";
        out["m"] = rep.m;
        out["n"] = rep.n;
        out["k"] = rep.k;
        out["num_pairs"] = rep.num_pairs;
        out["pair_mode"] = qcs::to_string(rep.pair_mode);
        out["mu_star"] = rep.mu_star;
        out["max_deviation"] = rep.max_deviation;
        out["mean_deviation"] = rep.mean_deviation;
        out["mean_product"] = rep.mean_product;
    } else {
        const qcs::ConsistencyProximityReport rep =
            qcs::consistency_proximity(seed, m, n, k, r, trials);
        out["mode"] = "proximity";
        out["m"] = rep.m;
        out["n"] = rep.n;
        out["k"] = rep.k;
        out["r"] = rep.r;
        out["num_trials"] = rep.num_trials;
        out["num_pairs_kept"] = rep.num_pairs;
        out["max_distance_given_consistency"] = rep.max_distance_given_consistency;
        out["bound_factor"] = rep.bound_factor;
        out["empty"] = rep.empty;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_sweep(const std::string& config_path, const std::string& out_path, bool quiet) {
    const qcs::ExperimentGrid grid = qcs::load_grid_config(config_path);
    if (!quiet) {
        std::cerr << "sweep: " << grid.methods.size() << " methods, "
                  << grid.bits_list.size() << " bit depths, " << grid.budgets.size()
                  << " budgets, " << grid.trials << " trials\n";
    }
    const auto t0 = std::chrono::steady_clock::now();
    const qcs::ResultTable table = qcs::run_grid(grid);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    qcs::export_csv(table, out_path);
    if (!quiet) {
        std::cerr << "sweep: " << table.rows.size() << " rows in " << wall << " s -> "
                  << out_path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse recovery from scalar-quantized compressive measurements"};
    app.require_subcommand(1);

    auto* design = app.add_subcommand("design-quantizer",
                                      "print an optimal Gaussian quantizer as JSON");
    int bits = 1;
    double tol = 1e-10;
    int max_design_iters = 10000;
    design->add_option("--bits,-b", bits, "bits per measurement")->required();
    design->add_option("--tol", tol, "level-change tolerance");
    design->add_option("--max-iters", max_design_iters, "design iteration cap");

    auto* rec = app.add_subcommand("reconstruct",
                                   "run one seeded reconstruction and report JSON");
    std::string method = "qiht";
    int rbits = 1;
    std::size_t m = 512, n = 1024, k = 16, max_iters = 1000;
    std::uint64_t seed = 1;
    double mu = 0.0, rel_tol = 1e-4, bpdn_tol = 1e-3;
    rec->add_option("--method", method, "iht|qiht|biht|bpdn|ht")->required();
    rec->add_option("--bits,-b", rbits, "bits per measurement");
    rec->add_option("--m,-m", m, "measurements")->required();
    rec->add_option("--n,-n", n, "ambient dimension")->required();
    rec->add_option("--k,-k", k, "sparsity")->required();
    rec->add_option("--seed,-s", seed, "instance seed");
    rec->add_option("--mu", mu, "step size (default (1/M)(1-sqrt(2K/M)))");
    rec->add_option("--rel-tol", rel_tol, "relative stopping tolerance");
    rec->add_option("--max-iters", max_iters, "iteration cap");
    rec->add_option("--bpdn-tol", bpdn_tol, "bpdn residual window");

    auto* embed = app.add_subcommand("embed-check", "empirical embedding reports");
    std::string mode = "spe";
    std::size_t em = 2048, en = 256, ek = 8, pairs = 1000, er = 0, trials = 1000;
    std::uint64_t eseed = 1;
    std::string pair_mode = "mixed";
    embed->add_option("--mode", mode, "spe|proximity")->required();
    embed->add_option("--m,-m", em, "measurements");
    embed->add_option("--n,-n", en, "ambient dimension");
    embed->add_option("--k,-k", ek, "sparsity");
    embed->add_option("--pairs", pairs, "pairs to sample (spe)");
    embed->add_option("--pair-mode", pair_mode, "mixed|shared|disjoint|identical (spe)");
    embed->add_option("--r", er, "allowed sign disagreements (proximity)");
    embed->add_option("--trials", trials, "trial pairs (proximity)");
    embed->add_option("--seed,-s", eseed, "seed");

    auto* sweep = app.add_subcommand("sweep", "run a configured SNR sweep to CSV");
    std::string config_path, out_path = "results.csv";
    bool quiet = false;
    sweep->add_option("--config", config_path, "flat key-value config file")->required();
    sweep->add_option("--out", out_path, "output CSV path");
    sweep->add_flag("--quiet", quiet, "suppress progress output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (design->parsed()) return run_design_quantizer(bits, tol, max_design_iters);
        if (rec->parsed()) {
            return run_reconstruct(method, rbits, m, n, k, seed, mu, rel_tol, max_iters,
                                   bpdn_tol);
        }
        if (embed->parsed()) {
            if (mode != "spe" && mode != "proximity") {
                throw std::invalid_argument("mode must be spe or proximity");
            }
            return run_embed_check(mode, em, en, ek, pairs, er, trials, eseed, pair_mode);
        }
        if (sweep->parsed()) return run_sweep(config_path, out_path, quiet);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
