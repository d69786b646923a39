#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qcs/quantizer.hpp"
#include "qcs/recon.hpp"
#include "qcs/signal.hpp"

namespace qcs {

enum class Method { iht, qiht, bpdn, ht };

const char* to_string(Method m);
Method method_from_string(const std::string& s);

// Sweep over quantizer resolutions b and bit budgets B = b * M, replaying the
// reconstruction methods on shared per-trial instances.
struct ExperimentGrid {
    std::size_t n = 1024;
    std::size_t k = 16;
    std::vector<int> bits_list = {1, 2, 3, 4, 5};
    std::vector<std::size_t> budgets = {64,  128, 192, 256,  320,  384,  448,
                                        512, 576, 640, 704,  768,  832,  896,
                                        960, 1024, 1088, 1152, 1216, 1280};
    std::size_t trials = 100;
    std::uint64_t master_seed = 1;
    std::vector<Method> methods = {Method::iht, Method::qiht, Method::bpdn};
};

enum class RowStatus {
    ok,
    skipped,         // 2K >= M, no default step size for this cell
    invalid_method,  // e.g. the 1-bit-only estimator asked to run at b >= 2
    error,           // the method threw; recorded, sweep continues
};

const char* to_string(RowStatus s);

struct ResultRow {
    Method method = Method::iht;
    int bits = 1;
    std::size_t m = 0;
    std::size_t budget = 0;
    std::size_t trial = 0;
    RowStatus status = RowStatus::ok;
    double snr = 0.0;  // dB; +inf marks exact angular recovery
    std::size_t iterations = 0;
    Termination terminated_by = Termination::tolerance;
};

struct AggregateRow {
    Method method = Method::iht;
    int bits = 1;
    std::size_t budget = 0;
    double mean_snr = 0.0;
    double std_snr = 0.0;
    std::size_t count = 0;
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::vector<AggregateRow> aggregates;
};

// Infinite SNRs (exact recoveries) enter the aggregate means at this cap.
inline constexpr double kSnrAggregateCap = 150.0;

// Per-cell seed: a SplitMix64 chain over (master, b, budget, trial). Method
// is deliberately absent so every method replays the same instance.
std::uint64_t cell_seed(std::uint64_t master, int bits, std::size_t budget, std::size_t trial);

// The shared instance of one (b, budget, trial) cell: signal, matrix,
// quantized measurements and the oracle noise level ||Phi x0 - y||.
struct CellInstance {
    SparseSignal x0;
    SensingMatrix phi;
    std::vector<double> y;
    double epsilon = 0.0;
};

CellInstance make_cell_instance(const ExperimentGrid& g, int bits, std::size_t budget,
                                std::size_t trial, const Quantizer& q);

// Runs one method on one cell. Returns a skipped row when 2K >= M; throws
// invalid_argument for impossible method/bits combinations.
ResultRow run_cell(const ExperimentGrid& g, Method method, int bits, std::size_t budget,
                   std::size_t trial);

// Full sweep. Cells run in parallel; the table is a pure function of the
// grid (rows in method-major enumeration order, errors recorded as flagged
// rows). Aggregates are appended per (method, b, budget).
ResultTable run_grid(const ExperimentGrid& g);

// CSV export: a row section, then an `# aggregates` section. Numbers carry 6
// significant digits; infinite SNRs serialize as `inf`.
void export_csv(const ResultTable& t, const std::string& path);
void write_csv(const ResultTable& t, std::ostream& os);

// Flat key-value sweep configuration (keys: n, k, bits, budgets, trials,
// seed, methods; lists comma-separated; '#' starts a comment).
ExperimentGrid parse_grid_config(std::istream& in);
ExperimentGrid load_grid_config(const std::string& path);

namespace detail {

struct CellTask {
    Method method;
    int bits;
    std::size_t budget;
    std::size_t trial;
    std::size_t m;
    bool skipped;  // 2K >= M or M == 0
};

// Deterministic enumeration behind run_grid, exposed for grid accounting.
std::vector<CellTask> grid_tasks(const ExperimentGrid& g);

}  // namespace detail

}  // namespace qcs
