#include "qcs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qcs/rng.hpp"

namespace qcs {

const char* to_string(Method m) {
    switch (m) {
        case Method::iht: return "iht";
        case Method::qiht: return "qiht";
        case Method::bpdn: return "bpdn";
        case Method::ht: return "ht";
    }
    return "?";
}

Method method_from_string(const std::string& s) {
    if (s == "iht") return Method::iht;
    if (s == "qiht") return Method::qiht;
    if (s == "bpdn") return Method::bpdn;
    if (s == "ht") return Method::ht;
    throw std::invalid_argument("unknown method: " + s);
}

const char* to_string(RowStatus s) {
    switch (s) {
        case RowStatus::ok: return "ok";
        case RowStatus::skipped: return "skipped";
        case RowStatus::invalid_method: return "invalid_method";
        case RowStatus::error: return "error";
    }
    return "?";
}

std::uint64_t cell_seed(std::uint64_t master, int bits, std::size_t budget,
                        std::size_t trial) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ static_cast<std::uint64_t>(bits));
    h = splitmix64(h ^ static_cast<std::uint64_t>(budget));
    h = splitmix64(h ^ static_cast<std::uint64_t>(trial));
    return h;
}

CellInstance make_cell_instance(const ExperimentGrid& g, int bits, std::size_t budget,
                                std::size_t trial, const Quantizer& q) {
    const std::size_t m = budget / static_cast<std::size_t>(bits);
    if (m == 0) throw std::invalid_argument("make_cell_instance: budget below one measurement");
    const std::uint64_t seed = cell_seed(g.master_seed, bits, budget, trial);

    CellInstance cell;
    cell.x0 = gen_sparse_signal(g.n, g.k, splitmix64(seed ^ 0x7369676eull));
    cell.phi = gen_gaussian_matrix(m, g.n, splitmix64(seed ^ 0x6d617472ull));
    const std::vector<double> z = matvec(cell.phi.entries, cell.x0.values);
    cell.y = quantize_vector(q, z);
    double e2 = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double d = z[i] - cell.y[i];
        e2 += d * d;
    }
    cell.epsilon = std::sqrt(e2);
    return cell;
}

namespace {

void validate_grid(const ExperimentGrid& g) {
    if (g.k == 0 || g.k > g.n) throw std::invalid_argument("grid: need 1 <= k <= n");
    if (g.trials == 0) throw std::invalid_argument("grid: trials must be positive");
    if (g.bits_list.empty()) throw std::invalid_argument("grid: bits list is empty");
    for (int b : g.bits_list) {
        if (b < 1 || b > 12) throw std::invalid_argument("grid: bits must lie in [1, 12]");
    }
    if (g.budgets.empty()) throw std::invalid_argument("grid: budget list is empty");
    for (std::size_t b : g.budgets) {
        if (b == 0) throw std::invalid_argument("grid: budgets must be positive");
    }
    if (g.methods.empty()) throw std::invalid_argument("grid: no methods selected");
}

ResultRow run_cell_impl(const ExperimentGrid& g, Method method, int bits, std::size_t budget,
                        std::size_t trial, const Quantizer& q) {
    ResultRow row;
    row.method = method;
    row.bits = bits;
    row.budget = budget;
    row.trial = trial;
    row.m = budget / static_cast<std::size_t>(bits);

    if (row.m == 0 || 2 * g.k >= row.m) {
        row.status = RowStatus::skipped;
        return row;
    }
    if (method == Method::ht && bits != 1) {
        throw std::invalid_argument("run_cell: the single-thresholding estimator is 1-bit only");
    }

    const CellInstance cell = make_cell_instance(g, bits, budget, trial, q);

    std::vector<double> estimate;
    switch (method) {
        case Method::iht: {
            ReconConfig cfg{g.k, default_step_size(row.m, g.k), 1e-4, 1000};
            ReconResult r = iht(cell.phi, cell.y, cfg);
            row.iterations = r.iterations;
            row.terminated_by = r.terminated_by;
            estimate = std::move(r.estimate);
            break;
        }
        case Method::qiht: {
            ReconConfig cfg{g.k, default_step_size(row.m, g.k), 1e-4, 1000};
            ReconResult r = qiht(cell.phi, cell.y, q, cfg);
            row.iterations = r.iterations;
            row.terminated_by = r.terminated_by;
            estimate = std::move(r.estimate);
            break;
        }
        case Method::bpdn: {
            BpdnResult r = bpdn_solve(cell.phi, cell.y, cell.epsilon);
            row.iterations = r.inner_iterations;
            row.terminated_by = Termination::tolerance;
            estimate = std::move(r.estimate);
            break;
        }
        case Method::ht: {
            estimate = single_threshold_estimate(cell.phi, cell.y, q, g.k);
            row.iterations = 0;
            row.terminated_by = Termination::tolerance;
            break;
        }
    }

    row.snr = snr_db(cell.x0, estimate);
    row.status = RowStatus::ok;
    return row;
}

}  // namespace

ResultRow run_cell(const ExperimentGrid& g, Method method, int bits, std::size_t budget,
                   std::size_t trial) {
    validate_grid(g);
    if (bits < 1 || bits > 12) throw std::invalid_argument("run_cell: bits must lie in [1, 12]");
    const Quantizer q = design_lloyd_max(bits);
    return run_cell_impl(g, method, bits, budget, trial, q);
}

namespace detail {

std::vector<CellTask> grid_tasks(const ExperimentGrid& g) {
    std::vector<CellTask> tasks;
    tasks.reserve(g.methods.size() * g.bits_list.size() * g.budgets.size() * g.trials);
    for (Method method : g.methods) {
        for (int bits : g.bits_list) {
            for (std::size_t budget : g.budgets) {
                const std::size_t m = budget / static_cast<std::size_t>(bits);
                const bool skipped = m == 0 || 2 * g.k >= m;
                for (std::size_t trial = 0; trial < g.trials; ++trial) {
                    tasks.push_back({method, bits, budget, trial, m, skipped});
                }
            }
        }
    }
    return tasks;
}

}  // namespace detail

ResultTable run_grid(const ExperimentGrid& g) {
    validate_grid(g);

    std::map<int, Quantizer> quantizers;
    for (int b : g.bits_list) {
        if (!quantizers.count(b)) quantizers.emplace(b, design_lloyd_max(b));
    }

    const std::vector<detail::CellTask> tasks = detail::grid_tasks(g);
    ResultTable table;
    table.rows.resize(tasks.size());

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tasks.size()); ++i) {
        const detail::CellTask& t = tasks[static_cast<std::size_t>(i)];
        ResultRow& row = table.rows[static_cast<std::size_t>(i)];
        try {
            row = run_cell_impl(g, t.method, t.bits, t.budget, t.trial,
                                quantizers.at(t.bits));
        } catch (const std::invalid_argument&) {
            row = ResultRow{t.method, t.bits, t.m, t.budget, t.trial,
                            RowStatus::invalid_method};
        } catch (const std::exception&) {
            row = ResultRow{t.method, t.bits, t.m, t.budget, t.trial, RowStatus::error};
        }
    }

    // Aggregates per (method, b, budget) in enumeration order.
    for (Method method : g.methods) {
        for (int bits : g.bits_list) {
            for (std::size_t budget : g.budgets) {
                AggregateRow agg;
                agg.method = method;
                agg.bits = bits;
                agg.budget = budget;
                double sum = 0.0;
                for (const ResultRow& row : table.rows) {
                    if (row.method != method || row.bits != bits || row.budget != budget ||
                        row.status != RowStatus::ok) {
                        continue;
                    }
                    sum += std::min(row.snr, kSnrAggregateCap);
                    ++agg.count;
                }
                if (agg.count == 0) continue;
                agg.mean_snr = sum / static_cast<double>(agg.count);
                double ss = 0.0;
                for (const ResultRow& row : table.rows) {
                    if (row.method != method || row.bits != bits || row.budget != budget ||
                        row.status != RowStatus::ok) {
                        continue;
                    }
                    const double d = std::min(row.snr, kSnrAggregateCap) - agg.mean_snr;
                    ss += d * d;
                }
                agg.std_snr = agg.count > 1
                                  ? std::sqrt(ss / static_cast<double>(agg.count - 1))
                                  : 0.0;
                table.aggregates.push_back(agg);
            }
        }
    }
    return table;
}

namespace {

std::string fmt6(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void write_csv(const ResultTable& t, std::ostream& os) {
    os << "method,b,M,budget,trial,snr_db,iterations,terminated_by\n";
    for (const ResultRow& r : t.rows) {
        os << to_string(r.method) << ',' << r.bits << ',' << r.m << ',' << r.budget << ','
           << r.trial << ',';
        if (r.status == RowStatus::ok) {
            os << fmt6(r.snr) << ',' << r.iterations << ',' << to_string(r.terminated_by);
        } else {
            os << "nan,0," << to_string(r.status);
        }
        os << '\n';
    }
    os << "# aggregates\n";
    os << "method,b,budget,mean_snr_db,std_snr_db,n\n";
    for (const AggregateRow& a : t.aggregates) {
        os << to_string(a.method) << ',' << a.bits << ',' << a.budget << ','
           << fmt6(a.mean_snr) << ',' << fmt6(a.std_snr) << ',' << a.count << '\n';
    }
}

void export_csv(const ResultTable& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw std::runtime_error("export_csv: cannot open " + path);
    write_csv(t, out);
    out.flush();
    if (!out) throw std::runtime_error("export_csv: write failed for " + path);
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

std::uint64_t parse_u64(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad value for '" + key + "': " + s);
    }
}

}  // namespace

ExperimentGrid parse_grid_config(std::istream& in) {
    ExperimentGrid g;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) {
            throw std::invalid_argument("config: empty value for '" + key + "'");
        }

        if (key == "n") {
            g.n = parse_u64(value, key);
        } else if (key == "k") {
            g.k = parse_u64(value, key);
        } else if (key == "trials") {
            g.trials = parse_u64(value, key);
        } else if (key == "seed") {
            g.master_seed = parse_u64(value, key);
        } else if (key == "bits") {
            g.bits_list.clear();
            for (const std::string& item : split_list(value)) {
                g.bits_list.push_back(static_cast<int>(parse_u64(item, key)));
            }
        } else if (key == "budgets") {
            g.budgets.clear();
            for (const std::string& item : split_list(value)) {
                g.budgets.push_back(parse_u64(item, key));
            }
        } else if (key == "methods") {
            g.methods.clear();
            for (const std::string& item : split_list(value)) {
                g.methods.push_back(method_from_string(item));
            }
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    validate_grid(g);
    return g;
}

ExperimentGrid load_grid_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    return parse_grid_config(in);
}

}  // namespace qcs
