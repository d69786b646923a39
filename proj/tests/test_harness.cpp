#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qcs/harness.hpp"

using namespace qcs;

namespace {

ExperimentGrid tiny_grid() {
    ExperimentGrid g;
    g.n = 64;
    g.k = 4;
    g.bits_list = {1, 2};
    g.budgets = {48, 96};
    g.trials = 2;
    g.master_seed = 99;
    g.methods = {Method::iht, Method::qiht};
    return g;
}

bool rows_equal(const ResultRow& a, const ResultRow& b) {
    return a.method == b.method && a.bits == b.bits && a.m == b.m && a.budget == b.budget &&
           a.trial == b.trial && a.status == b.status && a.snr == b.snr &&
           a.iterations == b.iterations && a.terminated_by == b.terminated_by;
}

}  // namespace

TEST_CASE("cell seeds ignore the method and separate the axes") {
    const std::uint64_t s = cell_seed(1, 2, 512, 7);
    CHECK(s == cell_seed(1, 2, 512, 7));
    CHECK(s != cell_seed(1, 2, 512, 8));
    CHECK(s != cell_seed(1, 3, 512, 7));
    CHECK(s != cell_seed(1, 2, 256, 7));
    CHECK(s != cell_seed(2, 2, 512, 7));
}

TEST_CASE("every method replays the identical cell instance") {
    const ExperimentGrid g = tiny_grid();
    const Quantizer q = design_lloyd_max(2);
    const CellInstance a = make_cell_instance(g, 2, 96, 1, q);
    const CellInstance b = make_cell_instance(g, 2, 96, 1, q);
    CHECK(a.x0.values == b.x0.values);
    CHECK(a.phi.entries.data == b.phi.entries.data);
    CHECK(a.y == b.y);
    CHECK(a.epsilon == b.epsilon);
    CHECK(a.phi.entries.rows == 48);
}

TEST_CASE("run_cell is deterministic") {
    const ExperimentGrid g = tiny_grid();
    const ResultRow a = run_cell(g, Method::qiht, 1, 96, 0);
    const ResultRow b = run_cell(g, Method::qiht, 1, 96, 0);
    CHECK(rows_equal(a, b));
    CHECK(a.status == RowStatus::ok);
    CHECK(a.m == 96);
}

TEST_CASE("a full-size 1-bit cell produces sign measurements and a finite row") {
    ExperimentGrid g;  // default n = 1024, k = 16
    g.master_seed = 7;
    const Quantizer q = design_lloyd_max(1);
    const double q0 = q.levels[1];
    const CellInstance cell = make_cell_instance(g, 1, 1024, 0, q);
    CHECK(cell.phi.entries.rows == 1024);
    for (double v : cell.y) CHECK(std::abs(v) == q0);

    const ResultRow row = run_cell(g, Method::qiht, 1, 1024, 0);
    CHECK(row.status == RowStatus::ok);
    CHECK(row.m == 1024);
    CHECK(std::isfinite(row.snr));
}

TEST_CASE("run_cell skips cells without a valid default step") {
    ExperimentGrid g = tiny_grid();
    g.k = 16;  // 2K = 32 >= M for budget 48 at 2 bits (M = 24)
    const ResultRow r = run_cell(g, Method::iht, 2, 48, 0);
    CHECK(r.status == RowStatus::skipped);
}

TEST_CASE("the single-thresholding method refuses multibit cells") {
    ExperimentGrid g = tiny_grid();
    g.methods = {Method::ht};
    CHECK_THROWS_AS(run_cell(g, Method::ht, 2, 96, 0), std::invalid_argument);
    const ResultRow ok = run_cell(g, Method::ht, 1, 96, 0);
    CHECK(ok.status == RowStatus::ok);
}

TEST_CASE("grid task enumeration covers the documented default grid") {
    ExperimentGrid g;  // defaults: 3 methods x 5 bits x 20 budgets x 100 trials
    const auto tasks = detail::grid_tasks(g);
    CHECK(tasks.size() == 30000);
    std::size_t skipped = 0;
    for (const auto& t : tasks) skipped += t.skipped;
    // cells with M = floor(B/b) <= 2K = 32:
    // (2,64), (3,64), (4,64), (4,128), (5,64), (5,128)
    CHECK(skipped == 6 * 100 * 3);
}

TEST_CASE("run_grid fills every cell and aggregates per cell") {
    const ExperimentGrid g = tiny_grid();
    const ResultTable t = run_grid(g);
    REQUIRE(t.rows.size() == 2 * 2 * 2 * 2);
    for (const ResultRow& r : t.rows) {
        CHECK(r.status == RowStatus::ok);
        CHECK(r.m == r.budget / static_cast<std::size_t>(r.bits));
        CHECK(static_cast<std::size_t>(r.bits) * r.m <= r.budget);
    }
    REQUIRE(t.aggregates.size() == 2 * 2 * 2);
    for (const AggregateRow& a : t.aggregates) CHECK(a.count == 2);
}

TEST_CASE("single-trial aggregates equal their rows") {
    ExperimentGrid g = tiny_grid();
    g.trials = 1;
    const ResultTable t = run_grid(g);
    REQUIRE(t.aggregates.size() == t.rows.size());
    for (std::size_t i = 0; i < t.aggregates.size(); ++i) {
        CHECK(t.aggregates[i].mean_snr ==
              doctest::Approx(std::min(t.rows[i].snr, kSnrAggregateCap)));
        CHECK(t.aggregates[i].std_snr == 0.0);
        CHECK(t.aggregates[i].count == 1);
    }
}

TEST_CASE("tables are independent of the worker count") {
    const ExperimentGrid g = tiny_grid();
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const ResultTable serial = run_grid(g);
    omp_set_num_threads(saved > 1 ? saved : 2);
    const ResultTable parallel = run_grid(g);
    omp_set_num_threads(saved);

    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(rows_equal(serial.rows[i], parallel.rows[i]));
    }
}

TEST_CASE("invalid method/bits combinations become flagged rows in a sweep") {
    ExperimentGrid g = tiny_grid();
    g.methods = {Method::ht};
    g.bits_list = {1, 2};
    const ResultTable t = run_grid(g);
    std::size_t flagged = 0;
    for (const ResultRow& r : t.rows) {
        if (r.bits == 2) {
            CHECK(r.status == RowStatus::invalid_method);
            ++flagged;
        } else {
            CHECK(r.status == RowStatus::ok);
        }
    }
    CHECK(flagged == 4);
}

TEST_CASE("csv export writes both sections with pinned headers") {
    ResultTable t;
    std::ostringstream os;
    write_csv(t, os);
    CHECK(os.str() ==
          "method,b,M,budget,trial,snr_db,iterations,terminated_by\n"
          "# aggregates\n"
          "method,b,budget,mean_snr_db,std_snr_db,n\n");
}

TEST_CASE("csv serializes infinite snr as the literal inf") {
    ResultTable t;
    ResultRow r;
    r.method = Method::qiht;
    r.bits = 1;
    r.m = 8;
    r.budget = 8;
    r.trial = 0;
    r.status = RowStatus::ok;
    r.snr = std::numeric_limits<double>::infinity();
    r.iterations = 3;
    r.terminated_by = Termination::tolerance;
    t.rows.push_back(r);
    std::ostringstream os;
    write_csv(t, os);
    CHECK(os.str().find("qiht,1,8,8,0,inf,3,tolerance\n") != std::string::npos);
}

TEST_CASE("exported aggregates survive a parse round trip") {
    const ExperimentGrid g = tiny_grid();
    const ResultTable t = run_grid(g);
    const std::string path = "roundtrip_test.csv";
    export_csv(t, path);

    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    bool in_aggregates = false;
    std::size_t idx = 0;
    while (std::getline(in, line)) {
        if (line == "# aggregates") {
            in_aggregates = true;
            std::getline(in, line);  // aggregate header
            continue;
        }
        if (!in_aggregates) continue;
        std::string method;
        int bits = 0;
        std::size_t budget = 0, count = 0;
        double mean = 0.0, sd = 0.0;
        std::stringstream ss(line);
        std::string field;
        std::getline(ss, method, ',');
        std::getline(ss, field, ',');
        bits = std::stoi(field);
        std::getline(ss, field, ',');
        budget = std::stoul(field);
        std::getline(ss, field, ',');
        mean = std::stod(field);
        std::getline(ss, field, ',');
        sd = std::stod(field);
        std::getline(ss, field, ',');
        count = std::stoul(field);

        REQUIRE(idx < t.aggregates.size());
        const AggregateRow& a = t.aggregates[idx++];
        CHECK(method == to_string(a.method));
        CHECK(bits == a.bits);
        CHECK(budget == a.budget);
        CHECK(mean == doctest::Approx(a.mean_snr).epsilon(1e-5));
        CHECK(sd == doctest::Approx(a.std_snr).epsilon(1e-5));
        CHECK(count == a.count);
    }
    CHECK(idx == t.aggregates.size());
    std::filesystem::remove(path);
}

TEST_CASE("export to an unwritable path fails loudly") {
    ResultTable t;
    CHECK_THROWS(export_csv(t, "/nonexistent_dir_qcs/out.csv"));
}

TEST_CASE("config parsing accepts the documented keys") {
    std::istringstream in(
        "# sweep setup\n"
        "n = 256\n"
        "k = 8\n"
        "bits = 1, 2, 3\n"
        "budgets = 128,256\n"
        "trials = 5\n"
        "seed = 77\n"
        "methods = qiht, bpdn\n");
    const ExperimentGrid g = parse_grid_config(in);
    CHECK(g.n == 256);
    CHECK(g.k == 8);
    CHECK(g.bits_list == std::vector<int>{1, 2, 3});
    CHECK(g.budgets == std::vector<std::size_t>{128, 256});
    CHECK(g.trials == 5);
    CHECK(g.master_seed == 77);
    REQUIRE(g.methods.size() == 2);
    CHECK(g.methods[0] == Method::qiht);
    CHECK(g.methods[1] == Method::bpdn);
}

TEST_CASE("config parsing rejects unknown keys, methods and malformed lines") {
    std::istringstream bad_key("njobs = 4\n");
    CHECK_THROWS_AS(parse_grid_config(bad_key), std::invalid_argument);
    std::istringstream bad_method("methods = qiht, omp\n");
    CHECK_THROWS_AS(parse_grid_config(bad_method), std::invalid_argument);
    std::istringstream bad_line("n 256\n");
    CHECK_THROWS_AS(parse_grid_config(bad_line), std::invalid_argument);
    std::istringstream bad_value("trials = soon\n");
    CHECK_THROWS_AS(parse_grid_config(bad_value), std::invalid_argument);
    std::istringstream bad_grid("k = 0\n");
    CHECK_THROWS_AS(parse_grid_config(bad_grid), std::invalid_argument);
}

TEST_CASE("missing config file is reported") {
    CHECK_THROWS(load_grid_config("/nonexistent_qcs_config.txt"));
}
