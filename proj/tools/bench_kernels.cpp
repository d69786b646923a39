// Compares the OpenMP kernels against their serial references and times a
// full solver with 1 thread vs all threads. Outputs are checked for bitwise
// agreement while timing, so a regression in either speed or determinism
// shows up here.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "qcs/kernels.hpp"
#include "qcs/quantizer.hpp"
#include "qcs/recon.hpp"
#include "qcs/rng.hpp"
#include "qcs/signal.hpp"

using namespace qcs;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double min_time_s(int reps, F&& body) {
    double best = 1e100;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        body();
        best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
    }
    return best;
}

void bench_matvec(std::size_t m, std::size_t n, int reps) {
    const SensingMatrix a = gen_gaussian_matrix(m, n, 1);
    Rng rng(2);
    std::vector<double> x(n), xt(m), out, ref;
    for (double& v : x) v = rng.normal();
    for (double& v : xt) v = rng.normal();

    const double ts = min_time_s(reps, [&] { matvec_serial(a.entries, x, ref); });
    const double tp = min_time_s(reps, [&] { matvec(a.entries, x, out); });
    const bool same = out == ref;
    std::printf("  matvec  %5zu x %-5zu serial %8.3f us  omp %8.3f us  speedup %4.2fx  %s\n",
                m, n, ts * 1e6, tp * 1e6, ts / tp, same ? "bitwise-equal" : "MISMATCH");

    const double tts = min_time_s(reps, [&] { tmatvec_serial(a.entries, xt, ref); });
    const double ttp = min_time_s(reps, [&] { tmatvec(a.entries, xt, out); });
    const bool tsame = out == ref;
    std::printf("  tmatvec %5zu x %-5zu serial %8.3f us  omp %8.3f us  speedup %4.2fx  %s\n",
                m, n, tts * 1e6, ttp * 1e6, tts / ttp, tsame ? "bitwise-equal" : "MISMATCH");

    if (!same || !tsame) std::exit(1);
}

void bench_solver(std::size_t m, std::size_t n, std::size_t k, int bits) {
    const Quantizer q = design_lloyd_max(bits);
    const SparseSignal x0 = gen_sparse_signal(n, k, 11);
    const SensingMatrix phi = gen_gaussian_matrix(m, n, 12);
    const std::vector<double> y = quantize_vector(q, matvec(phi.entries, x0.values));
    const ReconConfig cfg{k, default_step_size(m, k), 1e-4, 1000};

    const int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
    ReconResult serial;
    const double ts = min_time_s(3, [&] { serial = qiht(phi, y, q, cfg); });
    omp_set_num_threads(max_threads);
    ReconResult parallel;
    const double tp = min_time_s(3, [&] { parallel = qiht(phi, y, q, cfg); });

    const bool same = serial.estimate == parallel.estimate;
    std::printf(
        "  qiht    %5zu x %-5zu b=%d  1 thread %8.3f ms  %d threads %8.3f ms  speedup %4.2fx  %s\n",
        m, n, bits, ts * 1e3, max_threads, tp * 1e3, ts / tp,
        same ? "bitwise-equal" : "MISMATCH");
    if (!same) std::exit(1);
}

}  // namespace

int main(int argc, char** argv) {
    int reps = 50;
    if (argc > 1) reps = std::atoi(argv[1]);

    std::printf("kernel benchmark, %d threads available, best of %d runs\n",
                omp_get_max_threads(), reps);
    bench_matvec(256, 512, reps);
    bench_matvec(512, 1024, reps);
    bench_matvec(1280, 1024, reps);
    bench_matvec(2048, 2048, reps >= 10 ? reps / 5 : reps);

    std::printf("whole-solver comparison\n");
    bench_solver(512, 1024, 16, 1);
    bench_solver(512, 1024, 16, 3);
    return 0;
}
