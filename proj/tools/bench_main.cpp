// Benchmark of the OpenMP-parallel kernels against their serial reference:
// replica Lyapunov runs, a dichotomy sweep and a classifier grid scan.
// Both paths must produce identical numbers; this binary reports timings.

#include <chrono>
#include <cstdio>
#include <memory>
#include <vector>

#include "lyaplab/billiard.hpp"
#include "lyaplab/parallel.hpp"
#include "lyaplab/projective.hpp"
#include "lyaplab/rds.hpp"

using namespace lyaplab;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double bench_replicas(bool parallel, double* checksum) {
    const RandomSystem sys = RandomSystem::standard(1.0, NoiseModel::uniform_ball(0.05));
    const int replicas = 8;
    const long long n = 200000;
    std::vector<LyapunovEstimate> ests(replicas);
    const RngStream root(7);
    const auto t0 = std::chrono::steady_clock::now();
    for_each_index(replicas, parallel, [&](std::int64_t r) {
        RngStream rng = root.split(static_cast<std::uint64_t>(r));
        ests[static_cast<std::size_t>(r)] = estimate_lyapunov(sys, {0.2, 0.1}, n, 8, rng);
    });
    const double dt = seconds_since(t0);
    double acc = 0.0;
    for (const auto& e : ests) acc += e.lambda_plus;
    *checksum = acc;
    return dt;
}

double bench_billiard_sweep(bool parallel, double* checksum) {
    const std::vector<double> amplitudes = {0.0, 0.05, 0.1};
    std::vector<std::shared_ptr<const Table>> tables;
    for (const double eps : amplitudes)
        tables.push_back(std::make_shared<const Table>(
            build_table(PerturbedDiskSpec{1.0, eps, 3}, SurfaceKind::Euclidean)));

    const long long n = 20000;
    std::vector<LyapunovEstimate> ests(tables.size());
    const RngStream root(11);
    const auto t0 = std::chrono::steady_clock::now();
    for_each_index(static_cast<std::int64_t>(tables.size()), parallel, [&](std::int64_t i) {
        const RandomSystem sys =
            RandomSystem::billiard(tables[static_cast<std::size_t>(i)],
                                   NoiseModel::uniform_ball(0.05));
        RngStream rng = root.split(static_cast<std::uint64_t>(i));
        ests[static_cast<std::size_t>(i)] = estimate_lyapunov(sys, {0.2, 0.1}, n, 8, rng);
    });
    const double dt = seconds_since(t0);
    double acc = 0.0;
    for (const auto& e : ests) acc += e.lambda_plus;
    *checksum = acc;
    return dt;
}

double bench_classify(bool parallel, double* checksum) {
    const auto t0 = std::chrono::steady_clock::now();
    const ClassifierVerdict v = classify_toral(
        [](const TorusPoint& y) { return standard_map_derivative(1.0, y); }, 256, parallel);
    const double dt = seconds_since(t0);
    *checksum = v.hyperbolic_witness ? v.hyperbolic_witness->trace : 0.0;
    return dt;
}

void report(const char* name, double (*bench)(bool, double*)) {
    double chk_serial = 0.0, chk_parallel = 0.0;
    const double ts = bench(false, &chk_serial);
    const double tp = bench(true, &chk_parallel);
    const bool same = chk_serial == chk_parallel;
    std::printf("%-18s serial %8.3f s   openmp %8.3f s   speedup %5.2fx   results %s\n",
                name, ts, tp, ts / tp, same ? "identical" : "DIFFER");
}

} // namespace

int main() {
    std::printf("workers available: %d\n", worker_count());
    report("replica pool", bench_replicas);
    report("billiard sweep", bench_billiard_sweep);
    report("classify grid", bench_classify);
    return 0;
}
