// Compares the OpenMP map drivers against the serial reference and checks
// that both produce identical values.

#include <chrono>
#include <cstdio>

#include "cascade/correlations.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace cascade;

namespace {

double seconds(const std::chrono::steady_clock::time_point& a,
               const std::chrono::steady_clock::time_point& b)
{
    return std::chrono::duration<double>(b - a).count();
}

} // namespace

int main(int argc, char** argv)
{
    int n = argc > 1 ? std::atoi(argv[1]) : 151;

    SystemParams sp;
    const LiouvillianParts parts = build_cascaded(sp);
    PulseParams pulse{M_PI, 0.0, 1.0};
    TimeGrid grid{-5.0 * pulse.stddev(), 10.0, n};
    MapOptions opts;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif
    std::printf("map grid: %d x %d\n", n, n);

    const auto t0 = std::chrono::steady_clock::now();
    const CorrelationMap serial = g2_map_serial(parts, pulse, grid, Emitter::flux, opts);
    const auto t1 = std::chrono::steady_clock::now();
    const CorrelationMap parallel = g2_map(parts, pulse, grid, Emitter::flux, opts);
    const auto t2 = std::chrono::steady_clock::now();

    const double ts = seconds(t0, t1);
    const double tp = seconds(t1, t2);
    std::printf("g2 map serial:   %8.3f s\n", ts);
    std::printf("g2 map parallel: %8.3f s  (speedup %.2fx)\n", tp, ts / tp);

    const double diff = (serial.values - parallel.values).cwiseAbs().maxCoeff();
    std::printf("max |serial - parallel| = %g (%s)\n", diff,
                diff == 0.0 ? "identical" : "MISMATCH");
    return diff == 0.0 ? 0 : 1;
}
