// Benchmark: serial vs OpenMP discriminant grid scan, and the end-to-end
// EP search (scan + refine). Run with EPSCOPE_THREADS=<n> to cap threads.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "epscope/epfind.hpp"
#include "epscope/model.hpp"

using namespace epscope;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

MatrixFamily fig1_family(double mu) {
    TwoLevelParams p;
    p.eps1 = {1.0, 0.0};
    p.eps2 = {2.0, 0.0};
    p.omega1 = 1.0;
    p.omega2 = -1.0;
    p.phi1 = 0.2;
    p.mu = mu;
    p.sigma1 = 1.0;
    p.sigma2 = 0.0;
    p.phi2 = 0.0;
    return to_family(p);
}

MatrixFamily random_symmetric_family(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MatrixFamily f;
    f.h0 = ComplexMatrix(n);
    f.h1 = ComplexMatrix(n);
    f.a = ComplexMatrix::zero(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const Cx x{u(rng), 0.0}, y{u(rng), 0.0};
            f.h0(i, j) = f.h0(j, i) = x;
            f.h1(i, j) = f.h1(j, i) = y;
        }
    for (std::size_t i = 0; i < n; ++i) f.h0(i, i) += Cx{2.0 * static_cast<double>(i), 0.0};
    return f;
}

void bench_case(const char* name, const MatrixFamily& f, const SearchRegion& region) {
    auto t0 = std::chrono::steady_clock::now();
    const DiscGrid serial = scan_disc_grid_serial(f, region);
    const double ts = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const DiscGrid parallel = scan_disc_grid_parallel(f, region);
    const double tp = seconds_since(t0);

    bool identical = serial.values.size() == parallel.values.size();
    for (std::size_t i = 0; identical && i < serial.values.size(); ++i) {
        const double a = serial.values[i], b = parallel.values[i];
        identical = (a == b) || (std::isnan(a) && std::isnan(b));
    }

    std::printf("%-24s %4zux%-4zu serial %8.3f s  parallel %8.3f s  speedup %5.2fx  %s\n",
                name, region.grid_re, region.grid_im, ts, tp, ts / tp,
                identical ? "grids identical" : "GRIDS DIFFER");
}

} // namespace

int main() {
    std::printf("threads: %d\n", scan_thread_count());

    bench_case("fig1 mu=0.35 (2x2)", fig1_family(0.35),
               {-1.0, 1.0, -1.0, 1.0, 384, 384});
    bench_case("random symmetric 4x4", random_symmetric_family(4, 7),
               {-4.0, 4.0, -4.0, 4.0, 160, 160});
    bench_case("random symmetric 6x6", random_symmetric_family(6, 11),
               {-4.0, 4.0, -4.0, 4.0, 96, 96});

    // end-to-end on the fig1 search used by the acceptance suite
    const MatrixFamily f = fig1_family(0.0);
    const SearchRegion region{-1.0, 1.0, -1.0, 1.0, 128, 128};
    auto t0 = std::chrono::steady_clock::now();
    const auto cands = ep_scan(f, region);
    std::size_t refined = 0;
    for (const Cx& c : cands) {
        ep_refine(f, c);
        ++refined;
    }
    std::printf("scan+refine fig1 mu=0 128x128: %zu candidates, %zu refined, %.3f s\n",
                cands.size(), refined, seconds_since(t0));
    return 0;
}
