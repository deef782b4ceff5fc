#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cka/channel_stats.hpp"
#include "cka/fock_oracle.hpp"
#include "cka/params.hpp"
#include "cka/quadrature.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

void report(const char* name, double serial_s, double parallel_s, double diff) {
    std::printf("%-24s serial %8.3f s   parallel %8.3f s   speedup %5.2fx   |diff| %.3g\n",
                name, serial_s, parallel_s, serial_s / parallel_s, diff);
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--quick") == 0) quick = true;

    const int threads = max_threads();
    std::printf("threads: %d%s\n", threads, quick ? " (quick sizes)" : "");

    // Representative phase-average integrand: four live senders, one pair
    // damped by a polarization factor, as in a decoy gain evaluation.
    const auto integrand = [](const double* a) {
        const double c01 = std::cos(a[0]) * 0.98 + std::cos(a[1]) + std::cos(a[2]);
        const double c12 = std::cos(a[0] - a[1]) + std::cos(a[0] - a[2]) + std::cos(a[1] - a[2]);
        return std::exp(0.05 * (c01 + c12));
    };

    {
        const int k = quick ? 48 : 160;
        auto t0 = std::chrono::steady_clock::now();
        const double ref = cka::periodic_mean_serial(3, k, integrand);
        const double ts = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const double par = cka::periodic_mean(3, k, integrand);
        const double tp = seconds_since(t0);
        report("periodic_mean dim=3", ts, tp, std::abs(par - ref));
    }

    {
        const std::uint64_t n = quick ? 400'000 : 8'000'000;
        auto t0 = std::chrono::steady_clock::now();
        const cka::MeanEstimate ref = cka::mc_mean_serial(3, n, 7u, integrand);
        const double ts = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const cka::MeanEstimate par = cka::mc_mean(3, n, 7u, integrand);
        const double tp = seconds_since(t0);
        report("mc_mean dim=3", ts, tp, std::abs(par.mean - ref.mean));
    }

    {
        cka::ProtocolParams p;
        p.n_parties = 4;
        p.s = 3;
        p.eta = 0.05;
        p.p_dark = 1e-9;
        p.theta = std::asin(std::sqrt(0.02));
        const std::vector<double> betas = {0.5, 0.5, 0.5, 0.5};
        const std::uint64_t n = quick ? 200'000 : 4'000'000;
        set_threads(1);
        auto t0 = std::chrono::steady_clock::now();
        const cka::SampledGain one = cka::sample_gain(p, betas, n, 11u);
        const double ts = seconds_since(t0);
        set_threads(threads);
        t0 = std::chrono::steady_clock::now();
        const cka::SampledGain many = cka::sample_gain(p, betas, n, 11u);
        const double tp = seconds_since(t0);
        report("sample_gain N=4", ts, tp, std::abs(many.estimate - one.estimate));
        if (many.estimate != one.estimate) {
            std::fprintf(stderr, "sample_gain is not thread-count invariant\n");
            return 1;
        }
    }

    return 0;
}
