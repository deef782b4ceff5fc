#pragma once
#include <cstdint>
#include <functional>

namespace cka {

// Mean of f over the periodic cube [0, 2pi)^dim on a tensor-product
// equispaced grid with k nodes per dimension. For smooth periodic
// integrands the rule converges spectrally in k. The node set is split
// into fixed index chunks whose partial sums are combined in index order,
// so the result is bit-identical for any thread count (including one).
double periodic_mean(int dim, int k, const std::function<double(const double*)>& f);

// Serial reference: one flat compensated-summation loop, no chunking.
// Kept for testing and benchmarking the parallel kernel.
double periodic_mean_serial(int dim, int k, const std::function<double(const double*)>& f);

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

// Monte Carlo mean of f over [0, 2pi)^dim with n samples. Sample t draws
// its dim angles from hash_counter(seed, t*dim + d), so the estimate is
// independent of evaluation order; chunked reduction as above.
MeanEstimate mc_mean(int dim, std::uint64_t n, std::uint64_t seed,
                     const std::function<double(const double*)>& f);

// Serial reference for mc_mean.
MeanEstimate mc_mean_serial(int dim, std::uint64_t n, std::uint64_t seed,
                            const std::function<double(const double*)>& f);

}  // namespace cka
