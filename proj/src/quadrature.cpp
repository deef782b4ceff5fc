#include "cka/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cka/rng.hpp"

namespace cka {

namespace {

constexpr std::uint64_t kChunk = 16384;

void check_dims(int dim, long double total) {
    if (dim < 1 || dim > 8) throw std::domain_error("integration dimension out of range");
    if (total > 4.5e9L) throw std::domain_error("quadrature grid too large");
}

// Decode a flat node index into angles for one evaluation.
inline void node_angles(std::uint64_t idx, int dim, int k, double step, double* angles) {
    for (int d = 0; d < dim; ++d) {
        angles[d] = step * static_cast<double>(idx % static_cast<std::uint64_t>(k));
        idx /= static_cast<std::uint64_t>(k);
    }
}

inline void sample_angles(std::uint64_t t, int dim, std::uint64_t seed, double* angles) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (int d = 0; d < dim; ++d)
        angles[d] = two_pi * to_unit(hash_counter(seed, t * static_cast<std::uint64_t>(dim) +
                                                            static_cast<std::uint64_t>(d)));
}

}  // namespace

double periodic_mean(int dim, int k, const std::function<double(const double*)>& f) {
    if (k < 1) throw std::domain_error("need at least one node per dimension");
    std::uint64_t total = 1;
    for (int d = 0; d < dim; ++d) total *= static_cast<std::uint64_t>(k);
    check_dims(dim, static_cast<long double>(total));
    const double step = 2.0 * std::numbers::pi / k;
    const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
    std::vector<double> partial(chunks, 0.0);
    // Fixed chunk boundaries and a serial in-chunk loop make the sum
    // independent of how chunks are assigned to threads.
#pragma omp parallel for schedule(static) if (chunks > 1)
    for (long long c = 0; c < static_cast<long long>(chunks); ++c) {
        const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunk;
        const std::uint64_t end = std::min(begin + kChunk, total);
        double acc = 0.0;
        double angles[8];
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            node_angles(idx, dim, k, step, angles);
            acc += f(angles);
        }
        partial[static_cast<std::size_t>(c)] = acc;
    }
    double sum = 0.0;
    for (double v : partial) sum += v;
    return sum / static_cast<double>(total);
}

double periodic_mean_serial(int dim, int k, const std::function<double(const double*)>& f) {
    if (k < 1) throw std::domain_error("need at least one node per dimension");
    std::uint64_t total = 1;
    for (int d = 0; d < dim; ++d) total *= static_cast<std::uint64_t>(k);
    check_dims(dim, static_cast<long double>(total));
    const double step = 2.0 * std::numbers::pi / k;
    double sum = 0.0, comp = 0.0;  // compensated summation
    double angles[8];
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        node_angles(idx, dim, k, step, angles);
        const double y = f(angles) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum / static_cast<double>(total);
}

MeanEstimate mc_mean(int dim, std::uint64_t n, std::uint64_t seed,
                     const std::function<double(const double*)>& f) {
    check_dims(dim, static_cast<long double>(n));
    if (n < 2) throw std::domain_error("need at least two samples");
    const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<double> part_sum(chunks, 0.0), part_sq(chunks, 0.0);
#pragma omp parallel for schedule(static) if (chunks > 1)
    for (long long c = 0; c < static_cast<long long>(chunks); ++c) {
        const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunk;
        const std::uint64_t end = std::min(begin + kChunk, n);
        double acc = 0.0, acc2 = 0.0;
        double angles[8];
        for (std::uint64_t t = begin; t < end; ++t) {
            sample_angles(t, dim, seed, angles);
            const double v = f(angles);
            acc += v;
            acc2 += v * v;
        }
        part_sum[static_cast<std::size_t>(c)] = acc;
        part_sq[static_cast<std::size_t>(c)] = acc2;
    }
    double sum = 0.0, sq = 0.0;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        sum += part_sum[c];
        sq += part_sq[c];
    }
    const double mean = sum / static_cast<double>(n);
    const double var = std::max(0.0, (sq - static_cast<double>(n) * mean * mean) /
                                         (static_cast<double>(n) - 1.0));
    return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

MeanEstimate mc_mean_serial(int dim, std::uint64_t n, std::uint64_t seed,
                            const std::function<double(const double*)>& f) {
    check_dims(dim, static_cast<long double>(n));
    if (n < 2) throw std::domain_error("need at least two samples");
    double sum = 0.0, comp = 0.0, sq = 0.0, sq_comp = 0.0;
    double angles[8];
    for (std::uint64_t t = 0; t < n; ++t) {
        sample_angles(t, dim, seed, angles);
        const double v = f(angles);
        double y = v - comp;
        double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        y = v * v - sq_comp;
        s = sq + y;
        sq_comp = (s - sq) - y;
        sq = s;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = std::max(0.0, (sq - static_cast<double>(n) * mean * mean) /
                                         (static_cast<double>(n) - 1.0));
    return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

}  // namespace cka
