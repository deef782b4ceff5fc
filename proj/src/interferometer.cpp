#include "cka/interferometer.hpp"

#include <bit>
#include <stdexcept>

namespace cka {

int ModeTransform::f(int k, int i) const {
    return std::popcount(static_cast<unsigned>(k & i)) & 1 ? -1 : 1;
}

ModeTransform build_transform(int s) {
    if (s < 1 || s > 8)
        throw std::domain_error("layer count must be in [1, 8], got " + std::to_string(s));
    return ModeTransform{s, 1 << s};
}

long row_sum(const ModeTransform& t, int k) {
    if (k < 0 || k >= t.M)
        throw std::out_of_range("mode index " + std::to_string(k) + " out of range for M=" +
                                std::to_string(t.M));
    long acc = 0;
    for (int i = 0; i < t.M; ++i) acc += t.f(k, i);
    return acc;
}

long beamsplitter_count(int s) {
    if (s < 1 || s > 8)
        throw std::domain_error("layer count must be in [1, 8], got " + std::to_string(s));
    return static_cast<long>(s) * (1L << (s - 1));
}

std::vector<std::vector<long>> dense_from_layers(int s) {
    if (s < 1 || s > 8)
        throw std::domain_error("layer count must be in [1, 8], got " + std::to_string(s));
    const int M = 1 << s;
    // Identity, then one pairing layer per address bit. Each layer sends the
    // pair (lo, hi) to (lo + hi, lo - hi); the 1/sqrt(2) per layer is left
    // out so the entries stay exact integers (the closed form tracks signs
    // only, with the overall 1/sqrt(M) applied analytically).
    std::vector<std::vector<long>> m(M, std::vector<long>(M, 0));
    for (int i = 0; i < M; ++i) m[i][i] = 1;
    for (int b = 0; b < s; ++b) {
        const int bit = 1 << b;
        std::vector<std::vector<long>> next(M, std::vector<long>(M, 0));
        for (int r = 0; r < M; ++r) {
            const int lo = r & ~bit;
            const int hi = r | bit;
            for (int c = 0; c < M; ++c)
                next[r][c] = (r & bit) ? m[lo][c] - m[hi][c] : m[lo][c] + m[hi][c];
        }
        m = std::move(next);
    }
    return m;
}

}  // namespace cka
