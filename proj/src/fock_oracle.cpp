#include "cka/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cka/interferometer.hpp"
#include "cka/rng.hpp"

namespace cka {
namespace {

using Amplitude = std::complex<double>;

// Basis kets are packed occupation vectors: mode 2*spatial + pol gets a
// 4-bit counter. With at most 8 spatial modes, 2 polarizations, and 4
// photons this is exact and keeps map keys cheap to compare.
using StateKey = std::uint64_t;
using State = std::map<StateKey, Amplitude>;

int occupation(StateKey key, int mode) { return int((key >> (4 * mode)) & 0xFull); }

StateKey bump(StateKey key, int mode) { return key + (StateKey(1) << (4 * mode)); }

double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= double(i);
    return r;
}

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int t = 0; t < k; ++t) r = r * double(n - t) / double(t + 1);
    return r;
}

bool next_in_box(std::vector<int>& k, const PhotonTuple& n) {
    for (size_t i = 0; i < k.size(); ++i) {
        if (k[i] < n[i]) {
            ++k[i];
            std::fill(k.begin(), k.begin() + long(i), 0);
            return true;
        }
    }
    return false;
}

// Applies party i's creation operator once: a superposition over spatial
// modes weighted by the network column, split across the two polarization
// axes by the party's rotation angle.
State apply_creation(const State& in, const ModeTransform& t, int party, double c, double s) {
    State out;
    const double norm = 1.0 / std::sqrt(double(t.M));
    for (const auto& [key, amp] : in) {
        for (int sp = 0; sp < t.M; ++sp) {
            const double col = double(t.f(party, sp)) * norm;
            if (c != 0.0) {
                const int mode = 2 * sp;
                const Amplitude next = amp * (col * c) * std::sqrt(double(occupation(key, mode) + 1));
                out[bump(key, mode)] += next;
            }
            if (s != 0.0) {
                const int mode = 2 * sp + 1;
                const Amplitude next = amp * (col * s) * std::sqrt(double(occupation(key, mode) + 1));
                out[bump(key, mode)] += next;
            }
        }
    }
    return out;
}

void check_oracle_scope(const ProtocolParams& p, const PhotonTuple& n) {
    p.validate();
    if (int(n.size()) != p.n_parties)
        throw std::domain_error("photon tuple length must equal the party count");
    if (p.n_parties > 4 || p.modes() > 8)
        throw std::domain_error("oracle handles at most 4 parties and 8 detectors");
    int total = 0;
    for (int v : n) {
        if (v < 0) throw std::domain_error("photon numbers must be non-negative");
        total += v;
    }
    if (total > 4) throw std::domain_error("oracle handles at most 4 photons in total");
}

}  // namespace

std::vector<double> no_light_set_probabilities(const ProtocolParams& p, const PhotonTuple& n,
                                               double theta0, double theta1) {
    check_oracle_scope(p, n);
    const int M = p.modes();
    const ModeTransform t = build_transform(p.s);
    const int total = std::accumulate(n.begin(), n.end(), 0);

    // Weight of each spatial occupancy pattern across all loss branches.
    std::vector<double> pattern(size_t(1) << M, 0.0);
    std::vector<int> k(n.size(), 0);
    do {
        const int K = std::accumulate(k.begin(), k.end(), 0);
        double weight = ipow(p.eta, K) * ipow(1.0 - p.eta, total - K);
        for (size_t i = 0; i < n.size(); ++i) weight *= binom(n[i], k[i]);

        State state;
        state[0] = Amplitude(1.0, 0.0);
        for (int i = 0; i < p.n_parties; ++i) {
            const double c = std::cos(i == 0 ? theta0 : theta1);
            const double s = std::sin(i == 0 ? theta0 : theta1);
            for (int rep = 0; rep < k[size_t(i)]; ++rep) state = apply_creation(state, t, i, c, s);
            // (a-dagger)^k |0> has norm sqrt(k!), so divide it back out.
            const double scale = 1.0 / std::sqrt(factorial(k[size_t(i)]));
            for (auto& [key, amp] : state) amp *= scale;
        }

        for (const auto& [key, amp] : state) {
            unsigned occupied = 0;
            for (int sp = 0; sp < M; ++sp)
                if (occupation(key, 2 * sp) + occupation(key, 2 * sp + 1) > 0) occupied |= 1u << sp;
            pattern[occupied] += weight * std::norm(amp);
        }
    } while (next_in_box(k, n));

    // V[S] sums the patterns that leave every detector of S dark.
    std::vector<double> v(size_t(1) << M, 0.0);
    for (unsigned set = 0; set < v.size(); ++set)
        for (unsigned occ = 0; occ < pattern.size(); ++occ)
            if ((occ & set) == 0) v[set] += pattern[occ];
    return v;
}

double simulate_yield_general(const ProtocolParams& p, const PhotonTuple& n,
                              double theta0, double theta1) {
    const std::vector<double> v = no_light_set_probabilities(p, n, theta0, theta1);
    const int M = p.modes();
    const unsigned all = (1u << M) - 1u;
    const double no_dark = ipow(1.0 - p.p_dark, M - 1);

    double first = 0.0;
    for (int j = 0; j < M; ++j) {
        const double y =
            no_dark * (v[all & ~(1u << j)] - v[all] + p.p_dark * v[all]);
        if (j == 0) {
            first = y;
        } else if (std::abs(y - first) > 1e-10 * std::max(1.0, std::abs(first))) {
            throw std::logic_error("detector symmetry violated in the oracle");
        }
    }
    return first;
}

double simulate_yield(const ProtocolParams& p, const PhotonTuple& n) {
    return simulate_yield_general(p, n, p.theta, 0.0);
}

double simulate_kg_click(const ProtocolParams& p, const std::vector<int>& signs, int j) {
    p.validate();
    const int M = p.modes();
    if (j < 0 || j >= M) throw std::domain_error("detector index out of range");
    if (int(signs.size()) != p.n_parties)
        throw std::domain_error("sign vector length must equal the party count");
    for (int x : signs)
        if (x != 1 && x != -1) throw std::domain_error("signs must be +1 or -1");

    const ModeTransform t = build_transform(p.s);
    const double root_eta_m = std::sqrt(p.eta) / std::sqrt(double(M));

    double sum_all = 0.0, sum_rest = 0.0;
    for (int sp = 0; sp < M; ++sp) {
        Amplitude gp(0.0, 0.0), gq(0.0, 0.0);
        for (int i = 0; i < p.n_parties; ++i) {
            const double phase = i == 0 ? 0.0 : p.phi;
            const double c = i == 0 ? std::cos(p.theta) : 1.0;
            const double s = i == 0 ? std::sin(p.theta) : 0.0;
            const Amplitude a = double(signs[size_t(i)]) * p.alpha *
                                std::polar(1.0, phase) * root_eta_m * double(t.f(i, sp));
            gp += a * c;
            gq += a * s;
        }
        const double e = std::norm(gp) + std::norm(gq);
        sum_all += e;
        if (sp != j) sum_rest += e;
    }
    const double no_dark = ipow(1.0 - p.p_dark, M - 1);
    const double vac = std::exp(-sum_all);
    return no_dark * (std::exp(-sum_rest) - vac + p.p_dark * vac);
}

SampledGain sample_gain(const ProtocolParams& p, const std::vector<double>& intensities,
                        std::uint64_t n_samples, std::uint64_t seed) {
    p.validate();
    if (n_samples < 1000) throw std::domain_error("need at least 1000 samples");
    if (int(intensities.size()) != p.n_parties)
        throw std::domain_error("intensity vector length must equal the party count");
    for (double b : intensities)
        if (!(b >= 0.0)) throw std::domain_error("intensities must be non-negative");

    const int M = p.modes();
    const int N = p.n_parties;
    const ModeTransform t = build_transform(p.s);
    const double inv_root_m = 1.0 / std::sqrt(double(M));
    const double root_eta = std::sqrt(p.eta);
    const double no_dark = ipow(1.0 - p.p_dark, M - 1);
    constexpr double two_pi = 2.0 * std::numbers::pi;

    const auto click_prob = [&](std::uint64_t sample) {
        Amplitude a[256];  // indexed by party; party count is capped by modes() <= 256
        for (int i = 0; i < N; ++i) {
            const double phase =
                two_pi * to_unit(hash_counter(seed, sample * std::uint64_t(N) + std::uint64_t(i)));
            a[i] = std::sqrt(intensities[size_t(i)]) * std::polar(1.0, phase) * root_eta;
        }
        double sum_all = 0.0, sum_rest = 0.0;
        for (int sp = 0; sp < M; ++sp) {
            Amplitude gp(0.0, 0.0), gq(0.0, 0.0);
            for (int i = 0; i < N; ++i) {
                const Amplitude v = a[i] * (double(t.f(i, sp)) * inv_root_m);
                if (i == 0) {
                    gp += v * std::cos(p.theta);
                    gq += v * std::sin(p.theta);
                } else {
                    gp += v;
                }
            }
            const double e = std::norm(gp) + std::norm(gq);
            sum_all += e;
            if (sp != 0) sum_rest += e;
        }
        const double vac = std::exp(-sum_all);
        return no_dark * (std::exp(-sum_rest) - vac + p.p_dark * vac);
    };

    constexpr std::uint64_t kChunk = 16384;
    const std::uint64_t chunks = (n_samples + kChunk - 1) / kChunk;
    std::vector<double> part_sum(chunks, 0.0), part_sq(chunks, 0.0);
#pragma omp parallel for schedule(static) if (chunks > 1)
    for (long long c = 0; c < (long long)chunks; ++c) {
        const std::uint64_t begin = std::uint64_t(c) * kChunk;
        const std::uint64_t end = std::min(begin + kChunk, n_samples);
        double acc = 0.0, acc2 = 0.0;
        for (std::uint64_t smp = begin; smp < end; ++smp) {
            const double v = click_prob(smp);
            acc += v;
            acc2 += v * v;
        }
        part_sum[size_t(c)] = acc;
        part_sq[size_t(c)] = acc2;
    }
    double sum = 0.0, sq = 0.0;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        sum += part_sum[c];
        sq += part_sq[c];
    }
    const double mean = sum / double(n_samples);
    const double var =
        std::max(0.0, (sq - double(n_samples) * mean * mean) / (double(n_samples) - 1.0));
    return {mean, std::sqrt(var / double(n_samples))};
}

}  // namespace cka
