#include "cka/channel_stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cka/interferometer.hpp"
#include "cka/quadrature.hpp"

namespace cka {
namespace {

// Integer power with x^0 == 1 for every x, including 0^0 == 1, which the
// combinatorial sums below rely on for zero-photon branches.
double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

constexpr int kMaxFact = 20;

double factorial(int n) {
    static const auto table = [] {
        std::array<double, kMaxFact + 1> t{};
        t[0] = 1.0;
        for (int i = 1; i <= kMaxFact; ++i) t[i] = t[i - 1] * double(i);
        return t;
    }();
    if (n < 0 || n > kMaxFact) throw std::domain_error("factorial argument out of range");
    return table[size_t(n)];
}

constexpr int kMaxBinom = 24;

double binom(int n, int k) {
    static const auto table = [] {
        std::array<std::array<double, kMaxBinom + 1>, kMaxBinom + 1> t{};
        for (int i = 0; i <= kMaxBinom; ++i) {
            t[size_t(i)][0] = 1.0;
            for (int j = 1; j <= i; ++j)
                t[size_t(i)][size_t(j)] =
                    t[size_t(i - 1)][size_t(j - 1)] + (j <= i - 1 ? t[size_t(i - 1)][size_t(j)] : 0.0);
        }
        return t;
    }();
    if (n < 0 || n > kMaxBinom) throw std::domain_error("binomial argument out of range");
    if (k < 0 || k > n) return 0.0;
    return table[size_t(n)][size_t(k)];
}

void check_signs(const ProtocolParams& p, const std::vector<int>& signs) {
    if (int(signs.size()) != p.n_parties)
        throw std::domain_error("sign vector length must equal the party count");
    for (int x : signs)
        if (x != 1 && x != -1) throw std::domain_error("signs must be +1 or -1");
}

// Advances k through the box [0, n] componentwise; returns false after the
// last tuple. Start from all zeros and call after processing each tuple.
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

void check_tuple(const ProtocolParams& p, const PhotonTuple& n, int max_total) {
    if (int(n.size()) != p.n_parties)
        throw std::domain_error("photon tuple length must equal the party count");
    int total = 0;
    for (int v : n) {
        if (v < 0) throw std::domain_error("photon numbers must be non-negative");
        total += v;
    }
    if (total > max_total)
        throw std::domain_error("total photon number capped at " + std::to_string(max_total) +
                                ", got " + tuple_to_string(n));
}

}  // namespace

double pr_click_given_signs(const ProtocolParams& p, int j, const std::vector<int>& signs) {
    p.validate();
    check_signs(p, signs);
    const int M = p.modes();
    if (j < 0 || j >= M) throw std::domain_error("detector index out of range");
    const ModeTransform t = build_transform(p.s);

    double S = 0.0;
    for (int i = 1; i < p.n_parties; ++i) S += double(signs[size_t(i)] * t.f(i, j));

    const double w = p.eta * p.alpha * p.alpha;
    const double N = double(p.n_parties);
    const double cc = std::cos(p.theta) * std::cos(p.phi);
    const double no_dark = ipow(1.0 - p.p_dark, M - 1);
    const double lit = std::exp(-(double(M) * N - 1.0) * w / double(M)) *
                       std::exp(w * (S * S + 2.0 * S * double(signs[0]) * cc) / double(M));
    const double vac = std::exp(-N * w);
    // lit - (1-pd)*vac, grouped so the all-dark limit stays cancellation-free.
    return no_dark * (lit - vac + p.p_dark * vac);
}

double pr_click_kg(const ProtocolParams& p) {
    p.validate();
    const int M = p.modes();
    const int N = p.n_parties;
    const double w = p.eta * p.alpha * p.alpha;
    const double cc = std::cos(p.theta) * std::cos(p.phi);

    double sum = 0.0;
    for (int k = 0; k <= N - 1; ++k) {
        const double d = double(2 * k + 1 - N);
        sum += binom(N - 1, k) * std::exp(w * d * d / double(M)) *
               std::cosh(2.0 * (w / double(M)) * d * cc);
    }
    const double no_dark = ipow(1.0 - p.p_dark, M - 1);
    const double lit =
        std::exp(-(double(M) * double(N) - 1.0) * w / double(M)) * sum / ipow(2.0, N - 1);
    const double vac = std::exp(-double(N) * w);
    return no_dark * (lit - vac + p.p_dark * vac);
}

double qber(const ProtocolParams& p) {
    p.validate();
    const double pr = pr_click_kg(p);
    if (!(pr > 0.0)) throw std::domain_error("click probability is zero; error rate undefined");

    const int M = p.modes();
    const int N = p.n_parties;
    const double w = p.eta * p.alpha * p.alpha;
    const double cc = std::cos(p.theta) * std::cos(p.phi);

    double sum = 0.0;
    for (int k = 0; k <= N - 2; ++k) {
        const double d = double(2 * k + 2 - N);
        sum += binom(N - 2, k) * std::exp(w * d * d / double(M)) *
               std::cosh(2.0 * (w / double(M)) * d * (1.0 - cc));
    }
    const double no_dark = ipow(1.0 - p.p_dark, M - 1);
    const double lit =
        std::exp(-(double(M) * double(N) - 2.0 + 2.0 * cc) * w / double(M)) * sum / ipow(2.0, N - 1);
    const double vac_half = std::exp(-double(N) * w) / 2.0;
    // (lit - (1-pd)*vac/2) / pr, grouped so the all-dark limit gives 1/2
    // without cancellation.
    return no_dark * (lit - vac_half + p.p_dark * vac_half) / pr;
}

double qber_from_sign_probabilities(const ProtocolParams& p, int i, int j) {
    p.validate();
    if (i < 1 || i >= p.n_parties) throw std::domain_error("party index out of range");
    const ModeTransform t = build_transform(p.s);
    const int flip = t.f(i, j);  // party i announces its sign through this detector's pattern

    double total = 0.0, mismatch = 0.0;
    std::vector<int> signs(size_t(p.n_parties));
    for (unsigned mask = 0; mask < (1u << p.n_parties); ++mask) {
        for (int b = 0; b < p.n_parties; ++b) signs[size_t(b)] = (mask >> b) & 1u ? 1 : -1;
        const double pr = pr_click_given_signs(p, j, signs);
        total += pr;
        if (signs[0] != signs[size_t(i)] * flip) mismatch += pr;
    }
    if (!(total > 0.0)) throw std::domain_error("click probability is zero; error rate undefined");
    return mismatch / total;
}

double gain(const ProtocolParams& p, const std::vector<double>& intensities,
            const QuadratureSpec& quad, GainInfo* info) {
    p.validate();
    if (int(intensities.size()) != p.n_parties)
        throw std::domain_error("intensity vector length must equal the party count");
    for (double b : intensities)
        if (!(b >= 0.0)) throw std::domain_error("intensities must be non-negative");

    const int M = p.modes();
    const double sum_beta = std::accumulate(intensities.begin(), intensities.end(), 0.0);
    const double no_dark = ipow(1.0 - p.p_dark, M - 1);
    const double lit_scale = std::exp(-p.eta * (1.0 - 1.0 / double(M)) * sum_beta);
    const double vac = std::exp(-p.eta * sum_beta);

    std::vector<int> live;
    for (int i = 0; i < p.n_parties; ++i)
        if (intensities[size_t(i)] > 0.0) live.push_back(i);

    if (live.size() <= 1) {
        // At most one random phase: the average over it is exactly 1.
        if (info) *info = GainInfo{0.0, 0, false};
        return no_dark * (lit_scale - vac + p.p_dark * vac);
    }

    // Residual phase average. The first live party's phase is fixed at zero
    // (only differences matter), leaving live-1 integration dimensions.
    struct Pair {
        int slot_a;  // angle slot, -1 means the fixed zero phase
        int slot_b;
        double weight;
    };
    std::vector<Pair> pairs;
    for (size_t a = 0; a < live.size(); ++a) {
        for (size_t b = a + 1; b < live.size(); ++b) {
            const int pa = live[a], pb = live[b];
            const double pol = (pa == 0 || pb == 0) ? std::cos(p.theta) : 1.0;
            const double w = 2.0 * p.eta / double(M) *
                             std::sqrt(intensities[size_t(pa)] * intensities[size_t(pb)]) * pol;
            pairs.push_back(Pair{int(a) - 1, int(b) - 1, w});
        }
    }
    const int dims = int(live.size()) - 1;
    const auto integrand = [&pairs](const double* angles) {
        double e = 0.0;
        for (const Pair& q : pairs) {
            const double pa = q.slot_a < 0 ? 0.0 : angles[q.slot_a];
            const double pb = q.slot_b < 0 ? 0.0 : angles[q.slot_b];
            e += q.weight * std::cos(pa - pb);
        }
        return std::exp(e);
    };

    double mean = 0.0;
    GainInfo result;
    if (dims <= 4) {
        int k = quad.nodes;
        double prev = periodic_mean(dims, k, integrand);
        result.evaluations = std::uint64_t(std::pow(double(k), dims));
        double rel = HUGE_VAL;
        bool converged = false;
        for (int d = 0; d < quad.max_doublings; ++d) {
            k *= 2;
            const double next = periodic_mean(dims, k, integrand);
            result.evaluations += std::uint64_t(std::pow(double(k), dims));
            rel = std::abs(next - prev) / std::max(std::abs(next), 1e-300);
            prev = next;
            if (rel <= quad.rel_tol) {
                converged = true;
                break;
            }
        }
        if (!converged) throw QuadratureError(rel, quad.rel_tol);
        mean = prev;
        result.rel_error = rel;
        result.monte_carlo = false;
    } else {
        std::uint64_t n = 1'000'000;
        double rel = HUGE_VAL;
        bool converged = false;
        while (n <= quad.mc_max_samples) {
            const MeanEstimate est = mc_mean(dims, n, quad.mc_seed, integrand);
            result.evaluations += n;
            rel = est.std_error / std::max(std::abs(est.mean), 1e-300);
            if (rel <= quad.mc_target_rel_stderr) {
                mean = est.mean;
                converged = true;
                break;
            }
            n *= 2;
        }
        if (!converged) throw QuadratureError(rel, quad.mc_target_rel_stderr);
        result.rel_error = rel;
        result.monte_carlo = true;
    }
    if (info) *info = result;
    return no_dark * (lit_scale * mean - vac + p.p_dark * vac);
}

GainTable gain_table(const ProtocolParams& p, const QuadratureSpec& quad) {
    p.validate();
    GainTable table;
    table.n_parties = p.n_parties;
    table.g.resize(size_t(1) << p.n_parties);
    std::vector<double> betas(size_t(p.n_parties));
    for (unsigned mask = 0; mask < table.g.size(); ++mask) {
        for (int i = 0; i < p.n_parties; ++i)
            betas[size_t(i)] = (mask >> i) & 1u ? p.beta1 : p.beta0;
        table.g[mask] = gain(p, betas, quad);
    }
    return table;
}

double exact_yield(const ProtocolParams& p, const PhotonTuple& n) {
    p.validate();
    check_tuple(p, n, 12);
    const int M = p.modes();
    const int total = std::accumulate(n.begin(), n.end(), 0);
    const double c2 = std::cos(p.theta) * std::cos(p.theta);
    const double s2 = std::sin(p.theta) * std::sin(p.theta);

    double lit = 0.0;
    std::vector<int> k(n.size(), 0);
    do {
        const int K = std::accumulate(k.begin(), k.end(), 0);
        const int k0 = k[0];
        const int rest = K - k0;
        double coef = ipow(p.eta, K) * ipow(1.0 - p.eta, total - K) / ipow(double(M), K);
        for (size_t i = 0; i < n.size(); ++i)
            coef *= binom(n[i], k[i]) / factorial(k[i]);
        // Polarization overlap between party 0's rotated photons and the rest.
        double w = 0.0;
        for (int l = 0; l <= k0; ++l) {
            const double b = binom(k0, l);
            w += b * b * ipow(c2, l) * ipow(s2, k0 - l) * factorial(rest + l) * factorial(k0 - l);
        }
        lit += coef * w;
    } while (next_in_box(k, n));

    const double vac = ipow(1.0 - p.eta, total);
    return ipow(1.0 - p.p_dark, M - 1) * (lit - vac + p.p_dark * vac);
}

double exact_yield_reference(const ProtocolParams& p, const PhotonTuple& n,
                             double theta0, double theta1) {
    p.validate();
    check_tuple(p, n, 12);
    const int M = p.modes();
    const int total = std::accumulate(n.begin(), n.end(), 0);

    double lit = 0.0;
    std::vector<int> k(n.size(), 0);
    std::vector<double> u, party, merged;
    do {
        const int K = std::accumulate(k.begin(), k.end(), 0);
        double coef = ipow(p.eta, K) * ipow(1.0 - p.eta, total - K) / ipow(double(M), K);
        for (size_t i = 0; i < n.size(); ++i)
            coef *= binom(n[i], k[i]) / factorial(k[i]);

        // Distribute each party's surviving photons over the two polarization
        // axes; u accumulates the joint generating polynomial's coefficients.
        u.assign(1, 1.0);
        for (size_t i = 0; i < n.size(); ++i) {
            const double c = std::cos(i == 0 ? theta0 : theta1);
            const double s = std::sin(i == 0 ? theta0 : theta1);
            party.assign(size_t(k[i]) + 1, 0.0);
            for (int l = 0; l <= k[i]; ++l)
                party[size_t(l)] = binom(k[i], l) * ipow(c, l) * ipow(s, k[i] - l);
            merged.assign(u.size() + party.size() - 1, 0.0);
            for (size_t a = 0; a < u.size(); ++a)
                for (size_t b = 0; b < party.size(); ++b)
                    merged[a + b] += u[a] * party[b];
            u.swap(merged);
        }
        double w = 0.0;
        for (int m = 0; m <= K; ++m) w += u[size_t(m)] * u[size_t(m)] * factorial(m) * factorial(K - m);
        lit += coef * w;
    } while (next_in_box(k, n));

    const double vac = ipow(1.0 - p.eta, total);
    return ipow(1.0 - p.p_dark, M - 1) * (lit - vac + p.p_dark * vac);
}

YieldTable exact_yield_table(const ProtocolParams& p, const std::vector<PhotonTuple>& tuples) {
    p.validate();
    YieldTable table;
    table.n_parties = p.n_parties;
    table.symmetric = true;
    table.kind = YieldKind::exact;
    for (const PhotonTuple& t : tuples) {
        const PhotonTuple c = canonical_tuple(t);
        if (table.values.count(c)) continue;
        table.values.emplace(c, exact_yield(p, c));
    }
    return table;
}

}  // namespace cka
