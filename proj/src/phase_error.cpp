#include "cka/phase_error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace cka {
namespace {

// Enumerates tuples n with n_i matching the parity of bit i of v_mask and
// total <= cutoff, invoking fn on each.
template <typename Fn>
void for_each_parity_tuple(int n_parties, unsigned v_mask, int cutoff, Fn&& fn) {
    PhotonTuple n(size_t(n_parties), 0);
    const auto walk = [&](auto&& self, int party, int remaining) -> void {
        if (party == n_parties) {
            fn(n);
            return;
        }
        const int start = (v_mask >> party) & 1u;
        for (int v = start; v <= remaining; v += 2) {
            n[size_t(party)] = v;
            self(self, party + 1, remaining - v);
        }
        n[size_t(party)] = 0;
    };
    walk(walk, 0, cutoff);
}

// Sum of c(n, l) over all n of the right parity; the terms decay
// factorially, so the fixed absolute floor terminates quickly.
double parity_series(double alpha, int l) {
    double sum = 0.0;
    for (int n = l; n < 500; n += 2) {
        const double c = cat_coefficient(alpha, n, l);
        sum += c;
        if (n > 2 && c < 1e-16) break;
    }
    return sum;
}

}  // namespace

double cat_coefficient(double alpha, int n, int l) {
    if (alpha < 0.0) throw std::domain_error("amplitude must be non-negative");
    if (n < 0) throw std::domain_error("photon number must be non-negative");
    if (l != 0 && l != 1) throw std::domain_error("parity label must be 0 or 1");
    if ((n + l) % 2 != 0) return 0.0;
    if (n == 0) return std::exp(-alpha * alpha / 2.0);
    if (alpha == 0.0) return 0.0;
    return std::exp(-alpha * alpha / 2.0 + double(n) * std::log(alpha) -
                    0.5 * std::lgamma(double(n) + 1.0));
}

std::vector<unsigned> parity_set(int n_parties) {
    if (n_parties < 1 || n_parties > 24) throw std::domain_error("party count out of range");
    std::vector<unsigned> out;
    out.reserve(size_t(1) << (n_parties - 1));
    for (unsigned v = 0; v < (1u << n_parties); ++v)
        if (std::popcount(v) % 2 == 0) out.push_back(v);
    return out;
}

double delta_residual(double alpha, int n_parties, unsigned v_mask, int cutoff) {
    if (cutoff < 0) throw std::domain_error("cutoff must be non-negative");
    if (v_mask >> n_parties) throw std::domain_error("parity mask out of range");
    double full = 1.0;
    for (int i = 0; i < n_parties; ++i) full *= parity_series(alpha, (v_mask >> i) & 1u);

    double truncated = 0.0;
    for_each_parity_tuple(n_parties, v_mask, cutoff, [&](const PhotonTuple& n) {
        double prod = 1.0;
        for (int i = 0; i < n_parties; ++i)
            prod *= cat_coefficient(alpha, n[size_t(i)], (v_mask >> i) & 1u);
        truncated += prod;
    });
    // The tail is a sum of non-negative terms; tiny negative values are
    // cancellation noise from the subtraction.
    return std::max(0.0, full - truncated);
}

PhaseErrorBound phase_error_bound(const ProtocolParams& p, const YieldTable& yields,
                                  double pr_kg, int detector) {
    p.validate();
    if (yields.n_parties != p.n_parties)
        throw std::domain_error("yield table does not match the party count");
    if (!(pr_kg > 0.0)) throw std::domain_error("click probability must be positive");
    if (detector < 0 || detector >= p.modes())
        throw std::domain_error("detector index out of range");

    double raw = 0.0;
    for (unsigned v : parity_set(p.n_parties)) {
        double inner = 0.0;
        for_each_parity_tuple(p.n_parties, v, p.cutoff, [&](const PhotonTuple& n) {
            double prod = 1.0;
            for (int i = 0; i < p.n_parties; ++i)
                prod *= cat_coefficient(p.alpha, n[size_t(i)], (v >> i) & 1u);
            inner += prod * std::sqrt(std::max(0.0, yields.at(n)));
        });
        inner += delta_residual(p.alpha, p.n_parties, v, p.cutoff);
        raw += inner * inner;
    }
    raw /= pr_kg;

    PhaseErrorBound out;
    out.raw = raw;
    out.clamped = raw > 0.5;
    out.value = out.clamped ? 0.5 : raw;
    return out;
}

}  // namespace cka
