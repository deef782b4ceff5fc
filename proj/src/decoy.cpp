#include "cka/decoy.hpp"

#include <bit>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace cka {
namespace {

double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

double factorial(int n) {
    if (n < 0 || n > 20) throw std::domain_error("factorial argument out of range");
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= double(i);
    return r;
}

void check_context(const DecoyContext& ctx) {
    if (ctx.n_parties < 1) throw std::domain_error("decoy context needs at least one party");
    if (!(ctx.beta0 > ctx.beta1) || ctx.beta1 < 0.0)
        throw std::domain_error("decoy intensities must satisfy beta0 > beta1 >= 0");
    if (ctx.gains.n_parties != ctx.n_parties ||
        ctx.gains.g.size() != (size_t(1) << ctx.n_parties))
        throw std::domain_error("gain table does not match the party count");
}

}  // namespace

double rescaled_gain(const DecoyContext& ctx, unsigned f_mask) {
    check_context(ctx);
    double sum = 0.0;
    for (int i = 0; i < ctx.n_parties; ++i)
        sum += (f_mask >> i) & 1u ? ctx.beta1 : ctx.beta0;
    return ctx.gains.at(f_mask) * std::exp(sum);
}

double b_of_h(const DecoyContext& ctx, unsigned h_mask) {
    check_context(ctx);
    if (h_mask >> ctx.n_parties) throw std::domain_error("target-set mask out of range");
    double acc = 0.0;
    for (unsigned f = 0; f < (1u << ctx.n_parties); ++f) {
        double term = std::popcount(f) % 2 ? -1.0 : 1.0;
        for (int i = 0; i < ctx.n_parties; ++i) {
            if ((h_mask >> i) & 1u) continue;  // nonzero-index parties carry no prefactor
            // Vacuum parties get the intensity they did NOT send, which
            // cancels their single-photon term between the two gains.
            term *= (f >> i) & 1u ? ctx.beta0 : ctx.beta1;
        }
        acc += term * rescaled_gain(ctx, f);
    }
    return acc;
}

double yield_upper_bound(const DecoyContext& ctx, const PhotonTuple& n, double* raw) {
    check_context(ctx);
    if (int(n.size()) != ctx.n_parties)
        throw std::domain_error("photon tuple length must equal the party count");
    for (int v : n)
        if (v < 0) throw std::domain_error("photon numbers must be non-negative");

    const int N = ctx.n_parties;
    const double b0 = ctx.beta0, b1 = ctx.beta1;

    unsigned h = 0;
    double front = 1.0;
    for (int i = 0; i < N; ++i) {
        if (n[size_t(i)] >= 1) {
            h |= 1u << i;
            front *= factorial(n[size_t(i)]) / (ipow(b0, n[size_t(i)]) - ipow(b1, n[size_t(i)]));
        }
    }
    const int m = std::popcount(h);

    const double base = b_of_h(ctx, h) * (((N - m) % 2) ? -1.0 : 1.0) / ipow(b0 - b1, N - m);

    // Correction for vacuum parties: their zero-photon terms cannot be
    // isolated with two intensities, so the odd part of the remainder is
    // bounded and added back.
    double corr = 0.0;
    if (m < N) {
        const double rho = (b1 * std::exp(b0) - b0 * std::exp(b1) + b0 - b1) / (b0 - b1);
        const int vac = N - m;
        for (int j = 1; j <= vac; j += 2) {
            double comb = 1.0;  // C(vac, j)
            for (int t = 0; t < j; ++t) comb = comb * double(vac - t) / double(t + 1);
            corr += comb * ipow(rho, j);
        }
        corr *= ipow(std::exp(b0) - std::exp(b1), m);
    }

    const double value = front * (base + corr);
    if (raw) *raw = value;
    if (value < 0.0) {
        std::cerr << "warning: negative yield bound " << value << " for tuple "
                  << tuple_to_string(n) << ", flooring at 0\n";
        return 0.0;
    }
    return std::min(value, 1.0);
}

YieldTable bound_table(const DecoyContext& ctx, int cutoff, bool symmetric) {
    check_context(ctx);
    YieldTable table;
    table.n_parties = ctx.n_parties;
    table.symmetric = symmetric;
    table.kind = YieldKind::upper_bound;
    const auto tuples = symmetric ? canonical_scope(ctx.n_parties, cutoff)
                                  : scope_tuples(ctx.n_parties, cutoff);
    for (const PhotonTuple& t : tuples) table.values.emplace(t, yield_upper_bound(ctx, t));
    return table;
}

}  // namespace cka
