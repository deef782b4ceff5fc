#include "cka/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cka/channel_stats.hpp"
#include "cka/decoy.hpp"
#include "cka/phase_error.hpp"

namespace cka {

double binary_entropy(double x) {
    if (x < 0.0 || x > 1.0) throw std::domain_error("binary entropy argument outside [0, 1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double multicast_bound_star(double eta) {
    if (eta < 0.0 || eta * eta >= 1.0)
        throw std::domain_error("transmittance must satisfy 0 <= eta^2 < 1");
    return -std::log2(1.0 - eta * eta);
}

double multicast_bound_full(double eta, int n_parties) {
    if (n_parties < 2) throw std::domain_error("need at least two parties");
    return double(n_parties - 1) * multicast_bound_star(eta);
}

YieldTable build_yield_table(const ProtocolParams& p, YieldMode mode, const QuadratureSpec& quad) {
    p.validate();
    if (mode == YieldMode::exact_yields)
        return exact_yield_table(p, scope_tuples(p.n_parties, p.cutoff));
    DecoyContext ctx{p.beta0, p.beta1, p.n_parties, gain_table(p, quad)};
    return bound_table(ctx, p.cutoff, /*symmetric=*/true);
}

double assemble_rate(int modes, double pr_kg, double q_z_bar, double q_x, bool clamped) {
    if (clamped) return 0.0;
    const double bracket = 1.0 - binary_entropy(q_z_bar) - binary_entropy(q_x);
    return std::max(0.0, double(modes) * pr_kg * bracket);
}

RateBreakdown rate_with_yields(const ProtocolParams& p, const YieldTable& yields) {
    p.validate();
    RateBreakdown out;
    out.pr_kg = pr_click_kg(p);
    if (!(out.pr_kg > 0.0)) {
        // No clicks at all (alpha = 0 with no dark counts): nothing to key.
        out.pr_kg = 0.0;
        out.q_z_bar = 0.5;
        out.clamped = true;
        return out;
    }
    out.q_x = qber(p);
    const PhaseErrorBound bound = phase_error_bound(p, yields, out.pr_kg);
    out.q_z_bar = bound.value;
    out.clamped = bound.clamped;
    out.rate = assemble_rate(p.modes(), out.pr_kg, out.q_z_bar, out.q_x, out.clamped);
    return out;
}

RateBreakdown key_rate_symmetric(const ProtocolParams& p, YieldMode mode,
                                 const QuadratureSpec& quad) {
    const YieldTable yields = build_yield_table(p, mode, quad);
    return rate_with_yields(p, yields);
}

OptResult maximize_unimodal(const std::function<double(double)>& rate_of_alpha,
                            const SearchSpec& search) {
    if (!(search.alpha_max > search.alpha_min) || search.grid_points < 2 || !(search.tol > 0.0))
        throw std::domain_error("invalid amplitude search window");

    const int n = search.grid_points;
    std::vector<double> grid(size_t(n), 0.0);
    std::vector<double> value(size_t(n), 0.0);
    for (int j = 1; j <= n; ++j)
        grid[size_t(j - 1)] = search.alpha_min +
                              (search.alpha_max - search.alpha_min) * double(j) / double(n);
    int best = 0;
    for (int i = 0; i < n; ++i) {
        value[size_t(i)] = rate_of_alpha(grid[size_t(i)]);
        if (value[size_t(i)] > value[size_t(best)]) best = i;
    }

    OptResult out;
    if (!(value[size_t(best)] > 0.0)) {
        out.alpha_opt = grid[0];
        out.at_opt.rate = 0.0;
        out.no_key = true;
        return out;
    }

    double a = best == 0 ? search.alpha_min : grid[size_t(best - 1)];
    double b = best == n - 1 ? grid[size_t(n - 1)] : grid[size_t(best + 1)];
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = rate_of_alpha(c);
    double fd = rate_of_alpha(d);
    while (b - a > search.tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = rate_of_alpha(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = rate_of_alpha(d);
        }
    }
    const double mid = (a + b) / 2.0;
    const double fmid = rate_of_alpha(mid);
    if (fmid >= value[size_t(best)]) {
        out.alpha_opt = mid;
        out.at_opt.rate = fmid;
    } else {
        // Refinement lost to the coarse scan (non-unimodal shape): keep the
        // best point actually seen.
        out.alpha_opt = grid[size_t(best)];
        out.at_opt.rate = value[size_t(best)];
    }
    return out;
}

OptResult optimize_alpha(const ProtocolParams& p, YieldMode mode, const QuadratureSpec& quad,
                         const SearchSpec& search) {
    const YieldTable yields = build_yield_table(p, mode, quad);
    ProtocolParams q = p;
    OptResult out = maximize_unimodal(
        [&](double alpha) {
            q.alpha = alpha;
            return rate_with_yields(q, yields).rate;
        },
        search);
    q.alpha = out.alpha_opt;
    out.at_opt = rate_with_yields(q, yields);
    return out;
}

}  // namespace cka
