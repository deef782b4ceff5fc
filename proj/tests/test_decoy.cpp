#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cka/channel_stats.hpp"
#include "cka/decoy.hpp"
#include "cka/params.hpp"
#include "cka/tuples.hpp"

using namespace cka;

namespace {

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Single-sender context: every identity below is hand-checkable.
DecoyContext one_party_context(double beta0, double beta1, const ProtocolParams& p,
                               const QuadratureSpec& quad) {
    ProtocolParams q = p;
    q.beta0 = beta0;
    q.beta1 = beta1;
    DecoyContext ctx;
    ctx.beta0 = beta0;
    ctx.beta1 = beta1;
    ctx.n_parties = 1;
    ctx.gains.n_parties = 1;
    // ProtocolParams insists on two parties, so build the one-sender gains
    // directly from the analytic no-average expression.
    const int M = q.modes();
    const auto g_of = [&](double beta) {
        const double no_dark = std::pow(1.0 - q.p_dark, M - 1);
        const double lit = std::exp(-q.eta * (1.0 - 1.0 / double(M)) * beta);
        const double vac = std::exp(-q.eta * beta);
        return no_dark * (lit - vac + q.p_dark * vac);
    };
    (void)quad;
    ctx.gains.g = {g_of(beta0), g_of(beta1)};
    return ctx;
}

}  // namespace

TEST_CASE("rescaled gain multiplies by the Poisson vacuum weight") {
    ProtocolParams p;
    p.n_parties = 2;
    p.s = 1;
    p.eta = 0.3;
    p.p_dark = 1e-9;
    QuadratureSpec quad;
    DecoyContext ctx{0.5, 0.1, 2, gain_table(p, quad)};
    CHECK(rel_diff(rescaled_gain(ctx, 0u), ctx.gains.at(0) * std::exp(1.0)) <= 1e-15);
    CHECK(rel_diff(rescaled_gain(ctx, 1u), ctx.gains.at(1) * std::exp(0.6)) <= 1e-15);
    CHECK(rel_diff(rescaled_gain(ctx, 3u), ctx.gains.at(3) * std::exp(0.2)) <= 1e-15);
}

TEST_CASE("single-sender combinations reduce to two-gain differences") {
    ProtocolParams p;
    p.n_parties = 2;  // only used for channel constants
    p.s = 2;
    p.eta = 0.3;
    p.p_dark = 1e-9;
    QuadratureSpec quad;
    const DecoyContext ctx = one_party_context(0.5, 0.2, p, quad);
    const double g0 = rescaled_gain(ctx, 0u);
    const double g1 = rescaled_gain(ctx, 1u);
    CHECK(rel_diff(b_of_h(ctx, 1u), g0 - g1) <= 1e-14);
    CHECK(rel_diff(b_of_h(ctx, 0u), 0.2 * g0 - 0.5 * g1) <= 1e-14);
}

TEST_CASE("single-sender vacuum bound with zero low intensity is tight") {
    ProtocolParams p;
    p.n_parties = 2;
    p.s = 2;
    p.eta = 0.3;
    p.p_dark = 1e-9;
    QuadratureSpec quad;
    const DecoyContext ctx = one_party_context(0.5, 0.0, p, quad);
    // With beta1 = 0 the low-intensity gain *is* the vacuum yield, and the
    // bound collapses onto it exactly.
    const double vacuum_gain = ctx.gains.at(1);
    CHECK(rel_diff(yield_upper_bound(ctx, {0}), vacuum_gain) <= 1e-14);
}

TEST_CASE("single-sender two-photon bound matches the closed expression") {
    ProtocolParams p;
    p.n_parties = 2;
    p.s = 2;
    p.eta = 0.3;
    p.p_dark = 1e-9;
    QuadratureSpec quad;
    const DecoyContext ctx = one_party_context(0.5, 0.0, p, quad);
    const double g_high = ctx.gains.at(0);
    const double g_vac = ctx.gains.at(1);
    const double direct = 2.0 * (std::exp(0.5) * g_high - g_vac) / 0.25;
    const double bound = yield_upper_bound(ctx, {2});
    CHECK(rel_diff(bound, std::min(direct, 1.0)) <= 1e-13);
    CHECK(rel_diff(bound, 0.43380324225719674) <= 1e-10);
}

TEST_CASE("bound dominates the exact yield for every in-scope class") {
    ProtocolParams p;
    p.n_parties = 3;
    p.s = 2;
    p.eta = 0.4;
    p.p_dark = 1e-9;
    p.theta = std::asin(std::sqrt(0.02));
    p.beta0 = 0.5;
    p.beta1 = 0.0;
    QuadratureSpec quad;
    DecoyContext ctx{p.beta0, p.beta1, 3, gain_table(p, quad)};
    for (const PhotonTuple& n : canonical_scope(3, 4)) {
        const double exact = exact_yield(p, n);
        const double bound = yield_upper_bound(ctx, n);
        CHECK(bound >= exact - 1e-8);
        CHECK(bound <= 1.0);
    }
}

TEST_CASE("bound is invariant under every entry permutation") {
    ProtocolParams p;
    p.n_parties = 3;
    p.s = 2;
    p.eta = 0.25;
    p.p_dark = 1e-8;
    p.theta = std::asin(std::sqrt(0.02));
    QuadratureSpec quad;
    DecoyContext ctx{0.5, 0.0, 3, gain_table(p, quad)};
    // The inversion sees only which parties sent vacuum and the nonzero
    // multiset, and parties 1..N-1 enter the gains symmetrically.
    CHECK(yield_upper_bound(ctx, {2, 1, 1}) == doctest::Approx(yield_upper_bound(ctx, {1, 2, 1})).epsilon(1e-12));
    CHECK(yield_upper_bound(ctx, {1, 3, 0}) == doctest::Approx(yield_upper_bound(ctx, {3, 1, 0})).epsilon(1e-12));
    CHECK(yield_upper_bound(ctx, {0, 1, 3}) == doctest::Approx(yield_upper_bound(ctx, {0, 3, 1})).epsilon(1e-12));
}

TEST_CASE("bound table covers the canonical scope") {
    ProtocolParams p;
    p.n_parties = 3;
    p.s = 2;
    p.eta = 0.25;
    p.p_dark = 1e-8;
    QuadratureSpec quad;
    DecoyContext ctx{0.5, 0.0, 3, gain_table(p, quad)};
    const YieldTable table = bound_table(ctx, 4);
    CHECK(table.kind == YieldKind::upper_bound);
    CHECK(table.values.size() == canonical_scope(3, 4).size());
    for (const PhotonTuple& n : scope_tuples(3, 4)) CHECK(table.contains(n));
    CHECK(table.at({1, 1, 2}) == yield_upper_bound(ctx, canonical_tuple({1, 1, 2})));
    CHECK_THROWS_AS(table.at({6, 0, 0}), std::out_of_range);
}

TEST_CASE("inconsistent gains floor at zero instead of going negative") {
    DecoyContext ctx;
    ctx.beta0 = 0.5;
    ctx.beta1 = 0.0;
    ctx.n_parties = 1;
    ctx.gains.n_parties = 1;
    // A larger vacuum gain than signal gain cannot come from the model; the
    // inversion then produces a negative raw estimate.
    ctx.gains.g = {0.01, 0.5};
    double raw = 0.0;
    const double bound = yield_upper_bound(ctx, {1}, &raw);
    CHECK(raw < 0.0);
    CHECK(bound == 0.0);
}

TEST_CASE("degenerate or malformed contexts are rejected") {
    ProtocolParams p;
    p.n_parties = 2;
    p.s = 1;
    p.eta = 0.3;
    QuadratureSpec quad;
    DecoyContext ctx{0.5, 0.5, 2, gain_table(p, quad)};
    CHECK_THROWS_AS(yield_upper_bound(ctx, {1, 0}), std::domain_error);
    DecoyContext ok{0.5, 0.1, 2, gain_table(p, quad)};
    CHECK_THROWS_AS(yield_upper_bound(ok, {1}), std::domain_error);
    CHECK_THROWS_AS(yield_upper_bound(ok, {-1, 0}), std::domain_error);
    DecoyContext mismatched{0.5, 0.1, 3, gain_table(p, quad)};
    CHECK_THROWS_AS(yield_upper_bound(mismatched, {1, 0, 0}), std::domain_error);
}
