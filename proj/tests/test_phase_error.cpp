#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cmath>
#include <string>
#include <vector>

#include "cka/channel_stats.hpp"
#include "cka/decoy.hpp"
#include "cka/params.hpp"
#include "cka/phase_error.hpp"

using namespace cka;

namespace {

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

TEST_CASE("superposition coefficients carry parity and the full norm") {
    CHECK(cat_coefficient(0.7, 1, 0) == 0.0);
    CHECK(cat_coefficient(0.7, 2, 1) == 0.0);
    CHECK(cat_coefficient(0.7, 0, 0) == std::exp(-0.7 * 0.7 / 2.0));
    CHECK(cat_coefficient(0.0, 0, 0) == 1.0);
    CHECK(cat_coefficient(0.0, 2, 0) == 0.0);
    CHECK(rel_diff(cat_coefficient(0.9, 3, 1),
                   std::exp(-0.9 * 0.9 / 2.0) * std::pow(0.9, 3) / std::sqrt(6.0)) <= 1e-15);

    for (double alpha : {0.1, 0.45, 0.9, 1.2}) {
        double norm = 0.0;
        for (int n = 0; n < 80; ++n) {
            const double c0 = cat_coefficient(alpha, n, 0);
            const double c1 = cat_coefficient(alpha, n, 1);
            norm += c0 * c0 + c1 * c1;
        }
        CHECK(rel_diff(norm, 1.0) <= 1e-14);
    }
}

TEST_CASE("parity masks enumerate the even-weight half") {
    const auto masks = parity_set(3);
    CHECK(masks == std::vector<unsigned>{0u, 3u, 5u, 6u});
    for (int n = 2; n <= 5; ++n) {
        const auto set = parity_set(n);
        CHECK(set.size() == (size_t(1) << (n - 1)));
        for (unsigned v : set) CHECK(std::popcount(v) % 2 == 0);
    }
}

TEST_CASE("residual tail matches a brute-force complement") {
    const double alpha = 0.8;
    const int cutoff = 4;
    for (unsigned v : parity_set(2)) {
        // Everything with total cutoff < |n| <= 60; beyond 60 the terms are
        // below 1e-40 and cannot affect the comparison.
        double brute = 0.0;
        for (int n0 = (v >> 0) & 1u; n0 <= 60; n0 += 2) {
            for (int n1 = (v >> 1) & 1u; n1 <= 60; n1 += 2) {
                if (n0 + n1 <= cutoff) continue;
                brute += cat_coefficient(alpha, n0, (v >> 0) & 1u) *
                         cat_coefficient(alpha, n1, (v >> 1) & 1u);
            }
        }
        CHECK(rel_diff(delta_residual(alpha, 2, v, cutoff), brute) <= 1e-13);
    }
    CHECK(rel_diff(delta_residual(0.8, 2, 0u, 4), 0.060925512004314841) <= 1e-11);
}

TEST_CASE("residual tail shrinks with the cutoff and with the amplitude") {
    CHECK(delta_residual(0.8, 3, 0u, 6) < delta_residual(0.8, 3, 0u, 4));
    // The tail sets in at total photon number 6, so it scales like alpha^6
    // with 1/sqrt(n!) weights: ~2.1e-8 at alpha = 0.05.
    CHECK(delta_residual(0.05, 3, 0u, 4) < 1e-7);
    CHECK(delta_residual(0.3, 4, 0u, 4) >= 0.0);
}

TEST_CASE("phase-error bound reproduces a hand-assembled two-party case") {
    ProtocolParams p;
    p.n_parties = 2;
    p.s = 1;
    p.eta = 0.3;
    p.alpha = 0.25;
    p.p_dark = 1e-9;
    p.cutoff = 4;
    const YieldTable yields = exact_yield_table(p, scope_tuples(2, 4));
    const double pr = pr_click_kg(p);

    double expected = 0.0;
    for (unsigned v : parity_set(2)) {
        double inner = delta_residual(p.alpha, 2, v, 4);
        for (const PhotonTuple& n : scope_tuples(2, 4)) {
            if (unsigned(n[0] % 2) != ((v >> 0) & 1u) || unsigned(n[1] % 2) != ((v >> 1) & 1u))
                continue;
            inner += cat_coefficient(p.alpha, n[0], (v >> 0) & 1u) *
                     cat_coefficient(p.alpha, n[1], (v >> 1) & 1u) *
                     std::sqrt(std::max(0.0, yields.at(n)));
        }
        expected += inner * inner;
    }
    expected /= pr;

    const PhaseErrorBound bound = phase_error_bound(p, yields, pr);
    CHECK(rel_diff(bound.raw, expected) <= 1e-13);
    CHECK(!bound.clamped);
    CHECK(bound.value == bound.raw);
}

TEST_CASE("bound clamps at one half when the estimate degenerates") {
    ProtocolParams p;
    p.n_parties = 2;
    p.s = 1;
    p.eta = 0.3;
    p.alpha = 0.9;  // large amplitude: the residual swamps the estimate
    p.cutoff = 0;
    YieldTable yields;
    yields.n_parties = 2;
    yields.kind = YieldKind::upper_bound;
    yields.values[{0, 0}] = 1.0;
    const PhaseErrorBound bound = phase_error_bound(p, yields, pr_click_kg(p));
    CHECK(bound.clamped);
    CHECK(bound.value == 0.5);
    CHECK(bound.raw > 0.5);
}

TEST_CASE("missing tuples are a hard error naming the tuple") {
    ProtocolParams p;
    p.n_parties = 2;
    p.s = 1;
    p.eta = 0.3;
    p.alpha = 0.25;
    p.cutoff = 4;
    YieldTable sparse;
    sparse.n_parties = 2;
    sparse.values[{0, 0}] = 0.5;  // nothing else
    try {
        phase_error_bound(p, sparse, 0.01);
        FAIL("expected an out-of-range error");
    } catch (const std::out_of_range& e) {
        CHECK(std::string(e.what()).find("(") != std::string::npos);
    }
}

TEST_CASE("tighter yields give a tighter phase-error bound") {
    ProtocolParams p;
    p.n_parties = 3;
    p.s = 2;
    p.eta = 0.35;
    p.alpha = 0.12;
    p.p_dark = 1e-9;
    p.theta = std::asin(std::sqrt(0.02));
    p.phi = p.theta;
    p.cutoff = 4;
    QuadratureSpec quad;
    const double pr = pr_click_kg(p);

    const YieldTable exact = exact_yield_table(p, scope_tuples(3, 4));
    DecoyContext ctx{p.beta0, p.beta1, 3, gain_table(p, quad)};
    const YieldTable bounds = bound_table(ctx, 4);
    CHECK(phase_error_bound(p, exact, pr).value <=
          phase_error_bound(p, bounds, pr).value + 1e-15);
}

TEST_CASE("invalid bound queries are rejected") {
    ProtocolParams p;
    p.n_parties = 2;
    p.s = 1;
    p.eta = 0.3;
    p.alpha = 0.25;
    p.cutoff = 4;
    const YieldTable yields = exact_yield_table(p, scope_tuples(2, 4));
    CHECK_THROWS_AS(phase_error_bound(p, yields, 0.0), std::domain_error);
    CHECK_THROWS_AS(phase_error_bound(p, yields, 0.01, 7), std::domain_error);
    YieldTable wrong = yields;
    wrong.n_parties = 3;
    CHECK_THROWS_AS(phase_error_bound(p, wrong, 0.01), std::domain_error);
    CHECK_THROWS_AS(cat_coefficient(-0.1, 0, 0), std::domain_error);
    CHECK_THROWS_AS(cat_coefficient(0.5, -1, 0), std::domain_error);
    CHECK_THROWS_AS(cat_coefficient(0.5, 0, 2), std::domain_error);
}
