#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "cka/channel_stats.hpp"
#include "cka/fock_oracle.hpp"
#include "cka/params.hpp"
#include "cka/rng.hpp"

using namespace cka;

namespace {

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

TEST_CASE("no-light probabilities form a consistent family") {
    ProtocolParams p;
    p.n_parties = 3;
    p.s = 2;
    p.eta = 0.45;
    const PhotonTuple n = {1, 1, 0};
    const auto v = no_light_set_probabilities(p, n, 0.3, 0.0);
    REQUIRE(v.size() == 16);
    CHECK(rel_diff(v[0], 1.0) <= 1e-12);  // empty set carries the ensemble weight
    // Demanding darkness on more detectors can only lower the probability.
    for (unsigned set = 0; set < 16; ++set)
        for (int j = 0; j < 4; ++j)
            if (!((set >> j) & 1u)) CHECK(v[set | (1u << j)] <= v[set] + 1e-15);
    // All dark means every photon was lost.
    CHECK(rel_diff(v[15], (1.0 - p.eta) * (1.0 - p.eta)) <= 1e-12);
}

TEST_CASE("propagated yields equal the combinatorial closed form") {
    const double tilt = std::asin(std::sqrt(0.02));
    for (int s : {2, 3}) {
        ProtocolParams p;
        p.n_parties = 3;
        p.s = s;
        p.eta = 0.3;
        p.p_dark = 1e-6;
        p.theta = tilt;
        for (const PhotonTuple& n :
             {PhotonTuple{1, 1, 0}, PhotonTuple{2, 0, 0}, PhotonTuple{1, 1, 2},
              PhotonTuple{0, 2, 2}, PhotonTuple{4, 0, 0}}) {
            CHECK(rel_diff(simulate_yield(p, n), exact_yield(p, n)) <= 1e-9);
        }
    }
}

TEST_CASE("propagated yields track both polarization angles") {
    ProtocolParams p;
    p.n_parties = 3;
    p.s = 2;
    p.eta = 0.5;
    p.p_dark = 0.0;
    const PhotonTuple n = {1, 2, 1};
    CHECK(rel_diff(simulate_yield_general(p, n, 0.55, 0.15),
                   exact_yield_reference(p, n, 0.55, 0.15)) <= 1e-10);
}

TEST_CASE("coherent-state key-round clicks match the closed form") {
    ProtocolParams p;
    p.n_parties = 2;
    p.s = 1;
    p.eta = 0.4;
    p.alpha = 0.5;
    const std::vector<int> opposite = {1, -1};
    CHECK(std::abs(simulate_kg_click(p, opposite, 0)) <= 1e-14);
    CHECK(rel_diff(simulate_kg_click(p, opposite, 1), 1.0 - std::exp(-0.2)) <= 1e-13);

    // A handful of deterministic pseudo-random parameter points.
    for (int t = 0; t < 8; ++t) {
        ProtocolParams q;
        q.n_parties = 2 + int(hash_counter(99, 4 * t) % 3);
        q.s = q.n_parties <= 4 ? 2 : 3;
        q.eta = 0.05 + 0.9 * to_unit(hash_counter(99, 4 * t + 1));
        q.alpha = 0.05 + 0.6 * to_unit(hash_counter(99, 4 * t + 2));
        q.p_dark = 1e-8;
        q.theta = 0.4 * to_unit(hash_counter(99, 4 * t + 3));
        q.phi = 0.3;
        std::vector<int> signs(size_t(q.n_parties));
        for (int i = 0; i < q.n_parties; ++i)
            signs[size_t(i)] = hash_counter(7, std::uint64_t(t * 8 + i)) & 1u ? 1 : -1;
        const int j = int(hash_counter(3, std::uint64_t(t)) % std::uint64_t(q.modes()));
        CHECK(rel_diff(simulate_kg_click(q, signs, j), pr_click_given_signs(q, j, signs)) <= 1e-12);
    }
}

TEST_CASE("sampled gain is deterministic and consistent with quadrature") {
    ProtocolParams p;
    p.n_parties = 3;
    p.s = 2;
    p.eta = 0.2;
    p.p_dark = 1e-9;
    p.theta = std::asin(std::sqrt(0.02));
    const std::vector<double> betas = {0.5, 0.5, 0.5};

    const SampledGain a = sample_gain(p, betas, 200'000, 42);
    const SampledGain b = sample_gain(p, betas, 200'000, 42);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);

    const SampledGain c = sample_gain(p, betas, 200'000, 43);
    CHECK(a.estimate != c.estimate);  // different seed, different draw

    QuadratureSpec quad;
    const double g = gain(p, betas, quad);
    CHECK(std::abs(a.estimate - g) <= 3.0 * a.std_error);
}

TEST_CASE("oracle scope limits are enforced") {
    ProtocolParams p;
    p.n_parties = 5;
    p.s = 3;
    p.eta = 0.3;
    CHECK_THROWS_AS(simulate_yield(p, {1, 1, 0, 0, 0}), std::domain_error);
    ProtocolParams q;
    q.n_parties = 3;
    q.s = 2;
    q.eta = 0.3;
    CHECK_THROWS_AS(simulate_yield(q, {3, 2, 1}), std::domain_error);
    CHECK_THROWS_AS(simulate_yield(q, {1, 1}), std::domain_error);
    ProtocolParams wide;
    wide.n_parties = 3;
    wide.s = 4;
    wide.eta = 0.3;
    CHECK_THROWS_AS(simulate_yield(wide, {1, 1, 0}), std::domain_error);
    CHECK_THROWS_AS(sample_gain(q, {0.5, 0.5, 0.5}, 10, 1), std::domain_error);
    CHECK_THROWS_AS(simulate_kg_click(q, {1, 1, 1}, 9), std::domain_error);
}
