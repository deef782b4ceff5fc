#pragma once
#include <functional>

#include "cka/params.hpp"
#include "cka/tuples.hpp"

namespace cka {

// h(x) = -x log2 x - (1-x) log2 (1-x), with h(0) = h(1) = 0 by continuity.
// Throws std::domain_error outside [0, 1].
double binary_entropy(double x);

// Single-message multicast capacity bound of the star network obtained by
// removing the relay: -log2(1 - eta^2), where eta^2 is the party-to-party
// transmittance. Throws std::domain_error when eta^2 >= 1.
double multicast_bound_star(double eta);

// Same bound for the fully connected network: (N-1) times the star bound.
double multicast_bound_full(double eta, int n_parties);

enum class YieldMode { exact_yields, two_decoy };

struct RateBreakdown {
    double pr_kg = 0.0;
    double q_x = 0.0;
    double q_z_bar = 0.0;
    double rate = 0.0;
    bool clamped = false;  // phase-error bound hit 1/2: rate forced to 0
};

// One row of a loss sweep.
struct KeyRatePoint {
    double loss_db = 0.0;  // party-to-party loss
    double eta = 0.0;      // party-to-relay transmittance
    double alpha_opt = 0.0;
    double pr_kg = 0.0;
    double q_x = 0.0;
    double q_z_bar = 0.0;
    double rate = 0.0;  // conference key bits per protocol round
    double r1 = 0.0;    // star-network multicast bound
    double r2 = 0.0;    // fully-connected multicast bound
};

// Yield table for the requested mode. Independent of p.alpha, so one table
// serves a whole amplitude optimization at fixed channel parameters.
YieldTable build_yield_table(const ProtocolParams& p, YieldMode mode, const QuadratureSpec& quad);

// Rate at p.alpha given a prebuilt yield table:
//   r = max{0, M * pr_kg * (1 - h(q_z_bar) - h(q_x))},
// forced to 0 when the phase-error bound clamps at 1/2.
RateBreakdown rate_with_yields(const ProtocolParams& p, const YieldTable& yields);

// Convenience: build_yield_table + rate_with_yields.
RateBreakdown key_rate_symmetric(const ProtocolParams& p, YieldMode mode, const QuadratureSpec& quad);

// Final assembly step, exposed so tests can inject synthetic error rates.
double assemble_rate(int modes, double pr_kg, double q_z_bar, double q_x, bool clamped);

struct SearchSpec {
    double alpha_min = 0.0;  // grid is open at alpha_min: points exceed it
    double alpha_max = 1.2;
    int grid_points = 40;
    double tol = 1e-3;  // absolute alpha tolerance of the refinement stage
};

struct OptResult {
    double alpha_opt = 0.0;
    RateBreakdown at_opt;
    bool no_key = false;  // every grid point gave zero rate
};

// Coarse grid scan followed by golden-section refinement of the best
// bracket. Deterministic; evaluations may be reordered freely since each
// is a pure function of alpha.
OptResult maximize_unimodal(const std::function<double(double)>& rate_of_alpha,
                            const SearchSpec& search);

// Amplitude optimization of the key rate at fixed channel parameters
// (p.alpha is ignored). The yield table is built once and reused across
// all alpha evaluations. When no grid point yields a key, returns rate 0
// at the smallest grid alpha with no_key set.
OptResult optimize_alpha(const ProtocolParams& p, YieldMode mode, const QuadratureSpec& quad,
                         const SearchSpec& search = {});

}  // namespace cka
