#pragma once
#include <cstdint>
#include <vector>

#include "cka/params.hpp"
#include "cka/tuples.hpp"

namespace cka {

// Probability that only detector j clicks in a key-generation round, given
// the parties' sign choices x_i in {+1, -1}. Closed form of the symmetric
// channel model. Throws std::domain_error on bad signs or detector index.
double pr_click_given_signs(const ProtocolParams& p, int j, const std::vector<int>& signs);

// Probability that a fixed detector clicks alone in a key-generation round,
// averaged over all sign choices (binomial-sum closed form, independent of
// the detector index).
double pr_click_kg(const ProtocolParams& p);

// Sign-error probability between party 0 and any other party, conditioned
// on a single click (closed form). Throws std::domain_error when the click
// probability is zero (the conditional is undefined).
double qber(const ProtocolParams& p);

// Independent cross-check route for qber(): accumulates the mismatch
// probability between party 0's sign and party i's post-processed sign
// directly from pr_click_given_signs over all 2^N sign vectors. Kept
// deliberately separate from the closed form; tests require agreement.
double qber_from_sign_probabilities(const ProtocolParams& p, int i = 1, int j = 0);

struct GainInfo {
    double rel_error = 0.0;         // achieved convergence / standard-error ratio
    std::uint64_t evaluations = 0;  // integrand evaluations spent
    bool monte_carlo = false;       // true when the sampling path was used
};

// Probability that only the chosen detector clicks in a parameter-estimation
// round where party i sends a phase-randomized coherent state of intensity
// intensities[i]. The residual phase average is computed numerically; see
// QuadratureSpec. Throws QuadratureError when the tolerance cannot be met.
double gain(const ProtocolParams& p, const std::vector<double>& intensities,
            const QuadratureSpec& quad, GainInfo* info = nullptr);

// gain() for all 2^N per-party choices from {beta0, beta1}.
GainTable gain_table(const ProtocolParams& p, const QuadratureSpec& quad);

// Probability that only the chosen detector clicks when the parties send
// Fock states with photon numbers n. Exact combinatorial closed form; total
// photon number is capped at 12. theta enters as the polarization rotation
// of party 0 relative to the others (only the difference is observable; a
// test checks this against the two-angle reference below).
double exact_yield(const ProtocolParams& p, const PhotonTuple& n);

// Reference path evaluating the full nested combinatorial sum with
// independent polarization angles for party 0 and for the others.
// exact_yield() is the theta1 = 0 specialization.
double exact_yield_reference(const ProtocolParams& p, const PhotonTuple& n,
                             double theta0, double theta1);

// Batch evaluation over the canonical representatives of the given tuples;
// each symmetry class is computed once and stored under its canonical key.
YieldTable exact_yield_table(const ProtocolParams& p, const std::vector<PhotonTuple>& tuples);

}  // namespace cka
