#pragma once
#include <cstdint>
#include <stdexcept>

namespace cka {

// Full description of one symmetric-channel experiment configuration.
// All detection statistics in the library are functions of these fields.
struct ProtocolParams {
    int n_parties = 3;   // N >= 2 parties, each feeding one relay input
    int s = 2;           // beam-splitter layer count; detector count M = 2^s
    double alpha = 0.1;  // signal amplitude: key rounds send |+alpha> or |-alpha>
    double eta = 1.0;    // party-to-relay transmittance in [0, 1]
    double p_dark = 0.0; // dark-count probability per detector per round
    double theta = 0.0;  // polarization misalignment angle (radians)
    double phi = 0.0;    // phase misalignment angle (radians)
    double beta0 = 0.5;  // decoy intensity (mean photon number), larger
    double beta1 = 0.0;  // decoy intensity, smaller
    int cutoff = 4;      // photon-number cutoff n_bar (even, >= 0)

    int modes() const { return 1 << s; }

    // Throws std::domain_error on an invalid combination. eta = 0 and
    // alpha = 0 are allowed (pure dark-count statistics).
    void validate() const;
};

// Controls for the numerical phase integral inside gain evaluation.
// Up to five live parties the integral uses an equispaced tensor-product
// rule with node doubling; beyond that it switches to seeded Monte Carlo.
struct QuadratureSpec {
    int nodes = 32;          // starting nodes per dimension
    double rel_tol = 1e-10;  // node-doubling convergence target
    int max_doublings = 3;
    std::uint64_t mc_seed = 0x5eed;
    double mc_target_rel_stderr = 1e-5;
    std::uint64_t mc_max_samples = 50'000'000;
};

// Thrown when the phase integral cannot meet the requested tolerance;
// carries the error estimate that was actually achieved.
class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(double achieved, double required);
    double achieved_rel_error;
    double required_rel_error;
};

}  // namespace cka
