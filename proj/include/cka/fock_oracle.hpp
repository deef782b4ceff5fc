#pragma once
#include <cstdint>
#include <vector>

#include "cka/params.hpp"
#include "cka/tuples.hpp"

namespace cka {

// Independent brute-force verifier for the closed-form detection
// statistics. States are propagated explicitly: Fock inputs through the
// loss channel's binomial branches and the beam-splitter network in a
// truncated occupation basis, coherent inputs as complex mode amplitudes.
// Detection is always evaluated analytically from the final state, never
// by sampling clicks. Oracle scale only: N <= 4, M <= 8, total photons <= 4.

// Joint probabilities that every detector in a given spatial-mode set sees
// no photon, for Fock inputs n after loss, polarization rotation (theta0
// for party 0, theta1 for the rest), and the network transform. Returned
// vector is indexed by detector-set bitmask (size 2^M). The empty set has
// probability 1, which doubles as an ensemble-weight check.
std::vector<double> no_light_set_probabilities(const ProtocolParams& p, const PhotonTuple& n,
                                               double theta0, double theta1);

// Probability that only one chosen detector clicks for Fock inputs n.
// Evaluates all detectors, checks they agree (the symmetric model is
// detector-independent), and returns the common value.
double simulate_yield(const ProtocolParams& p, const PhotonTuple& n);

// Same with independent polarization angles for party 0 and the others.
double simulate_yield_general(const ProtocolParams& p, const PhotonTuple& n,
                              double theta0, double theta1);

// Probability that only detector j clicks in a key-generation round with
// sign choices x. Assembled from coherent amplitude propagation: loss
// scales amplitudes by sqrt(eta), the network maps them with the sign
// pattern over sqrt(M), and a coherent state produces no click with
// probability exp(-|amplitude|^2) per mode.
double simulate_kg_click(const ProtocolParams& p, const std::vector<int>& signs, int j);

struct SampledGain {
    double estimate = 0.0;
    double std_error = 0.0;
};

// Monte Carlo estimate of the parameter-estimation gain: draws i.i.d.
// uniform phases for each party, evaluates the fixed-phase coherent click
// probability analytically, and averages. Deterministic for a fixed seed.
// Requires n_samples >= 1000.
SampledGain sample_gain(const ProtocolParams& p, const std::vector<double>& intensities,
                        std::uint64_t n_samples, std::uint64_t seed);

}  // namespace cka
