#pragma once
#include <vector>

#include "cka/params.hpp"
#include "cka/tuples.hpp"

namespace cka {

// Fock coefficient of the even (l = 0) or odd (l = 1) coherent-state
// superposition (|alpha> + (-1)^l |-alpha>)/2:
//   c(n, l) = exp(-alpha^2/2) * alpha^n / sqrt(n!)  when n + l is even,
//   0 otherwise.
// The two series together carry the full coherent-state norm:
//   sum_n c(n,0)^2 + c(n,1)^2 = 1.
double cat_coefficient(double alpha, int n, int l);

// All parity bit-vectors v in {0,1}^N with even Hamming weight, as masks
// (bit i = v_i). Exactly 2^(N-1) of them.
std::vector<unsigned> parity_set(int n_parties);

// Tail of the coefficient-product series: sum over all tuples with total
// photon number >= cutoff + 2 of prod_i c(n_i, v_i). Computed as the fully
// factorized product of single-party series minus the truncated sum, each
// single-party series summed until its absolute tail is below 1e-16.
double delta_residual(double alpha, int n_parties, unsigned v_mask, int cutoff);

struct PhaseErrorBound {
    double value = 0.0;    // clamped to [0, 1/2]
    double raw = 0.0;      // unclamped value
    bool clamped = false;  // set when raw exceeded 1/2 (no key extractable)
};

// Upper bound on the phase-error rate from a yield table:
//   (1/pr_kg) * sum_{v in parity set} ( sum_{|n| <= cutoff} prod_i c(n_i, v_i)
//                                       * sqrt(Y_n)  +  delta_residual )^2
// Only tuples with every n_i + v_i even contribute; the enumeration skips
// the rest (their coefficient product is zero). Missing table entries are
// a hard error naming the tuple. The `detector` slot exists for future
// asymmetric-channel support; the symmetric model is detector-independent.
PhaseErrorBound phase_error_bound(const ProtocolParams& p, const YieldTable& yields,
                                  double pr_kg, int detector = 0);

}  // namespace cka
