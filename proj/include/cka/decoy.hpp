#pragma once
#include "cka/tuples.hpp"

namespace cka {

// Inputs of the two-decoy yield estimation: the two intensities shared by
// all parties and the measured (or modeled) gain table.
struct DecoyContext {
    double beta0 = 0.5;  // larger intensity
    double beta1 = 0.0;  // smaller intensity
    int n_parties = 0;
    GainTable gains;
};

// Gain divided by the Poissonian vacuum weight of the chosen intensities:
// G * exp(sum_i beta_{f_i}). Bit i of f_mask selects party i's intensity
// (0 -> beta0, 1 -> beta1).
double rescaled_gain(const DecoyContext& ctx, unsigned f_mask);

// Signed combination of all 2^N rescaled gains that isolates, for each
// party outside the target set h, the linear-in-intensity part of the
// Poisson expansion: sum_f (-1)^|f| * prod_{i: h_i=0} beta_{choice} * G~_f.
// May be negative. Bit i of h_mask marks parties whose yield index is
// nonzero.
double b_of_h(const DecoyContext& ctx, unsigned h_mask);

// Analytic upper bound on the yield of photon tuple n from the two-decoy
// gain table, clipped to [0, 1]. A negative raw value (possible only when
// the gains are inconsistent, e.g. from quadrature error) is floored at 0
// with a warning on stderr. If `raw` is non-null it receives the unclipped
// value. Throws std::domain_error when beta0 == beta1 (the inversion
// divides by their difference).
double yield_upper_bound(const DecoyContext& ctx, const PhotonTuple& n, double* raw = nullptr);

// Upper bounds for every tuple that can contribute to the phase-error
// bound at the given cutoff (even total <= cutoff). With `symmetric` set,
// only canonical representatives are computed and stored; the bound is
// exactly invariant within each class. Tuples above the cutoff are not
// stored: their trivial bound of 1 is accounted for by the residual term
// of the phase-error bound, never by silent lookup substitution.
YieldTable bound_table(const DecoyContext& ctx, int cutoff, bool symmetric = true);

}  // namespace cka
