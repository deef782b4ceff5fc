#pragma once
#include <vector>

namespace cka {

// Sign pattern of the balanced beam-splitter network on M = 2^s modes.
// Entry f(k, i) is the sign of the transfer coefficient from input i to
// output k; the full transfer matrix U has entries f(k,i)/sqrt(M) and is
// orthogonal. Signs follow the bit parity of k AND i, so coefficients are
// computed on demand; dense materialization exists only in the test path.
struct ModeTransform {
    int s = 0;
    int M = 0;
    // +1 or -1; no bounds check (hot path). Callers stay within [0, M).
    int f(int k, int i) const;
};

// Builds the transform for 1 <= s <= 8 (M <= 256). Throws std::domain_error
// outside that range.
ModeTransform build_transform(int s);

// sum_i f(k, i), evaluated by literal summation. Equals M when k = 0 and 0
// otherwise; callers rely on this cancellation identity, and tests verify
// the summation against it. Throws std::out_of_range on a bad index.
long row_sum(const ModeTransform& t, int k);

// Number of pairwise couplers needed to realize the network: s * 2^(s-1).
long beamsplitter_count(int s);

// Test-support path: materializes the same sign pattern by applying the s
// pairing layers one at a time to an integer identity matrix (each layer
// combines mode pairs that differ in one address bit). Kept separate from
// f() so the layered construction and the closed form can be compared.
std::vector<std::vector<long>> dense_from_layers(int s);

}  // namespace cka
