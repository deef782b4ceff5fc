#pragma once
#include <map>
#include <string>
#include <vector>

namespace cka {

// Photon-number tuple (n_0, ..., n_{N-1}), one entry per party.
using PhotonTuple = std::vector<int>;

std::string tuple_to_string(const PhotonTuple& n);  // "(1,0,2)"

// Canonical representative of a tuple's symmetry class in the symmetric
// channel model. Two reductions are applied:
//  (a) parties 1..N-1 may be permuted freely (their signals enter the relay
//      identically up to relabeling), and
//  (b) tuples with the same sorted entry multiset and the same party-0
//      vacuum flag are identified. The two-decoy yield bound is exactly
//      invariant under (b) (it depends only on the nonzero entries and on
//      which parties sent vacuum), and for exact yields (b) is exact
//      whenever at most two entries are nonzero; a unit test pins the one
//      in-scope class where it is only approximate.
// Representative layout: party 0 gets 0 if the class has a vacuum there,
// otherwise the smallest nonzero entry; the rest are sorted descending.
PhotonTuple canonical_tuple(const PhotonTuple& n);

// All tuples with even total photon number <= cutoff (the only tuples that
// can contribute to the phase-error bound), in lexicographic order.
std::vector<PhotonTuple> scope_tuples(int n_parties, int cutoff);

// Unique canonical representatives of scope_tuples, sorted.
std::vector<PhotonTuple> canonical_scope(int n_parties, int cutoff);

// Gain values for every choice of per-party decoy intensity. Index bit i
// gives party i's choice: 0 selects the larger intensity, 1 the smaller.
struct GainTable {
    int n_parties = 0;
    std::vector<double> g;  // size 2^n_parties

    double at(unsigned mask) const;
};

enum class YieldKind { exact, upper_bound };

// Yield values (exact or upper bounds) keyed by photon tuple. When
// `symmetric` is set, lookups canonicalize the query first and the stored
// keys are canonical representatives.
struct YieldTable {
    int n_parties = 0;
    bool symmetric = true;
    YieldKind kind = YieldKind::exact;
    std::map<PhotonTuple, double> values;

    bool contains(const PhotonTuple& n) const;
    // Throws std::out_of_range naming the tuple if absent: a missing entry
    // means the table builder was asked for too small a scope, and silently
    // substituting a trivial bound would hide that.
    double at(const PhotonTuple& n) const;
};

}  // namespace cka
