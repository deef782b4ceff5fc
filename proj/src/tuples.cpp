#include "cka/tuples.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace cka {

std::string tuple_to_string(const PhotonTuple& n) {
    std::string s = "(";
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(n[i]);
    }
    return s + ")";
}

PhotonTuple canonical_tuple(const PhotonTuple& n) {
    if (n.empty()) throw std::domain_error("empty photon tuple");
    for (int v : n)
        if (v < 0) throw std::domain_error("negative photon number in " + tuple_to_string(n));
    PhotonTuple out;
    out.reserve(n.size());
    if (n[0] == 0) {
        out.push_back(0);
        out.insert(out.end(), n.begin() + 1, n.end());
        std::sort(out.begin() + 1, out.end(), std::greater<int>());
        return out;
    }
    PhotonTuple sorted(n);
    std::sort(sorted.begin(), sorted.end(), std::greater<int>());
    // Smallest nonzero entry represents party 0; the rest stay descending.
    std::size_t last_nonzero = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] > 0) last_nonzero = i;
    out.push_back(sorted[last_nonzero]);
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (i != last_nonzero) out.push_back(sorted[i]);
    return out;
}

namespace {

void enumerate(int parties_left, int budget, PhotonTuple& prefix, int total_so_far,
               std::vector<PhotonTuple>& out) {
    if (parties_left == 0) {
        if (total_so_far % 2 == 0) out.push_back(prefix);
        return;
    }
    for (int v = 0; v <= budget; ++v) {
        prefix.push_back(v);
        enumerate(parties_left - 1, budget - v, prefix, total_so_far + v, out);
        prefix.pop_back();
    }
}

}  // namespace

std::vector<PhotonTuple> scope_tuples(int n_parties, int cutoff) {
    if (n_parties < 1) throw std::domain_error("need at least one party");
    if (cutoff < 0 || cutoff % 2 != 0)
        throw std::domain_error("cutoff must be even and non-negative, got " +
                                std::to_string(cutoff));
    std::vector<PhotonTuple> out;
    PhotonTuple prefix;
    enumerate(n_parties, cutoff, prefix, 0, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<PhotonTuple> canonical_scope(int n_parties, int cutoff) {
    std::set<PhotonTuple> reps;
    for (const auto& n : scope_tuples(n_parties, cutoff)) reps.insert(canonical_tuple(n));
    return {reps.begin(), reps.end()};
}

double GainTable::at(unsigned mask) const {
    if (mask >= g.size())
        throw std::out_of_range("gain table has no entry for intensity mask " +
                                std::to_string(mask));
    return g[mask];
}

bool YieldTable::contains(const PhotonTuple& n) const {
    return values.count(symmetric ? canonical_tuple(n) : n) > 0;
}

double YieldTable::at(const PhotonTuple& n) const {
    const PhotonTuple key = symmetric ? canonical_tuple(n) : n;
    auto it = values.find(key);
    if (it == values.end())
        throw std::out_of_range("yield table has no entry for tuple " + tuple_to_string(n) +
                                " (canonical " + tuple_to_string(key) + ")");
    return it->second;
}

}  // namespace cka
