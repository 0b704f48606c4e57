#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "scimatch/corpus.hpp"

namespace scimatch {

// Forward reference lists, same shape as Corpus::refs. Shuffles return one of
// these instead of mutating the corpus.
using Adjacency = std::vector<std::vector<PaperIdx>>;

// Unordered venue-pair key over interned venue ids.
using PairKey = uint64_t;

inline PairKey pair_key(int32_t a, int32_t b) {
    uint32_t lo = static_cast<uint32_t>(std::min(a, b));
    uint32_t hi = static_cast<uint32_t>(std::max(a, b));
    return (static_cast<uint64_t>(lo) << 32) | hi;
}
inline int32_t pair_lo(PairKey k) { return static_cast<int32_t>(k >> 32); }
inline int32_t pair_hi(PairKey k) { return static_cast<int32_t>(k & 0xffffffffu); }

// Degree- and year-preserving rewiring: cited endpoints are swapped pairwise
// within each (citing year, cited year) stratum, 10 x stratum-size attempts,
// rejecting any swap that would duplicate an edge. Every paper keeps its
// exact number of references into, and citations from, every year.
Adjacency shuffle_citations(const Corpus& c, uint64_t seed);

// Multiset counts of unordered venue pairs drawn from the references of
// papers published in `year`. A paper with reference venues [J1, J1, J2]
// contributes {(J1,J1): 1, (J1,J2): 2}. References without a venue are
// skipped.
std::unordered_map<PairKey, long long> pair_counts(const Corpus& c, const Adjacency& adj,
                                                   int year);

struct PairNullStats {
    long long x = 0;  // observed count
    double xbar = 0;  // mean count over shuffle replicates
    double s = 0;     // population sd over replicates
};

// Keyed by venue pair; covers exactly the pairs observed in the real graph
// for that year (the only ones the z computation can ask about). Pairs
// absent from a replicate contribute zero to that replicate's tally.
using YearPairStats = std::unordered_map<PairKey, PairNullStats>;

// R whole-graph shuffles with sub-seeds mix(seed, r); stats for one year.
YearPairStats null_pair_stats(const Corpus& c, int year, int replicates, uint64_t seed);

// Same replicate streams, tallied for every publication year in one pass.
// null_pair_stats(c, y, R, s) == null_pair_stats_all_years(c, R, s)[y].
std::map<int, YearPairStats> null_pair_stats_all_years(const Corpus& c, int replicates,
                                                       uint64_t seed);

}  // namespace scimatch
