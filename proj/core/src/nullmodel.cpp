#include "scimatch/nullmodel.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "scimatch/rng.hpp"

namespace scimatch {

namespace {

inline uint64_t edge_key(PaperIdx citing, PaperIdx cited) {
    return (static_cast<uint64_t>(citing) << 32) | cited;
}

}  // namespace

Adjacency shuffle_citations(const Corpus& c, uint64_t seed) {
    Adjacency adj(c.n_papers());
    Rng rng(seed);
    std::vector<PaperIdx> cited;
    std::unordered_set<uint64_t> present;

    for (const auto& [key, edges] : c.strata()) {
        const size_t m = edges.size();
        if (m < 2) {
            for (const auto& [u, v] : edges) adj[u].push_back(v);
            continue;
        }
        cited.clear();
        cited.reserve(m);
        present.clear();
        present.reserve(m * 2);
        for (const auto& [u, v] : edges) {
            cited.push_back(v);
            present.insert(edge_key(u, v));
        }
        const uint64_t attempts = 10ull * m;
        for (uint64_t t = 0; t < attempts; ++t) {
            size_t i = static_cast<size_t>(rng.below(m));
            size_t j = static_cast<size_t>(rng.below(m));
            if (i == j) continue;
            PaperIdx ui = edges[i].first, uj = edges[j].first;
            PaperIdx vi = cited[i], vj = cited[j];
            if (ui == uj || vi == vj) continue;  // swap would be a no-op
            // a swapped edge may not collide with an existing one, and a
            // cited paper never equals its citing paper inside a stratum of
            // distinct years; within the (y, y) stratum it can, so check
            if (ui == vj || uj == vi) continue;
            if (present.count(edge_key(ui, vj)) || present.count(edge_key(uj, vi))) continue;
            present.erase(edge_key(ui, vi));
            present.erase(edge_key(uj, vj));
            present.insert(edge_key(ui, vj));
            present.insert(edge_key(uj, vi));
            std::swap(cited[i], cited[j]);
        }
        for (size_t e = 0; e < m; ++e) adj[edges[e].first].push_back(cited[e]);
    }
    return adj;
}

std::unordered_map<PairKey, long long> pair_counts(const Corpus& c, const Adjacency& adj,
                                                   int year) {
    std::unordered_map<PairKey, long long> counts;
    std::vector<int32_t> venues;
    for (PaperIdx p : c.papers_in_year(year)) {
        venues.clear();
        for (PaperIdx r : adj[p]) {
            int32_t v = c.papers[r].venue;
            if (v >= 0) venues.push_back(v);
        }
        for (size_t i = 0; i + 1 < venues.size(); ++i)
            for (size_t j = i + 1; j < venues.size(); ++j)
                ++counts[pair_key(venues[i], venues[j])];
    }
    return counts;
}

namespace {

struct Accum {
    double sum = 0;
    double sumsq = 0;
};

using YearAccum = std::unordered_map<PairKey, Accum>;

// years worth tallying: those with at least one paper
std::vector<int> tally_years(const Corpus& c) {
    std::vector<int> years;
    if (c.n_papers() == 0) return years;
    for (int y = c.min_year; y <= c.max_year; ++y)
        if (!c.papers_in_year(y).empty()) years.push_back(y);
    return years;
}

}  // namespace

std::map<int, YearPairStats> null_pair_stats_all_years(const Corpus& c, int replicates,
                                                       uint64_t seed) {
    if (replicates < 1) throw std::invalid_argument("null model needs at least one replicate");

    std::map<int, YearPairStats> out;
    std::map<int, YearAccum> accum;
    const std::vector<int> years = tally_years(c);

    for (int y : years) {
        auto observed = pair_counts(c, c.refs, y);
        auto& stats = out[y];
        stats.reserve(observed.size());
        for (const auto& [k, n] : observed) stats[k].x = n;
        accum[y].reserve(observed.size());
        for (const auto& [k, n] : observed) accum[y][k];
    }

    for (int rep = 0; rep < replicates; ++rep) {
        Adjacency adj = shuffle_citations(c, sub_seed(seed, static_cast<uint64_t>(rep)));
        for (int y : years) {
            auto tally = pair_counts(c, adj, y);
            auto& acc = accum[y];
            for (auto& [k, a] : acc) {
                auto it = tally.find(k);
                double v = it == tally.end() ? 0.0 : static_cast<double>(it->second);
                a.sum += v;
                a.sumsq += v * v;
            }
        }
    }

    const double R = static_cast<double>(replicates);
    for (auto& [y, stats] : out) {
        const auto& acc = accum[y];
        for (auto& [k, st] : stats) {
            const Accum& a = acc.at(k);
            st.xbar = a.sum / R;
            double var = a.sumsq / R - st.xbar * st.xbar;
            st.s = var > 0 ? std::sqrt(var) : 0.0;
        }
    }
    return out;
}

YearPairStats null_pair_stats(const Corpus& c, int year, int replicates, uint64_t seed) {
    if (replicates < 1) throw std::invalid_argument("null model needs at least one replicate");

    auto observed = pair_counts(c, c.refs, year);
    YearPairStats stats;
    stats.reserve(observed.size());
    for (const auto& [k, n] : observed) stats[k].x = n;
    YearAccum acc;
    acc.reserve(observed.size());
    for (const auto& [k, n] : observed) acc[k];

    for (int rep = 0; rep < replicates; ++rep) {
        Adjacency adj = shuffle_citations(c, sub_seed(seed, static_cast<uint64_t>(rep)));
        auto tally = pair_counts(c, adj, year);
        for (auto& [k, a] : acc) {
            auto it = tally.find(k);
            double v = it == tally.end() ? 0.0 : static_cast<double>(it->second);
            a.sum += v;
            a.sumsq += v * v;
        }
    }

    const double R = static_cast<double>(replicates);
    for (auto& [k, st] : stats) {
        const Accum& a = acc.at(k);
        st.xbar = a.sum / R;
        double var = a.sumsq / R - st.xbar * st.xbar;
        st.s = var > 0 ? std::sqrt(var) : 0.0;
    }
    return stats;
}

}  // namespace scimatch
