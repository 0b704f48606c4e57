#include "scimatch/novelty.hpp"

#include <cmath>
#include <stdexcept>

#include "scimatch/stats.hpp"

namespace scimatch {

double pair_z(double x, double xbar, double s) {
    if (s == 0.0) {
        if (x == xbar) return 0.0;
        return x > xbar ? 10.0 : -10.0;
    }
    return (x - xbar) / s;
}

std::optional<PaperZProfile> paper_z_profile(const Corpus& corpus, PaperIdx paper,
                                             const YearPairStats& stats) {
    std::vector<int32_t> venues;
    for (PaperIdx ref : corpus.refs[paper]) {
        int32_t v = corpus.papers[ref].venue;
        if (v >= 0) venues.push_back(v);
    }
    if (venues.size() < 2) return std::nullopt;

    PaperZProfile prof;
    prof.paper = paper;
    prof.z.reserve(venues.size() * (venues.size() - 1) / 2);
    for (size_t i = 0; i < venues.size(); ++i) {
        for (size_t j = i + 1; j < venues.size(); ++j) {
            PairKey key = pair_key(venues[i], venues[j]);
            auto it = stats.find(key);
            if (it == stats.end())
                throw std::logic_error("paper_z_profile: venue pair missing from null stats");
            prof.z.push_back(pair_z(it->second.x, it->second.xbar, it->second.s));
        }
    }
    prof.median_z = median_upper(prof.z);
    prof.p10_z = percentile_nearest_rank(prof.z, 0.10);
    return prof;
}

std::optional<double> yearly_median_cutoff(const std::vector<PaperZProfile>& profiles) {
    if (profiles.empty()) return std::nullopt;
    std::vector<double> medians;
    medians.reserve(profiles.size());
    for (const auto& p : profiles) medians.push_back(p.median_z);
    return median_upper(std::move(medians));
}

bool classify_novel(const PaperZProfile& profile, double cutoff) {
    return profile.median_z > cutoff && profile.p10_z <= 0.0;
}

std::vector<NoveltyResult> compute_novelty(const Corpus& corpus,
                                           const std::map<int, YearPairStats>& stats_by_year) {
    std::vector<NoveltyResult> out(corpus.papers.size());
    std::map<int, std::vector<PaperZProfile>> by_year;

    for (PaperIdx p = 0; p < corpus.papers.size(); ++p) {
        out[p].paper = p;
        auto sit = stats_by_year.find(corpus.papers[p].pub_year);
        if (sit == stats_by_year.end()) continue;
        auto prof = paper_z_profile(corpus, p, sit->second);
        if (!prof) continue;
        by_year[corpus.papers[p].pub_year].push_back(std::move(*prof));
    }

    for (const auto& [year, profiles] : by_year) {
        auto cutoff = yearly_median_cutoff(profiles);
        for (const auto& prof : profiles) {
            NoveltyResult& r = out[prof.paper];
            r.classifiable = true;
            r.median_z = prof.median_z;
            r.p10_z = prof.p10_z;
            r.novel = cutoff && classify_novel(prof, *cutoff);
        }
    }
    return out;
}

}  // namespace scimatch
