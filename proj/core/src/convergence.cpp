#include "scimatch/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "scimatch/stats.hpp"

namespace scimatch {

std::optional<AgeStats> age_stats(const Corpus& corpus, PaperIdx paper) {
    const auto& refs = corpus.refs[paper];
    if (refs.size() < 2) return std::nullopt;

    AgeStats st;
    st.paper = paper;
    st.ages.reserve(refs.size());
    const int focal = corpus.papers[paper].pub_year;
    for (PaperIdx r : refs)
        st.ages.push_back(static_cast<double>(std::max(0, focal - corpus.papers[r].pub_year)));

    st.d_mu = mean_of(st.ages);
    if (st.d_mu <= 0.0) return std::nullopt;
    st.d_theta = std::sqrt(population_var(st.ages)) / st.d_mu;
    return st;
}

std::optional<YearlyAgeBaseline> yearly_baseline(int year, const std::vector<AgeStats>& stats) {
    if (stats.empty()) return std::nullopt;
    YearlyAgeBaseline b;
    b.year = year;
    for (const auto& s : stats) {
        b.d_mu_star += s.d_mu;
        b.d_theta_star += s.d_theta;
    }
    b.d_mu_star /= static_cast<double>(stats.size());
    b.d_theta_star /= static_cast<double>(stats.size());
    return b;
}

bool classify_convergent(const AgeStats& stats, const YearlyAgeBaseline& baseline) {
    return stats.d_mu < baseline.d_mu_star && stats.d_theta > baseline.d_theta_star;
}

std::vector<ConvergenceResult> compute_convergence(const Corpus& corpus) {
    std::vector<ConvergenceResult> out(corpus.papers.size());
    std::map<int, std::vector<AgeStats>> by_year;

    for (PaperIdx p = 0; p < corpus.papers.size(); ++p) {
        out[p].paper = p;
        auto st = age_stats(corpus, p);
        if (!st) continue;
        by_year[corpus.papers[p].pub_year].push_back(std::move(*st));
    }

    for (const auto& [year, stats] : by_year) {
        auto base = yearly_baseline(year, stats);
        if (!base) continue;
        for (const auto& st : stats) {
            ConvergenceResult& r = out[st.paper];
            r.classifiable = true;
            r.d_mu = st.d_mu;
            r.d_theta = st.d_theta;
            r.convergent = classify_convergent(st, *base);
        }
    }
    return out;
}

}  // namespace scimatch
