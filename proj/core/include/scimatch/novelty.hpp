#pragma once

#include <map>
#include <optional>
#include <vector>

#include "scimatch/corpus.hpp"
#include "scimatch/nullmodel.hpp"

namespace scimatch {

// Per-paper distribution of venue-pair z-scores. One z per venue-bearing
// reference pair, so a venue pair cited through two different reference
// combinations contributes multiple copies.
struct PaperZProfile {
    PaperIdx paper = 0;
    std::vector<double> z;
    double median_z = 0.0;
    double p10_z = 0.0;
};

struct NoveltyResult {
    PaperIdx paper = 0;
    bool classifiable = false;
    double median_z = 0.0;
    double p10_z = 0.0;
    bool novel = false;
};

// (x - xbar)/s with a +-10 cap when the null never varies (s = 0).
double pair_z(double x, double xbar, double s);

// Empty when the paper has fewer than two venue-bearing references.
std::optional<PaperZProfile> paper_z_profile(const Corpus& corpus, PaperIdx paper,
                                             const YearPairStats& stats);

// Median (upper nearest-rank) of per-paper median z over classifiable papers.
std::optional<double> yearly_median_cutoff(const std::vector<PaperZProfile>& profiles);

// Strictly above the yearly cutoff on the median and at or below zero at the
// tenth percentile.
bool classify_novel(const PaperZProfile& profile, double cutoff);

// Driver across the whole corpus; `stats_by_year` as produced by
// null_pair_stats_all_years. Papers in years lacking stats or with too few
// venue-bearing references come back unclassifiable.
std::vector<NoveltyResult> compute_novelty(const Corpus& corpus,
                                           const std::map<int, YearPairStats>& stats_by_year);

}  // namespace scimatch
