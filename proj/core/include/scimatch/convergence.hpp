#pragma once

#include <optional>
#include <vector>

#include "scimatch/corpus.hpp"

namespace scimatch {

// Reference-age summary for one paper. Ages are focal pub_year minus
// reference pub_year, clamped at zero.
struct AgeStats {
    PaperIdx paper = 0;
    std::vector<double> ages;
    double d_mu = 0.0;     // mean age
    double d_theta = 0.0;  // population sd / mean
};

struct YearlyAgeBaseline {
    int year = 0;
    double d_mu_star = 0.0;
    double d_theta_star = 0.0;
};

struct ConvergenceResult {
    PaperIdx paper = 0;
    bool classifiable = false;
    double d_mu = 0.0;
    double d_theta = 0.0;
    bool convergent = false;
};

// Empty when the paper has fewer than two references or a zero mean age
// (coefficient of variation undefined).
std::optional<AgeStats> age_stats(const Corpus& corpus, PaperIdx paper);

// Unweighted mean of per-paper d_mu and d_theta across classifiable papers.
std::optional<YearlyAgeBaseline> yearly_baseline(int year, const std::vector<AgeStats>& stats);

// Low mean age and high dispersion relative to the same-year baseline,
// both strict.
bool classify_convergent(const AgeStats& stats, const YearlyAgeBaseline& baseline);

std::vector<ConvergenceResult> compute_convergence(const Corpus& corpus);

}  // namespace scimatch
