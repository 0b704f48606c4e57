#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scimatch/config.hpp"
#include "scimatch/convergence.hpp"
#include "scimatch/corpus.hpp"
#include "scimatch/interdisciplinarity.hpp"
#include "scimatch/matching.hpp"
#include "scimatch/novelty.hpp"
#include "scimatch/nullmodel.hpp"
#include "scimatch/stats.hpp"

namespace scimatch {

// The three paper-level measures plus the per-paper value columns the
// matcher and the regressions consume (novelty and convergence flags as 0/1,
// interdisciplinarity as the raw score; unclassifiable papers stay empty).
struct MeasureSet {
    std::vector<NoveltyResult> novelty;
    std::vector<ConvergenceResult> convergence;
    std::vector<DeltaScore> interdisciplinarity;
    MeasureColumns columns;
};

MeasureSet compute_measures(const Corpus& corpus, const std::map<int, YearPairStats>& null_stats,
                            bool novelty, bool convergence, bool interdisciplinarity);

// Column lookup by measure name; null for unknown names.
const std::vector<std::optional<double>>* measure_column(const MeasureSet& m,
                                                         const std::string& name);

// Covariate-balance diagnostics over the matched cohort: per relative year in
// [-traceback, 0], SMD and Welch's t between prizewinner and matched yearly
// publication and citation counts.
struct BalanceRow {
    std::string series;  // "pubs" | "cites"
    int rel_year = 0;
    std::optional<double> smd;
    WelchResult welch;
    size_t n_pw = 0;
    size_t n_npw = 0;
};
std::vector<BalanceRow> balance_table(const Corpus& corpus, const MatchOutcome& matches,
                                      int traceback_years);

// Sample restrictions over whole matched groups (prestige split, discipline,
// prize-year window). Pointers into `matches`.
std::vector<const MatchedGroup*> filtered_groups(const Corpus& corpus,
                                                 const MatchOutcome& matches,
                                                 const config::Filters& filters);

// Paper-level value source keyed by (scholar, paper); measure columns ignore
// the scholar, embeddedness metrics depend on it.
using ValueSource = std::function<std::optional<double>(AuthorIdx, PaperIdx)>;

// Resolves "novelty" / "convergence" / "interdisciplinarity" or
// "tie_duration" / "tie_overlap" / "topic_similarity". Throws
// std::runtime_error for unknown names or disabled measures.
ValueSource value_source(const Corpus& corpus, const MeasureSet& measures,
                         const std::string& name);

// Matched-cohort regression rows for one outcome. Complete-case: rows missing
// the outcome or any preset covariate are dropped, as are papers outside
// relative years [-22, 22]. Covariates are the other two measures, or the
// three embeddedness metrics for the embed_innovation preset.
std::vector<RegressionRow> regression_rows(const Corpus& corpus,
                                           const std::vector<const MatchedGroup*>& groups,
                                           const MeasureSet& measures, const std::string& outcome,
                                           ModelPreset preset, bool exclude_reviews);

// Observations on the relative-year clock for the PW, NPW and random groups;
// the random group draws `random_per_pw` never-prized same-discipline
// scholars per group (deterministic in seed), anchored at the group's t*.
std::vector<TrajectoryObs> trajectory_observations(
    const Corpus& corpus, const std::vector<const MatchedGroup*>& groups,
    const ValueSource& value_of, bool exclude_reviews, int random_per_pw, int min_publications,
    uint64_t seed);

// Orchestrates the full run and writes the CSV artifacts. Heavy results are
// computed once and cached; writers return the path written.
class Pipeline {
public:
    Pipeline(const Corpus& corpus, config::PipelineOptions opt, uint64_t config_hash);

    const Corpus& corpus() const { return corpus_; }
    const config::PipelineOptions& options() const { return opt_; }

    const std::map<int, YearPairStats>& null_stats();
    const MeasureSet& measures();
    const MatchOutcome& matches();
    std::vector<const MatchedGroup*> groups();  // after filters

    std::string write_null_stats();
    std::vector<std::string> write_measures();
    std::string write_embeddedness();
    std::string write_matches();
    std::string write_balance();
    std::string write_regression(ModelPreset preset, const std::string& outcome,
                                 RegressionFit* fit_out = nullptr);
    std::string write_trajectory(const std::string& metric);
    std::string write_report();
    std::string write_provenance(const std::string& command);

    // The `pipeline` subcommand: everything above in dependency order.
    std::vector<std::string> run_all();

private:
    std::string path(const std::string& name) const;

    const Corpus& corpus_;
    config::PipelineOptions opt_;
    uint64_t config_hash_ = 0;
    std::optional<std::map<int, YearPairStats>> null_;
    std::optional<MeasureSet> measures_;
    std::optional<MatchOutcome> matches_;
};

}  // namespace scimatch
