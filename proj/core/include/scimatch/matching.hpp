#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scimatch/corpus.hpp"

namespace scimatch {

enum class MatchMethod { dom, mahalanobis, innovation };

const char* match_method_name(MatchMethod m);
std::optional<MatchMethod> match_method_from_name(const std::string& s);

struct MatchSpec {
    int traceback_years = 5;  // window is [t* - traceback_years, t*]
    double dom_threshold = 0.6;
    double innovation_threshold = 0.1;
    int max_candidates = 200;
    int k = 5;  // matches kept per prizewinner
    int career_window = 2;
    double totals_tolerance = 0.30;
    bool match_team_size = false;
    double team_tolerance = 0.30;
    int min_publications = 10;
    int theta_shortlist = 40;
    bool allow_reuse = true;  // one scholar may match several prizewinners
    MatchMethod method = MatchMethod::dom;
};

struct MatchedPair {
    AuthorIdx npw = kNoIdx;
    double d_p = 0.0;                  // dom: publication-series distance
    double d_c = 0.0;                  // dom: citation-series distance
    double theta = 0.0;                // mahalanobis: shortlist distance
    double md = 0.0;                   // mahalanobis: assignment distance
    std::array<double, 3> innov{};     // per-measure window distances
    double innov_d = 0.0;              // their sum, the ranking key
};

struct MatchedGroup {
    AuthorIdx pw = kNoIdx;
    int prize_year = 0;  // t*
    std::vector<MatchedPair> matches;
};

struct MatchOutcome {
    std::vector<MatchedGroup> groups;
    // prizewinners that ended up with no group, with the reason
    std::vector<std::pair<AuthorIdx, std::string>> dropped;
    size_t covariance_fallbacks = 0;  // singular pooled covariance repairs
};

// Per-paper measure values for innovation-trajectory matching; entries are
// empty where the measure is undefined for that paper. Each vector is sized
// to the corpus paper count.
struct MeasureColumns {
    std::vector<std::optional<double>> novelty;
    std::vector<std::optional<double>> convergence;
    std::vector<std::optional<double>> interdisciplinarity;
};

// Coarse pre-filter: never-prized scholars in the same discipline whose
// career start lies within the window and whose cumulative publications and
// citations the year before t* sit within the tolerance. Overflow beyond
// max_candidates keeps the smallest relative total gaps, ties by scholar id.
std::vector<AuthorIdx> cem_pool(const Corpus& corpus, AuthorIdx pw, const MatchSpec& spec);

// Mean relative yearly gap over the trace-back window, publication and
// citation series separately. Denominator is the prizewinner's value,
// floored at 1, so the distance is asymmetric by construction.
std::pair<double, double> dom_distance(const Corpus& corpus, AuthorIdx pw, AuthorIdx cand,
                                       int traceback_years, int t_star);

// Candidates passing both thresholds, ranked by d_p + d_c, top k.
MatchedGroup select_matches_dom(const Corpus& corpus, AuthorIdx pw,
                                const std::vector<AuthorIdx>& pool, const MatchSpec& spec);

// Mean squared gap of log(1 + Y) over the window, both series pooled.
double theta_distance(const Corpus& corpus, AuthorIdx pw, AuthorIdx cand, int traceback_years,
                      int t_star);

// Publication and citation counts for the six years ending at t*, the
// covariate vector behind the Mahalanobis metric.
std::array<double, 12> covariate_vector(const Corpus& corpus, AuthorIdx a, int t_star);

// One connected matching problem: prizewinners whose shortlists overlap,
// their union of candidates, and the pairwise distance matrix with +inf for
// pairs outside a shortlist.
struct SuperGroupProblem {
    std::vector<AuthorIdx> pws;
    std::vector<int> t_star;
    std::vector<AuthorIdx> candidates;
    std::vector<std::vector<double>> md;     // pws x candidates
    std::vector<std::vector<double>> theta;  // same shape, diagnostic only
};

// Assigns each candidate at most once, maximizing the number of matches and
// breaking ties by total distance, each prizewinner capped at k.
std::vector<MatchedGroup> solve_supergroup(const SuperGroupProblem& problem, int k);

// Per-window means of a measure over an author's papers, windows of five
// years covering relative years -20..-1 before t*. Empty where no paper in
// the window carries a defined value.
std::array<std::optional<double>, 4> innovation_window_means(
    const Corpus& corpus, AuthorIdx a, int t_star,
    const std::vector<std::optional<double>>& measure);

// Euclidean distance over the window means; windows undefined on either side
// are dropped and the sum rescaled to the full four, +inf when nothing is
// left.
double innovation_distance(const std::array<std::optional<double>, 4>& a,
                           const std::array<std::optional<double>, 4>& b);

// Full two-stage run over every prizewinner. `measures` is required for the
// innovation method and ignored otherwise.
MatchOutcome match_all(const Corpus& corpus, const MatchSpec& spec,
                       const MeasureColumns* measures = nullptr);

}  // namespace scimatch
