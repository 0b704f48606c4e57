#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace scimatch {

// --- order statistics ------------------------------------------------------
// Nearest-rank percentile: rank ceil(p * n), 1-based, over a copy.
// The median uses the upper-middle order statistic (rank floor(n/2) + 1,
// the nearest rank of the median position (n+1)/2). That choice makes
// "strictly more than the median" cover fewer than half of any sample,
// which the novelty cutoff relies on.
double percentile_nearest_rank(std::vector<double> v, double p);
double median_upper(std::vector<double> v);

// --- moments ---------------------------------------------------------------
double mean_of(const std::vector<double>& v);
double sample_var(const std::vector<double>& v);      // n-1 denominator
double population_var(const std::vector<double>& v);  // n denominator

// --- balance and tests -----------------------------------------------------
// Standardized mean difference with sample variances. Undefined (nullopt)
// when the pooled variance is zero and the means differ; zero variance with
// equal means gives 0.
std::optional<double> smd(const std::vector<double>& a, const std::vector<double>& b);

struct WelchResult {
    double t = 0;
    double df = 0;
    double p = 1;
};
// Welch's unequal-variance t-test with Welch-Satterthwaite df. Degenerate
// zero-variance samples: equal means give t=0, p=1; unequal means give a
// huge t and p ~ 0.
WelchResult welch_t(const std::vector<double>& a, const std::vector<double>& b);

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y);

// Concordance correlation: 2*rho*sx*sy / (sx^2 + sy^2 + (mx-my)^2) with
// population variances. Both constant: 1 when equal, 0 otherwise.
double ccc(const std::vector<double>& x, const std::vector<double>& y);

// Student-t two-sided survival probability, via the regularized incomplete
// beta function.
double student_t_two_sided_p(double t, double df);

// --- PCA over the three innovation measures --------------------------------
struct Pca3Result {
    std::array<double, 3> eigenvalues{};               // descending
    std::array<std::array<double, 3>, 3> loadings{};   // loadings[k] = PC k+1
};
// Columns are standardized, then the 3x3 correlation matrix is decomposed.
// Throws std::runtime_error naming the column if one is constant.
Pca3Result pca3(const std::vector<std::array<double, 3>>& rows,
                const std::array<std::string, 3>& column_names = {
                    "novelty", "convergence", "interdisciplinarity"});

// --- fixed-effects OLS -----------------------------------------------------
enum class AuthorPosition { first = 0, middle = 1, last = 2 };

struct RegressionRow {
    double outcome = 0;
    bool w = false;      // prizewinner
    bool post = false;   // published in or after the prize year
    bool multi = false;  // author holds multiple prizes
    // the other two innovation measures, named so tables are readable
    std::vector<std::pair<std::string, double>> covariates;
    std::string prize;      // categorical keys
    std::string group;
    std::string scientist;
    int team_bin = 1;       // 1..5, 6 meaning ">5"
    int py_bin = 0;         // publication year, binned to 5
    AuthorPosition position = AuthorPosition::first;
};

enum class ModelPreset {
    event_study,       // w x year-bin dummies (bin 0 omitted) + team + scientist + year bins
    coevolution,       // w x post + w + cross-measures + prize/team/group/position/year
    time_interaction,  // w + w x year-bin (bin 0 omitted) + prize/team/group/position
    did_basic,         // coevolution without the cross-measure controls
    multi_prize,       // w x multi + w x post + cross-measures + full fixed effects
    embeddedness,      // w + w x post + post + prize/team/group
    embed_innovation,  // covariates (embeddedness metrics) + w + w x post + full fixed effects
};

const char* preset_name(ModelPreset m);
std::optional<ModelPreset> preset_from_name(const std::string& s);

struct RegressionTerm {
    std::string name;
    double estimate = 0;
    double se = 0;
    double t = 0;
    double p = 1;
};

struct RegressionFit {
    std::vector<RegressionTerm> terms;
    std::vector<std::string> dropped;  // exactly collinear columns removed
    double r2 = 0;
    size_t n = 0;
    size_t rank = 0;
    std::vector<double> residuals;
};

// Dummy-encodes categoricals (first level by sort order is the reference),
// drops exactly collinear columns via column-pivoted QR (tolerance 1e-10),
// solves least squares and reports HC1 robust standard errors.
// Throws std::runtime_error when rows <= retained columns.
RegressionFit fe_ols(const std::vector<RegressionRow>& rows, ModelPreset preset);

std::string significance_stars(double p);

// --- trajectories ----------------------------------------------------------
struct TrajectoryPoint {
    int rel_year = 0;
    double mean = 0;
    std::optional<double> ci_low, ci_high;  // absent when n < 2
    long long n = 0;
};

struct TrajectorySeries {
    std::string group;
    std::string metric;
    std::vector<TrajectoryPoint> points;
};

struct TrajectoryObs {
    std::string group;
    int rel_year = 0;
    double value = 0;
};

// Per (group, relative year): mean, 1.96 * sample-sd / sqrt(n) interval, n.
// Output ordered by group label then year; window bounds inclusive.
std::vector<TrajectorySeries> trajectory(const std::vector<TrajectoryObs>& obs,
                                         const std::string& metric, int window_lo, int window_hi);

}  // namespace scimatch
