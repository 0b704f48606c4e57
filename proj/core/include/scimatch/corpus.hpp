#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace scimatch {

using PaperIdx = uint32_t;
using AuthorIdx = uint32_t;
inline constexpr uint32_t kNoIdx = 0xffffffffu;

// Interned id table. Index order is first-seen, so lexicographic questions
// must go through name().
class StringPool {
public:
    int32_t intern(const std::string& s);
    std::optional<int32_t> find(const std::string& s) const;
    const std::string& name(int32_t id) const { return names_[static_cast<size_t>(id)]; }
    size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int32_t> index_;
};

struct PaperRecord {
    std::string id;
    int pub_year = 0;
    int32_t venue = -1;  // -1 = no venue
    std::vector<int32_t> subjects_l0;
    std::vector<int32_t> subjects_l1;
    std::vector<int32_t> topics_fine;
    bool is_review = false;
};

struct PrizeRecord {
    int32_t prize = -1;
    AuthorIdx author = kNoIdx;
    int prize_year = 0;
    double prestige_views = 0.0;
    bool is_top = false;  // top quartile of prestige over distinct prizes
};

struct LoadReport {
    size_t papers = 0;
    size_t citation_rows = 0;
    size_t citations_kept = 0;
    size_t dangling_refs = 0;     // citing or cited id not in papers table
    size_t self_citations = 0;
    size_t duplicate_refs = 0;
    size_t authorship_rows = 0;
    size_t authorships_kept = 0;
    size_t dangling_authorships = 0;
    size_t duplicate_authorships = 0;
    size_t prize_rows = 0;
    size_t prizes_kept = 0;
    size_t dangling_prizes = 0;   // recipient never appears as an author
    size_t prize_prestige_conflicts = 0;
    std::string summary() const;
};

// Yearly publication and citation counts for one author.
// pubs[k] / cites[k] are the counts in year first_year + k. The citation
// count for year y includes only citations from papers published in y to
// papers of this author published in or before y; edges dated before the
// cited paper (data noise) never enter the series.
struct AuthorYearSeries {
    int first_year = 0;
    std::vector<int> pubs;
    std::vector<int> cites;

    int pubs_in(int year) const {
        long k = static_cast<long>(year) - first_year;
        return (k < 0 || k >= static_cast<long>(pubs.size())) ? 0 : pubs[static_cast<size_t>(k)];
    }
    int cites_in(int year) const {
        long k = static_cast<long>(year) - first_year;
        return (k < 0 || k >= static_cast<long>(cites.size())) ? 0 : cites[static_cast<size_t>(k)];
    }
};

using StratumKey = std::pair<int, int>;  // (citing pub year, cited pub year)

class Corpus {
public:
    std::vector<PaperRecord> papers;
    std::vector<std::vector<PaperIdx>> refs;    // papers cited by papers[i]
    std::vector<std::vector<PaperIdx>> citers;  // papers citing papers[i]
    std::vector<std::vector<AuthorIdx>> byline; // authors of papers[i] in byline order

    std::vector<std::string> author_ids;
    std::vector<std::vector<PaperIdx>> author_papers;  // sorted by (pub_year, idx)
    std::vector<PrizeRecord> prizes;
    std::vector<std::vector<uint32_t>> author_prizes;  // rows into prizes, per author

    StringPool venues, concepts_l0, concepts_l1, topics_fine, prize_names;
    LoadReport report;

    int min_year = 0;
    int max_year = 0;

    size_t n_papers() const { return papers.size(); }
    size_t n_authors() const { return author_ids.size(); }

    std::optional<PaperIdx> find_paper(const std::string& id) const;
    std::optional<AuthorIdx> find_author(const std::string& id) const;

    const std::vector<PaperIdx>& papers_in_year(int year) const;

    // Citation edges grouped by (citing year, cited year); ordering inside a
    // stratum follows paper index then reference position, so it is stable.
    const std::map<StratumKey, std::vector<std::pair<PaperIdx, PaperIdx>>>& strata() const {
        return strata_;
    }

    // Modal level-0 concept over the author's papers, each paper contributing
    // each of its level-0 tags once. Ties break to the lexicographically
    // smallest concept id. Empty when no paper carries a level-0 tag.
    std::optional<int32_t> author_discipline(AuthorIdx a) const;

    std::optional<int> career_start(AuthorIdx a) const;

    // (publications, citations received) counting only years <= up_to_year on
    // both sides of each citation edge.
    std::pair<long long, long long> cumulative_counts(AuthorIdx a, int up_to_year) const;

    const AuthorYearSeries& series(AuthorIdx a) const { return series_[a]; }

    // Papers published in `year` whose all-time citation counts reach the
    // top 5% (nearest rank; ties at the cutoff all included).
    std::vector<PaperIdx> hit_papers(int year) const;

    bool has_prize(AuthorIdx a) const { return !author_prizes[a].empty(); }
    bool has_multiple_prizes(AuthorIdx a) const;
    // Earliest prize year; the event time t* for a prizewinner.
    std::optional<int> first_prize_year(AuthorIdx a) const;
    bool first_prize_is_top(AuthorIdx a) const;

    // Mean byline size over the author's papers published strictly before
    // `year`; empty when there are none.
    std::optional<double> mean_team_size_before(AuthorIdx a, int year) const;

    size_t n_refs_with_venue(PaperIdx p) const;

private:
    friend class CorpusBuilder;

    std::unordered_map<std::string, PaperIdx> paper_index_;
    std::unordered_map<std::string, AuthorIdx> author_index_;
    std::map<StratumKey, std::vector<std::pair<PaperIdx, PaperIdx>>> strata_;
    std::unordered_map<int, std::vector<PaperIdx>> by_year_;
    std::vector<AuthorYearSeries> series_;
    // per author: sorted values of max(citing year, cited year) per received
    // citation, for O(log n) cumulative counts
    std::vector<std::vector<int>> cite_events_;
};

// Programmatic corpus assembly; the CSV loader is a thin parser over this.
// Validation and the load report live here so both paths behave identically.
class CorpusBuilder {
public:
    CorpusBuilder& paper(const std::string& id, int pub_year, const std::string& venue,
                         const std::vector<std::string>& subjects_l0,
                         const std::vector<std::string>& subjects_l1,
                         const std::vector<std::string>& topics_fine, bool is_review,
                         const std::string& where = {});
    CorpusBuilder& cite(const std::string& citing, const std::string& cited,
                        const std::string& where = {});
    CorpusBuilder& authorship(const std::string& paper_id, const std::string& author_id,
                              int author_index, const std::string& where = {});
    CorpusBuilder& prize(const std::string& prize_id, const std::string& author_id,
                         int prize_year, double prestige_views, const std::string& where = {});

    // Consumes the builder. Throws std::runtime_error on duplicate paper ids.
    Corpus build();

private:
    struct PaperRow {
        std::string id, venue, where;
        int year;
        std::vector<std::string> l0, l1, fine;
        bool review;
    };
    struct CiteRow { std::string citing, cited, where; };
    struct AuthRow { std::string paper, author, where; int index; };
    struct PrizeRow { std::string prize, author, where; int year; double views; };

    std::vector<PaperRow> papers_;
    std::vector<CiteRow> cites_;
    std::vector<AuthRow> auths_;
    std::vector<PrizeRow> prizes_;
};

struct CorpusPaths {
    std::string papers;
    std::string citations;
    std::string authorships;
    std::string prizes;
};

// Loads and validates the four tables. Malformed rows and duplicate paper ids
// raise std::runtime_error naming file and line; dangling references, self
// citations and duplicate edges are dropped and counted in the report.
Corpus load_corpus(const CorpusPaths& paths);

}  // namespace scimatch
