#include "scimatch/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "scimatch/csv.hpp"

namespace scimatch {

int32_t StringPool::intern(const std::string& s) {
    auto it = index_.find(s);
    if (it != index_.end()) return it->second;
    int32_t id = static_cast<int32_t>(names_.size());
    names_.push_back(s);
    index_.emplace(s, id);
    return id;
}

std::optional<int32_t> StringPool::find(const std::string& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::string LoadReport::summary() const {
    std::ostringstream os;
    os << "papers: " << papers << "\n"
       << "citations: kept " << citations_kept << " of " << citation_rows
       << " (dangling " << dangling_refs << ", self " << self_citations
       << ", duplicate " << duplicate_refs << ")\n"
       << "authorships: kept " << authorships_kept << " of " << authorship_rows
       << " (dangling " << dangling_authorships << ", duplicate " << duplicate_authorships
       << ")\n"
       << "prizes: kept " << prizes_kept << " of " << prize_rows << " (dangling "
       << dangling_prizes << ", prestige conflicts " << prize_prestige_conflicts << ")\n";
    return os.str();
}

std::optional<PaperIdx> Corpus::find_paper(const std::string& id) const {
    auto it = paper_index_.find(id);
    if (it == paper_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<AuthorIdx> Corpus::find_author(const std::string& id) const {
    auto it = author_index_.find(id);
    if (it == author_index_.end()) return std::nullopt;
    return it->second;
}

const std::vector<PaperIdx>& Corpus::papers_in_year(int year) const {
    static const std::vector<PaperIdx> empty;
    auto it = by_year_.find(year);
    return it == by_year_.end() ? empty : it->second;
}

std::optional<int32_t> Corpus::author_discipline(AuthorIdx a) const {
    std::unordered_map<int32_t, int> counts;
    for (PaperIdx p : author_papers[a])
        for (int32_t c : papers[p].subjects_l0) ++counts[c];
    if (counts.empty()) return std::nullopt;
    int32_t best = -1;
    int best_n = -1;
    for (const auto& [c, n] : counts) {
        if (n > best_n || (n == best_n && concepts_l0.name(c) < concepts_l0.name(best))) {
            best = c;
            best_n = n;
        }
    }
    return best;
}

std::optional<int> Corpus::career_start(AuthorIdx a) const {
    if (author_papers[a].empty()) return std::nullopt;
    return papers[author_papers[a].front()].pub_year;
}

std::pair<long long, long long> Corpus::cumulative_counts(AuthorIdx a, int up_to_year) const {
    const auto& ap = author_papers[a];
    auto pit = std::upper_bound(ap.begin(), ap.end(), up_to_year,
                                [&](int y, PaperIdx p) { return y < papers[p].pub_year; });
    const auto& ev = cite_events_[a];
    auto cit = std::upper_bound(ev.begin(), ev.end(), up_to_year);
    return {pit - ap.begin(), cit - ev.begin()};
}

std::vector<PaperIdx> Corpus::hit_papers(int year) const {
    const auto& ps = papers_in_year(year);
    if (ps.empty()) return {};
    std::vector<size_t> counts;
    counts.reserve(ps.size());
    for (PaperIdx p : ps) counts.push_back(citers[p].size());
    size_t k = (ps.size() + 19) / 20;  // ceil(5% of n), at least one paper
    std::vector<size_t> sorted = counts;
    std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end(),
                     std::greater<size_t>());
    size_t cutoff = sorted[k - 1];
    std::vector<PaperIdx> out;
    for (size_t i = 0; i < ps.size(); ++i)
        if (counts[i] >= cutoff) out.push_back(ps[i]);
    return out;
}

bool Corpus::has_multiple_prizes(AuthorIdx a) const {
    std::unordered_set<int32_t> distinct;
    for (uint32_t r : author_prizes[a]) distinct.insert(prizes[r].prize);
    return distinct.size() >= 2;
}

std::optional<int> Corpus::first_prize_year(AuthorIdx a) const {
    std::optional<int> y;
    for (uint32_t r : author_prizes[a])
        if (!y || prizes[r].prize_year < *y) y = prizes[r].prize_year;
    return y;
}

bool Corpus::first_prize_is_top(AuthorIdx a) const {
    std::optional<int> y = first_prize_year(a);
    if (!y) return false;
    for (uint32_t r : author_prizes[a])
        if (prizes[r].prize_year == *y && prizes[r].is_top) return true;
    return false;
}

std::optional<double> Corpus::mean_team_size_before(AuthorIdx a, int year) const {
    long long total = 0, n = 0;
    for (PaperIdx p : author_papers[a]) {
        if (papers[p].pub_year >= year) break;
        total += static_cast<long long>(byline[p].size());
        ++n;
    }
    if (n == 0) return std::nullopt;
    return static_cast<double>(total) / static_cast<double>(n);
}

size_t Corpus::n_refs_with_venue(PaperIdx p) const {
    size_t n = 0;
    for (PaperIdx r : refs[p])
        if (papers[r].venue >= 0) ++n;
    return n;
}

// ---------------------------------------------------------------------------
// builder

CorpusBuilder& CorpusBuilder::paper(const std::string& id, int pub_year, const std::string& venue,
                                    const std::vector<std::string>& subjects_l0,
                                    const std::vector<std::string>& subjects_l1,
                                    const std::vector<std::string>& topics_fine, bool is_review,
                                    const std::string& where) {
    papers_.push_back({id, venue, where, pub_year, subjects_l0, subjects_l1, topics_fine, is_review});
    return *this;
}

CorpusBuilder& CorpusBuilder::cite(const std::string& citing, const std::string& cited,
                                   const std::string& where) {
    cites_.push_back({citing, cited, where});
    return *this;
}

CorpusBuilder& CorpusBuilder::authorship(const std::string& paper_id, const std::string& author_id,
                                         int author_index, const std::string& where) {
    auths_.push_back({paper_id, author_id, where, author_index});
    return *this;
}

CorpusBuilder& CorpusBuilder::prize(const std::string& prize_id, const std::string& author_id,
                                    int prize_year, double prestige_views,
                                    const std::string& where) {
    prizes_.push_back({prize_id, author_id, where, prize_year, prestige_views});
    return *this;
}

namespace {

std::vector<int32_t> intern_set(StringPool& pool, const std::vector<std::string>& names) {
    std::vector<int32_t> ids;
    ids.reserve(names.size());
    for (const auto& n : names) ids.push_back(pool.intern(n));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

}  // namespace

Corpus CorpusBuilder::build() {
    Corpus c;
    c.report.papers = papers_.size();

    c.papers.reserve(papers_.size());
    for (auto& row : papers_) {
        if (row.id.empty())
            throw std::runtime_error((row.where.empty() ? std::string("papers") : row.where) +
                                     ": empty paper id");
        PaperIdx idx = static_cast<PaperIdx>(c.papers.size());
        auto [it, fresh] = c.paper_index_.emplace(row.id, idx);
        if (!fresh)
            throw std::runtime_error((row.where.empty() ? std::string("papers") : row.where) +
                                     ": duplicate paper id '" + row.id + "'");
        PaperRecord rec;
        rec.id = std::move(row.id);
        rec.pub_year = row.year;
        rec.venue = row.venue.empty() ? -1 : c.venues.intern(row.venue);
        rec.subjects_l0 = intern_set(c.concepts_l0, row.l0);
        rec.subjects_l1 = intern_set(c.concepts_l1, row.l1);
        rec.topics_fine = intern_set(c.topics_fine, row.fine);
        rec.is_review = row.review;
        c.papers.push_back(std::move(rec));
    }

    const size_t np = c.papers.size();
    c.refs.assign(np, {});
    c.citers.assign(np, {});
    c.byline.assign(np, {});

    c.report.citation_rows = cites_.size();
    {
        std::unordered_set<uint64_t> seen;
        seen.reserve(cites_.size() * 2);
        for (const auto& row : cites_) {
            auto citing = c.find_paper(row.citing);
            auto cited = c.find_paper(row.cited);
            if (!citing || !cited) {
                ++c.report.dangling_refs;
                continue;
            }
            if (*citing == *cited) {
                ++c.report.self_citations;
                continue;
            }
            uint64_t key = (static_cast<uint64_t>(*citing) << 32) | *cited;
            if (!seen.insert(key).second) {
                ++c.report.duplicate_refs;
                continue;
            }
            c.refs[*citing].push_back(*cited);
            ++c.report.citations_kept;
        }
    }
    for (PaperIdx p = 0; p < np; ++p)
        for (PaperIdx r : c.refs[p]) c.citers[r].push_back(p);

    // byline order: author_index ascending, input order breaking ties
    c.report.authorship_rows = auths_.size();
    {
        std::vector<std::vector<std::pair<int, size_t>>> slots(np);
        for (size_t i = 0; i < auths_.size(); ++i) {
            const auto& row = auths_[i];
            if (row.author.empty())
                throw std::runtime_error((row.where.empty() ? std::string("authorships") : row.where) +
                                         ": empty author id");
            auto p = c.find_paper(row.paper);
            if (!p) {
                ++c.report.dangling_authorships;
                continue;
            }
            slots[*p].push_back({row.index, i});
        }
        for (PaperIdx p = 0; p < np; ++p) {
            auto& v = slots[p];
            std::stable_sort(v.begin(), v.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            std::unordered_set<AuthorIdx> present;
            for (const auto& [ord, i] : v) {
                const std::string& name = auths_[i].author;
                AuthorIdx a;
                auto it = c.author_index_.find(name);
                if (it == c.author_index_.end()) {
                    a = static_cast<AuthorIdx>(c.author_ids.size());
                    c.author_index_.emplace(name, a);
                    c.author_ids.push_back(name);
                } else {
                    a = it->second;
                }
                if (!present.insert(a).second) {
                    ++c.report.duplicate_authorships;
                    continue;
                }
                c.byline[p].push_back(a);
                ++c.report.authorships_kept;
            }
        }
    }

    const size_t na = c.author_ids.size();
    c.author_papers.assign(na, {});
    c.author_prizes.assign(na, {});
    for (PaperIdx p = 0; p < np; ++p)
        for (AuthorIdx a : c.byline[p]) c.author_papers[a].push_back(p);
    for (auto& ap : c.author_papers)
        std::sort(ap.begin(), ap.end(), [&](PaperIdx x, PaperIdx y) {
            return std::pair(c.papers[x].pub_year, x) < std::pair(c.papers[y].pub_year, y);
        });

    c.report.prize_rows = prizes_.size();
    {
        std::unordered_map<int32_t, double> prestige;
        for (const auto& row : prizes_) {
            if (row.prize.empty())
                throw std::runtime_error((row.where.empty() ? std::string("prizes") : row.where) +
                                         ": empty prize id");
            auto a = c.find_author(row.author);
            if (!a) {
                ++c.report.dangling_prizes;
                continue;
            }
            int32_t pid = c.prize_names.intern(row.prize);
            auto [it, fresh] = prestige.emplace(pid, row.views);
            if (!fresh && it->second != row.views) ++c.report.prize_prestige_conflicts;
            PrizeRecord rec;
            rec.prize = pid;
            rec.author = *a;
            rec.prize_year = row.year;
            rec.prestige_views = it->second;
            c.author_prizes[*a].push_back(static_cast<uint32_t>(c.prizes.size()));
            c.prizes.push_back(rec);
            ++c.report.prizes_kept;
        }
        if (!prestige.empty()) {
            std::vector<double> views;
            views.reserve(prestige.size());
            for (const auto& [pid, v] : prestige) views.push_back(v);
            size_t k = (views.size() + 3) / 4;  // ceil(25%)
            std::nth_element(views.begin(), views.begin() + (k - 1), views.end(),
                             std::greater<double>());
            double cutoff = views[k - 1];
            for (auto& rec : c.prizes) rec.is_top = rec.prestige_views >= cutoff;
        }
    }

    // year indexes and strata
    if (!c.papers.empty()) {
        c.min_year = c.max_year = c.papers[0].pub_year;
        for (const auto& p : c.papers) {
            c.min_year = std::min(c.min_year, p.pub_year);
            c.max_year = std::max(c.max_year, p.pub_year);
        }
    }
    for (PaperIdx p = 0; p < np; ++p) c.by_year_[c.papers[p].pub_year].push_back(p);
    for (PaperIdx p = 0; p < np; ++p) {
        int cy = c.papers[p].pub_year;
        for (PaperIdx r : c.refs[p]) c.strata_[{cy, c.papers[r].pub_year}].push_back({p, r});
    }

    // author-year series and cumulative citation events
    c.series_.assign(na, {});
    c.cite_events_.assign(na, {});
    for (AuthorIdx a = 0; a < na; ++a) {
        if (c.author_papers[a].empty()) continue;
        auto& s = c.series_[a];
        s.first_year = c.papers[c.author_papers[a].front()].pub_year;
        size_t span = static_cast<size_t>(c.max_year - s.first_year + 1);
        s.pubs.assign(span, 0);
        s.cites.assign(span, 0);
        for (PaperIdx p : c.author_papers[a])
            ++s.pubs[static_cast<size_t>(c.papers[p].pub_year - s.first_year)];
    }
    for (PaperIdx cited = 0; cited < np; ++cited) {
        int py = c.papers[cited].pub_year;
        for (PaperIdx citing : c.citers[cited]) {
            int cy = c.papers[citing].pub_year;
            for (AuthorIdx a : c.byline[cited]) {
                c.cite_events_[a].push_back(std::max(cy, py));
                if (py <= cy) ++c.series_[a].cites[static_cast<size_t>(cy - c.series_[a].first_year)];
            }
        }
    }
    for (auto& ev : c.cite_events_) std::sort(ev.begin(), ev.end());

    return c;
}

// ---------------------------------------------------------------------------
// CSV loading

namespace {

std::string at(const std::vector<std::string>& fields, size_t i) {
    return i < fields.size() ? fields[i] : std::string();
}

void need_fields(const csv::Reader& r, const std::vector<std::string>& fields, size_t max_idx) {
    if (fields.size() <= max_idx)
        throw std::runtime_error(r.path() + ":" + std::to_string(r.line()) +
                                 ": expected at least " + std::to_string(max_idx + 1) +
                                 " columns, got " + std::to_string(fields.size()));
}

std::string where_of(const csv::Reader& r) {
    return r.path() + ":" + std::to_string(r.line());
}

}  // namespace

Corpus load_corpus(const CorpusPaths& paths) {
    CorpusBuilder b;
    {
        csv::Reader r(paths.papers);
        auto ix = csv::require_header(
            r, {"paper_id", "pub_year", "venue_id", "subjects_l0", "subjects_l1", "topics_fine",
                "is_review"});
        size_t max_ix = *std::max_element(ix.begin(), ix.end());
        std::vector<std::string> f;
        while (r.next(f)) {
            need_fields(r, f, max_ix);
            b.paper(at(f, ix[0]), static_cast<int>(csv::parse_int(at(f, ix[1]), r, "pub_year")),
                    at(f, ix[2]), csv::split_list(at(f, ix[3])), csv::split_list(at(f, ix[4])),
                    csv::split_list(at(f, ix[5])), csv::parse_bool(at(f, ix[6]), r, "is_review"),
                    where_of(r));
        }
    }
    {
        csv::Reader r(paths.citations);
        auto ix = csv::require_header(r, {"citing_id", "cited_id"});
        size_t max_ix = *std::max_element(ix.begin(), ix.end());
        std::vector<std::string> f;
        while (r.next(f)) {
            need_fields(r, f, max_ix);
            if (at(f, ix[0]).empty() || at(f, ix[1]).empty())
                throw std::runtime_error(where_of(r) + ": empty paper id in citation row");
            b.cite(at(f, ix[0]), at(f, ix[1]));
        }
    }
    {
        csv::Reader r(paths.authorships);
        auto ix = csv::require_header(r, {"paper_id", "author_id", "author_index"});
        size_t max_ix = *std::max_element(ix.begin(), ix.end());
        std::vector<std::string> f;
        while (r.next(f)) {
            need_fields(r, f, max_ix);
            b.authorship(at(f, ix[0]), at(f, ix[1]),
                         static_cast<int>(csv::parse_int(at(f, ix[2]), r, "author_index")),
                         where_of(r));
        }
    }
    {
        csv::Reader r(paths.prizes);
        auto ix = csv::require_header(r, {"prize_id", "author_id", "prize_year", "prestige_views"});
        size_t max_ix = *std::max_element(ix.begin(), ix.end());
        std::vector<std::string> f;
        while (r.next(f)) {
            need_fields(r, f, max_ix);
            b.prize(at(f, ix[0]), at(f, ix[1]),
                    static_cast<int>(csv::parse_int(at(f, ix[2]), r, "prize_year")),
                    csv::parse_double(at(f, ix[3]), r, "prestige_views"), where_of(r));
        }
    }
    return b.build();
}

}  // namespace scimatch
