#include "scimatch/embeddedness.hpp"

#include <algorithm>
#include <set>

namespace scimatch {

namespace {

bool on_byline(const Corpus& c, PaperIdx p, AuthorIdx a) {
    const auto& b = c.byline[p];
    return std::find(b.begin(), b.end(), a) != b.end();
}

// Earliest year strictly before `year` in which a and b share a byline.
std::optional<int> first_copub_year(const Corpus& c, AuthorIdx a, AuthorIdx b, int year) {
    const auto& pa = c.author_papers[a];
    const auto& pb = c.author_papers[b];
    const auto& scan = pa.size() <= pb.size() ? pa : pb;
    AuthorIdx other = pa.size() <= pb.size() ? b : a;
    for (PaperIdx p : scan) {  // sorted by (pub_year, idx)
        if (c.papers[p].pub_year >= year) break;
        if (on_byline(c, p, other)) return c.papers[p].pub_year;
    }
    return std::nullopt;
}

// Distinct collaborators on papers published strictly before `year`,
// excluding the author themselves.
std::set<AuthorIdx> prior_collaborators(const Corpus& c, AuthorIdx a, int year) {
    std::set<AuthorIdx> out;
    for (PaperIdx p : c.author_papers[a]) {
        if (c.papers[p].pub_year >= year) break;
        for (AuthorIdx co : c.byline[p])
            if (co != a) out.insert(co);
    }
    return out;
}

}  // namespace

std::optional<double> tie_duration(const Corpus& corpus, AuthorIdx author, PaperIdx paper) {
    const auto& byline = corpus.byline[paper];
    const int year = corpus.papers[paper].pub_year;
    double sum = 0.0;
    int n = 0;
    for (AuthorIdx co : byline) {
        if (co == author) continue;
        auto first = first_copub_year(corpus, author, co, year);
        if (first) sum += static_cast<double>(year - *first);
        ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

std::optional<double> tie_overlap(const Corpus& corpus, PaperIdx paper) {
    const auto& byline = corpus.byline[paper];
    if (byline.size() < 2) return std::nullopt;
    const int year = corpus.papers[paper].pub_year;

    std::vector<std::set<AuthorIdx>> prior;
    prior.reserve(byline.size());
    for (AuthorIdx a : byline) prior.push_back(prior_collaborators(corpus, a, year));

    double sum = 0.0;
    int pairs = 0;
    for (size_t i = 0; i < byline.size(); ++i) {
        for (size_t j = i + 1; j < byline.size(); ++j) {
            auto counts_for = [&](AuthorIdx x) { return x != byline[i] && x != byline[j]; };
            size_t inter = 0, uni = 0;
            for (AuthorIdx x : prior[i]) {
                if (!counts_for(x)) continue;
                ++uni;
                if (prior[j].count(x)) ++inter;
            }
            for (AuthorIdx x : prior[j]) {
                if (!counts_for(x)) continue;
                if (!prior[i].count(x)) ++uni;
            }
            if (uni == 0) continue;
            sum += static_cast<double>(inter) / static_cast<double>(uni);
            ++pairs;
        }
    }
    if (pairs == 0) return std::nullopt;
    return sum / static_cast<double>(pairs);
}

std::optional<double> topic_similarity(const Corpus& corpus, AuthorIdx author, PaperIdx paper) {
    const int year = corpus.papers[paper].pub_year;
    std::set<int32_t> prior;
    for (PaperIdx p : corpus.author_papers[author]) {
        if (corpus.papers[p].pub_year >= year) break;
        for (int32_t t : corpus.papers[p].topics_fine) prior.insert(t);
    }
    if (prior.empty()) return std::nullopt;
    size_t shared = 0;
    for (int32_t t : corpus.papers[paper].topics_fine)
        if (prior.count(t)) ++shared;
    return static_cast<double>(shared) / static_cast<double>(prior.size());
}

std::optional<CoauthorPerformance> coauthor_performance(const Corpus& corpus, PaperIdx paper,
                                                        AuthorIdx focal) {
    const auto& byline = corpus.byline[paper];
    const int year = corpus.papers[paper].pub_year;
    CoauthorPerformance perf;
    perf.paper = paper;
    int n = 0;
    for (AuthorIdx co : byline) {
        if (co == focal) continue;
        auto [pubs, cites] = corpus.cumulative_counts(co, year - 1);
        perf.mean_pubs += static_cast<double>(pubs);
        perf.mean_cites += static_cast<double>(cites);
        ++n;
    }
    if (n == 0) return std::nullopt;
    perf.mean_pubs /= static_cast<double>(n);
    perf.mean_cites /= static_cast<double>(n);
    return perf;
}

EmbeddednessRecord embeddedness_record(const Corpus& corpus, AuthorIdx author, PaperIdx paper) {
    EmbeddednessRecord rec;
    rec.author = author;
    rec.paper = paper;
    rec.tie_duration = tie_duration(corpus, author, paper);
    rec.tie_overlap = tie_overlap(corpus, paper);
    rec.topic_similarity = topic_similarity(corpus, author, paper);
    return rec;
}

}  // namespace scimatch
