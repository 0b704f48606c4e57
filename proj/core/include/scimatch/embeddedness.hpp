#pragma once

#include <optional>
#include <vector>

#include "scimatch/corpus.hpp"

namespace scimatch {

// Collaboration-history metrics for one focal author on one paper.
// Undefined markers are explicit; a solo paper never silently reads as 0.
struct EmbeddednessRecord {
    AuthorIdx author = kNoIdx;
    PaperIdx paper = 0;
    std::optional<double> tie_duration;
    std::optional<double> tie_overlap;
    std::optional<double> topic_similarity;
};

struct CoauthorPerformance {
    PaperIdx paper = 0;
    double mean_pubs = 0.0;
    double mean_cites = 0.0;
};

// Mean over the focal author's coauthors on this paper of the years elapsed
// since the pair first co-published (strictly earlier year). First-time
// coauthors contribute 0. Solo papers are undefined.
std::optional<double> tie_duration(const Corpus& corpus, AuthorIdx author, PaperIdx paper);

// Mean Jaccard similarity over all byline pairs of their prior collaborator
// sets (strictly earlier years, both pair members excluded from both sets).
// Pairs with an empty union are skipped; no computable pair means undefined.
std::optional<double> tie_overlap(const Corpus& corpus, PaperIdx paper);

// Share of the author's prior distinct fine-grained topics that the focal
// paper revisits. Undefined when the author has no prior topics.
std::optional<double> topic_similarity(const Corpus& corpus, AuthorIdx author, PaperIdx paper);

// Mean cumulative publications and citations of the non-focal coauthors up
// to, not including, the publication year.
std::optional<CoauthorPerformance> coauthor_performance(const Corpus& corpus, PaperIdx paper,
                                                        AuthorIdx focal);

EmbeddednessRecord embeddedness_record(const Corpus& corpus, AuthorIdx author, PaperIdx paper);

}  // namespace scimatch
