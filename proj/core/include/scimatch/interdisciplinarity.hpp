#pragma once

#include <optional>
#include <vector>

#include "scimatch/corpus.hpp"

namespace scimatch {

// Reference-side co-citation counts over level-1 subjects. Rows are ordered
// by subject name. n[i][k] counts papers whose reference lists span subjects
// i and k; the diagonal counts papers with at least two references tagged
// with that subject.
struct CoCitationMatrix {
    std::vector<int32_t> subjects;       // interned level-1 ids, name order
    std::vector<int32_t> row_of;         // subject id -> row index
    std::vector<std::vector<long long>> n;
};

struct DeltaScore {
    PaperIdx paper = 0;
    bool defined = false;
    double delta = 0.0;
};

CoCitationMatrix build_cocitation(const Corpus& corpus);

// 1 - cosine similarity of co-citation rows. Zero rows are maximally distant
// from everything off-diagonal; the diagonal stays 0.
std::vector<std::vector<double>> dissimilarity(const CoCitationMatrix& m);

// Stirling diversity over ordered subject pairs, Sum_{i != j} d_ij p_i p_j.
// `p` holds the (nonnegative, sum 1) subject proportions by row index.
double delta_from_profile(const std::vector<std::pair<int32_t, double>>& p,
                          const std::vector<std::vector<double>>& d);

// Proportions come from the focal paper's citing papers; a citer tagged with
// k subjects contributes 1/k to each. Citers without level-1 tags are
// skipped; no tagged citers at all means the score is undefined.
std::optional<double> stirling_delta(const Corpus& corpus, PaperIdx paper,
                                     const CoCitationMatrix& m,
                                     const std::vector<std::vector<double>>& d);

std::vector<DeltaScore> compute_interdisciplinarity(const Corpus& corpus);

}  // namespace scimatch
