#include "scimatch/interdisciplinarity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace scimatch {

CoCitationMatrix build_cocitation(const Corpus& corpus) {
    CoCitationMatrix m;
    const size_t ns = corpus.concepts_l1.size();
    m.subjects.resize(ns);
    for (size_t i = 0; i < ns; ++i) m.subjects[i] = static_cast<int32_t>(i);
    std::sort(m.subjects.begin(), m.subjects.end(), [&](int32_t a, int32_t b) {
        return corpus.concepts_l1.name(a) < corpus.concepts_l1.name(b);
    });
    m.row_of.assign(ns, -1);
    for (size_t r = 0; r < ns; ++r) m.row_of[static_cast<size_t>(m.subjects[r])] = static_cast<int32_t>(r);
    m.n.assign(ns, std::vector<long long>(ns, 0));

    std::map<int32_t, int> tally;  // subject -> refs carrying it, per paper
    for (PaperIdx p = 0; p < corpus.papers.size(); ++p) {
        tally.clear();
        for (PaperIdx ref : corpus.refs[p]) {
            for (int32_t s : corpus.papers[ref].subjects_l1) ++tally[s];
        }
        for (auto it = tally.begin(); it != tally.end(); ++it) {
            int32_t ri = m.row_of[static_cast<size_t>(it->first)];
            if (it->second >= 2) ++m.n[ri][ri];
            for (auto jt = std::next(it); jt != tally.end(); ++jt) {
                int32_t rj = m.row_of[static_cast<size_t>(jt->first)];
                ++m.n[ri][rj];
                ++m.n[rj][ri];
            }
        }
    }
    return m;
}

std::vector<std::vector<double>> dissimilarity(const CoCitationMatrix& m) {
    const size_t ns = m.n.size();
    std::vector<double> norm(ns, 0.0);
    for (size_t i = 0; i < ns; ++i) {
        double s = 0;
        for (size_t k = 0; k < ns; ++k)
            s += static_cast<double>(m.n[i][k]) * static_cast<double>(m.n[i][k]);
        norm[i] = std::sqrt(s);
    }
    std::vector<std::vector<double>> d(ns, std::vector<double>(ns, 0.0));
    for (size_t i = 0; i < ns; ++i) {
        for (size_t j = i + 1; j < ns; ++j) {
            double v;
            if (norm[i] == 0.0 || norm[j] == 0.0) {
                v = 1.0;
            } else {
                double dot = 0;
                for (size_t k = 0; k < ns; ++k)
                    dot += static_cast<double>(m.n[i][k]) * static_cast<double>(m.n[j][k]);
                v = 1.0 - dot / (norm[i] * norm[j]);
                v = std::clamp(v, 0.0, 1.0);
            }
            d[i][j] = d[j][i] = v;
        }
    }
    return d;
}

double delta_from_profile(const std::vector<std::pair<int32_t, double>>& p,
                          const std::vector<std::vector<double>>& d) {
    double delta = 0.0;
    for (size_t a = 0; a < p.size(); ++a)
        for (size_t b = a + 1; b < p.size(); ++b)
            delta += 2.0 * d[static_cast<size_t>(p[a].first)][static_cast<size_t>(p[b].first)] *
                     p[a].second * p[b].second;
    return delta;
}

std::optional<double> stirling_delta(const Corpus& corpus, PaperIdx paper,
                                     const CoCitationMatrix& m,
                                     const std::vector<std::vector<double>>& d) {
    std::map<int32_t, double> weight;  // row index -> fractional count
    double total = 0.0;
    for (PaperIdx citer : corpus.citers[paper]) {
        const auto& subjects = corpus.papers[citer].subjects_l1;
        if (subjects.empty()) continue;
        double w = 1.0 / static_cast<double>(subjects.size());
        for (int32_t s : subjects) weight[m.row_of[static_cast<size_t>(s)]] += w;
        total += 1.0;
    }
    if (total == 0.0) return std::nullopt;

    std::vector<std::pair<int32_t, double>> p;
    p.reserve(weight.size());
    for (const auto& [row, w] : weight) p.push_back({row, w / total});
    return delta_from_profile(p, d);
}

std::vector<DeltaScore> compute_interdisciplinarity(const Corpus& corpus) {
    CoCitationMatrix m = build_cocitation(corpus);
    std::vector<std::vector<double>> d = dissimilarity(m);
    std::vector<DeltaScore> out(corpus.papers.size());
    for (PaperIdx p = 0; p < corpus.papers.size(); ++p) {
        out[p].paper = p;
        auto delta = stirling_delta(corpus, p, m, d);
        if (delta) {
            out[p].defined = true;
            out[p].delta = *delta;
        }
    }
    return out;
}

}  // namespace scimatch
