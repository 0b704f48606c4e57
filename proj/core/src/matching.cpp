#include "scimatch/matching.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "scimatch/assignment.hpp"

namespace scimatch {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

const char* match_method_name(MatchMethod m) {
    switch (m) {
        case MatchMethod::dom: return "dom";
        case MatchMethod::mahalanobis: return "mahalanobis";
        case MatchMethod::innovation: return "innovation";
    }
    return "?";
}

std::optional<MatchMethod> match_method_from_name(const std::string& s) {
    for (MatchMethod m : {MatchMethod::dom, MatchMethod::mahalanobis, MatchMethod::innovation})
        if (s == match_method_name(m)) return m;
    return std::nullopt;
}

std::vector<AuthorIdx> cem_pool(const Corpus& corpus, AuthorIdx pw, const MatchSpec& spec) {
    const auto t_star = corpus.first_prize_year(pw);
    const auto disc = corpus.author_discipline(pw);
    const auto cs_pw = corpus.career_start(pw);
    if (!t_star || !disc || !cs_pw) return {};

    const auto [pubs_pw, cites_pw] = corpus.cumulative_counts(pw, *t_star - 1);
    std::optional<double> team_pw;
    if (spec.match_team_size) team_pw = corpus.mean_team_size_before(pw, *t_star);

    std::vector<AuthorIdx> pool;
    for (AuthorIdx a = 0; a < corpus.n_authors(); ++a) {
        if (corpus.has_prize(a)) continue;
        if (corpus.author_papers[a].size() < static_cast<size_t>(spec.min_publications)) continue;
        const auto cs = corpus.career_start(a);
        if (!cs || std::abs(*cs - *cs_pw) > spec.career_window) continue;
        const auto d = corpus.author_discipline(a);
        if (!d || *d != *disc) continue;
        const auto [pubs, cites] = corpus.cumulative_counts(a, *t_star - 1);
        if (std::abs(static_cast<double>(pubs - pubs_pw)) >
            spec.totals_tolerance * static_cast<double>(pubs_pw))
            continue;
        if (std::abs(static_cast<double>(cites - cites_pw)) >
            spec.totals_tolerance * static_cast<double>(cites_pw))
            continue;
        if (spec.match_team_size && team_pw) {
            const auto team = corpus.mean_team_size_before(a, *t_star);
            if (!team || std::abs(*team - *team_pw) > spec.team_tolerance * *team_pw) continue;
        }
        pool.push_back(a);
    }

    if (pool.size() > static_cast<size_t>(spec.max_candidates)) {
        const double pw_pub_den = std::max<double>(static_cast<double>(pubs_pw), 1.0);
        const double pw_cite_den = std::max<double>(static_cast<double>(cites_pw), 1.0);
        std::vector<std::pair<double, AuthorIdx>> scored;
        scored.reserve(pool.size());
        for (AuthorIdx a : pool) {
            const auto [pubs, cites] = corpus.cumulative_counts(a, *t_star - 1);
            double score = std::abs(static_cast<double>(pubs - pubs_pw)) / pw_pub_den +
                           std::abs(static_cast<double>(cites - cites_pw)) / pw_cite_den;
            scored.push_back({score, a});
        }
        std::sort(scored.begin(), scored.end(), [&](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first < y.first;
            return corpus.author_ids[x.second] < corpus.author_ids[y.second];
        });
        pool.clear();
        for (size_t i = 0; i < static_cast<size_t>(spec.max_candidates); ++i)
            pool.push_back(scored[i].second);
    }

    std::sort(pool.begin(), pool.end(), [&](AuthorIdx x, AuthorIdx y) {
        return corpus.author_ids[x] < corpus.author_ids[y];
    });
    return pool;
}

std::pair<double, double> dom_distance(const Corpus& corpus, AuthorIdx pw, AuthorIdx cand,
                                       int traceback_years, int t_star) {
    const auto& spw = corpus.series(pw);
    const auto& sc = corpus.series(cand);
    double dp = 0, dc = 0;
    for (int t = t_star - traceback_years; t <= t_star; ++t) {
        dp += std::abs(static_cast<double>(spw.pubs_in(t) - sc.pubs_in(t))) /
              std::max<double>(spw.pubs_in(t), 1.0);
        dc += std::abs(static_cast<double>(spw.cites_in(t) - sc.cites_in(t))) /
              std::max<double>(spw.cites_in(t), 1.0);
    }
    const double w = static_cast<double>(traceback_years + 1);
    return {dp / w, dc / w};
}

MatchedGroup select_matches_dom(const Corpus& corpus, AuthorIdx pw,
                                const std::vector<AuthorIdx>& pool, const MatchSpec& spec) {
    MatchedGroup g;
    g.pw = pw;
    g.prize_year = corpus.first_prize_year(pw).value_or(0);

    std::vector<MatchedPair> passing;
    for (AuthorIdx cand : pool) {
        auto [dp, dc] = dom_distance(corpus, pw, cand, spec.traceback_years, g.prize_year);
        if (dp > spec.dom_threshold || dc > spec.dom_threshold) continue;
        MatchedPair p;
        p.npw = cand;
        p.d_p = dp;
        p.d_c = dc;
        passing.push_back(p);
    }
    std::sort(passing.begin(), passing.end(), [&](const MatchedPair& a, const MatchedPair& b) {
        double sa = a.d_p + a.d_c, sb = b.d_p + b.d_c;
        if (sa != sb) return sa < sb;
        return corpus.author_ids[a.npw] < corpus.author_ids[b.npw];
    });
    if (passing.size() > static_cast<size_t>(spec.k)) passing.resize(static_cast<size_t>(spec.k));
    g.matches = std::move(passing);
    return g;
}

double theta_distance(const Corpus& corpus, AuthorIdx pw, AuthorIdx cand, int traceback_years,
                      int t_star) {
    const auto& spw = corpus.series(pw);
    const auto& sc = corpus.series(cand);
    double sum = 0;
    for (int t = t_star - traceback_years; t <= t_star; ++t) {
        double dp = std::log1p(static_cast<double>(spw.pubs_in(t))) -
                    std::log1p(static_cast<double>(sc.pubs_in(t)));
        double dc = std::log1p(static_cast<double>(spw.cites_in(t))) -
                    std::log1p(static_cast<double>(sc.cites_in(t)));
        sum += dp * dp + dc * dc;
    }
    return sum / (2.0 * static_cast<double>(traceback_years + 1));
}

std::array<double, 12> covariate_vector(const Corpus& corpus, AuthorIdx a, int t_star) {
    std::array<double, 12> v{};
    const auto& s = corpus.series(a);
    for (int i = 0; i < 6; ++i) {
        int t = t_star - 5 + i;
        v[static_cast<size_t>(i)] = static_cast<double>(s.pubs_in(t));
        v[static_cast<size_t>(6 + i)] = static_cast<double>(s.cites_in(t));
    }
    return v;
}

std::array<std::optional<double>, 4> innovation_window_means(
    const Corpus& corpus, AuthorIdx a, int t_star,
    const std::vector<std::optional<double>>& measure) {
    std::array<double, 4> sum{};
    std::array<int, 4> n{};
    for (PaperIdx p : corpus.author_papers[a]) {
        int rel = corpus.papers[p].pub_year - t_star;
        if (rel < -20 || rel > -1) continue;
        if (!measure[p]) continue;
        size_t w = static_cast<size_t>((rel + 20) / 5);
        sum[w] += *measure[p];
        ++n[w];
    }
    std::array<std::optional<double>, 4> out;
    for (size_t w = 0; w < 4; ++w)
        if (n[w] > 0) out[w] = sum[w] / static_cast<double>(n[w]);
    return out;
}

double innovation_distance(const std::array<std::optional<double>, 4>& a,
                           const std::array<std::optional<double>, 4>& b) {
    double ssq = 0;
    int kept = 0;
    for (size_t w = 0; w < 4; ++w) {
        if (!a[w] || !b[w]) continue;
        double d = *a[w] - *b[w];
        ssq += d * d;
        ++kept;
    }
    if (kept == 0) return kInf;
    return std::sqrt(ssq * 4.0 / static_cast<double>(kept));
}

// ---------------------------------------------------------------------------
// mahalanobis stage

namespace {

struct DisjointSet {
    std::vector<size_t> parent;
    explicit DisjointSet(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    size_t find(size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(size_t a, size_t b) { parent[find(a)] = find(b); }
};

// Mahalanobis metric over the pooled sample covariance, with the diagonal
// fallback when the factorization fails.
class MdMetric {
public:
    MdMetric(const std::vector<std::array<double, 12>>& pool, bool* fell_back) {
        Eigen::Matrix<double, 12, 12> s = Eigen::Matrix<double, 12, 12>::Zero();
        if (pool.size() >= 2) {
            Eigen::Matrix<double, 12, 1> mean = Eigen::Matrix<double, 12, 1>::Zero();
            for (const auto& v : pool)
                mean += Eigen::Map<const Eigen::Matrix<double, 12, 1>>(v.data());
            mean /= static_cast<double>(pool.size());
            for (const auto& v : pool) {
                Eigen::Matrix<double, 12, 1> d =
                    Eigen::Map<const Eigen::Matrix<double, 12, 1>>(v.data()) - mean;
                s += d * d.transpose();
            }
            s /= static_cast<double>(pool.size() - 1);
        }
        s += 1e-8 * Eigen::Matrix<double, 12, 12>::Identity();
        ldlt_.compute(s);
        diagonal_ = !(ldlt_.info() == Eigen::Success && ldlt_.isPositive());
        if (diagonal_) {
            diag_ = s.diagonal();
            if (fell_back) *fell_back = true;
        }
    }

    double md(const std::array<double, 12>& a, const std::array<double, 12>& b) const {
        Eigen::Matrix<double, 12, 1> d = Eigen::Map<const Eigen::Matrix<double, 12, 1>>(a.data()) -
                                         Eigen::Map<const Eigen::Matrix<double, 12, 1>>(b.data());
        double q;
        if (diagonal_) {
            q = (d.array().square() / diag_.array()).sum();
        } else {
            q = d.dot(ldlt_.solve(d));
        }
        return std::sqrt(std::max(0.0, q));
    }

private:
    Eigen::LDLT<Eigen::Matrix<double, 12, 12>> ldlt_;
    Eigen::Matrix<double, 12, 1> diag_;
    bool diagonal_ = false;
};

}  // namespace

std::vector<MatchedGroup> solve_supergroup(const SuperGroupProblem& problem, int k) {
    const size_t npw = problem.pws.size();
    const size_t nc = problem.candidates.size();
    const size_t rows = npw * static_cast<size_t>(k);

    double total_finite = 0;
    for (const auto& row : problem.md)
        for (double v : row)
            if (std::isfinite(v)) total_finite += v;
    const double big = 1.0 + total_finite;

    std::vector<std::vector<double>> cost(rows, std::vector<double>(nc + rows, big));
    for (size_t r = 0; r < rows; ++r) {
        size_t i = r / static_cast<size_t>(k);
        for (size_t j = 0; j < nc; ++j)
            if (std::isfinite(problem.md[i][j])) cost[r][j] = problem.md[i][j];
    }

    std::vector<int> rowsol;
    solve_assignment(cost, rowsol);

    std::vector<MatchedGroup> groups(npw);
    for (size_t i = 0; i < npw; ++i) {
        groups[i].pw = problem.pws[i];
        groups[i].prize_year = problem.t_star[i];
    }
    for (size_t r = 0; r < rows; ++r) {
        size_t i = r / static_cast<size_t>(k);
        int j = rowsol[r];
        if (j < 0 || static_cast<size_t>(j) >= nc) continue;
        if (!std::isfinite(problem.md[i][static_cast<size_t>(j)])) continue;
        MatchedPair p;
        p.npw = problem.candidates[static_cast<size_t>(j)];
        p.md = problem.md[i][static_cast<size_t>(j)];
        p.theta = problem.theta[i][static_cast<size_t>(j)];
        groups[i].matches.push_back(p);
    }
    for (auto& g : groups)
        std::sort(g.matches.begin(), g.matches.end(), [](const MatchedPair& a, const MatchedPair& b) {
            if (a.md != b.md) return a.md < b.md;
            return a.npw < b.npw;  // candidates vector is already in id order
        });
    return groups;
}

// ---------------------------------------------------------------------------
// driver

namespace {

MatchedGroup select_matches_innovation(const Corpus& corpus, AuthorIdx pw,
                                       const std::vector<AuthorIdx>& pool, const MatchSpec& spec,
                                       const MeasureColumns& measures) {
    MatchedGroup g;
    g.pw = pw;
    g.prize_year = corpus.first_prize_year(pw).value_or(0);

    const std::array<const std::vector<std::optional<double>>*, 3> cols = {
        &measures.novelty, &measures.convergence, &measures.interdisciplinarity};
    std::array<std::array<std::optional<double>, 4>, 3> pw_means;
    for (size_t m = 0; m < 3; ++m)
        pw_means[m] = innovation_window_means(corpus, pw, g.prize_year, *cols[m]);

    std::vector<MatchedPair> passing;
    for (AuthorIdx cand : pool) {
        MatchedPair p;
        p.npw = cand;
        bool ok = true;
        for (size_t m = 0; m < 3; ++m) {
            auto cm = innovation_window_means(corpus, cand, g.prize_year, *cols[m]);
            p.innov[m] = innovation_distance(pw_means[m], cm);
            if (!(p.innov[m] <= spec.innovation_threshold)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        p.innov_d = p.innov[0] + p.innov[1] + p.innov[2];
        passing.push_back(p);
    }
    std::sort(passing.begin(), passing.end(), [&](const MatchedPair& a, const MatchedPair& b) {
        if (a.innov_d != b.innov_d) return a.innov_d < b.innov_d;
        return corpus.author_ids[a.npw] < corpus.author_ids[b.npw];
    });
    if (passing.size() > static_cast<size_t>(spec.k)) passing.resize(static_cast<size_t>(spec.k));
    g.matches = std::move(passing);
    return g;
}

}  // namespace

MatchOutcome match_all(const Corpus& corpus, const MatchSpec& spec,
                       const MeasureColumns* measures) {
    if (spec.method == MatchMethod::innovation && measures == nullptr)
        throw std::invalid_argument("match_all: innovation method needs measure columns");
    if (spec.k < 1) throw std::invalid_argument("match_all: k must be at least 1");

    MatchOutcome out;

    std::vector<AuthorIdx> pws;
    for (AuthorIdx a = 0; a < corpus.n_authors(); ++a)
        if (corpus.has_prize(a)) pws.push_back(a);
    std::sort(pws.begin(), pws.end(), [&](AuthorIdx x, AuthorIdx y) {
        return corpus.author_ids[x] < corpus.author_ids[y];
    });

    struct Ready {
        AuthorIdx pw;
        int t_star;
        std::vector<AuthorIdx> pool;
    };
    std::vector<Ready> ready;
    for (AuthorIdx pw : pws) {
        const auto t_star = corpus.first_prize_year(pw);
        if (!corpus.career_start(pw)) {
            out.dropped.push_back({pw, "no publications"});
            continue;
        }
        if (!corpus.author_discipline(pw)) {
            out.dropped.push_back({pw, "no discipline"});
            continue;
        }
        auto pool = cem_pool(corpus, pw, spec);
        if (pool.empty()) {
            out.dropped.push_back({pw, "empty candidate pool"});
            continue;
        }
        ready.push_back({pw, *t_star, std::move(pool)});
    }

    if (spec.method == MatchMethod::dom || spec.method == MatchMethod::innovation) {
        std::unordered_set<AuthorIdx> used;
        for (auto& r : ready) {
            std::vector<AuthorIdx> pool = r.pool;
            if (!spec.allow_reuse) {
                pool.erase(std::remove_if(pool.begin(), pool.end(),
                                          [&](AuthorIdx a) { return used.count(a) > 0; }),
                           pool.end());
            }
            MatchedGroup g = spec.method == MatchMethod::dom
                                 ? select_matches_dom(corpus, r.pw, pool, spec)
                                 : select_matches_innovation(corpus, r.pw, pool, spec, *measures);
            if (g.matches.empty()) {
                out.dropped.push_back({r.pw, "no candidates within threshold"});
                continue;
            }
            if (!spec.allow_reuse)
                for (const auto& m : g.matches) used.insert(m.npw);
            out.groups.push_back(std::move(g));
        }
        return out;
    }

    // mahalanobis: shortlist by theta, then optimal assignment per connected
    // component of the shared-candidate graph
    struct Shortlisted {
        AuthorIdx pw;
        int t_star;
        std::vector<std::pair<AuthorIdx, double>> cands;  // (candidate, theta)
    };
    std::vector<Shortlisted> lists;
    for (auto& r : ready) {
        std::vector<std::pair<double, AuthorIdx>> scored;
        scored.reserve(r.pool.size());
        for (AuthorIdx cand : r.pool)
            scored.push_back({theta_distance(corpus, r.pw, cand, spec.traceback_years, r.t_star),
                              cand});
        std::sort(scored.begin(), scored.end(), [&](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first < y.first;
            return corpus.author_ids[x.second] < corpus.author_ids[y.second];
        });
        if (scored.size() > static_cast<size_t>(spec.theta_shortlist))
            scored.resize(static_cast<size_t>(spec.theta_shortlist));
        Shortlisted s;
        s.pw = r.pw;
        s.t_star = r.t_star;
        for (const auto& [theta, cand] : scored) s.cands.push_back({cand, theta});
        lists.push_back(std::move(s));
    }

    DisjointSet ds(lists.size());
    {
        std::unordered_map<AuthorIdx, size_t> owner;
        for (size_t i = 0; i < lists.size(); ++i)
            for (const auto& [cand, theta] : lists[i].cands) {
                auto [it, inserted] = owner.emplace(cand, i);
                if (!inserted) ds.unite(i, it->second);
            }
    }
    std::map<size_t, std::vector<size_t>> components;
    for (size_t i = 0; i < lists.size(); ++i) components[ds.find(i)].push_back(i);

    for (const auto& [root, members] : components) {
        SuperGroupProblem prob;
        std::vector<AuthorIdx> cand_union;
        for (size_t i : members) {
            prob.pws.push_back(lists[i].pw);
            prob.t_star.push_back(lists[i].t_star);
            for (const auto& [cand, theta] : lists[i].cands) cand_union.push_back(cand);
        }
        std::sort(cand_union.begin(), cand_union.end(), [&](AuthorIdx x, AuthorIdx y) {
            return corpus.author_ids[x] < corpus.author_ids[y];
        });
        cand_union.erase(std::unique(cand_union.begin(), cand_union.end()), cand_union.end());
        prob.candidates = cand_union;
        std::unordered_map<AuthorIdx, size_t> col_of;
        for (size_t j = 0; j < cand_union.size(); ++j) col_of[cand_union[j]] = j;

        std::vector<std::array<double, 12>> pooled;
        for (size_t m = 0; m < members.size(); ++m) {
            const auto& sl = lists[members[m]];
            pooled.push_back(covariate_vector(corpus, sl.pw, sl.t_star));
            for (const auto& [cand, theta] : sl.cands)
                pooled.push_back(covariate_vector(corpus, cand, sl.t_star));
        }
        bool fell_back = false;
        MdMetric metric(pooled, &fell_back);
        if (fell_back) ++out.covariance_fallbacks;

        prob.md.assign(members.size(), std::vector<double>(cand_union.size(), kInf));
        prob.theta.assign(members.size(), std::vector<double>(cand_union.size(), kInf));
        for (size_t m = 0; m < members.size(); ++m) {
            const auto& sl = lists[members[m]];
            auto vec_pw = covariate_vector(corpus, sl.pw, sl.t_star);
            for (const auto& [cand, theta] : sl.cands) {
                size_t j = col_of[cand];
                prob.md[m][j] = metric.md(vec_pw, covariate_vector(corpus, cand, sl.t_star));
                prob.theta[m][j] = theta;
            }
        }

        for (auto& g : solve_supergroup(prob, spec.k)) {
            if (g.matches.empty()) {
                out.dropped.push_back({g.pw, "no assignment"});
            } else {
                out.groups.push_back(std::move(g));
            }
        }
    }

    // components come out keyed by union-find root; regroup into pw id order
    std::sort(out.groups.begin(), out.groups.end(), [&](const MatchedGroup& a, const MatchedGroup& b) {
        return corpus.author_ids[a.pw] < corpus.author_ids[b.pw];
    });
    std::sort(out.dropped.begin(), out.dropped.end(), [&](const auto& a, const auto& b) {
        return corpus.author_ids[a.first] < corpus.author_ids[b.first];
    });
    return out;
}

}  // namespace scimatch
