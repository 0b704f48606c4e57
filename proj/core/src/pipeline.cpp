#include "scimatch/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "scimatch/csv.hpp"
#include "scimatch/embeddedness.hpp"
#include "scimatch/rng.hpp"
#include "scimatch/version.hpp"

namespace scimatch {

namespace {

std::string hex64(uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string opt_field(const std::optional<double>& v) {
    return v ? csv::fmt_double(*v) : std::string{};
}

// First prize by year (ties to the smallest interned id), the group's
// categorical prize label.
std::string prize_label(const Corpus& c, AuthorIdx pw) {
    const PrizeRecord* best = nullptr;
    for (uint32_t row : c.author_prizes[pw]) {
        const PrizeRecord& r = c.prizes[row];
        if (!best || r.prize_year < best->prize_year ||
            (r.prize_year == best->prize_year && r.prize < best->prize))
            best = &r;
    }
    return best ? c.prize_names.name(best->prize) : std::string("none");
}

AuthorPosition position_of(const Corpus& c, AuthorIdx a, PaperIdx p) {
    const auto& byline = c.byline[p];
    for (size_t i = 0; i < byline.size(); ++i)
        if (byline[i] == a) {
            if (i == 0) return AuthorPosition::first;
            if (i + 1 == byline.size()) return AuthorPosition::last;
            return AuthorPosition::middle;
        }
    return AuthorPosition::middle;  // not on the byline; callers filter first
}

int team_bin_of(size_t byline_size) {
    if (byline_size < 1) return 1;
    return byline_size <= 5 ? static_cast<int>(byline_size) : 6;
}

bool on_byline(const Corpus& c, AuthorIdx a, PaperIdx p) {
    const auto& b = c.byline[p];
    return std::find(b.begin(), b.end(), a) != b.end();
}

}  // namespace

MeasureSet compute_measures(const Corpus& corpus, const std::map<int, YearPairStats>& null_stats,
                            bool novelty, bool convergence, bool interdisciplinarity) {
    MeasureSet m;
    size_t n = corpus.n_papers();
    m.columns.novelty.assign(n, std::nullopt);
    m.columns.convergence.assign(n, std::nullopt);
    m.columns.interdisciplinarity.assign(n, std::nullopt);
    if (novelty) {
        m.novelty = compute_novelty(corpus, null_stats);
        for (const auto& r : m.novelty)
            if (r.classifiable) m.columns.novelty[r.paper] = r.novel ? 1.0 : 0.0;
    }
    if (convergence) {
        m.convergence = compute_convergence(corpus);
        for (const auto& r : m.convergence)
            if (r.classifiable) m.columns.convergence[r.paper] = r.convergent ? 1.0 : 0.0;
    }
    if (interdisciplinarity) {
        m.interdisciplinarity = compute_interdisciplinarity(corpus);
        for (const auto& r : m.interdisciplinarity)
            if (r.defined) m.columns.interdisciplinarity[r.paper] = r.delta;
    }
    return m;
}

const std::vector<std::optional<double>>* measure_column(const MeasureSet& m,
                                                         const std::string& name) {
    if (name == "novelty") return &m.columns.novelty;
    if (name == "convergence") return &m.columns.convergence;
    if (name == "interdisciplinarity") return &m.columns.interdisciplinarity;
    return nullptr;
}

std::vector<BalanceRow> balance_table(const Corpus& corpus, const MatchOutcome& matches,
                                      int traceback_years) {
    std::vector<BalanceRow> rows;
    for (const char* series : {"pubs", "cites"}) {
        bool pubs = series[0] == 'p';
        for (int rel = -traceback_years; rel <= 0; ++rel) {
            std::vector<double> a, b;
            for (const auto& g : matches.groups) {
                int y = g.prize_year + rel;
                const auto& spw = corpus.series(g.pw);
                a.push_back(pubs ? spw.pubs_in(y) : spw.cites_in(y));
                for (const auto& mch : g.matches) {
                    const auto& snp = corpus.series(mch.npw);
                    b.push_back(pubs ? snp.pubs_in(y) : snp.cites_in(y));
                }
            }
            BalanceRow row;
            row.series = series;
            row.rel_year = rel;
            row.n_pw = a.size();
            row.n_npw = b.size();
            if (a.size() >= 2 && b.size() >= 2) {
                row.smd = smd(a, b);
                row.welch = welch_t(a, b);
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<const MatchedGroup*> filtered_groups(const Corpus& corpus,
                                                 const MatchOutcome& matches,
                                                 const config::Filters& filters) {
    std::vector<const MatchedGroup*> out;
    for (const auto& g : matches.groups) {
        if (filters.prestige_split == "top" && !corpus.first_prize_is_top(g.pw)) continue;
        if (filters.prestige_split == "rest" && corpus.first_prize_is_top(g.pw)) continue;
        if (!filters.discipline.empty()) {
            auto disc = corpus.author_discipline(g.pw);
            if (!disc || corpus.concepts_l0.name(*disc) != filters.discipline) continue;
        }
        if (filters.year_min && g.prize_year < *filters.year_min) continue;
        if (filters.year_max && g.prize_year > *filters.year_max) continue;
        out.push_back(&g);
    }
    return out;
}

ValueSource value_source(const Corpus& corpus, const MeasureSet& measures,
                         const std::string& name) {
    if (const auto* col = measure_column(measures, name)) {
        if (col->empty()) throw std::runtime_error("measure not computed: " + name);
        return [col](AuthorIdx, PaperIdx p) { return (*col)[p]; };
    }
    if (name == "tie_duration")
        return [&corpus](AuthorIdx a, PaperIdx p) { return tie_duration(corpus, a, p); };
    if (name == "tie_overlap")
        return [&corpus](AuthorIdx, PaperIdx p) { return tie_overlap(corpus, p); };
    if (name == "topic_similarity")
        return [&corpus](AuthorIdx a, PaperIdx p) { return topic_similarity(corpus, a, p); };
    throw std::runtime_error("unknown outcome or metric: " + name);
}

std::vector<RegressionRow> regression_rows(const Corpus& corpus,
                                           const std::vector<const MatchedGroup*>& groups,
                                           const MeasureSet& measures, const std::string& outcome,
                                           ModelPreset preset, bool exclude_reviews) {
    ValueSource out_of = value_source(corpus, measures, outcome);

    // covariate set: the other two measures, or the embeddedness metrics for
    // the embed_innovation preset; presets without covariates get none
    std::vector<std::string> cov_names;
    bool with_covariates = preset == ModelPreset::event_study ||
                           preset == ModelPreset::coevolution ||
                           preset == ModelPreset::time_interaction ||
                           preset == ModelPreset::multi_prize ||
                           preset == ModelPreset::embed_innovation;
    if (with_covariates) {
        if (preset == ModelPreset::embed_innovation) {
            cov_names = {"tie_duration", "tie_overlap", "topic_similarity"};
        } else {
            for (const char* m : {"novelty", "convergence", "interdisciplinarity"})
                if (outcome != m) cov_names.push_back(m);
        }
    }
    std::vector<ValueSource> cov_of;
    for (const auto& cn : cov_names) cov_of.push_back(value_source(corpus, measures, cn));

    std::vector<RegressionRow> rows;
    for (const MatchedGroup* g : groups) {
        std::string prize = prize_label(corpus, g->pw);
        std::string group_id = corpus.author_ids[g->pw];
        std::vector<AuthorIdx> members{g->pw};
        for (const auto& m : g->matches) members.push_back(m.npw);
        for (AuthorIdx a : members) {
            bool w = a == g->pw;
            bool multi = corpus.has_multiple_prizes(a);
            for (PaperIdx p : corpus.author_papers[a]) {
                int rel = corpus.papers[p].pub_year - g->prize_year;
                if (rel < -22 || rel > 22) continue;
                if (exclude_reviews && corpus.papers[p].is_review) continue;
                auto y = out_of(a, p);
                if (!y) continue;
                RegressionRow row;
                row.outcome = *y;
                bool complete = true;
                for (size_t ci = 0; ci < cov_of.size(); ++ci) {
                    auto v = cov_of[ci](a, p);
                    if (!v) {
                        complete = false;
                        break;
                    }
                    row.covariates.emplace_back(cov_names[ci], *v);
                }
                if (!complete) continue;
                row.w = w;
                row.post = rel >= 0;
                row.multi = multi;
                row.prize = prize;
                row.group = group_id;
                row.scientist = corpus.author_ids[a];
                row.team_bin = team_bin_of(corpus.byline[p].size());
                row.py_bin = 5 * (corpus.papers[p].pub_year / 5);
                row.position = position_of(corpus, a, p);
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::vector<TrajectoryObs> trajectory_observations(
    const Corpus& corpus, const std::vector<const MatchedGroup*>& groups,
    const ValueSource& value_of, bool exclude_reviews, int random_per_pw, int min_publications,
    uint64_t seed) {
    // random-comparison pool per discipline: never-prized scholars with a
    // full-career publication record
    std::map<int32_t, std::vector<AuthorIdx>> pool;
    for (AuthorIdx a = 0; a < corpus.n_authors(); ++a) {
        if (corpus.has_prize(a)) continue;
        if (static_cast<int>(corpus.author_papers[a].size()) < min_publications) continue;
        auto disc = corpus.author_discipline(a);
        if (!disc) continue;
        pool[*disc].push_back(a);
    }

    std::vector<TrajectoryObs> obs;
    auto add = [&](const char* label, AuthorIdx a, int anchor) {
        for (PaperIdx p : corpus.author_papers[a]) {
            if (exclude_reviews && corpus.papers[p].is_review) continue;
            auto v = value_of(a, p);
            if (!v) continue;
            obs.push_back({label, corpus.papers[p].pub_year - anchor, *v});
        }
    };

    for (size_t gi = 0; gi < groups.size(); ++gi) {
        const MatchedGroup* g = groups[gi];
        add("PW", g->pw, g->prize_year);
        for (const auto& m : g->matches) add("NPW", m.npw, g->prize_year);
        if (random_per_pw > 0) {
            auto disc = corpus.author_discipline(g->pw);
            auto it = disc ? pool.find(*disc) : pool.end();
            if (it != pool.end() && !it->second.empty()) {
                std::vector<AuthorIdx> picks = it->second;
                Rng rng(sub_seed(seed, 0x52414e44ull + gi));
                rng.shuffle(picks);
                size_t take = std::min<size_t>(picks.size(), static_cast<size_t>(random_per_pw));
                for (size_t i = 0; i < take; ++i) add("random", picks[i], g->prize_year);
            }
        }
    }
    return obs;
}

// --- Pipeline ---------------------------------------------------------------

Pipeline::Pipeline(const Corpus& corpus, config::PipelineOptions opt, uint64_t config_hash)
    : corpus_(corpus), opt_(std::move(opt)), config_hash_(config_hash) {}

std::string Pipeline::path(const std::string& name) const {
    std::filesystem::create_directories(opt_.outdir);
    return opt_.outdir + "/" + name;
}

const std::map<int, YearPairStats>& Pipeline::null_stats() {
    if (!null_) null_ = null_pair_stats_all_years(corpus_, opt_.null_replicates, opt_.seed);
    return *null_;
}

const MeasureSet& Pipeline::measures() {
    if (!measures_) {
        static const std::map<int, YearPairStats> empty;
        const auto& ns = opt_.novelty ? null_stats() : empty;
        measures_ =
            compute_measures(corpus_, ns, opt_.novelty, opt_.convergence, opt_.interdisciplinarity);
    }
    return *measures_;
}

const MatchOutcome& Pipeline::matches() {
    if (!matches_) {
        const MeasureColumns* cols =
            opt_.match.method == MatchMethod::innovation ? &measures().columns : nullptr;
        matches_ = match_all(corpus_, opt_.match, cols);
    }
    return *matches_;
}

std::vector<const MatchedGroup*> Pipeline::groups() {
    return filtered_groups(corpus_, matches(), opt_.filters);
}

std::string Pipeline::write_null_stats() {
    const auto& by_year = null_stats();
    std::string out = path("nullstats.csv");
    csv::Writer w(out);
    w.row({"year", "pair_a", "pair_b", "x", "xbar", "s"});
    for (const auto& [year, stats] : by_year) {
        std::vector<PairKey> keys;
        keys.reserve(stats.size());
        for (const auto& kv : stats) keys.push_back(kv.first);
        std::sort(keys.begin(), keys.end());
        for (PairKey k : keys) {
            const auto& st = stats.at(k);
            w.row({csv::fmt_int(year), corpus_.venues.name(pair_lo(k)),
                   corpus_.venues.name(pair_hi(k)), csv::fmt_int(st.x), csv::fmt_double(st.xbar),
                   csv::fmt_double(st.s)});
        }
    }
    return out;
}

std::vector<std::string> Pipeline::write_measures() {
    const MeasureSet& m = measures();
    std::vector<std::string> written;
    if (opt_.novelty) {
        std::string out = path("novelty.csv");
        csv::Writer w(out);
        w.row({"paper_id", "median_z", "p10_z", "is_novel", "classifiable"});
        for (const auto& r : m.novelty)
            w.row({corpus_.papers[r.paper].id,
                   r.classifiable ? csv::fmt_double(r.median_z) : std::string{},
                   r.classifiable ? csv::fmt_double(r.p10_z) : std::string{},
                   r.novel ? "1" : "0", r.classifiable ? "1" : "0"});
        written.push_back(out);
    }
    if (opt_.convergence) {
        std::string out = path("convergence.csv");
        csv::Writer w(out);
        w.row({"paper_id", "d_mu", "d_theta", "is_convergent", "classifiable"});
        for (const auto& r : m.convergence)
            w.row({corpus_.papers[r.paper].id,
                   r.classifiable ? csv::fmt_double(r.d_mu) : std::string{},
                   r.classifiable ? csv::fmt_double(r.d_theta) : std::string{},
                   r.convergent ? "1" : "0", r.classifiable ? "1" : "0"});
        written.push_back(out);
    }
    if (opt_.interdisciplinarity) {
        std::string out = path("interdisciplinarity.csv");
        csv::Writer w(out);
        w.row({"paper_id", "delta", "defined"});
        for (const auto& r : m.interdisciplinarity)
            w.row({corpus_.papers[r.paper].id, r.defined ? csv::fmt_double(r.delta) : std::string{},
                   r.defined ? "1" : "0"});
        written.push_back(out);

        CoCitationMatrix cm = build_cocitation(corpus_);
        std::string mat = path("cocitation.csv");
        csv::Writer wm(mat);
        wm.row({"subject_a", "subject_b", "count"});
        for (size_t i = 0; i < cm.subjects.size(); ++i)
            for (size_t k = i; k < cm.subjects.size(); ++k)
                wm.row({corpus_.concepts_l1.name(cm.subjects[i]),
                        corpus_.concepts_l1.name(cm.subjects[k]), csv::fmt_int(cm.n[i][k])});
        written.push_back(mat);
    }
    return written;
}

std::string Pipeline::write_embeddedness() {
    std::string out = path("embeddedness.csv");
    csv::Writer w(out);
    w.row({"author_id", "paper_id", "tie_duration", "tie_overlap", "topic_similarity"});
    for (PaperIdx p = 0; p < corpus_.n_papers(); ++p)
        for (AuthorIdx a : corpus_.byline[p]) {
            EmbeddednessRecord r = embeddedness_record(corpus_, a, p);
            w.row({corpus_.author_ids[a], corpus_.papers[p].id, opt_field(r.tie_duration),
                   opt_field(r.tie_overlap), opt_field(r.topic_similarity)});
        }
    return out;
}

std::string Pipeline::write_matches() {
    const MatchOutcome& mo = matches();
    const char* method = match_method_name(opt_.match.method);
    std::string out = path("matches.csv");
    csv::Writer w(out);
    w.row({"group_id", "pw_id", "npw_id", "method", "d_p", "d_c", "theta", "md", "innov_d"});
    for (const auto& g : mo.groups)
        for (const auto& m : g.matches) {
            std::string d_p, d_c, theta, md, innov_d;
            switch (opt_.match.method) {
                case MatchMethod::dom:
                    d_p = csv::fmt_double(m.d_p);
                    d_c = csv::fmt_double(m.d_c);
                    break;
                case MatchMethod::mahalanobis:
                    theta = csv::fmt_double(m.theta);
                    md = csv::fmt_double(m.md);
                    break;
                case MatchMethod::innovation:
                    innov_d = csv::fmt_double(m.innov_d);
                    break;
            }
            w.row({corpus_.author_ids[g.pw], corpus_.author_ids[g.pw], corpus_.author_ids[m.npw],
                   method, d_p, d_c, theta, md, innov_d});
        }
    return out;
}

std::string Pipeline::write_balance() {
    auto rows = balance_table(corpus_, matches(), opt_.match.traceback_years);
    std::string out = path("balance.csv");
    csv::Writer w(out);
    w.row({"series", "rel_year", "smd", "t", "df", "p", "n_pw", "n_npw"});
    for (const auto& r : rows)
        w.row({r.series, csv::fmt_int(r.rel_year), opt_field(r.smd), csv::fmt_double(r.welch.t),
               csv::fmt_double(r.welch.df), csv::fmt_double(r.welch.p),
               csv::fmt_int(static_cast<long long>(r.n_pw)),
               csv::fmt_int(static_cast<long long>(r.n_npw))});
    return out;
}

std::string Pipeline::write_regression(ModelPreset preset, const std::string& outcome,
                                       RegressionFit* fit_out) {
    auto gs = groups();
    auto rows = regression_rows(corpus_, gs, measures(), outcome, preset,
                                opt_.filters.exclude_reviews);
    RegressionFit fit;
    try {
        fit = fe_ols(rows, preset);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("regression ") + preset_name(preset) + "/" + outcome +
                                 ": " + e.what());
    }
    if (fit_out) *fit_out = fit;
    std::string out = path(std::string("regress_") + preset_name(preset) + "_" + outcome + ".csv");
    csv::Writer w(out);
    w.row({"term", "estimate", "robust_se", "t", "p", "stars"});
    for (const auto& t : fit.terms)
        w.row({t.name, csv::fmt_double(t.estimate), csv::fmt_double(t.se), csv::fmt_double(t.t),
               csv::fmt_double(t.p), significance_stars(t.p)});
    return out;
}

std::string Pipeline::write_trajectory(const std::string& metric) {
    auto gs = groups();
    auto obs = trajectory_observations(corpus_, gs, value_source(corpus_, measures(), metric),
                                       opt_.filters.exclude_reviews, opt_.random_per_pw,
                                       opt_.match.min_publications, opt_.seed);
    auto series = trajectory(obs, metric, opt_.window_lo, opt_.window_hi);
    std::string out = path("trajectory_" + metric + ".csv");
    csv::Writer w(out);
    w.row({"group", "metric", "rel_year", "mean", "ci_low", "ci_high", "n"});
    for (const auto& s : series)
        for (const auto& pt : s.points)
            w.row({s.group, s.metric, csv::fmt_int(pt.rel_year), csv::fmt_double(pt.mean),
                   opt_field(pt.ci_low), opt_field(pt.ci_high), csv::fmt_int(pt.n)});
    return out;
}

std::string Pipeline::write_report() {
    std::string out = path("report.csv");
    csv::Writer w(out);
    w.row({"figure", "series", "x", "value", "ci_low", "ci_high", "n"});

    std::vector<std::string> enabled;
    if (opt_.novelty) enabled.push_back("novelty");
    if (opt_.convergence) enabled.push_back("convergence");
    if (opt_.interdisciplinarity) enabled.push_back("interdisciplinarity");

    // corpus-wide yearly trends of each measure
    for (const auto& name : enabled) {
        const auto* col = measure_column(measures(), name);
        std::vector<TrajectoryObs> obs;
        for (PaperIdx p = 0; p < corpus_.n_papers(); ++p) {
            if (opt_.filters.exclude_reviews && corpus_.papers[p].is_review) continue;
            if ((*col)[p]) obs.push_back({"all", corpus_.papers[p].pub_year, *(*col)[p]});
        }
        for (const auto& s : trajectory(obs, name, corpus_.min_year, corpus_.max_year))
            for (const auto& pt : s.points)
                w.row({"trend_" + name, "all", csv::fmt_int(pt.rel_year),
                       csv::fmt_double(pt.mean), opt_field(pt.ci_low), opt_field(pt.ci_high),
                       csv::fmt_int(pt.n)});
    }

    // matched-cohort trajectories: measures and embeddedness metrics
    auto gs = groups();
    std::vector<std::string> metrics = enabled;
    metrics.insert(metrics.end(), {"tie_duration", "tie_overlap", "topic_similarity"});
    for (const auto& name : metrics) {
        auto obs = trajectory_observations(corpus_, gs, value_source(corpus_, measures(), name),
                                           opt_.filters.exclude_reviews, opt_.random_per_pw,
                                           opt_.match.min_publications, opt_.seed);
        for (const auto& s : trajectory(obs, name, opt_.window_lo, opt_.window_hi))
            for (const auto& pt : s.points)
                w.row({"trajectory_" + name, s.group, csv::fmt_int(pt.rel_year),
                       csv::fmt_double(pt.mean), opt_field(pt.ci_low), opt_field(pt.ci_high),
                       csv::fmt_int(pt.n)});
    }

    // coefficient plots of the matched-cohort regressions
    for (const auto& name : enabled) {
        auto rows = regression_rows(corpus_, gs, measures(), name, ModelPreset::coevolution,
                                    opt_.filters.exclude_reviews);
        RegressionFit fit;
        try {
            fit = fe_ols(rows, ModelPreset::coevolution);
        } catch (const std::exception&) {
            continue;  // too few rows on toy corpora; the report simply omits the figure
        }
        for (size_t t = 0; t < fit.terms.size(); ++t) {
            const auto& term = fit.terms[t];
            w.row({"coef_coevolution_" + name, term.name, csv::fmt_int(static_cast<int>(t)),
                   csv::fmt_double(term.estimate), csv::fmt_double(term.estimate - 1.96 * term.se),
                   csv::fmt_double(term.estimate + 1.96 * term.se),
                   csv::fmt_int(static_cast<long long>(fit.n))});
        }
    }
    return out;
}

std::string Pipeline::write_provenance(const std::string& command) {
    std::string out = path("provenance.csv");
    csv::Writer w(out);
    w.row({"key", "value"});
    w.row({"command", command});
    w.row({"scimatch_version", SCIMATCH_VERSION});
    w.row({"config_hash", hex64(config_hash_)});
    w.row({"seed", csv::fmt_int(static_cast<long long>(opt_.seed))});
    auto input = [&](const char* key, const std::string& p) {
        uint64_t h = config::fnv1a_file(p);
        w.row({std::string(key) + "_path", p});
        w.row({std::string(key) + "_hash", h ? hex64(h) : std::string("absent")});
    };
    input("papers", opt_.corpus.papers);
    input("citations", opt_.corpus.citations);
    input("authorships", opt_.corpus.authorships);
    input("prizes", opt_.corpus.prizes);
    w.row({"n_papers", csv::fmt_int(static_cast<long long>(corpus_.n_papers()))});
    w.row({"n_authors", csv::fmt_int(static_cast<long long>(corpus_.n_authors()))});
    w.row({"n_citations", csv::fmt_int(static_cast<long long>(corpus_.report.citations_kept))});
    w.row({"n_prizes", csv::fmt_int(static_cast<long long>(corpus_.report.prizes_kept))});
    return out;
}

std::vector<std::string> Pipeline::run_all() {
    std::vector<std::string> written;
    written.push_back(write_provenance("pipeline"));
    if (opt_.novelty) written.push_back(write_null_stats());
    for (auto& p : write_measures()) written.push_back(std::move(p));
    written.push_back(write_embeddedness());
    written.push_back(write_matches());
    written.push_back(write_balance());
    std::vector<std::string> enabled;
    if (opt_.novelty) enabled.push_back("novelty");
    if (opt_.convergence) enabled.push_back("convergence");
    if (opt_.interdisciplinarity) enabled.push_back("interdisciplinarity");
    for (const auto& name : enabled)
        written.push_back(write_regression(ModelPreset::coevolution, name));
    for (const auto& name : enabled) written.push_back(write_trajectory(name));
    written.push_back(write_report());
    return written;
}

}  // namespace scimatch
