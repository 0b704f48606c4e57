#include "scimatch/synthkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <numeric>
#include <stdexcept>

#include "scimatch/csv.hpp"
#include "scimatch/rng.hpp"

namespace scimatch {

namespace {

// Venue landscape: two corpus-wide general venues soak up a share of
// references, each discipline has a flagship venue, the rest are small
// subcluster venues split into an even and an odd half. Citers that use a
// general venue draw their home references from the even half only, so
// general-even pairings co-occur well above shuffle expectation while
// general-odd pairings never co-occur organically. Planted papers cite one
// general venue plus odd home venues in triples: the general-odd pairings
// land below expectation and the repeated home pairings far above it, which
// is the two-sided signature the novelty measure keys on.
constexpr double kPubGeneral0 = 0.033;  // publication shares
constexpr double kPubGeneral1 = 0.017;
constexpr double kPubFlagship = 0.06;
constexpr double kGeneralSlot = 0.16;  // chance an ordinary slot cites a general venue
constexpr double kGeneral0Pref = 0.75;
constexpr double kLiteRate = 0.10;      // citers bridging two flagships
constexpr double kSloppyRate = 0.02;    // citers mixing both general venues
constexpr double kMaverickRate = 0.02;  // general citers with odd-half home references
constexpr double kFlagCiterRate = 0.15;

std::string label(const char* fmt, int a, int b = -1, int c = -1) {
    char buf[32];
    if (c >= 0)
        std::snprintf(buf, sizeof buf, fmt, a, b, c);
    else if (b >= 0)
        std::snprintf(buf, sizeof buf, fmt, a, b);
    else
        std::snprintf(buf, sizeof buf, fmt, a);
    return buf;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ';';
        out += parts[i];
    }
    return out;
}

struct Scholar {
    std::string id;
    int disc = 0, sub = 0;
    int cs = 0, ce = 0;  // active years, inclusive
    double rate = 0.0;
    std::vector<int> topics;
    bool is_pw = false, is_twin = false;
    int t_star = 0;  // planted prize year (pw and twin both carry it)
};

void validate(const SynthConfig& c) {
    auto bad = [](const std::string& what) {
        throw std::invalid_argument("synth config: " + what);
    };
    if (c.n_authors < 0 || c.n_pw < 0) bad("negative scholar counts");
    if (c.n_years < 1) bad("n_years must be positive");
    if (c.career_min < 1 || c.career_max < c.career_min) bad("career window malformed");
    if (c.pubs_rate_min <= 0 || c.pubs_rate_max < c.pubs_rate_min) bad("publication rate range");
    if (c.pw_rate_min <= 0 || c.pw_rate_max < c.pw_rate_min) bad("pw publication rate range");
    if (c.n_disciplines < 1) bad("need at least one discipline");
    if (c.venues_per_subcluster < 4) bad("too few venues per subcluster");
    if (c.subjects_l1_per_disc < 1) bad("need level-1 subjects");
    if (c.n_topics < 12) bad("need at least a dozen topics");
    if (c.ref_rate < 2.0) bad("reference rate below the two-reference floor");
    if (c.delta < 0 || c.base_bridge_prob < 0 || c.base_bridge_prob + c.delta > 1)
        bad("bridge probabilities out of range");
    if (c.n_pw > 0) {
        if (c.prize_offset_min < 1 || c.post_years_min < 1) bad("prize window malformed");
        if (c.prize_offset_min + 6 + c.post_years_min + 1 > c.n_years)
            bad("year range cannot fit the prize windows");
    }
    if (c.team_mean < 0 || c.cite_demand_rate < 0 || c.ref_stray < 0 || c.ref_stray > 1 ||
        c.review_frac < 0 || c.review_frac > 1 || c.multi_prize_frac < 0 ||
        c.multi_prize_frac > 1)
        bad("rate out of range");
}

}  // namespace

SynthOutput generate(const SynthConfig& cfg) {
    validate(cfg);
    SynthOutput out;
    Rng rng(cfg.seed);

    const int nd = cfg.n_disciplines;
    const int nv = cfg.venues_per_subcluster;
    const int end_year = cfg.start_year + cfg.n_years - 1;
    const int ny = cfg.n_years;

    std::vector<std::string> l0_names(nd);
    std::vector<std::vector<std::string>> l1_names(nd);
    std::vector<std::array<std::vector<std::string>, 2>> venue_names(nd);
    std::vector<std::string> flag_names(nd);
    const std::array<std::string, 2> general_names = {"VG00", "VG01"};
    for (int d = 0; d < nd; ++d) {
        l0_names[d] = label("D%02d", d);
        flag_names[d] = label("VF%02d", d);
        for (int j = 0; j < cfg.subjects_l1_per_disc; ++j)
            l1_names[d].push_back(label("S%02d_%02d", d, j));
        for (int s = 0; s < 2; ++s)
            for (int v = 0; v < nv; ++v)
                venue_names[d][s].push_back(label(s == 0 ? "V%02dA%02d" : "V%02dB%02d", d, v));
    }
    std::vector<std::string> topic_names;
    for (int k = 0; k < cfg.n_topics; ++k) topic_names.push_back(label("T%04d", k));

    // -- scholars -----------------------------------------------------------
    std::vector<Scholar> scholars;
    auto draw_topics = [&](Scholar& s) {
        int want = 6 + static_cast<int>(rng.below(5));
        while (static_cast<int>(s.topics.size()) < want) {
            int t = static_cast<int>(rng.below(static_cast<uint64_t>(cfg.n_topics)));
            if (std::find(s.topics.begin(), s.topics.end(), t) == s.topics.end())
                s.topics.push_back(t);
        }
        std::sort(s.topics.begin(), s.topics.end());
    };

    for (int i = 0; i < cfg.n_authors; ++i) {
        Scholar s;
        s.id = label("r%05d", i);
        s.disc = static_cast<int>(rng.below(static_cast<uint64_t>(nd)));
        s.sub = static_cast<int>(rng.below(2));
        int career = std::min(rng.range(cfg.career_min, cfg.career_max), ny);
        s.cs = cfg.start_year + static_cast<int>(rng.below(static_cast<uint64_t>(ny - career + 1)));
        s.ce = s.cs + career - 1;
        s.rate = rng.uniform(cfg.pubs_rate_min, cfg.pubs_rate_max);
        draw_topics(s);
        scholars.push_back(std::move(s));
    }

    std::vector<size_t> pw_idx, twin_idx;
    for (int i = 0; i < cfg.n_pw; ++i) {
        Scholar pw;
        pw.id = label("w%04d", i);
        pw.is_pw = true;
        pw.disc = static_cast<int>(rng.below(static_cast<uint64_t>(nd)));
        pw.sub = static_cast<int>(rng.below(2));
        pw.rate = rng.uniform(cfg.pw_rate_min, cfg.pw_rate_max);
        int offs = cfg.prize_offset_min + static_cast<int>(rng.below(7));
        int latest_cs = end_year - cfg.post_years_min - offs;
        pw.cs = cfg.start_year +
                static_cast<int>(rng.below(static_cast<uint64_t>(latest_cs - cfg.start_year + 1)));
        pw.t_star = pw.cs + offs;
        pw.ce = std::min(end_year, pw.t_star + cfg.post_years_min + static_cast<int>(rng.below(5)));
        draw_topics(pw);

        Scholar tw;
        tw.id = label("t%04d", i);
        tw.is_twin = true;
        tw.disc = pw.disc;
        tw.sub = pw.sub;
        tw.rate = pw.rate;
        tw.cs = pw.cs;
        tw.t_star = pw.t_star;
        tw.ce = std::min(end_year, std::max(pw.t_star + cfg.post_years_min,
                                            pw.ce + rng.range(-1, 1)));
        draw_topics(tw);

        pw_idx.push_back(scholars.size());
        scholars.push_back(std::move(pw));
        twin_idx.push_back(scholars.size());
        scholars.push_back(std::move(tw));
        out.twin_pairs.push_back({scholars[pw_idx.back()].id, scholars[twin_idx.back()].id});
    }

    // -- planned yearly publication counts for pw/twin pairs -----------------
    auto year_slot = [&](int y) { return static_cast<size_t>(y - cfg.start_year); };
    std::vector<std::vector<int>> plan(scholars.size());
    for (size_t n = 0; n < pw_idx.size(); ++n) {
        const Scholar& pw = scholars[pw_idx[n]];
        const Scholar& tw = scholars[twin_idx[n]];
        auto& pp = plan[pw_idx[n]];
        auto& tp = plan[twin_idx[n]];
        pp.assign(static_cast<size_t>(ny), 0);
        tp.assign(static_cast<size_t>(ny), 0);
        for (int y = pw.cs; y <= pw.ce; ++y) pp[year_slot(y)] = rng.poisson(pw.rate);
        for (int y = tw.cs; y <= tw.ce; ++y)
            tp[year_slot(y)] = (y >= pw.cs && y <= pw.ce) ? pp[year_slot(y)] : rng.poisson(tw.rate);

        // first publication pins the career start, keep the pair aligned
        if (pp[year_slot(pw.cs)] == 0) pp[year_slot(pw.cs)] = 1;
        if (tp[year_slot(tw.cs)] == 0) tp[year_slot(tw.cs)] = 1;

        int window_jitters = 0;
        std::vector<int> jittered_pre;  // years, for the totals repair pass
        for (int y = tw.cs; y <= tw.ce; ++y) {
            if (y == tw.cs) continue;
            if (!rng.bernoulli(0.15)) continue;
            bool in_window = y >= pw.t_star - 5 && y <= pw.t_star;
            if (in_window && window_jitters >= 2) continue;
            int step = rng.bernoulli(0.5) ? 1 : -1;
            if (tp[year_slot(y)] + step < 0) step = 1;
            tp[year_slot(y)] += step;
            if (in_window) ++window_jitters;
            if (y <= pw.t_star - 1) jittered_pre.push_back(y);
        }

        auto pre_total = [&](const std::vector<int>& v) {
            long long s = 0;
            for (int y = cfg.start_year; y <= pw.t_star - 1; ++y) s += v[year_slot(y)];
            return s;
        };
        long long base = pre_total(pp);
        while (!jittered_pre.empty() &&
               std::llabs(pre_total(tp) - base) >
                   static_cast<long long>(0.22 * static_cast<double>(base))) {
            int y = jittered_pre.back();
            jittered_pre.pop_back();
            tp[year_slot(y)] = pp[year_slot(y)];
        }

        long long total = 0;
        for (int v : tp) total += v;
        for (int y = pw.t_star + 1; total < cfg.min_publications && y <= end_year; ++y) {
            ++tp[year_slot(y)];
            ++total;
            if (y == end_year && total < cfg.min_publications) y = pw.t_star;
        }
    }

    // -- active ordinary scholars per (discipline, year), for coauthor draws -
    std::vector<std::vector<std::vector<size_t>>> active(
        static_cast<size_t>(nd), std::vector<std::vector<size_t>>(static_cast<size_t>(ny)));
    for (size_t si = 0; si < scholars.size(); ++si) {
        const Scholar& s = scholars[si];
        if (s.is_pw || s.is_twin) continue;
        for (int y = s.cs; y <= s.ce; ++y)
            active[static_cast<size_t>(s.disc)][year_slot(y)].push_back(si);
    }

    // -- per-paper bookkeeping ------------------------------------------------
    std::vector<int> paper_year, paper_disc, paper_sub;
    std::vector<size_t> paper_lead;
    std::vector<char> paper_planted;
    std::vector<std::vector<size_t>> scholar_papers(scholars.size());

    // organic citation targets: ordinary papers only; home pools per
    // (disc, sub, venue, year), general and flagship venues pooled separately
    using YearCells = std::vector<std::vector<size_t>>;  // [year slot] -> paper indices
    std::vector<std::array<std::vector<YearCells>, 2>> organic(static_cast<size_t>(nd));
    for (int d = 0; d < nd; ++d)
        for (int s = 0; s < 2; ++s) {
            auto& per_venue = organic[static_cast<size_t>(d)][static_cast<size_t>(s)];
            per_venue.assign(static_cast<size_t>(nv), YearCells(static_cast<size_t>(ny)));
        }
    std::array<YearCells, 2> g_pool = {YearCells(static_cast<size_t>(ny)),
                                       YearCells(static_cast<size_t>(ny))};
    std::vector<YearCells> f_pool(static_cast<size_t>(nd), YearCells(static_cast<size_t>(ny)));

    std::vector<std::array<std::deque<size_t>, 2>> demand(static_cast<size_t>(nd));

    std::vector<double> decay(static_cast<size_t>(cfg.ref_window + 1));
    for (int a = 0; a <= cfg.ref_window; ++a) decay[static_cast<size_t>(a)] = std::pow(0.85, a);

    auto make_paper = [&](size_t lead, int y, bool planted) {
        const Scholar& s = scholars[lead];
        SynthOutput::PaperRow row;
        size_t pidx = out.papers.size();
        // venue kind: 0 home, 1/2 the general venues, 3 the discipline flagship
        int vkind = 0, vhome = -1;
        double vr = rng.u01();
        if (vr < kPubGeneral0) {
            vkind = 1;
            row.venue = general_names[0];
        } else if (vr < kPubGeneral0 + kPubGeneral1) {
            vkind = 2;
            row.venue = general_names[1];
        } else if (vr < kPubGeneral0 + kPubGeneral1 + kPubFlagship) {
            vkind = 3;
            row.venue = flag_names[static_cast<size_t>(s.disc)];
        } else {
            vhome = static_cast<int>(rng.below(static_cast<uint64_t>(nv)));
            row.venue = venue_names[static_cast<size_t>(s.disc)][static_cast<size_t>(s.sub)]
                                   [static_cast<size_t>(vhome)];
        }
        row.id = label("P%06d", static_cast<int>(pidx));
        row.year = y;
        row.l0.push_back(l0_names[static_cast<size_t>(s.disc)]);
        int nl1 = 1 + (rng.bernoulli(0.3) ? 1 : 0);
        while (static_cast<int>(row.l1.size()) < nl1) {
            const auto& cand = l1_names[static_cast<size_t>(s.disc)]
                                       [rng.below(static_cast<uint64_t>(cfg.subjects_l1_per_disc))];
            if (std::find(row.l1.begin(), row.l1.end(), cand) == row.l1.end())
                row.l1.push_back(cand);
        }
        int nt = std::min<int>(2 + static_cast<int>(rng.below(3)),
                               static_cast<int>(s.topics.size()));
        while (static_cast<int>(row.topics.size()) < nt) {
            const auto& cand =
                topic_names[static_cast<size_t>(s.topics[rng.below(s.topics.size())])];
            if (std::find(row.topics.begin(), row.topics.end(), cand) == row.topics.end())
                row.topics.push_back(cand);
        }
        row.review = rng.bernoulli(cfg.review_frac);

        // byline: lead dropped into a random slot among the drawn coauthors
        int nco = std::min(rng.poisson(cfg.team_mean), 6);
        std::vector<size_t> coauthors;
        const auto& pool = active[static_cast<size_t>(s.disc)][year_slot(y)];
        int attempts = 0;
        while (static_cast<int>(coauthors.size()) < nco && attempts < 4 * (nco + 1) &&
               !pool.empty()) {
            ++attempts;
            size_t cand = pool[rng.below(pool.size())];
            if (cand == lead) continue;
            if (std::find(coauthors.begin(), coauthors.end(), cand) != coauthors.end()) continue;
            coauthors.push_back(cand);
        }
        size_t lead_pos = rng.below(coauthors.size() + 1);
        coauthors.insert(coauthors.begin() + static_cast<long>(lead_pos), lead);
        for (size_t bi = 0; bi < coauthors.size(); ++bi)
            out.authorships.push_back({row.id, scholars[coauthors[bi]].id, static_cast<int>(bi)});

        out.planted.push_back({row.id, planted});
        out.papers.push_back(std::move(row));
        paper_year.push_back(y);
        paper_disc.push_back(s.disc);
        paper_sub.push_back(s.sub);
        paper_lead.push_back(lead);
        paper_planted.push_back(planted ? 1 : 0);
        scholar_papers[lead].push_back(pidx);
        if (!s.is_pw && !s.is_twin) {
            if (vkind == 0)
                organic[static_cast<size_t>(s.disc)][static_cast<size_t>(s.sub)]
                       [static_cast<size_t>(vhome)][year_slot(y)]
                           .push_back(pidx);
            else if (vkind == 3)
                f_pool[static_cast<size_t>(s.disc)][year_slot(y)].push_back(pidx);
            else
                g_pool[static_cast<size_t>(vkind - 1)][year_slot(y)].push_back(pidx);
        }
        return pidx;
    };

    // recency-weighted draw from one pooled venue class
    auto sample_cells = [&](const YearCells& cells, int y,
                            const std::vector<size_t>& have) -> std::optional<size_t> {
        int lo = std::max(cfg.start_year, y - cfg.ref_window);
        double total = 0;
        for (int yy = lo; yy <= y; ++yy)
            total += static_cast<double>(cells[year_slot(yy)].size()) *
                     decay[static_cast<size_t>(y - yy)];
        if (total <= 0) return std::nullopt;
        for (int attempt = 0; attempt < 6; ++attempt) {
            double r = rng.u01() * total;
            const std::vector<size_t>* cell = nullptr;
            for (int yy = lo; yy <= y; ++yy) {
                double w = static_cast<double>(cells[year_slot(yy)].size()) *
                           decay[static_cast<size_t>(y - yy)];
                if (r < w) {
                    cell = &cells[year_slot(yy)];
                    break;
                }
                r -= w;
            }
            if (!cell || cell->empty()) continue;
            size_t target = (*cell)[rng.below(cell->size())];
            if (std::find(have.begin(), have.end(), target) == have.end()) return target;
        }
        return std::nullopt;
    };

    // recency-weighted draw of an ordinary home-venue paper; venue < 0 = any,
    // in which case parity 1 restricts to odd venues and parity 0 to the two
    // leading even venues every general citer shares
    auto sample_organic = [&](int d, int sub, int venue, int parity, int y,
                              const std::vector<size_t>& have) -> std::optional<size_t> {
        const auto& cells = organic[static_cast<size_t>(d)][static_cast<size_t>(sub)];
        int lo = std::max(cfg.start_year, y - cfg.ref_window);
        int v0 = venue >= 0 ? venue : 0;
        int v1 = venue >= 0 ? venue : nv - 1;
        auto skip = [&](int v) {
            if (venue >= 0 || parity < 0) return false;
            return parity == 1 ? (v & 1) == 0 : v != 0 && v != 2;
        };
        double total = 0;
        for (int v = v0; v <= v1; ++v) {
            if (skip(v)) continue;
            for (int yy = lo; yy <= y; ++yy)
                total += static_cast<double>(cells[static_cast<size_t>(v)][year_slot(yy)].size()) *
                         decay[static_cast<size_t>(y - yy)];
        }
        if (total <= 0) return std::nullopt;
        for (int attempt = 0; attempt < 6; ++attempt) {
            double r = rng.u01() * total;
            const std::vector<size_t>* cell = nullptr;
            for (int v = v0; v <= v1 && !cell; ++v) {
                if (skip(v)) continue;
                for (int yy = lo; yy <= y; ++yy) {
                    double w =
                        static_cast<double>(cells[static_cast<size_t>(v)][year_slot(yy)].size()) *
                        decay[static_cast<size_t>(y - yy)];
                    if (r < w) {
                        cell = &cells[static_cast<size_t>(v)][year_slot(yy)];
                        break;
                    }
                    r -= w;
                }
            }
            if (!cell || cell->empty()) continue;
            size_t target = (*cell)[rng.below(cell->size())];
            if (std::find(have.begin(), have.end(), target) == have.end()) return target;
        }
        return std::nullopt;
    };

    std::vector<long long> cum_demand(scholars.size(), 0);

    for (int y = cfg.start_year; y <= end_year; ++y) {
        std::vector<size_t> year_papers;

        for (size_t si = 0; si < scholars.size(); ++si) {
            const Scholar& s = scholars[si];
            int n;
            if (s.is_pw || s.is_twin) {
                n = plan[si].empty() ? 0 : plan[si][year_slot(y)];
            } else {
                if (y < s.cs || y > s.ce) continue;
                n = rng.poisson(s.rate);
            }
            for (int j = 0; j < n; ++j) {
                double bridge_prob = cfg.base_bridge_prob;
                if (s.is_pw && y >= s.t_star) bridge_prob += cfg.delta;
                year_papers.push_back(make_paper(si, y, rng.bernoulli(bridge_prob)));
            }
        }

        // demand: citations to pw/twin papers arrive through ordinary papers'
        // reference lists, twin yearly demand mirroring its pw's draw
        for (size_t n = 0; n < pw_idx.size(); ++n) {
            size_t pwi = pw_idx[n], twi = twin_idx[n];
            if (scholars[pwi].cs > y) continue;
            auto weight_of = [&](size_t paper) {
                int age = y - paper_year[paper];
                return age <= cfg.ref_window ? decay[static_cast<size_t>(age)] : 0.0;
            };
            auto pick = [&](size_t scholar, int count, std::vector<size_t>& into) {
                const auto& ps = scholar_papers[scholar];
                if (ps.empty()) return;
                double total = 0;
                for (size_t p : ps) total += weight_of(p);
                if (total <= 0) return;
                for (int cpy = 0; cpy < count; ++cpy) {
                    double r = rng.u01() * total;
                    size_t chosen = ps.back();
                    for (size_t p : ps) {
                        double w = weight_of(p);
                        if (r < w) {
                            chosen = p;
                            break;
                        }
                        r -= w;
                    }
                    into.push_back(chosen);
                }
            };

            double w = 0;
            for (size_t p : scholar_papers[pwi]) w += weight_of(p);
            int d_pw = rng.poisson(cfg.cite_demand_rate * w);
            int d_tw = d_pw;
            // hold the twin's demand exactly equal while counts are small: a
            // one-citation gap on a tiny base reads as a large relative gap
            if (cum_demand[pwi] >= 20 && rng.bernoulli(0.2))
                d_tw = std::max(0, d_tw + (rng.bernoulli(0.5) ? 1 : -1));
            long long drift = (cum_demand[twi] + d_tw) - (cum_demand[pwi] + d_pw);
            if (std::llabs(drift) >
                static_cast<long long>(
                    0.2 * static_cast<double>(std::max<long long>(cum_demand[pwi] + d_pw, 10))))
                d_tw = d_pw;
            // queue the pair's targets interleaved so a citing paper taking
            // consecutive entries cites both members in the same year, keeping
            // their yearly citation series aligned rather than just the totals
            std::vector<size_t> t_pw, t_tw;
            pick(pwi, d_pw, t_pw);
            pick(twi, d_tw, t_tw);
            for (size_t k = 0; k < std::max(t_pw.size(), t_tw.size()); ++k) {
                for (const auto* tv : {&t_pw, &t_tw}) {
                    if (k >= tv->size()) continue;
                    size_t c = (*tv)[k];
                    demand[static_cast<size_t>(paper_disc[c])]
                          [static_cast<size_t>(paper_sub[c])]
                              .push_back(c);
                }
            }
            cum_demand[pwi] += static_cast<long long>(t_pw.size());
            cum_demand[twi] += static_cast<long long>(t_tw.size());
        }

        // references
        for (size_t p : year_papers) {
            int budget = 2 + rng.poisson(cfg.ref_rate - 2.0);
            std::vector<size_t> refs;
            const int d = paper_disc[p], sub = paper_sub[p];
            const Scholar& lead = scholars[paper_lead[p]];
            const bool scholar_paper = lead.is_pw || lead.is_twin;

            int ref_parity = -1;  // even/odd home-venue restriction for this paper
            auto home_ref = [&]() {
                bool cross = rng.bernoulli(cfg.ref_stray);
                auto t = sample_organic(d, cross ? 1 - sub : sub, -1, ref_parity, y, refs);
                if (t && *t != p) refs.push_back(*t);
            };
            auto pool_ref = [&](const YearCells& cells) {
                auto t = sample_cells(cells, y, refs);
                if (t && *t != p)
                    refs.push_back(*t);
                else
                    home_ref();  // thin early pools degrade to a home reference
            };

            if (paper_planted[p]) {
                // one general venue plus odd home venues cited in blocks of
                // four, alternating between the discipline's two subject
                // clusters: the general-odd pairings sit below shuffle
                // expectation while the repeated cross-cluster pairings sit
                // far above it
                int b = std::min(std::max(budget, 8), 9);
                ref_parity = 1;
                pool_ref(g_pool[0]);
                int slots = b - static_cast<int>(refs.size());
                std::array<std::vector<int>, 2> vord;
                for (int v = 1; v < nv; v += 2) {
                    vord[0].push_back(v);
                    vord[1].push_back(v);
                }
                rng.shuffle(vord[0]);
                rng.shuffle(vord[1]);
                std::array<size_t, 2> vi{0, 0};
                int side = 0;
                while (slots > 0) {
                    int want = std::min(slots, 4);
                    int got = 0;
                    int cluster = side;
                    side ^= 1;
                    if (vi[cluster] < vord[cluster].size()) {
                        int v = vord[cluster][vi[cluster]++];
                        for (int k = 0; k < want; ++k) {
                            auto t =
                                sample_organic(d, cluster ? 1 - sub : sub, v, -1, y, refs);
                            if (!t || *t == p) break;
                            refs.push_back(*t);
                            ++got;
                        }
                    }
                    for (int k = got; k < want; ++k) home_ref();
                    slots -= want;
                }
            } else {
                // archetype and general-venue usage decided first: general
                // citers skip the demand queue so their pairings stay on the
                // hot even venues
                double ar = rng.u01();
                bool lite = ar < kLiteRate;
                bool sloppy = !lite && ar < kLiteRate + kSloppyRate;
                bool maverick = !lite && !sloppy && ar < kLiteRate + kSloppyRate + kMaverickRate;
                bool flag_citer =
                    !lite && !sloppy && !maverick && rng.bernoulli(kFlagCiterRate);
                const auto& g_pref = g_pool[rng.bernoulli(kGeneral0Pref) ? 0 : 1];

                int arch = 0;
                if ((lite || sloppy || flag_citer) && budget >= 2)
                    arch = 2;
                else if (maverick)
                    arch = 1;
                int n_general = 0;
                if (!sloppy)
                    for (int k = 0; k < budget - arch; ++k)
                        if (rng.bernoulli(kGeneralSlot)) ++n_general;
                bool uses_general = n_general > 0 || sloppy || maverick ||
                                    (flag_citer && arch == 2);
                ref_parity = maverick ? 1 : uses_general ? 0 : -1;

                if (!scholar_paper && !uses_general) {
                    auto& q = demand[static_cast<size_t>(d)][static_cast<size_t>(sub)];
                    int take = std::min(4, std::max(0, budget - 2));
                    for (int k = 0; k < take && !q.empty(); ++k) {
                        size_t target = q.front();
                        q.pop_front();
                        if (std::find(refs.begin(), refs.end(), target) != refs.end()) {
                            q.push_back(target);
                            break;
                        }
                        refs.push_back(target);
                    }
                }
                if (lite && arch == 2) {
                    pool_ref(f_pool[static_cast<size_t>(d)]);
                    pool_ref(f_pool[static_cast<size_t>((d + 1) % nd)]);
                } else if (sloppy && arch == 2) {
                    pool_ref(g_pool[0]);
                    pool_ref(g_pool[1]);
                } else if (maverick && arch == 1) {
                    pool_ref(g_pref);
                } else if (flag_citer && arch == 2) {
                    pool_ref(f_pool[static_cast<size_t>(d)]);
                    pool_ref(g_pref);
                }
                for (int k = 0; k < n_general; ++k) pool_ref(g_pref);
                int fill = budget - static_cast<int>(refs.size());
                for (int k = 0; k < fill; ++k) home_ref();
            }
            for (size_t t : refs) out.citations.push_back({out.papers[p].id, out.papers[t].id});
        }
    }

    // -- prizes ----------------------------------------------------------------
    const int n_prize_ids = std::max(1, cfg.n_pw / 3);
    std::vector<double> views(static_cast<size_t>(n_prize_ids));
    for (auto& v : views) v = std::floor(std::exp(rng.uniform(std::log(1e3), std::log(3e6))));
    for (size_t n = 0; n < pw_idx.size(); ++n) {
        const Scholar& pw = scholars[pw_idx[n]];
        int pid = static_cast<int>(rng.below(static_cast<uint64_t>(n_prize_ids)));
        out.prizes.push_back(
            {label("Z%03d", pid), pw.id, pw.t_star, views[static_cast<size_t>(pid)]});
        if (n_prize_ids >= 2 && rng.bernoulli(cfg.multi_prize_frac)) {
            int pid2 =
                (pid + 1 + static_cast<int>(rng.below(static_cast<uint64_t>(n_prize_ids - 1)))) %
                n_prize_ids;
            int y2 = pw.t_star + 2 + static_cast<int>(rng.below(5));
            if (y2 <= end_year)
                out.prizes.push_back(
                    {label("Z%03d", pid2), pw.id, y2, views[static_cast<size_t>(pid2)]});
        }
    }

    // -- ground truth ------------------------------------------------------------
    for (const Scholar& s : scholars) {
        SynthOutput::RoleRow r;
        r.author = s.id;
        r.role = s.is_pw ? "pw" : s.is_twin ? "twin" : "regular";
        r.prize_year = (s.is_pw || s.is_twin) ? s.t_star : 0;
        r.delta = s.is_pw ? cfg.delta : 0.0;
        out.manifest.push_back(std::move(r));
    }
    return out;
}

Corpus SynthOutput::to_corpus() const {
    CorpusBuilder b;
    for (const auto& p : papers)
        b.paper(p.id, p.year, p.venue, p.l0, p.l1, p.topics, p.review);
    for (const auto& [citing, cited] : citations) b.cite(citing, cited);
    for (const auto& [paper, author, index] : authorships) b.authorship(paper, author, index);
    for (const auto& [prize, author, year, v] : prizes) b.prize(prize, author, year, v);
    return b.build();
}

void SynthOutput::write(const std::string& dir) const {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        csv::Writer w(dir + "/papers.csv");
        w.row({"paper_id", "pub_year", "venue_id", "subjects_l0", "subjects_l1", "topics_fine",
               "is_review"});
        for (const auto& p : papers)
            w.row({p.id, csv::fmt_int(p.year), p.venue, join(p.l0), join(p.l1), join(p.topics),
                   p.review ? "1" : "0"});
    }
    {
        csv::Writer w(dir + "/citations.csv");
        w.row({"citing_id", "cited_id"});
        for (const auto& [citing, cited] : citations) w.row({citing, cited});
    }
    {
        csv::Writer w(dir + "/authorships.csv");
        w.row({"paper_id", "author_id", "author_index"});
        for (const auto& [paper, author, index] : authorships)
            w.row({paper, author, csv::fmt_int(index)});
    }
    {
        csv::Writer w(dir + "/prizes.csv");
        w.row({"prize_id", "author_id", "prize_year", "prestige_views"});
        for (const auto& [prize, author, year, v] : prizes)
            w.row({prize, author, csv::fmt_int(year), csv::fmt_double(v)});
    }
    {
        csv::Writer w(dir + "/manifest.csv");
        w.row({"author_id", "role", "planted_prize_year", "delta"});
        for (const auto& r : manifest)
            w.row({r.author, r.role, r.prize_year > 0 ? csv::fmt_int(r.prize_year) : "",
                   csv::fmt_double(r.delta)});
    }
    {
        csv::Writer w(dir + "/planted_flags.csv");
        w.row({"paper_id", "planted"});
        for (const auto& [paper, flagged] : planted) w.row({paper, flagged ? "1" : "0"});
    }
}

}  // namespace scimatch
