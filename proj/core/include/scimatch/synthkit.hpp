#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "scimatch/corpus.hpp"

namespace scimatch {

// Knobs for the synthetic corpus. Venues inside a discipline form two
// subclusters; ordinary papers cite within their home subcluster, and a
// "bridging" paper devotes part of its reference list to the opposite one.
// Bridged reference lists are what the novelty measure is built to flag, so
// the bridge probability is the planted ground truth: prizewinner papers from
// the prize year onward bridge with probability base_bridge_prob + delta,
// everything else with base_bridge_prob.
struct SynthConfig {
    uint64_t seed = 1;

    int n_authors = 1800;  // ordinary scholars
    int n_pw = 200;        // prizewinners; each gets one planted twin
    int start_year = 1960;
    int n_years = 46;

    int career_min = 18;
    int career_max = 30;
    double pubs_rate_min = 0.25;  // ordinary lead-paper rate per year
    double pubs_rate_max = 0.90;
    double pw_rate_min = 1.4;  // prizewinner (and twin) rate per year
    double pw_rate_max = 2.2;
    double team_mean = 2.0;  // extra coauthors per paper

    int n_disciplines = 4;
    int venues_per_subcluster = 12;
    int subjects_l1_per_disc = 8;
    int n_topics = 160;

    double ref_rate = 6.0;    // mean references per paper (floor 2)
    double ref_stray = 0.02;  // chance an ordinary reference leaves the home subcluster
    int ref_window = 12;      // references reach back this many years

    double cite_demand_rate = 0.30;  // scales yearly citations to pw/twin papers
    double base_bridge_prob = 0.04;
    double delta = 0.05;  // extra bridge probability, pw papers from t* on

    int prize_offset_min = 8;  // t* - career start lies in [min, min+6]
    int post_years_min = 12;   // career continues at least this far past t*
    double multi_prize_frac = 0.15;
    double review_frac = 0.05;
    int min_publications = 10;
};

// Everything the generator knows: the four corpus tables plus the planted
// ground truth, kept in memory so tests can skip the file round trip.
struct SynthOutput {
    struct PaperRow {
        std::string id;
        int year = 0;
        std::string venue;
        std::vector<std::string> l0, l1, topics;
        bool review = false;
    };
    struct RoleRow {
        std::string author;
        std::string role;  // "pw", "twin", "regular"
        int prize_year = 0;  // 0 for regular scholars
        double delta = 0.0;
    };

    std::vector<PaperRow> papers;
    std::vector<std::pair<std::string, std::string>> citations;  // citing, cited
    std::vector<std::tuple<std::string, std::string, int>> authorships;
    std::vector<std::tuple<std::string, std::string, int, double>> prizes;

    std::vector<RoleRow> manifest;
    std::vector<std::pair<std::string, bool>> planted;          // paper id, bridged
    std::vector<std::pair<std::string, std::string>> twin_pairs;  // pw id, twin id

    Corpus to_corpus() const;

    // papers.csv, citations.csv, authorships.csv, prizes.csv, manifest.csv,
    // planted_flags.csv under dir (created if missing).
    void write(const std::string& dir) const;
};

// Deterministic in config.seed; throws std::invalid_argument on infeasible
// configs (zero scholars with prizewinners requested, windows that do not
// fit the year range, and so on).
SynthOutput generate(const SynthConfig& config);

}  // namespace scimatch
