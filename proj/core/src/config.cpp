#include "scimatch/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scimatch::config {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

KeyValues KeyValues::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

KeyValues KeyValues::parse_text(const std::string& text, const std::string& where) {
    KeyValues kv;
    kv.where_ = where;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::runtime_error(where + ":" + std::to_string(lineno) +
                                         ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(where + ":" + std::to_string(lineno) +
                                     ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error(where + ":" + std::to_string(lineno) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        kv.entries_[key] = value;
    }
    return kv;
}

bool KeyValues::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string KeyValues::get(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

long long KeyValues::get_int(const std::string& key, long long fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        size_t pos = 0;
        long long v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(where_ + ": key '" + key + "' is not an integer: " + it->second);
    }
}

double KeyValues::get_double(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(where_ + ": key '" + key + "' is not a number: " + it->second);
    }
}

bool KeyValues::get_bool(const std::string& key, bool fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::runtime_error(where_ + ": key '" + key + "' is not a boolean: " + v);
}

void KeyValues::set(const std::string& key, const std::string& value) { entries_[key] = value; }

std::string KeyValues::canonical() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

uint64_t KeyValues::hash() const { return fnv1a(canonical()); }

uint64_t fnv1a(const std::string& bytes) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return 0;
    uint64_t h = 14695981039346656037ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (got < static_cast<std::streamsize>(sizeof buf)) break;
    }
    return h;
}

PipelineOptions pipeline_options(const KeyValues& kv) {
    PipelineOptions o;
    o.corpus.papers = kv.get("corpus.papers", "papers.csv");
    o.corpus.citations = kv.get("corpus.citations", "citations.csv");
    o.corpus.authorships = kv.get("corpus.authorships", "authorships.csv");
    o.corpus.prizes = kv.get("corpus.prizes", "prizes.csv");

    o.outdir = kv.get("run.outdir", o.outdir);
    o.seed = static_cast<uint64_t>(kv.get_int("run.seed", static_cast<long long>(o.seed)));
    o.threads = static_cast<int>(kv.get_int("run.threads", o.threads));
    o.null_replicates =
        static_cast<int>(kv.get_int("null.replicates", o.null_replicates));

    MatchSpec& m = o.match;
    std::string method = kv.get("match.method", "dom");
    auto mm = match_method_from_name(method);
    if (!mm) throw std::runtime_error("unknown match.method: " + method);
    m.method = *mm;
    m.traceback_years = static_cast<int>(kv.get_int("match.traceback_years", m.traceback_years));
    m.dom_threshold = kv.get_double("match.dom_threshold", m.dom_threshold);
    m.innovation_threshold = kv.get_double("match.innovation_threshold", m.innovation_threshold);
    m.max_candidates = static_cast<int>(kv.get_int("match.max_candidates", m.max_candidates));
    m.k = static_cast<int>(kv.get_int("match.k", m.k));
    m.career_window = static_cast<int>(kv.get_int("match.career_window", m.career_window));
    m.totals_tolerance = kv.get_double("match.totals_tolerance", m.totals_tolerance);
    m.match_team_size = kv.get_bool("match.match_team_size", m.match_team_size);
    m.team_tolerance = kv.get_double("match.team_tolerance", m.team_tolerance);
    m.min_publications = static_cast<int>(kv.get_int("match.min_publications", m.min_publications));
    m.theta_shortlist = static_cast<int>(kv.get_int("match.theta_shortlist", m.theta_shortlist));
    m.allow_reuse = kv.get_bool("match.allow_reuse", m.allow_reuse);

    o.novelty = kv.get_bool("measures.novelty", o.novelty);
    o.convergence = kv.get_bool("measures.convergence", o.convergence);
    o.interdisciplinarity = kv.get_bool("measures.interdisciplinarity", o.interdisciplinarity);

    o.window_lo = static_cast<int>(kv.get_int("report.window_lo", o.window_lo));
    o.window_hi = static_cast<int>(kv.get_int("report.window_hi", o.window_hi));
    o.random_per_pw = static_cast<int>(kv.get_int("report.random_per_pw", o.random_per_pw));
    if (o.window_lo > o.window_hi)
        throw std::runtime_error("report window bounds out of order");

    o.filters.exclude_reviews = kv.get_bool("filters.exclude_reviews", false);
    o.filters.prestige_split = kv.get("filters.prestige_split", "");
    if (!o.filters.prestige_split.empty() && o.filters.prestige_split != "top" &&
        o.filters.prestige_split != "rest")
        throw std::runtime_error("filters.prestige_split must be empty, 'top' or 'rest'");
    o.filters.discipline = kv.get("filters.discipline", "");
    if (kv.has("filters.year_min"))
        o.filters.year_min = static_cast<int>(kv.get_int("filters.year_min", 0));
    if (kv.has("filters.year_max"))
        o.filters.year_max = static_cast<int>(kv.get_int("filters.year_max", 0));
    return o;
}

SynthConfig synth_config(const KeyValues& kv) {
    SynthConfig c;
    c.seed = static_cast<uint64_t>(kv.get_int("synth.seed", static_cast<long long>(c.seed)));
    c.n_authors = static_cast<int>(kv.get_int("synth.n_authors", c.n_authors));
    c.n_pw = static_cast<int>(kv.get_int("synth.n_pw", c.n_pw));
    c.start_year = static_cast<int>(kv.get_int("synth.start_year", c.start_year));
    c.n_years = static_cast<int>(kv.get_int("synth.n_years", c.n_years));
    c.career_min = static_cast<int>(kv.get_int("synth.career_min", c.career_min));
    c.career_max = static_cast<int>(kv.get_int("synth.career_max", c.career_max));
    c.pubs_rate_min = kv.get_double("synth.pubs_rate_min", c.pubs_rate_min);
    c.pubs_rate_max = kv.get_double("synth.pubs_rate_max", c.pubs_rate_max);
    c.pw_rate_min = kv.get_double("synth.pw_rate_min", c.pw_rate_min);
    c.pw_rate_max = kv.get_double("synth.pw_rate_max", c.pw_rate_max);
    c.team_mean = kv.get_double("synth.team_mean", c.team_mean);
    c.n_disciplines = static_cast<int>(kv.get_int("synth.n_disciplines", c.n_disciplines));
    c.venues_per_subcluster =
        static_cast<int>(kv.get_int("synth.venues_per_subcluster", c.venues_per_subcluster));
    c.subjects_l1_per_disc =
        static_cast<int>(kv.get_int("synth.subjects_l1_per_disc", c.subjects_l1_per_disc));
    c.n_topics = static_cast<int>(kv.get_int("synth.n_topics", c.n_topics));
    c.ref_rate = kv.get_double("synth.ref_rate", c.ref_rate);
    c.ref_stray = kv.get_double("synth.ref_stray", c.ref_stray);
    c.ref_window = static_cast<int>(kv.get_int("synth.ref_window", c.ref_window));
    c.cite_demand_rate = kv.get_double("synth.cite_demand_rate", c.cite_demand_rate);
    c.base_bridge_prob = kv.get_double("synth.base_bridge_prob", c.base_bridge_prob);
    c.delta = kv.get_double("synth.delta", c.delta);
    c.prize_offset_min = static_cast<int>(kv.get_int("synth.prize_offset_min", c.prize_offset_min));
    c.post_years_min = static_cast<int>(kv.get_int("synth.post_years_min", c.post_years_min));
    c.multi_prize_frac = kv.get_double("synth.multi_prize_frac", c.multi_prize_frac);
    c.review_frac = kv.get_double("synth.review_frac", c.review_frac);
    c.min_publications =
        static_cast<int>(kv.get_int("synth.min_publications", c.min_publications));
    return c;
}

std::string default_config_text() {
    return R"(# scimatch pipeline configuration
# Flat key = value entries under [section] headers. Unknown keys are ignored.

[corpus]
papers = papers.csv
citations = citations.csv
authorships = authorships.csv
prizes = prizes.csv

[run]
outdir = out
seed = 42
threads = 1

[null]
# shuffle replicates behind the venue-pair z-scores
replicates = 10

[match]
# dom | mahalanobis | innovation
method = dom
traceback_years = 5
dom_threshold = 0.6
innovation_threshold = 0.1
max_candidates = 200
k = 5
career_window = 2
totals_tolerance = 0.30
match_team_size = false
team_tolerance = 0.30
min_publications = 10
theta_shortlist = 40
allow_reuse = true

[measures]
novelty = true
convergence = true
interdisciplinarity = true

[report]
window_lo = -20
window_hi = 20
random_per_pw = 5

[filters]
exclude_reviews = false
# empty | top | rest
prestige_split =
# restrict to groups whose prizewinner works in this level-0 subject
discipline =
# year_min = 1970
# year_max = 1995

[synth]
seed = 1
n_authors = 1800
n_pw = 200
start_year = 1960
n_years = 46
career_min = 18
career_max = 30
pubs_rate_min = 0.25
pubs_rate_max = 0.90
pw_rate_min = 1.1
pw_rate_max = 2.2
team_mean = 2.0
n_disciplines = 4
venues_per_subcluster = 12
subjects_l1_per_disc = 8
n_topics = 160
ref_rate = 6.0
ref_stray = 0.02
ref_window = 12
cite_demand_rate = 0.55
base_bridge_prob = 0.04
delta = 0.05
prize_offset_min = 8
post_years_min = 12
multi_prize_frac = 0.15
review_frac = 0.05
min_publications = 10
)";
}

}  // namespace scimatch::config
