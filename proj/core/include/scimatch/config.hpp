#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "scimatch/corpus.hpp"
#include "scimatch/matching.hpp"
#include "scimatch/synthkit.hpp"

namespace scimatch::config {

// Flat key-value config with [section] headers and # comments. Keys are
// addressed as "section.key"; keys before any header have no prefix.
class KeyValues {
public:
    static KeyValues parse_file(const std::string& path);
    static KeyValues parse_text(const std::string& text, const std::string& where = "<config>");

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback = {}) const;
    long long get_int(const std::string& key, long long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    void set(const std::string& key, const std::string& value);

    // Sorted key=value lines; what the config hash is computed over.
    std::string canonical() const;
    uint64_t hash() const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
    std::string where_ = "<config>";
};

// FNV-1a, 64 bit.
uint64_t fnv1a(const std::string& bytes);
uint64_t fnv1a_file(const std::string& path);  // 0 when unreadable

// Sample restrictions applied when assembling regression and trajectory
// inputs; the measures themselves always run on the whole corpus.
struct Filters {
    bool exclude_reviews = false;
    std::string prestige_split;  // "", "top", "rest": first prize in the top prestige quartile
    std::string discipline;      // keep groups whose prizewinner has this level-0 subject
    std::optional<int> year_min, year_max;  // keep groups by prize year
};

struct PipelineOptions {
    CorpusPaths corpus;
    std::string outdir = "out";
    uint64_t seed = 42;
    int null_replicates = 10;
    int threads = 1;
    MatchSpec match;
    bool novelty = true;
    bool convergence = true;
    bool interdisciplinarity = true;
    int window_lo = -20;
    int window_hi = 20;
    int random_per_pw = 5;  // size of the random comparison group
    Filters filters;
};

// Throws std::runtime_error on unknown enum values or a malformed window.
PipelineOptions pipeline_options(const KeyValues& kv);
SynthConfig synth_config(const KeyValues& kv);

// A fully commented template with every knob at its default.
std::string default_config_text();

}  // namespace scimatch::config
