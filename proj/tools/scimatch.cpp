// scimatch: batch CLI over the corpus loaders, innovation measures, null
// model, matched-cohort construction and the downstream statistics.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "scimatch/config.hpp"
#include "scimatch/corpus.hpp"
#include "scimatch/pipeline.hpp"
#include "scimatch/synthkit.hpp"
#include "scimatch/version.hpp"

namespace sm = scimatch;
namespace cfg = scimatch::config;

namespace {

struct MissingInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require_file(const std::string& path, const char* what) {
    if (!std::filesystem::is_regular_file(path))
        throw MissingInput(std::string(what) + " not found: " + path);
}

void require_corpus(const sm::CorpusPaths& p) {
    require_file(p.papers, "papers table");
    require_file(p.citations, "citations table");
    require_file(p.authorships, "authorships table");
    require_file(p.prizes, "prizes table");
}

void ensure_measure_enabled(const cfg::PipelineOptions& opt, const std::string& name) {
    bool ok = (name == "novelty" && opt.novelty) || (name == "convergence" && opt.convergence) ||
              (name == "interdisciplinarity" && opt.interdisciplinarity) ||
              name == "tie_duration" || name == "tie_overlap" || name == "topic_similarity";
    if (!ok) throw std::runtime_error("measure disabled in config: " + name);
}

struct Options {
    std::string config_path;
    std::string papers, citations, authorships, prizes;
    std::string outdir;
    uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    int replicates = 0;

    cfg::KeyValues effective() const {
        cfg::KeyValues kv;
        if (!config_path.empty()) {
            require_file(config_path, "config file");
            kv = cfg::KeyValues::parse_file(config_path);
        }
        if (!papers.empty()) kv.set("corpus.papers", papers);
        if (!citations.empty()) kv.set("corpus.citations", citations);
        if (!authorships.empty()) kv.set("corpus.authorships", authorships);
        if (!prizes.empty()) kv.set("corpus.prizes", prizes);
        if (!outdir.empty()) kv.set("run.outdir", outdir);
        if (seed_set) kv.set("run.seed", std::to_string(seed));
        if (threads > 0) kv.set("run.threads", std::to_string(threads));
        if (replicates > 0) kv.set("null.replicates", std::to_string(replicates));
        return kv;
    }
};

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config_path, "key=value config file");
    sub->add_option("--papers", o.papers, "papers table (csv)");
    sub->add_option("--citations", o.citations, "citations table (csv)");
    sub->add_option("--authorships", o.authorships, "authorships table (csv)");
    sub->add_option("--prizes", o.prizes, "prizes table (csv)");
    sub->add_option("--outdir", o.outdir, "output directory");
    sub->add_option("--seed", o.seed, "run seed")->each([&o](const std::string&) {
        o.seed_set = true;
    });
    sub->add_option("--threads", o.threads, "worker cap (results are unaffected)");
    sub->add_option("--replicates", o.replicates, "null-model replicate count");
}

struct Loaded {
    cfg::PipelineOptions opt;
    uint64_t hash = 0;
    sm::Corpus corpus;
};

Loaded load(const Options& o, bool verbose = true) {
    cfg::KeyValues kv = o.effective();
    Loaded l{cfg::pipeline_options(kv), kv.hash(), {}};
    require_corpus(l.opt.corpus);
    l.corpus = sm::load_corpus(l.opt.corpus);
    if (verbose) std::printf("%s", l.corpus.report.summary().c_str());
    return l;
}

void print_written(const std::vector<std::string>& paths) {
    for (const auto& p : paths) std::printf("wrote %s\n", p.c_str());
}

void print_fit(const sm::RegressionFit& fit) {
    std::printf("n = %zu, rank = %zu, R^2 = %.4f\n", fit.n, fit.rank, fit.r2);
    for (const auto& name : fit.dropped) std::printf("dropped collinear term: %s\n", name.c_str());
    for (const auto& t : fit.terms)
        if (t.name == "w" || t.name == "w_post" || t.name == "w_multi" || t.name == "post")
            std::printf("%-10s %+.6f (se %.6f, t %.3f, p %.4g)%s\n", t.name.c_str(),
                        t.estimate, t.se, t.t, t.p, sm::significance_stars(t.p).c_str());
}

int run_synth(const Options& o, const std::string& out_dir) {
    cfg::KeyValues kv = o.effective();
    if (o.seed_set) kv.set("synth.seed", std::to_string(o.seed));
    sm::SynthConfig sc = cfg::synth_config(kv);
    sm::SynthOutput out = sm::generate(sc);
    out.write(out_dir);
    std::printf("synthesized %zu papers, %zu citations, %zu authorships, %zu prizes -> %s\n",
                out.papers.size(), out.citations.size(), out.authorships.size(),
                out.prizes.size(), out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scientometric measures, matched cohorts and recovery statistics"};
    app.set_version_flag("--version", SCIMATCH_VERSION);
    app.require_subcommand(1);

    Options o;

    auto* c_ingest = app.add_subcommand("ingest", "load and validate the corpus tables");
    add_common(c_ingest, o);

    auto* c_synth = app.add_subcommand("synth", "generate a synthetic corpus with planted signal");
    std::string synth_out = "synth_corpus";
    c_synth->add_option("--out", synth_out, "directory for the generated tables");
    add_common(c_synth, o);

    auto* c_null = app.add_subcommand("nullmodel", "venue-pair frequencies under citation shuffles");
    add_common(c_null, o);

    auto* c_metrics = app.add_subcommand("metrics", "paper-level innovation measures");
    std::string which = "all";
    c_metrics->add_option("which", which, "novelty|convergence|interdisciplinarity|all")
        ->check(CLI::IsMember({"novelty", "convergence", "interdisciplinarity", "all"}));
    add_common(c_metrics, o);

    auto* c_embed = app.add_subcommand("embed", "collaboration-embeddedness metrics per authorship");
    add_common(c_embed, o);

    auto* c_match = app.add_subcommand("match", "matched non-prizewinner cohorts");
    std::string method;
    c_match->add_option("method", method, "dom|mahalanobis|innovation")
        ->required()
        ->check(CLI::IsMember({"dom", "mahalanobis", "innovation"}));
    add_common(c_match, o);

    auto* c_balance = app.add_subcommand("balance", "pre-prize covariate balance of the cohort");
    add_common(c_balance, o);

    auto* c_regress = app.add_subcommand("regress", "fixed-effects panel regression");
    std::string preset, outcome = "novelty";
    c_regress->add_option("preset", preset, "model preset")
        ->required()
        ->check(CLI::IsMember({"event_study", "coevolution", "time_interaction", "did_basic",
                               "multi_prize", "embeddedness", "embed_innovation"}));
    c_regress->add_option("--outcome", outcome, "dependent variable (default novelty)");
    add_common(c_regress, o);

    auto* c_traj = app.add_subcommand("trajectory", "group means on the relative-year clock");
    std::string metric = "novelty";
    c_traj->add_option("--metric", metric, "measure or embeddedness metric (default novelty)");
    add_common(c_traj, o);

    auto* c_pipe = app.add_subcommand("pipeline", "full run: null model to report");
    add_common(c_pipe, o);

    auto* c_report = app.add_subcommand("report", "plot-ready long-format summary tables");
    add_common(c_report, o);

    auto* c_config = app.add_subcommand("config", "print a config template with every default");
    std::string config_out;
    c_config->add_option("--out", config_out, "write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(c_config)) {
            std::string text = cfg::default_config_text();
            if (config_out.empty()) {
                std::printf("%s", text.c_str());
            } else {
                std::ofstream f(config_out, std::ios::binary);
                if (!f) throw std::runtime_error("cannot write " + config_out);
                f << text;
                std::printf("wrote %s\n", config_out.c_str());
            }
            return 0;
        }
        if (app.got_subcommand(c_synth)) return run_synth(o, synth_out);

        Loaded l = load(o);
        sm::Pipeline pipe(l.corpus, l.opt, l.hash);

        if (app.got_subcommand(c_ingest)) {
            print_written({pipe.write_provenance("ingest")});
        } else if (app.got_subcommand(c_null)) {
            print_written({pipe.write_null_stats(), pipe.write_provenance("nullmodel")});
        } else if (app.got_subcommand(c_metrics)) {
            if (which != "all") {
                // recompute the toggles so only the requested measure runs
                cfg::KeyValues kv = o.effective();
                kv.set("measures.novelty", which == "novelty" ? "true" : "false");
                kv.set("measures.convergence", which == "convergence" ? "true" : "false");
                kv.set("measures.interdisciplinarity",
                       which == "interdisciplinarity" ? "true" : "false");
                sm::Pipeline only(l.corpus, cfg::pipeline_options(kv), kv.hash());
                auto files = only.write_measures();
                files.push_back(only.write_provenance("metrics " + which));
                print_written(files);
                return 0;
            }
            auto files = pipe.write_measures();
            files.push_back(pipe.write_provenance("metrics all"));
            print_written(files);
        } else if (app.got_subcommand(c_embed)) {
            print_written({pipe.write_embeddedness(), pipe.write_provenance("embed")});
        } else if (app.got_subcommand(c_match)) {
            cfg::KeyValues kv = o.effective();
            kv.set("match.method", method);
            sm::Pipeline mp(l.corpus, cfg::pipeline_options(kv), kv.hash());
            const auto& mo = mp.matches();
            size_t pairs = 0;
            for (const auto& g : mo.groups) pairs += g.matches.size();
            std::printf("matched %zu groups (%zu pairs), dropped %zu prizewinners\n",
                        mo.groups.size(), pairs, mo.dropped.size());
            for (const auto& [pw, reason] : mo.dropped)
                std::printf("dropped %s: %s\n", l.corpus.author_ids[pw].c_str(), reason.c_str());
            if (mo.covariance_fallbacks > 0)
                std::printf("covariance fallbacks to identity: %zu\n", mo.covariance_fallbacks);
            print_written({mp.write_matches(), mp.write_provenance("match " + method)});
        } else if (app.got_subcommand(c_balance)) {
            print_written({pipe.write_balance(), pipe.write_provenance("balance")});
        } else if (app.got_subcommand(c_regress)) {
            ensure_measure_enabled(l.opt, outcome);
            sm::RegressionFit fit;
            auto path =
                pipe.write_regression(*sm::preset_from_name(preset), outcome, &fit);
            print_fit(fit);
            print_written({path, pipe.write_provenance("regress " + preset + " " + outcome)});
        } else if (app.got_subcommand(c_traj)) {
            ensure_measure_enabled(l.opt, metric);
            print_written(
                {pipe.write_trajectory(metric), pipe.write_provenance("trajectory " + metric)});
        } else if (app.got_subcommand(c_pipe)) {
            print_written(pipe.run_all());
        } else if (app.got_subcommand(c_report)) {
            print_written({pipe.write_report(), pipe.write_provenance("report")});
        }
        return 0;
    } catch (const MissingInput& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
