#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "procnet/errors.hpp"
#include "procnet/evalkit.hpp"
#include "procnet/pipeline.hpp"
#include "procnet/version.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::optional<int> k;
    std::string cache_dir;
    std::string out_dir;
    bool mock = false;
    bool no_repair = false;
    std::string link_strategy;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_config = true) {
    auto* config = cmd->add_option("--config", flags.config_path, "pipeline config file (JSON)");
    if (needs_config) config->required();
    cmd->add_option("--seed", flags.seed, "override detection and link seeds");
    cmd->add_option("--k", flags.k, "override detection K (0,1,5,10,50,100)");
    cmd->add_option("--cache", flags.cache_dir, "override response cache directory");
    cmd->add_option("--out", flags.out_dir, "override output directory");
    cmd->add_flag("--mock", flags.mock, "force every backend to its mock twin");
    cmd->add_flag("--no-repair", flags.no_repair, "disable clustering repair");
    cmd->add_option("--strategy", flags.link_strategy,
                    "link ensemble strategy: prompt|model|temperature");
}

procnet::PipelineConfig load_config(const CommonFlags& flags) {
    procnet::PipelineConfig config = procnet::PipelineConfig::load(flags.config_path);
    if (flags.seed) {
        config.detection.seed = *flags.seed;
        config.links.seed = *flags.seed;
    }
    if (flags.k) config.detection.k = *flags.k;
    if (!procnet::valid_k(config.detection.k))
        throw procnet::ValidationError("detection.k: must be one of {0,1,5,10,50,100}");
    if (!flags.cache_dir.empty()) config.cache_dir = flags.cache_dir;
    if (!flags.out_dir.empty()) config.output_dir = flags.out_dir;
    if (flags.no_repair) config.clustering.repair = false;
    if (!flags.link_strategy.empty()) {
        auto kind = procnet::parse_ensemble_kind(flags.link_strategy);
        if (!kind)
            throw procnet::ValidationError(
                "--strategy: must be prompt, model, or temperature");
        config.links.strategy = *kind;
    }
    if (flags.mock) config.force_mock();
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Personalized process-network pipeline for therapy transcripts"};
    app.set_version_flag("--version", procnet::kVersion);
    app.require_subcommand(1);

    CommonFlags flags;
    std::string session_path, annotations_path, clustering_path, edges_path, corpus_dir;
    std::string pred_path, gold_path, rater_a, rater_b, ratings_path, prefs_path, opinions_path;

    auto* detect = app.add_subcommand("detect", "stage 1: annotate a session's working phase");
    add_common(detect, flags);
    detect->add_option("--session", session_path, "transcript (JSONL)")->required();

    auto* cluster = app.add_subcommand("cluster", "stage 2: theme generation and assignment");
    add_common(cluster, flags);
    cluster->add_option("--session", session_path, "transcript (JSONL)")->required();
    cluster->add_option("--annotations", annotations_path, "stage-1 output")->required();

    auto* link = app.add_subcommand("link", "stage 3: ensemble link generation with voting");
    add_common(link, flags);
    link->add_option("--clustering", clustering_path, "stage-2 output")->required();

    auto* network = app.add_subcommand("network", "assemble and export the network");
    add_common(network, flags);
    network->add_option("--clustering", clustering_path, "stage-2 output")->required();
    network->add_option("--edges", edges_path, "stage-3 edges")->required();

    auto* baseline = app.add_subcommand("baseline", "single-shot direct network generation");
    add_common(baseline, flags);
    baseline->add_option("--session", session_path, "transcript (JSONL)")->required();
    baseline->add_option("--annotations", annotations_path, "stage-1 output")->required();

    auto* run_all = app.add_subcommand("run-all", "full pipeline with manifest");
    add_common(run_all, flags);
    run_all->add_option("--session", session_path, "transcript (JSONL)")->required();

    auto* stats = app.add_subcommand("stats", "corpus statistics (TSV)");
    stats->add_option("--corpus", corpus_dir, "directory of .jsonl transcripts")->required();

    auto* eval = app.add_subcommand("eval", "metrics and reports");
    eval->require_subcommand(1);
    auto* eval_prf = eval->add_subcommand("prf", "precision/recall/F1 against gold");
    eval_prf->add_option("--pred", pred_path, "predicted annotations (JSONL)")->required();
    eval_prf->add_option("--gold", gold_path, "gold annotations (JSONL)")->required();
    auto* eval_agree = eval->add_subcommand("agreement", "inter-annotator agreement");
    eval_agree->add_option("--a", rater_a, "rater A annotations")->required();
    eval_agree->add_option("--b", rater_b, "rater B annotations")->required();
    auto* eval_ratings = eval->add_subcommand("ratings", "expert rating table with total score");
    eval_ratings->add_option("--ratings", ratings_path, "TSV: rater_id item_id metric score")
        ->required();
    auto* eval_prefs = eval->add_subcommand("preferences", "preference percentages");
    eval_prefs->add_option("--prefs", prefs_path, "TSV: rater_id item_id question choice")
        ->required();
    auto* eval_opinions = eval->add_subcommand("opinions", "ensemble agreement table");
    eval_opinions->add_option("--opinions", opinions_path, "stage-3 opinion log")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*detect) {
            auto config = load_config(flags);
            auto gateway = procnet::make_gateway(config);
            std::cout << procnet::cmd_detect(config, gateway, session_path, config.output_dir)
                      << "\n";
        } else if (*cluster) {
            auto config = load_config(flags);
            auto gateway = procnet::make_gateway(config);
            std::cout << procnet::cmd_cluster(config, gateway, annotations_path, session_path,
                                              config.output_dir)
                      << "\n";
        } else if (*link) {
            auto config = load_config(flags);
            auto gateway = procnet::make_gateway(config);
            auto outputs =
                procnet::cmd_link(config, gateway, clustering_path, config.output_dir);
            std::cout << outputs.edges_path << "\n" << outputs.opinions_path << "\n";
        } else if (*network) {
            auto config = load_config(flags);
            auto outputs =
                procnet::cmd_network(config, clustering_path, edges_path, config.output_dir);
            std::cout << outputs.network_path << "\n" << outputs.dot_path << "\n";
        } else if (*baseline) {
            auto config = load_config(flags);
            auto gateway = procnet::make_gateway(config);
            std::cout << procnet::cmd_baseline(config, gateway, session_path, annotations_path,
                                               config.output_dir)
                      << "\n";
        } else if (*run_all) {
            auto config = load_config(flags);
            auto gateway = procnet::make_gateway(config);
            auto outputs =
                procnet::cmd_run_all(config, gateway, session_path, config.output_dir);
            std::cout << outputs.network_path << "\n"
                      << outputs.dot_path << "\n"
                      << outputs.manifest_path << "\n";
        } else if (*stats) {
            std::cout << procnet::cmd_stats(corpus_dir);
        } else if (*eval_prf) {
            std::cout << procnet::eval_prf_report(pred_path, gold_path);
        } else if (*eval_agree) {
            std::cout << procnet::eval_agreement_report(rater_a, rater_b);
        } else if (*eval_ratings) {
            std::cout << procnet::ratings_report(procnet::load_ratings_tsv(ratings_path));
        } else if (*eval_prefs) {
            std::cout << procnet::preference_report(procnet::load_preferences_tsv(prefs_path));
        } else if (*eval_opinions) {
            std::cout << procnet::eval_opinions_report(opinions_path);
        }
    } catch (const procnet::Error& e) {
        nlohmann::json report;
        report["error"] = {{"category", static_cast<int>(e.category())},
                           {"message", e.what()}};
        std::cerr << report.dump() << "\n";
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        nlohmann::json report;
        report["error"] = {{"category", 1}, {"message", e.what()}};
        std::cerr << report.dump() << "\n";
        return 1;
    }
    return 0;
}
