#include "procnet/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "procnet/errors.hpp"
#include "procnet/evalkit.hpp"
#include "procnet/sha256.hpp"
#include "procnet/textutil.hpp"
#include "procnet/version.hpp"

namespace procnet {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

void write_file(const std::string& path, const std::string& content) {
    fs::create_directories(fs::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string out_path(const std::string& out_dir, const std::string& name) {
    fs::create_directories(out_dir);
    return (fs::path(out_dir) / name).string();
}

}  // namespace

std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

Gateway make_gateway(const PipelineConfig& config) {
    GatewayOptions options;
    options.cache_dir = config.cache_dir;
    Gateway gateway(options);
    if (!config.mock_rules_path.empty())
        gateway.set_mock_rules(MockRules::from_file(config.mock_rules_path));
    return gateway;
}

std::string working_phase_text(const Session& session, const SegmentationSettings& seg) {
    WorkingPhase phase = working_phase(session, seg.lead_min, seg.tail_min);
    std::vector<std::string> lines;
    lines.reserve(phase.utterances.size());
    for (const Utterance& u : phase.utterances)
        lines.push_back(std::string(speaker_name(u.speaker)) + ": " + u.text);
    return join(lines, "\n");
}

std::vector<ProcessItem> processes_from_annotations(
    const Session& session, const std::vector<AnnotationRecord>& records) {
    std::vector<const AnnotationRecord*> positives;
    for (const AnnotationRecord& record : records) {
        if (record.run_id != 0) continue;
        if (!record.annotation.is_process || record.annotation.error) continue;
        positives.push_back(&record);
    }
    std::sort(positives.begin(), positives.end(),
              [](const AnnotationRecord* a, const AnnotationRecord* b) {
                  return a->annotation.utterance_index < b->annotation.utterance_index;
              });
    std::vector<ProcessItem> processes;
    processes.reserve(positives.size());
    for (const AnnotationRecord* record : positives) {
        const int index = record->annotation.utterance_index;
        if (index < 0 || index >= static_cast<int>(session.size()))
            throw ValidationError("annotation references utterance " + std::to_string(index) +
                                  " outside session '" + session.session_id + "'");
        ProcessItem item;
        item.id = "P" + std::to_string(processes.size() + 1);
        item.text = session.utterances[index].text;
        item.dimensions = record->annotation.dimensions;
        item.source_utterance_index = index;
        processes.push_back(std::move(item));
    }
    return processes;
}

std::string cmd_detect(const PipelineConfig& config, Gateway& gateway,
                       const std::string& session_path, const std::string& out_dir) {
    Session session = load_session(session_path);
    if (config.detection.pool_path.empty())
        throw ValidationError("detection.pool: required for the detect stage");
    Detector detector(gateway, load_example_pool(config.detection.pool_path));

    DetectionConfig dc;
    dc.k = config.detection.k;
    dc.runs = config.detection.runs;
    dc.example_pool_size = config.detection.example_pool_size;
    dc.rng_seed = config.detection.seed;
    DetectionOutcome outcome =
        detector.detect_session(session, dc, config.backend(config.detection.backend),
                                config.segmentation.lead_min, config.segmentation.tail_min);

    std::vector<AnnotationRecord> records;
    for (size_t run = 0; run < outcome.runs.size(); ++run) {
        for (const ProcessAnnotation& annotation : outcome.runs[run])
            records.push_back({annotation, static_cast<int>(run), ""});
    }
    if (config.detection.aggregate_runs && outcome.runs.size() > 1) {
        // Majority annotations appended as an extra run_id = -1 block.
        for (size_t i = 0; i < outcome.runs.front().size(); ++i) {
            std::vector<ProcessAnnotation> across;
            for (const auto& run : outcome.runs) across.push_back(run[i]);
            records.push_back({majority_annotation(across), -1, ""});
        }
    }
    const std::string path = out_path(out_dir, "annotations.jsonl");
    save_annotations(records, path);
    return path;
}

std::string cmd_cluster(const PipelineConfig& config, Gateway& gateway,
                        const std::string& annotations_path, const std::string& session_path,
                        const std::string& out_dir) {
    Session session = load_session(session_path);
    auto records = load_annotations(annotations_path);
    auto processes = processes_from_annotations(session, records);
    const std::string transcript = working_phase_text(session, config.segmentation);

    ClusterEngine engine(gateway, config.backend(config.clustering.backend), transcript,
                         config.clustering.repair);
    Clustering clustering;
    if (config.clustering.strategy == "single_step") {
        clustering = engine.single_step_cluster(processes);
    } else {
        auto themes = engine.generate_themes(processes);
        clustering = engine.assign_processes(processes, themes);
    }
    const std::string path = out_path(out_dir, "clustering.json");
    write_file(path, clustering_to_json(clustering, processes, session.session_id,
                                        config.clustering.strategy));
    return path;
}

LinkOutputs cmd_link(const PipelineConfig& config, Gateway& gateway,
                     const std::string& clustering_path, const std::string& out_dir) {
    Clustering clustering;
    std::vector<ProcessItem> processes;
    std::string session_id, strategy;
    load_clustering(clustering_path, clustering, processes, session_id, strategy);

    std::vector<ThemeRef> themes;
    for (const ThemeCluster& theme : clustering.clusters)
        themes.push_back({theme.theme_id, theme.label});

    LinkEngine engine(gateway);
    EnsembleResult result =
        engine.run_ensemble(config.link_strategy(), themes, config.links.seed);

    LinkOutputs outputs;
    outputs.edges_path = out_path(out_dir, "edges.json");
    outputs.opinions_path = out_path(out_dir, "opinions.jsonl");
    write_file(outputs.edges_path,
               edges_to_json(result.edges, session_id, ensemble_kind_name(config.links.strategy),
                             config.links.seed));
    write_file(outputs.opinions_path, opinions_to_jsonl(result.opinions));
    return outputs;
}

NetworkOutputs cmd_network(const PipelineConfig& config, const std::string& clustering_path,
                           const std::string& edges_path, const std::string& out_dir) {
    Clustering clustering;
    std::vector<ProcessItem> processes;
    std::string session_id, strategy;
    load_clustering(clustering_path, clustering, processes, session_id, strategy);
    auto edges = load_edges(edges_path);

    PersonalNetwork network = assemble(clustering, processes, edges);
    network.session_id = session_id;
    network.provenance.strategy = ensemble_kind_name(config.links.strategy);
    network.provenance.seeds = {{"detection", config.detection.seed},
                                {"links", config.links.seed}};
    network.provenance.backends = {config.detection.backend, config.clustering.backend};
    for (const std::string& name : config.links.backends) {
        if (std::find(network.provenance.backends.begin(), network.provenance.backends.end(),
                      name) == network.provenance.backends.end())
            network.provenance.backends.push_back(name);
    }

    NetworkOutputs outputs;
    outputs.network_path = out_path(out_dir, "network.json");
    outputs.dot_path = out_path(out_dir, "network.dot");
    write_file(outputs.network_path, export_canonical(network));
    write_file(outputs.dot_path, export_dot(network));
    return outputs;
}

std::string cmd_baseline(const PipelineConfig& config, Gateway& gateway,
                         const std::string& session_path, const std::string& annotations_path,
                         const std::string& out_dir) {
    Session session = load_session(session_path);
    auto records = load_annotations(annotations_path);
    auto processes = processes_from_annotations(session, records);
    const std::string transcript = working_phase_text(session, config.segmentation);

    BaselineResult result = direct_generate(
        gateway, config.backend(config.clustering.backend), transcript, processes);
    result.network.session_id = session.session_id;

    const std::string path = out_path(out_dir, "baseline_network.json");
    write_file(path, export_canonical(result.network));

    ordered_json diag;
    diag["dropped"] = result.dropped;
    diag["completeness"] = completeness(result.network, processes);
    write_file(out_path(out_dir, "baseline_diagnostics.json"), diag.dump(2) + "\n");
    return path;
}

StageOutputs cmd_run_all(const PipelineConfig& config, Gateway& gateway,
                         const std::string& session_path, const std::string& out_dir) {
    using clock = std::chrono::steady_clock;
    auto ms_since = [](clock::time_point start) {
        return std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - start)
            .count();
    };

    StageOutputs outputs;
    ordered_json timings;

    auto t0 = clock::now();
    outputs.annotations_path = cmd_detect(config, gateway, session_path, out_dir);
    timings["detect_ms"] = ms_since(t0);

    t0 = clock::now();
    outputs.clustering_path =
        cmd_cluster(config, gateway, outputs.annotations_path, session_path, out_dir);
    timings["cluster_ms"] = ms_since(t0);

    t0 = clock::now();
    LinkOutputs links = cmd_link(config, gateway, outputs.clustering_path, out_dir);
    outputs.edges_path = links.edges_path;
    outputs.opinions_path = links.opinions_path;
    timings["link_ms"] = ms_since(t0);

    t0 = clock::now();
    NetworkOutputs net =
        cmd_network(config, outputs.clustering_path, outputs.edges_path, out_dir);
    outputs.network_path = net.network_path;
    outputs.dot_path = net.dot_path;
    timings["network_ms"] = ms_since(t0);

    ordered_json manifest;
    manifest["tool_version"] = kVersion;
    manifest["config"] = config.snapshot();
    manifest["inputs"] = {{"session", {{"path", session_path},
                                       {"sha256", sha256_file(session_path)}}}};
    ordered_json artifact_digests;
    auto add_output = [&](const char* name, const std::string& path) {
        artifact_digests[name] = {{"path", path}, {"sha256", sha256_file(path)}};
    };
    add_output("annotations", outputs.annotations_path);
    add_output("clustering", outputs.clustering_path);
    add_output("edges", outputs.edges_path);
    add_output("opinions", outputs.opinions_path);
    add_output("network", outputs.network_path);
    add_output("dot", outputs.dot_path);
    manifest["outputs"] = std::move(artifact_digests);
    manifest["timings"] = std::move(timings);

    outputs.manifest_path = out_path(out_dir, "manifest.json");
    write_file(outputs.manifest_path, manifest.dump(2) + "\n");
    return outputs;
}

std::string cmd_stats(const std::string& corpus_dir) {
    if (!fs::is_directory(corpus_dir))
        throw ValidationError("stats: not a directory: " + corpus_dir);
    std::vector<Session> sessions;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(corpus_dir)) {
        if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) sessions.push_back(load_session(file.string()));
    if (sessions.empty())
        throw ValidationError("no .jsonl transcripts found in " + corpus_dir);
    return corpus_stats_tsv(corpus_stats(sessions));
}

namespace {

// Aligns two raters' records by utterance index; a file with one rater id
// yields that rater twice (self-agreement 1.0 everywhere).
std::map<int, ProcessAnnotation> records_by_index(const std::vector<AnnotationRecord>& records,
                                                  const std::string& rater) {
    std::map<int, ProcessAnnotation> out;
    for (const AnnotationRecord& record : records) {
        if (!rater.empty() && record.rater_id != rater) continue;
        out[record.annotation.utterance_index] = record.annotation;
    }
    return out;
}

// Gold files may carry two raters' rows; they resolve by presence-OR and
// dimension union.
std::map<int, ProcessAnnotation> resolved_gold(const std::vector<AnnotationRecord>& records) {
    std::map<int, std::vector<ProcessAnnotation>> by_index;
    for (const AnnotationRecord& record : records)
        by_index[record.annotation.utterance_index].push_back(record.annotation);
    std::map<int, ProcessAnnotation> out;
    for (const auto& [index, annotations] : by_index) {
        ProcessAnnotation gold = annotations.front();
        for (size_t i = 1; i < annotations.size(); ++i) gold = resolve_gold(gold, annotations[i]);
        out[index] = gold;
    }
    return out;
}

}  // namespace

std::string eval_prf_report(const std::string& pred_path, const std::string& gold_path) {
    auto preds = load_annotations(pred_path);
    auto gold = resolved_gold(load_annotations(gold_path));

    std::map<int, std::vector<AnnotationRecord>> runs;
    for (const AnnotationRecord& record : preds) runs[record.run_id].push_back(record);

    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << "task\trun\tprecision\trecall\tf1\tn\n";

    // The dimension task is scored over gold-positive utterances and, since
    // that population choice matters, additionally over all utterances.
    struct Tally {
        double sum[3] = {0, 0, 0};
        void add(const Prf& p) {
            sum[0] += p.precision;
            sum[1] += p.recall;
            sum[2] += p.f1;
        }
    };
    Tally binary_tally, gold_positive_tally, all_tally;
    int counted_runs = 0;

    auto emit = [&](const std::string& task, const std::string& run, const Prf& p, size_t n) {
        out << task << '\t' << run << '\t' << p.precision << '\t' << p.recall << '\t' << p.f1
            << '\t' << n << '\n';
    };

    for (const auto& [run_id, records] : runs) {
        if (run_id < 0) continue;  // aggregated block is reported separately
        std::vector<bool> pred_bits, gold_bits;
        std::vector<DimensionSet> pred_pos, gold_pos, pred_all, gold_all;
        for (const AnnotationRecord& record : records) {
            auto it = gold.find(record.annotation.utterance_index);
            if (it == gold.end()) continue;
            pred_bits.push_back(record.annotation.is_process);
            gold_bits.push_back(it->second.is_process);
            pred_all.push_back(record.annotation.dimensions);
            gold_all.push_back(it->second.dimensions);
            if (it->second.is_process) {
                pred_pos.push_back(record.annotation.dimensions);
                gold_pos.push_back(it->second.dimensions);
            }
        }
        if (pred_bits.empty())
            throw ValidationError("eval: no overlapping utterances between pred and gold");
        const Prf binary = binary_prf(pred_bits, gold_bits);
        const Prf dims_pos = multilabel_prf(pred_pos, gold_pos);
        const Prf dims_all = multilabel_prf(pred_all, gold_all);
        const std::string run = std::to_string(run_id);
        emit("process_detection", run, binary, pred_bits.size());
        emit("dimension_assignment[gold-positive]", run, dims_pos, pred_pos.size());
        emit("dimension_assignment[all]", run, dims_all, pred_all.size());
        binary_tally.add(binary);
        gold_positive_tally.add(dims_pos);
        all_tally.add(dims_all);
        ++counted_runs;
    }
    if (counted_runs > 1) {
        auto mean = [&](const char* task, const Tally& tally) {
            out << task << "\tmean\t" << tally.sum[0] / counted_runs << '\t'
                << tally.sum[1] / counted_runs << '\t' << tally.sum[2] / counted_runs
                << "\t-\n";
        };
        mean("process_detection", binary_tally);
        mean("dimension_assignment[gold-positive]", gold_positive_tally);
        mean("dimension_assignment[all]", all_tally);
    }
    return out.str();
}

std::string eval_agreement_report(const std::string& rater_a_path,
                                  const std::string& rater_b_path) {
    auto a_records = records_by_index(load_annotations(rater_a_path), "");
    auto b_records = records_by_index(load_annotations(rater_b_path), "");

    std::vector<bool> a_bits, b_bits;
    std::vector<DimensionSet> a_dims, b_dims;
    std::vector<std::string> a_cat, b_cat;
    for (const auto& [index, annotation] : a_records) {
        auto it = b_records.find(index);
        if (it == b_records.end()) continue;
        a_bits.push_back(annotation.is_process);
        b_bits.push_back(it->second.is_process);
        a_cat.push_back(annotation.is_process ? "T" : "F");
        b_cat.push_back(it->second.is_process ? "T" : "F");
        a_dims.push_back(annotation.dimensions);
        b_dims.push_back(it->second.dimensions);
    }
    if (a_bits.empty())
        throw ValidationError("eval agreement: no overlapping utterances between raters");

    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << "measure\tvalue\n";
    out << "binary_kappa\t" << cohen_kappa(a_bits, b_bits) << '\n';
    out << "binary_observed_agreement\t" << observed_agreement(a_cat, b_cat) << '\n';
    const auto per_label = per_label_kappa(a_dims, b_dims);
    double sum = 0.0;
    for (DimensionLabel label : kAllDimensions) {
        out << "kappa[" << dimension_name(label) << "]\t" << per_label.at(label) << '\n';
        sum += per_label.at(label);
    }
    out << "mean_per_label_kappa\t" << sum / kDimensionCount << '\n';
    out << "n\t" << a_bits.size() << '\n';
    return out.str();
}

std::string eval_opinions_report(const std::string& opinions_path) {
    const AgreementStats stats = agreement_stats(load_opinions(opinions_path));
    std::ostringstream out;
    out << std::fixed << std::setprecision(1);
    out << "measure\tpercent\tnumerator\tdenominator\n";
    out << "connection\t" << stats.connection_pct << '\t' << stats.unanimous_connection << '\t'
        << stats.pairs << '\n';
    out << "connection_type\t" << stats.type_pct << '\t' << stats.unanimous_type << '\t'
        << stats.unanimous_connected << '\n';
    out << "connection_strength\t" << stats.strength_pct << '\t' << stats.unanimous_strength
        << '\t' << stats.unanimous_type << '\n';
    return out.str();
}

}  // namespace procnet
