#pragma once

#include <string>
#include <vector>

#include "procnet/baseline.hpp"
#include "procnet/config.hpp"
#include "procnet/detect.hpp"
#include "procnet/network.hpp"
#include "procnet/transcript.hpp"

namespace procnet {

// Stage commands. Every stage materializes its output as a file so expert
// review can happen between stages; with a warm cache and fixed seeds each
// command re-runs byte-identically.

Gateway make_gateway(const PipelineConfig& config);

// The session text passed to clustering/link/baseline prompts: the working
// phase, one "speaker: text" line per utterance.
std::string working_phase_text(const Session& session, const SegmentationSettings& seg);

// Positive run-0 annotations turned into process items (P1.. in utterance
// order, text = source utterance).
std::vector<ProcessItem> processes_from_annotations(const Session& session,
                                                    const std::vector<AnnotationRecord>& records);

struct StageOutputs {
    std::string annotations_path;
    std::string clustering_path;
    std::string edges_path;
    std::string opinions_path;
    std::string network_path;
    std::string dot_path;
    std::string manifest_path;
};

std::string cmd_detect(const PipelineConfig& config, Gateway& gateway,
                       const std::string& session_path, const std::string& out_dir);

std::string cmd_cluster(const PipelineConfig& config, Gateway& gateway,
                        const std::string& annotations_path, const std::string& session_path,
                        const std::string& out_dir);

struct LinkOutputs {
    std::string edges_path;
    std::string opinions_path;
};
LinkOutputs cmd_link(const PipelineConfig& config, Gateway& gateway,
                     const std::string& clustering_path, const std::string& out_dir);

struct NetworkOutputs {
    std::string network_path;
    std::string dot_path;
};
NetworkOutputs cmd_network(const PipelineConfig& config, const std::string& clustering_path,
                           const std::string& edges_path, const std::string& out_dir);

std::string cmd_baseline(const PipelineConfig& config, Gateway& gateway,
                         const std::string& session_path, const std::string& annotations_path,
                         const std::string& out_dir);

StageOutputs cmd_run_all(const PipelineConfig& config, Gateway& gateway,
                         const std::string& session_path, const std::string& out_dir);

std::string cmd_stats(const std::string& corpus_dir);

// Evaluation reports. The dimension task is reported over both candidate
// populations (gold-positive utterances and all utterances).
std::string eval_prf_report(const std::string& pred_path, const std::string& gold_path);
std::string eval_agreement_report(const std::string& rater_a_path,
                                  const std::string& rater_b_path);
std::string eval_opinions_report(const std::string& opinions_path);

std::string sha256_file(const std::string& path);

}  // namespace procnet
