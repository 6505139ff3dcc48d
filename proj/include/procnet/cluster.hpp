#pragma once

#include <string>
#include <vector>

#include "procnet/dimensions.hpp"
#include "procnet/gateway.hpp"

namespace procnet {

struct ProcessItem {
    std::string id;  // unique within a session, e.g. "P3"
    std::string text;
    DimensionSet dimensions;
    int source_utterance_index = -1;

    bool operator==(const ProcessItem&) const = default;
};

struct ThemeCluster {
    std::string theme_id;  // e.g. "T2"
    std::string label;     // one sentence
    std::vector<std::string> members;  // ProcessItem ids, insertion order, no duplicates

    bool operator==(const ThemeCluster&) const = default;
};

struct ClusteringDiagnostics {
    std::vector<std::string> violations;        // pre-repair findings
    std::vector<std::string> repairs;           // repair actions taken
    std::vector<std::string> dropped_members;   // hallucinated member strings from the model
    std::vector<std::string> dropped_themes;    // model themes outside the provided list
    std::vector<std::string> accepted_violations;  // degeneracy left in place after re-query

    bool operator==(const ClusteringDiagnostics&) const = default;
};

struct Clustering {
    std::vector<ThemeCluster> clusters;
    std::vector<std::string> uncovered;  // process ids in no cluster (empty post-repair)
    ClusteringDiagnostics diagnostics;

    bool operator==(const Clustering&) const = default;
};

enum class ClusterViolationKind {
    uncovered_process,
    undersized_theme,
    single_cluster_degeneracy,
    unknown_member,
};

struct ClusterViolation {
    ClusterViolationKind kind;
    std::string theme_id;    // when theme-scoped
    std::string process_id;  // when process-scoped
    std::string message;
};

std::vector<ClusterViolation> validate_clustering(const Clustering& clustering,
                                                  const std::vector<ProcessItem>& processes);

// Fraction of processes appearing in two or more clusters.
double multi_membership_rate(const Clustering& clustering);

// "P3: <text>" entries as rendered into prompts.
std::vector<std::string> process_entries(const std::vector<ProcessItem>& processes);

// Stage-2 engine. Holds the working-phase transcript passed as context to
// every clustering prompt.
class ClusterEngine {
public:
    ClusterEngine(Gateway& gateway, BackendSpec backend, std::string transcript_text,
                  bool repair_enabled = true);

    // Step 1: candidate theme sentences, case-insensitive deduplicated.
    std::vector<std::string> generate_themes(const std::vector<ProcessItem>& processes);

    // Step 2: membership assignment against a fixed theme list, then
    // validation and (when enabled) repair.
    Clustering assign_processes(const std::vector<ProcessItem>& processes,
                                const std::vector<std::string>& themes);

    // Labels and membership from one generation call; same validation/repair.
    Clustering single_step_cluster(const std::vector<ProcessItem>& processes);

    // Repair policy:
    //  (a) uncovered process: one focused re-query over the existing themes;
    //      if still uncovered, assign to the theme whose member dimension
    //      profile has the highest cosine overlap with the process (ties:
    //      earliest canonical dimension with the higher count, then theme_id).
    //  (b) theme with fewer than 2 members: merge into the theme with the
    //      largest member overlap; with no overlap anywhere, drop the theme
    //      and re-cover its members via (a).
    //  (c) all processes in one cluster: one corrective re-query against the
    //      full original theme list; if it still degenerates, accept and
    //      record the violation.
    Clustering repair_clustering(Clustering clustering,
                                 const std::vector<ProcessItem>& processes);

private:
    Clustering parse_assignment(const nlohmann::json& parsed,
                                const std::vector<ProcessItem>& processes,
                                const std::vector<std::string>* provided_themes);
    Clustering finalize(Clustering clustering, const std::vector<ProcessItem>& processes,
                        const std::vector<std::string>& original_themes);
    Clustering repair_impl(Clustering clustering, const std::vector<ProcessItem>& processes,
                           const std::vector<std::string>& original_themes);
    void cover_process(Clustering& clustering, const std::vector<ProcessItem>& processes,
                       const ProcessItem& process);
    std::vector<std::string> theme_labels(const Clustering& clustering) const;

    Gateway& gateway_;
    BackendSpec backend_;
    std::string transcript_;
    bool repair_enabled_;
};

// Clustering document I/O (theme -> label + members, plus diagnostics).
std::string clustering_to_json(const Clustering& clustering,
                               const std::vector<ProcessItem>& processes,
                               const std::string& session_id, const std::string& strategy);
void load_clustering(const std::string& path, Clustering& clustering,
                     std::vector<ProcessItem>& processes, std::string& session_id,
                     std::string& strategy);

}  // namespace procnet
