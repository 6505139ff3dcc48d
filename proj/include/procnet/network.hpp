#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "procnet/cluster.hpp"
#include "procnet/links.hpp"

namespace procnet {

struct NetworkNode {
    std::string theme_id;
    std::string label;
    int weight_w = 0;  // number of member processes
    std::vector<DimensionLabel> top_dimensions;  // up to 3, by descending frequency
    std::set<std::string> member_process_ids;

    bool operator==(const NetworkNode&) const = default;
};

struct Provenance {
    std::string pipeline_version;
    std::string strategy;
    std::map<std::string, uint64_t> seeds;
    std::vector<std::string> backends;

    bool operator==(const Provenance&) const = default;
};

struct PersonalNetwork {
    std::string session_id;
    std::vector<NetworkNode> nodes;
    std::vector<Edge> edges;
    Provenance provenance;

    bool operator==(const PersonalNetwork&) const = default;
};

// One node per theme; weight = member count; top dimensions by descending
// frequency over members, ties broken by canonical dimension order. Errors
// when an edge references an unknown theme, repeats an ordered pair, or
// self-loops.
PersonalNetwork assemble(const Clustering& clustering,
                         const std::vector<ProcessItem>& processes,
                         const std::vector<Edge>& edges);

// Fraction of input processes represented in at least one node (1.0 for an
// empty input).
double completeness(const PersonalNetwork& network,
                    const std::vector<ProcessItem>& input_processes);

// Canonical document: version, session_id, nodes[], edges[], provenance{}.
// Field order and enum spellings are fixed; export is byte-deterministic and
// import(export(n)) == n.
std::string export_canonical(const PersonalNetwork& network);
PersonalNetwork import_canonical(const std::string& document);
PersonalNetwork load_network(const std::string& path);

struct DotOptions {
    // Rendering-only filters; the canonical document is never filtered.
    std::optional<Strength> min_strength;
    std::optional<int> max_nodes;  // keep the heaviest nodes
};

// Graphviz text: nodes labeled "label (w=N)" plus top dimensions; excitatory
// solid, inhibitory dashed; penwidth 1/2/3 for weak/moderate/strong; nodes
// sorted by theme_id and edges by (source, target).
std::string export_dot(const PersonalNetwork& network, const DotOptions& options = {});

}  // namespace procnet
