#include "procnet/baseline.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "procnet/errors.hpp"
#include "procnet/prompts.hpp"
#include "procnet/schemas.hpp"
#include "procnet/textutil.hpp"
#include "procnet/version.hpp"

namespace procnet {

using nlohmann::json;

namespace {

const ProcessItem* resolve_member(const std::string& raw,
                                  const std::vector<ProcessItem>& processes) {
    const std::string needle = trim(raw);
    for (const ProcessItem& p : processes)
        if (needle == p.id || needle == p.id + ": " + p.text) return &p;
    const std::string folded = lower(needle);
    for (const ProcessItem& p : processes)
        if (folded == lower(p.text)) return &p;
    return nullptr;
}

}  // namespace

BaselineResult direct_generate(Gateway& gateway, const BackendSpec& backend,
                               const std::string& transcript_text,
                               const std::vector<ProcessItem>& processes) {
    if (processes.size() < 2)
        throw ValidationError("direct_generate: need at least 2 processes");

    CompletionRequest req;
    req.backend = backend;
    req.prompt = prompts::baseline(transcript_text, process_entries(processes));
    req.schema_id = schemas::kBaseline;
    StructuredResponse res = gateway.complete_structured(req);

    BaselineResult result;

    // Themes and membership exactly as generated; hallucinated members and
    // duplicate labels are dropped-and-logged, nothing is reassigned.
    Clustering clustering;
    std::map<std::string, std::string> label_to_id;  // folded label -> theme_id
    for (const auto& [key, entry] : res.parsed["classified_processes"].items()) {
        const std::string label = trim(entry.at("Title").get<std::string>());
        if (label_to_id.count(lower(label))) {
            result.dropped.push_back("duplicate theme label '" + label + "'");
            continue;
        }
        ThemeCluster theme;
        theme.theme_id = "T" + std::to_string(clustering.clusters.size() + 1);
        theme.label = label;
        for (const json& p : entry.at("Processes")) {
            const std::string raw = p.at("Process").get<std::string>();
            if (const ProcessItem* item = resolve_member(raw, processes)) {
                if (std::find(theme.members.begin(), theme.members.end(), item->id) ==
                    theme.members.end())
                    theme.members.push_back(item->id);
            } else {
                result.dropped.push_back("unknown process '" + raw + "' in theme '" + label +
                                         "'");
            }
        }
        label_to_id[lower(label)] = theme.theme_id;
        clustering.clusters.push_back(std::move(theme));
    }

    std::vector<Edge> edges;
    std::set<std::pair<std::string, std::string>> seen_pairs;
    for (const json& rel : res.parsed["theme_relationships"]) {
        if (rel["connection"][0].get<int>() != 1) continue;
        const std::string source_label = trim(rel["input_themes"][0].get<std::string>());
        const std::string target_label = trim(rel["input_themes"][1].get<std::string>());
        auto source = label_to_id.find(lower(source_label));
        auto target = label_to_id.find(lower(target_label));
        if (source == label_to_id.end() || target == label_to_id.end()) {
            result.dropped.push_back("relationship references unknown theme: '" + source_label +
                                     "' -> '" + target_label + "'");
            continue;
        }
        if (source->second == target->second) {
            result.dropped.push_back("self-loop relationship on '" + source_label + "'");
            continue;
        }
        if (!seen_pairs.insert({source->second, target->second}).second) {
            result.dropped.push_back("duplicate relationship '" + source_label + "' -> '" +
                                     target_label + "'");
            continue;
        }
        Edge edge;
        edge.source_theme = source->second;
        edge.target_theme = target->second;
        edge.edge_type = *parse_edge_type(rel["type"][0].get<std::string>());
        edge.strength = *parse_strength(rel["strength"][0].get<std::string>());
        edge.explanation = rel.value("explanation", std::string());
        edge.explanation_variant = "baseline";
        edge.votes_for = 1;  // single generation, no ensemble
        edges.push_back(std::move(edge));
    }

    result.network = assemble(clustering, processes, edges);
    result.network.provenance.pipeline_version = kVersion;
    result.network.provenance.strategy = "baseline-direct";
    result.network.provenance.backends = {backend.name};
    return result;
}

}  // namespace procnet
