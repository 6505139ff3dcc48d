#include "procnet/network.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "procnet/errors.hpp"
#include "procnet/version.hpp"

namespace procnet {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::vector<DimensionLabel> top_dimensions_for(const std::set<std::string>& member_ids,
                                               const std::vector<ProcessItem>& processes) {
    std::array<int, kDimensionCount> counts{};
    for (const ProcessItem& p : processes) {
        if (!member_ids.count(p.id)) continue;
        for (DimensionLabel label : p.dimensions) ++counts[static_cast<int>(label)];
    }
    // Descending frequency; equal counts fall back to canonical (enum) order,
    // which std::stable_sort preserves from the initial ordering.
    std::vector<DimensionLabel> present;
    for (DimensionLabel label : kAllDimensions)
        if (counts[static_cast<int>(label)] > 0) present.push_back(label);
    std::stable_sort(present.begin(), present.end(), [&](DimensionLabel a, DimensionLabel b) {
        return counts[static_cast<int>(a)] > counts[static_cast<int>(b)];
    });
    if (present.size() > 3) present.resize(3);
    return present;
}

}  // namespace

PersonalNetwork assemble(const Clustering& clustering,
                         const std::vector<ProcessItem>& processes,
                         const std::vector<Edge>& edges) {
    PersonalNetwork network;
    std::set<std::string> theme_ids;
    for (const ThemeCluster& theme : clustering.clusters) {
        NetworkNode node;
        node.theme_id = theme.theme_id;
        node.label = theme.label;
        node.member_process_ids.insert(theme.members.begin(), theme.members.end());
        node.weight_w = static_cast<int>(node.member_process_ids.size());
        node.top_dimensions = top_dimensions_for(node.member_process_ids, processes);
        theme_ids.insert(node.theme_id);
        network.nodes.push_back(std::move(node));
    }

    std::set<std::pair<std::string, std::string>> seen_pairs;
    for (const Edge& edge : edges) {
        if (!theme_ids.count(edge.source_theme) || !theme_ids.count(edge.target_theme))
            throw ValidationError("assemble: edge references unknown theme " +
                                  edge.source_theme + "->" + edge.target_theme);
        if (edge.source_theme == edge.target_theme)
            throw ValidationError("assemble: self-loop on " + edge.source_theme);
        if (!seen_pairs.insert({edge.source_theme, edge.target_theme}).second)
            throw ValidationError("assemble: duplicate edge " + edge.source_theme + "->" +
                                  edge.target_theme);
        network.edges.push_back(edge);
    }
    network.provenance.pipeline_version = kVersion;
    return network;
}

double completeness(const PersonalNetwork& network,
                    const std::vector<ProcessItem>& input_processes) {
    if (input_processes.empty()) return 1.0;
    std::set<std::string> covered;
    for (const NetworkNode& node : network.nodes)
        covered.insert(node.member_process_ids.begin(), node.member_process_ids.end());
    int hit = 0;
    for (const ProcessItem& p : input_processes)
        if (covered.count(p.id)) ++hit;
    return static_cast<double>(hit) / static_cast<double>(input_processes.size());
}

namespace {

constexpr const char* kDocVersion = "1";

ordered_json node_to_json(const NetworkNode& node) {
    ordered_json n;
    n["theme_id"] = node.theme_id;
    n["label"] = node.label;
    n["weight_w"] = node.weight_w;
    ordered_json dims = ordered_json::array();
    for (DimensionLabel label : node.top_dimensions) dims.push_back(dimension_name(label));
    n["top_dimensions"] = std::move(dims);
    n["member_process_ids"] =
        std::vector<std::string>(node.member_process_ids.begin(), node.member_process_ids.end());
    return n;
}

}  // namespace

std::string export_canonical(const PersonalNetwork& network) {
    ordered_json doc;
    doc["version"] = kDocVersion;
    doc["session_id"] = network.session_id;
    doc["nodes"] = ordered_json::array();
    for (const NetworkNode& node : network.nodes) doc["nodes"].push_back(node_to_json(node));
    doc["edges"] = ordered_json::array();
    for (const Edge& edge : network.edges) {
        ordered_json e;
        e["source_theme"] = edge.source_theme;
        e["target_theme"] = edge.target_theme;
        e["edge_type"] = edge_type_name(edge.edge_type);
        e["strength"] = strength_name(edge.strength);
        e["explanation"] = edge.explanation;
        e["explanation_variant"] = edge.explanation_variant;
        e["votes_for"] = edge.votes_for;
        doc["edges"].push_back(std::move(e));
    }
    ordered_json prov;
    prov["pipeline_version"] = network.provenance.pipeline_version;
    prov["strategy"] = network.provenance.strategy;
    ordered_json seeds;
    for (const auto& [name, value] : network.provenance.seeds) seeds[name] = value;
    prov["seeds"] = std::move(seeds);
    prov["backends"] = network.provenance.backends;
    doc["provenance"] = std::move(prov);
    return doc.dump(2) + "\n";
}

PersonalNetwork import_canonical(const std::string& document) {
    json doc = json::parse(document, nullptr, false);
    if (doc.is_discarded()) throw ParseError("network document: invalid JSON");
    if (!doc.is_object() || !doc.contains("version"))
        throw ParseError("network document: missing version");
    if (doc["version"].get<std::string>() != kDocVersion)
        throw ParseError("network document: unsupported version '" +
                         doc["version"].get<std::string>() + "'");

    PersonalNetwork network;
    std::set<std::string> theme_ids;
    try {
        network.session_id = doc.at("session_id").get<std::string>();
        for (const json& n : doc.at("nodes")) {
            NetworkNode node;
            node.theme_id = n.at("theme_id").get<std::string>();
            node.label = n.at("label").get<std::string>();
            node.weight_w = n.at("weight_w").get<int>();
            for (const json& d : n.at("top_dimensions")) {
                auto label = parse_dimension(d.get<std::string>());
                if (!label)
                    throw ParseError("network document: unknown dimension '" +
                                     d.get<std::string>() + "'");
                node.top_dimensions.push_back(*label);
            }
            for (const json& m : n.at("member_process_ids"))
                node.member_process_ids.insert(m.get<std::string>());
            if (node.weight_w != static_cast<int>(node.member_process_ids.size()))
                throw ParseError("network document: node " + node.theme_id +
                                 " weight_w disagrees with member count");
            if (!theme_ids.insert(node.theme_id).second)
                throw ParseError("network document: duplicate node " + node.theme_id);
            network.nodes.push_back(std::move(node));
        }
        std::set<std::pair<std::string, std::string>> seen_pairs;
        for (const json& e : doc.at("edges")) {
            Edge edge;
            edge.source_theme = e.at("source_theme").get<std::string>();
            edge.target_theme = e.at("target_theme").get<std::string>();
            auto type = parse_edge_type(e.at("edge_type").get<std::string>());
            auto strength = parse_strength(e.at("strength").get<std::string>());
            if (!type)
                throw ParseError("network document: unknown edge_type '" +
                                 e.at("edge_type").get<std::string>() + "'");
            if (!strength)
                throw ParseError("network document: unknown strength '" +
                                 e.at("strength").get<std::string>() + "'");
            edge.edge_type = *type;
            edge.strength = *strength;
            edge.explanation = e.at("explanation").get<std::string>();
            edge.explanation_variant = e.value("explanation_variant", std::string());
            edge.votes_for = e.at("votes_for").get<int>();
            if (edge.votes_for < 1 || edge.votes_for > 3)
                throw ParseError("network document: votes_for out of range");
            if (!theme_ids.count(edge.source_theme) || !theme_ids.count(edge.target_theme))
                throw ParseError("network document: edge references unknown theme");
            if (edge.source_theme == edge.target_theme)
                throw ParseError("network document: self-loop on " + edge.source_theme);
            if (!seen_pairs.insert({edge.source_theme, edge.target_theme}).second)
                throw ParseError("network document: duplicate edge " + edge.source_theme +
                                 "->" + edge.target_theme);
            network.edges.push_back(std::move(edge));
        }
        const json& prov = doc.at("provenance");
        network.provenance.pipeline_version = prov.value("pipeline_version", std::string());
        network.provenance.strategy = prov.value("strategy", std::string());
        if (prov.contains("seeds"))
            for (const auto& [name, value] : prov["seeds"].items())
                network.provenance.seeds[name] = value.get<uint64_t>();
        if (prov.contains("backends"))
            network.provenance.backends = prov["backends"].get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("network document: ") + e.what());
    }
    return network;
}

PersonalNetwork load_network(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open network file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return import_canonical(buf.str());
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

int penwidth(Strength s) {
    switch (s) {
        case Strength::weak: return 1;
        case Strength::moderate: return 2;
        case Strength::strong: return 3;
    }
    return 1;
}

}  // namespace

std::string export_dot(const PersonalNetwork& network, const DotOptions& options) {
    std::vector<const NetworkNode*> nodes;
    for (const NetworkNode& node : network.nodes) nodes.push_back(&node);
    if (options.max_nodes && static_cast<int>(nodes.size()) > *options.max_nodes) {
        std::stable_sort(nodes.begin(), nodes.end(), [](const NetworkNode* a,
                                                        const NetworkNode* b) {
            if (a->weight_w != b->weight_w) return a->weight_w > b->weight_w;
            return a->theme_id < b->theme_id;
        });
        nodes.resize(*options.max_nodes);
    }
    std::sort(nodes.begin(), nodes.end(), [](const NetworkNode* a, const NetworkNode* b) {
        return a->theme_id < b->theme_id;
    });
    std::set<std::string> kept;
    for (const NetworkNode* node : nodes) kept.insert(node->theme_id);

    std::vector<const Edge*> edges;
    for (const Edge& edge : network.edges) {
        if (options.min_strength && edge.strength < *options.min_strength) continue;
        if (!kept.count(edge.source_theme) || !kept.count(edge.target_theme)) continue;
        edges.push_back(&edge);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge* a, const Edge* b) {
        if (a->source_theme != b->source_theme) return a->source_theme < b->source_theme;
        return a->target_theme < b->target_theme;
    });

    std::ostringstream out;
    out << "digraph personal_network {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=box, style=rounded];\n";
    for (const NetworkNode* node : nodes) {
        out << "  \"" << dot_escape(node->theme_id) << "\" [label=\""
            << dot_escape(node->label) << " (w=" << node->weight_w << ")";
        if (!node->top_dimensions.empty()) {
            out << "\\n";
            for (size_t i = 0; i < node->top_dimensions.size(); ++i) {
                if (i) out << ", ";
                out << dot_escape(dimension_name(node->top_dimensions[i]));
            }
        }
        out << "\"];\n";
    }
    for (const Edge* edge : edges) {
        out << "  \"" << dot_escape(edge->source_theme) << "\" -> \""
            << dot_escape(edge->target_theme) << "\" [style="
            << (edge->edge_type == EdgeType::excitatory ? "solid" : "dashed")
            << ", penwidth=" << penwidth(edge->strength) << "];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace procnet
