#include "procnet/links.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "procnet/errors.hpp"
#include "procnet/rng.hpp"
#include "procnet/schemas.hpp"
#include "procnet/textutil.hpp"

namespace procnet {

using nlohmann::json;
using nlohmann::ordered_json;

const char* edge_type_name(EdgeType t) {
    return t == EdgeType::excitatory ? "excitatory" : "inhibitory";
}

const char* strength_name(Strength s) {
    switch (s) {
        case Strength::weak: return "weak";
        case Strength::moderate: return "moderate";
        case Strength::strong: return "strong";
    }
    return "unknown";
}

std::optional<EdgeType> parse_edge_type(const std::string& s) {
    const std::string f = lower(trim(s));
    if (f == "excitatory") return EdgeType::excitatory;
    if (f == "inhibitory") return EdgeType::inhibitory;
    return std::nullopt;
}

std::optional<Strength> parse_strength(const std::string& s) {
    const std::string f = lower(trim(s));
    if (f == "weak") return Strength::weak;
    if (f == "moderate") return Strength::moderate;
    if (f == "strong") return Strength::strong;
    return std::nullopt;
}

const char* ensemble_kind_name(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::prompt_based: return "prompt_based";
        case EnsembleKind::model_based: return "model_based";
        case EnsembleKind::temperature_based: return "temperature_based";
    }
    return "unknown";
}

std::optional<EnsembleKind> parse_ensemble_kind(const std::string& s) {
    const std::string f = lower(trim(s));
    if (f == "prompt" || f == "prompt_based") return EnsembleKind::prompt_based;
    if (f == "model" || f == "model_based") return EnsembleKind::model_based;
    if (f == "temperature" || f == "temperature_based") return EnsembleKind::temperature_based;
    return std::nullopt;
}

EnsembleStrategy EnsembleStrategy::prompt_based(const BackendSpec& backend) {
    BackendSpec cold = backend;
    cold.temperature = 0.0;
    EnsembleStrategy strategy;
    strategy.kind = EnsembleKind::prompt_based;
    strategy.members = {
        {"zero_shot", cold, prompts::LinkPromptStyle::zero_shot},
        {"one_shot", cold, prompts::LinkPromptStyle::one_shot},
        {"few_shot", cold, prompts::LinkPromptStyle::few_shot},
    };
    return strategy;
}

EnsembleStrategy EnsembleStrategy::model_based(const std::vector<BackendSpec>& backends) {
    if (backends.size() != 3)
        throw ValidationError("model_based ensemble needs exactly 3 backends, got " +
                              std::to_string(backends.size()));
    EnsembleStrategy strategy;
    strategy.kind = EnsembleKind::model_based;
    for (const BackendSpec& b : backends) {
        BackendSpec cold = b;
        cold.temperature = 0.0;
        strategy.members.push_back({b.name, cold, prompts::LinkPromptStyle::zero_shot});
    }
    if (strategy.members[0].variant_id == strategy.members[1].variant_id ||
        strategy.members[0].variant_id == strategy.members[2].variant_id ||
        strategy.members[1].variant_id == strategy.members[2].variant_id)
        throw ValidationError("model_based ensemble needs 3 distinct backends");
    return strategy;
}

EnsembleStrategy EnsembleStrategy::temperature_based(const BackendSpec& backend) {
    EnsembleStrategy strategy;
    strategy.kind = EnsembleKind::temperature_based;
    const double temps[] = {0.0, 0.5, 1.0};
    const char* ids[] = {"t0.0", "t0.5", "t1.0"};
    for (int i = 0; i < 3; ++i) {
        BackendSpec member = backend;
        member.temperature = temps[i];
        strategy.members.push_back({ids[i], member, prompts::LinkPromptStyle::zero_shot});
    }
    return strategy;
}

LinkEngine::LinkEngine(Gateway& gateway) : gateway_(gateway) {}

LinkOpinion LinkEngine::query_opinion(const EnsembleMember& member, const ThemeRef& source,
                                      const ThemeRef& target) {
    if (source.theme_id == target.theme_id)
        throw ValidationError("query_opinion: self-pair " + source.theme_id);

    LinkOpinion opinion;
    opinion.variant_id = member.variant_id;
    opinion.source_theme = source.theme_id;
    opinion.target_theme = target.theme_id;

    CompletionRequest req;
    req.backend = member.backend;
    req.prompt = prompts::link(source.label, target.label, member.prompt_style);
    req.schema_id = schemas::kLink;
    json entry;
    try {
        StructuredResponse res = gateway_.complete_structured(req);
        entry = res.parsed["relationship"][0];
    } catch (const Error&) {
        opinion.abstained = true;  // counted as not connected
        return opinion;
    }

    if (entry["connection"][0].get<int>() == 1) {
        opinion.connected = true;
        opinion.edge_type = parse_edge_type(entry["relationship_type"].get<std::string>());
        opinion.strength = parse_strength(entry["strength_of_relationship"].get<std::string>());
        opinion.explanation = entry["explanation"].get<std::string>();
    }
    return opinion;
}

std::optional<Edge> vote(const std::vector<LinkOpinion>& opinions, uint64_t rng_seed) {
    if (opinions.size() != 3)
        throw ValidationError("vote: expected exactly 3 opinions, got " +
                              std::to_string(opinions.size()));
    const std::string source = opinions.front().source_theme;
    const std::string target = opinions.front().target_theme;
    for (const LinkOpinion& o : opinions) {
        if (o.source_theme != source || o.target_theme != target)
            throw ValidationError("vote: opinions disagree on the theme pair");
        if (o.connected && (!o.edge_type || !o.strength || !o.explanation))
            throw ValidationError("vote: connected opinion missing type/strength/explanation");
    }

    // Step 1: majority on (connected, type).
    std::vector<const LinkOpinion*> excitatory;
    std::vector<const LinkOpinion*> inhibitory;
    for (const LinkOpinion& o : opinions) {
        if (!o.connected) continue;
        (*o.edge_type == EdgeType::excitatory ? excitatory : inhibitory).push_back(&o);
    }
    const auto& majority = excitatory.size() >= inhibitory.size() ? excitatory : inhibitory;
    if (majority.size() < 2) return std::nullopt;

    // Step 2: strongest value among the majority outputs.
    Strength strength = Strength::weak;
    for (const LinkOpinion* o : majority) strength = std::max(strength, *o->strength);

    // Step 3: explanation sampled from the strongest majority members,
    // order-independent (sorted by variant) and seeded per pair.
    std::vector<const LinkOpinion*> pool;
    for (const LinkOpinion* o : majority)
        if (*o->strength == strength) pool.push_back(o);
    std::sort(pool.begin(), pool.end(), [](const LinkOpinion* a, const LinkOpinion* b) {
        if (a->variant_id != b->variant_id) return a->variant_id < b->variant_id;
        return *a->explanation < *b->explanation;
    });
    Rng rng(derive_seed(rng_seed, source + "->" + target));
    const LinkOpinion* chosen = pool[rng.bounded(pool.size())];

    Edge edge;
    edge.source_theme = source;
    edge.target_theme = target;
    edge.edge_type = *majority.front()->edge_type;
    edge.strength = strength;
    edge.explanation = *chosen->explanation;
    edge.explanation_variant = chosen->variant_id;
    edge.votes_for = static_cast<int>(majority.size());
    return edge;
}

EnsembleResult LinkEngine::run_ensemble(const EnsembleStrategy& strategy,
                                        const std::vector<ThemeRef>& themes, uint64_t rng_seed) {
    if (strategy.members.size() != 3)
        throw ValidationError("run_ensemble: strategy must have exactly 3 members");
    if (themes.size() < 2) throw ValidationError("run_ensemble: need at least 2 themes");

    EnsembleResult result;
    for (size_t i = 0; i < themes.size(); ++i) {
        for (size_t j = 0; j < themes.size(); ++j) {
            if (i == j) continue;
            std::vector<LinkOpinion> pair_opinions;
            for (const EnsembleMember& member : strategy.members) {
                LinkOpinion opinion = query_opinion(member, themes[i], themes[j]);
                pair_opinions.push_back(opinion);
                result.opinions.push_back(std::move(opinion));
            }
            if (auto edge = vote(pair_opinions, rng_seed)) result.edges.push_back(*edge);
        }
    }
    return result;
}

AgreementStats agreement_stats(const std::vector<LinkOpinion>& opinions) {
    std::map<std::pair<std::string, std::string>, std::vector<const LinkOpinion*>> groups;
    for (const LinkOpinion& o : opinions)
        groups[{o.source_theme, o.target_theme}].push_back(&o);

    AgreementStats stats;
    for (const auto& [pair, group] : groups) {
        if (group.size() != 3)
            throw ValidationError("agreement_stats: pair " + pair.first + "->" + pair.second +
                                  " has " + std::to_string(group.size()) +
                                  " opinions, expected 3");
        ++stats.pairs;
        const bool all_connected =
            group[0]->connected && group[1]->connected && group[2]->connected;
        const bool none_connected =
            !group[0]->connected && !group[1]->connected && !group[2]->connected;
        if (!(all_connected || none_connected)) continue;
        ++stats.unanimous_connection;
        if (!all_connected) continue;
        ++stats.unanimous_connected;
        if (*group[0]->edge_type != *group[1]->edge_type ||
            *group[0]->edge_type != *group[2]->edge_type)
            continue;
        ++stats.unanimous_type;
        if (*group[0]->strength == *group[1]->strength &&
            *group[0]->strength == *group[2]->strength)
            ++stats.unanimous_strength;
    }

    auto pct = [](int num, int den) {
        return den == 0 ? 100.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
    };
    stats.connection_pct = pct(stats.unanimous_connection, stats.pairs);
    stats.type_pct = pct(stats.unanimous_type, stats.unanimous_connected);
    stats.strength_pct = pct(stats.unanimous_strength, stats.unanimous_type);
    return stats;
}

std::string opinions_to_jsonl(const std::vector<LinkOpinion>& opinions) {
    std::string out;
    for (const LinkOpinion& o : opinions) {
        ordered_json line;
        line["source_theme"] = o.source_theme;
        line["target_theme"] = o.target_theme;
        line["variant_id"] = o.variant_id;
        line["connected"] = o.connected;
        if (o.connected) {
            line["edge_type"] = edge_type_name(*o.edge_type);
            line["strength"] = strength_name(*o.strength);
            line["explanation"] = *o.explanation;
        }
        if (o.abstained) line["abstained"] = true;
        out += line.dump();
        out += '\n';
    }
    return out;
}

std::vector<LinkOpinion> parse_opinions_jsonl(const std::string& jsonl,
                                              const std::string& origin) {
    std::vector<LinkOpinion> opinions;
    std::istringstream in(jsonl);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json doc = json::parse(line, nullptr, false);
        if (doc.is_discarded())
            throw ParseError(origin + ":" + std::to_string(line_no) + ": invalid JSON");
        LinkOpinion o;
        try {
            o.source_theme = doc.at("source_theme").get<std::string>();
            o.target_theme = doc.at("target_theme").get<std::string>();
            o.variant_id = doc.at("variant_id").get<std::string>();
            o.connected = doc.at("connected").get<bool>();
            if (o.connected) {
                o.edge_type = parse_edge_type(doc.at("edge_type").get<std::string>());
                o.strength = parse_strength(doc.at("strength").get<std::string>());
                o.explanation = doc.at("explanation").get<std::string>();
                if (!o.edge_type || !o.strength)
                    throw ParseError(origin + ":" + std::to_string(line_no) +
                                     ": bad edge_type/strength");
            }
            if (doc.contains("abstained")) o.abstained = doc["abstained"].get<bool>();
        } catch (const json::exception& e) {
            throw ParseError(origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
        opinions.push_back(std::move(o));
    }
    return opinions;
}

std::vector<LinkOpinion> load_opinions(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open opinion log: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_opinions_jsonl(buf.str(), path);
}

namespace {

ordered_json edge_to_json(const Edge& edge) {
    ordered_json e;
    e["source_theme"] = edge.source_theme;
    e["target_theme"] = edge.target_theme;
    e["edge_type"] = edge_type_name(edge.edge_type);
    e["strength"] = strength_name(edge.strength);
    e["explanation"] = edge.explanation;
    e["explanation_variant"] = edge.explanation_variant;
    e["votes_for"] = edge.votes_for;
    return e;
}

}  // namespace

std::string edges_to_json(const std::vector<Edge>& edges, const std::string& session_id,
                          const std::string& strategy, uint64_t seed) {
    ordered_json doc;
    doc["version"] = "1";
    doc["session_id"] = session_id;
    doc["strategy"] = strategy;
    doc["seed"] = seed;
    doc["edges"] = ordered_json::array();
    for (const Edge& edge : edges) doc["edges"].push_back(edge_to_json(edge));
    return doc.dump(2) + "\n";
}

std::vector<Edge> load_edges(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open edges file: " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ParseError("edges file: invalid JSON in " + path);
    std::vector<Edge> edges;
    try {
        for (const json& e : doc.at("edges")) {
            Edge edge;
            edge.source_theme = e.at("source_theme").get<std::string>();
            edge.target_theme = e.at("target_theme").get<std::string>();
            auto type = parse_edge_type(e.at("edge_type").get<std::string>());
            auto strength = parse_strength(e.at("strength").get<std::string>());
            if (!type || !strength)
                throw ParseError("edges file: bad edge_type/strength in " + path);
            edge.edge_type = *type;
            edge.strength = *strength;
            edge.explanation = e.at("explanation").get<std::string>();
            edge.explanation_variant = e.value("explanation_variant", std::string());
            edge.votes_for = e.at("votes_for").get<int>();
            edges.push_back(std::move(edge));
        }
    } catch (const json::exception& e) {
        throw ParseError("edges file " + path + ": " + e.what());
    }
    return edges;
}

}  // namespace procnet
