#include "procnet/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "procnet/errors.hpp"
#include "procnet/prompts.hpp"
#include "procnet/schemas.hpp"
#include "procnet/textutil.hpp"

namespace procnet {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<std::string> process_entries(const std::vector<ProcessItem>& processes) {
    std::vector<std::string> entries;
    entries.reserve(processes.size());
    for (const ProcessItem& p : processes) entries.push_back(p.id + ": " + p.text);
    return entries;
}

std::vector<ClusterViolation> validate_clustering(const Clustering& clustering,
                                                  const std::vector<ProcessItem>& processes) {
    std::vector<ClusterViolation> violations;
    std::set<std::string> known;
    for (const ProcessItem& p : processes) known.insert(p.id);

    std::set<std::string> covered;
    for (const ThemeCluster& theme : clustering.clusters) {
        for (const std::string& member : theme.members) {
            if (!known.count(member)) {
                violations.push_back({ClusterViolationKind::unknown_member, theme.theme_id,
                                      member,
                                      "theme " + theme.theme_id + " references unknown process '" +
                                          member + "'"});
            } else {
                covered.insert(member);
            }
        }
        if (theme.members.size() < 2)
            violations.push_back({ClusterViolationKind::undersized_theme, theme.theme_id, "",
                                  "theme " + theme.theme_id + " has fewer than 2 members"});
    }
    for (const ProcessItem& p : processes) {
        if (!covered.count(p.id))
            violations.push_back({ClusterViolationKind::uncovered_process, "", p.id,
                                  "process " + p.id + " is in no cluster"});
    }
    if (processes.size() >= 3) {
        for (const ThemeCluster& theme : clustering.clusters) {
            std::set<std::string> members(theme.members.begin(), theme.members.end());
            bool has_all = true;
            for (const ProcessItem& p : processes) {
                if (!members.count(p.id)) {
                    has_all = false;
                    break;
                }
            }
            if (has_all) {
                violations.push_back({ClusterViolationKind::single_cluster_degeneracy,
                                      theme.theme_id, "",
                                      "theme " + theme.theme_id + " contains every process"});
            }
        }
    }
    return violations;
}

double multi_membership_rate(const Clustering& clustering) {
    std::map<std::string, int> appearances;
    for (const ThemeCluster& theme : clustering.clusters)
        for (const std::string& member : theme.members) ++appearances[member];
    if (appearances.empty()) return 0.0;
    int multi = 0;
    for (const auto& [id, count] : appearances)
        if (count >= 2) ++multi;
    return static_cast<double>(multi) / static_cast<double>(appearances.size());
}

ClusterEngine::ClusterEngine(Gateway& gateway, BackendSpec backend, std::string transcript_text,
                             bool repair_enabled)
    : gateway_(gateway),
      backend_(std::move(backend)),
      transcript_(std::move(transcript_text)),
      repair_enabled_(repair_enabled) {}

std::vector<std::string> ClusterEngine::generate_themes(const std::vector<ProcessItem>& processes) {
    if (processes.size() < 2)
        throw ValidationError("generate_themes: need at least 2 processes, have " +
                              std::to_string(processes.size()));
    CompletionRequest req;
    req.backend = backend_;
    req.prompt = prompts::generate_themes(transcript_, process_entries(processes));
    req.schema_id = schemas::kThemes;
    StructuredResponse res = gateway_.complete_structured(req);

    std::vector<std::string> themes;
    std::set<std::string> seen;
    for (const json& entry : res.parsed) {
        std::string label = trim(entry.get<std::string>());
        if (seen.insert(lower(label)).second) themes.push_back(std::move(label));
    }
    if (themes.empty()) throw ParseError("generate_themes: model returned no themes");
    return themes;
}

namespace {

// Members may come back as a process id ("P3"), a full prompt entry
// ("P3: text"), or the bare text. Anything else is hallucinated and dropped.
const ProcessItem* resolve_member(const std::string& raw,
                                  const std::vector<ProcessItem>& processes) {
    const std::string needle = trim(raw);
    for (const ProcessItem& p : processes) {
        if (needle == p.id || needle == p.id + ": " + p.text) return &p;
    }
    const std::string folded = lower(needle);
    for (const ProcessItem& p : processes) {
        if (folded == lower(p.text)) return &p;
    }
    return nullptr;
}

std::string theme_id_for(size_t position) { return "T" + std::to_string(position + 1); }

std::set<std::string> covered_ids(const Clustering& clustering) {
    std::set<std::string> covered;
    for (const ThemeCluster& theme : clustering.clusters)
        for (const std::string& member : theme.members) covered.insert(member);
    return covered;
}

void add_member(ThemeCluster& theme, const std::string& id) {
    if (std::find(theme.members.begin(), theme.members.end(), id) == theme.members.end())
        theme.members.push_back(id);
}

}  // namespace

Clustering ClusterEngine::parse_assignment(const json& parsed,
                                           const std::vector<ProcessItem>& processes,
                                           const std::vector<std::string>* provided_themes) {
    Clustering clustering;

    if (provided_themes) {
        // Fixed theme list: output entries are matched to it by label;
        // model-invented themes are dropped and logged.
        for (size_t i = 0; i < provided_themes->size(); ++i)
            clustering.clusters.push_back({theme_id_for(i), (*provided_themes)[i], {}});
        for (const auto& [key, entry] : parsed.items()) {
            const std::string label = trim(entry.at("Theme").get<std::string>());
            auto it = std::find_if(clustering.clusters.begin(), clustering.clusters.end(),
                                   [&](const ThemeCluster& t) {
                                       return lower(t.label) == lower(label);
                                   });
            if (it == clustering.clusters.end()) {
                clustering.diagnostics.dropped_themes.push_back(label);
                continue;
            }
            for (const json& member : entry.at("Processes")) {
                const std::string raw = member.get<std::string>();
                if (const ProcessItem* p = resolve_member(raw, processes))
                    add_member(*it, p->id);
                else
                    clustering.diagnostics.dropped_members.push_back(raw);
            }
        }
    } else {
        std::set<std::string> seen_labels;
        for (const auto& [key, entry] : parsed.items()) {
            const std::string label = trim(entry.at("Theme").get<std::string>());
            if (!seen_labels.insert(lower(label)).second) {
                clustering.diagnostics.dropped_themes.push_back(label + " (duplicate)");
                continue;
            }
            ThemeCluster theme{theme_id_for(clustering.clusters.size()), label, {}};
            for (const json& member : entry.at("Processes")) {
                const std::string raw = member.get<std::string>();
                if (const ProcessItem* p = resolve_member(raw, processes))
                    add_member(theme, p->id);
                else
                    clustering.diagnostics.dropped_members.push_back(raw);
            }
            clustering.clusters.push_back(std::move(theme));
        }
    }

    const auto covered = covered_ids(clustering);
    for (const ProcessItem& p : processes)
        if (!covered.count(p.id)) clustering.uncovered.push_back(p.id);
    return clustering;
}

std::vector<std::string> ClusterEngine::theme_labels(const Clustering& clustering) const {
    std::vector<std::string> labels;
    labels.reserve(clustering.clusters.size());
    for (const ThemeCluster& theme : clustering.clusters) labels.push_back(theme.label);
    return labels;
}

Clustering ClusterEngine::finalize(Clustering clustering,
                                   const std::vector<ProcessItem>& processes,
                                   const std::vector<std::string>& original_themes) {
    for (const ClusterViolation& v : validate_clustering(clustering, processes))
        clustering.diagnostics.violations.push_back(v.message);
    if (repair_enabled_)
        return repair_impl(std::move(clustering), processes, original_themes);
    return clustering;
}

Clustering ClusterEngine::assign_processes(const std::vector<ProcessItem>& processes,
                                           const std::vector<std::string>& themes) {
    if (themes.empty()) throw ValidationError("assign_processes: no themes provided");
    CompletionRequest req;
    req.backend = backend_;
    req.prompt = prompts::assign_processes(transcript_, process_entries(processes), themes);
    req.schema_id = schemas::kAssign;
    StructuredResponse res = gateway_.complete_structured(req);
    return finalize(parse_assignment(res.parsed, processes, &themes), processes, themes);
}

Clustering ClusterEngine::single_step_cluster(const std::vector<ProcessItem>& processes) {
    if (processes.size() < 2)
        throw ValidationError("single_step_cluster: need at least 2 processes");
    CompletionRequest req;
    req.backend = backend_;
    req.prompt = prompts::single_step_cluster(transcript_, process_entries(processes));
    req.schema_id = schemas::kSingleStep;
    StructuredResponse res = gateway_.complete_structured(req);
    Clustering parsed = parse_assignment(res.parsed, processes, nullptr);
    const std::vector<std::string> labels = theme_labels(parsed);
    return finalize(std::move(parsed), processes, labels);
}

namespace {

std::array<int, kDimensionCount> dimension_vector(const DimensionSet& dims) {
    std::array<int, kDimensionCount> v{};
    for (DimensionLabel label : dims) v[static_cast<int>(label)] = 1;
    return v;
}

std::array<int, kDimensionCount> theme_profile(const ThemeCluster& theme,
                                               const std::vector<ProcessItem>& processes) {
    std::array<int, kDimensionCount> profile{};
    for (const std::string& member : theme.members) {
        for (const ProcessItem& p : processes) {
            if (p.id == member) {
                for (DimensionLabel label : p.dimensions) ++profile[static_cast<int>(label)];
                break;
            }
        }
    }
    return profile;
}

double cosine(const std::array<int, kDimensionCount>& a,
              const std::array<int, kDimensionCount>& b) {
    double dot = 0, na = 0, nb = 0;
    for (int i = 0; i < kDimensionCount; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

const ProcessItem& find_process(const std::vector<ProcessItem>& processes,
                                const std::string& id) {
    for (const ProcessItem& p : processes)
        if (p.id == id) return p;
    throw ValidationError("unknown process id '" + id + "'");
}

// Highest cosine between the process dimensions and each theme's member
// dimension profile; ties prefer the theme with the higher count on the
// earliest canonical dimension, then the smaller theme_id.
size_t best_theme_by_dimensions(const Clustering& clustering,
                                const std::vector<ProcessItem>& processes,
                                const ProcessItem& process) {
    const auto target = dimension_vector(process.dimensions);
    size_t best = 0;
    double best_score = -1.0;
    std::array<int, kDimensionCount> best_profile{};
    for (size_t i = 0; i < clustering.clusters.size(); ++i) {
        const auto profile = theme_profile(clustering.clusters[i], processes);
        const double score = cosine(target, profile);
        if (score > best_score + 1e-12) {
            best = i;
            best_score = score;
            best_profile = profile;
            continue;
        }
        if (std::fabs(score - best_score) <= 1e-12) {
            for (int d = 0; d < kDimensionCount; ++d) {
                if (profile[d] != best_profile[d]) {
                    if (profile[d] > best_profile[d]) {
                        best = i;
                        best_profile = profile;
                    }
                    break;
                }
            }
        }
    }
    return best;
}

}  // namespace

// (a) of the repair policy for one process: focused re-query over the
// existing themes, falling back to the dimension-overlap assignment.
void ClusterEngine::cover_process(Clustering& clustering,
                                  const std::vector<ProcessItem>& processes,
                                  const ProcessItem& process) {
    const auto labels = theme_labels(clustering);
    size_t target = clustering.clusters.size();
    try {
        CompletionRequest req;
        req.backend = backend_;
        req.prompt = prompts::repair_assign(process.id + ": " + process.text, labels);
        req.schema_id = schemas::kRepairAssign;
        StructuredResponse res = gateway_.complete_structured(req);
        const std::string answer = trim(res.parsed.at("theme").get<std::string>());
        for (size_t i = 0; i < labels.size(); ++i) {
            if (lower(labels[i]) == lower(answer)) {
                target = i;
                break;
            }
        }
    } catch (const Error&) {
        // fall through to the deterministic assignment
    }
    auto& diag = clustering.diagnostics;
    if (target < clustering.clusters.size()) {
        diag.repairs.push_back("re-query assigned " + process.id + " to " +
                               clustering.clusters[target].theme_id);
    } else {
        target = best_theme_by_dimensions(clustering, processes, process);
        diag.repairs.push_back("dimension-overlap assigned " + process.id + " to " +
                               clustering.clusters[target].theme_id);
    }
    add_member(clustering.clusters[target], process.id);
}

Clustering ClusterEngine::repair_clustering(Clustering clustering,
                                            const std::vector<ProcessItem>& processes) {
    const std::vector<std::string> labels = theme_labels(clustering);
    return repair_impl(std::move(clustering), processes, labels);
}

Clustering ClusterEngine::repair_impl(Clustering clustering,
                                      const std::vector<ProcessItem>& processes,
                                      const std::vector<std::string>& original_themes) {
    if (processes.empty()) {
        clustering.uncovered.clear();
        return clustering;
    }
    if (clustering.clusters.empty())
        throw ValidationError("repair_clustering: no clusters to repair into");
    if (processes.size() < 2)
        throw ValidationError(
            "repair_clustering: a single process cannot satisfy 2-member themes");

    // (a) coverage
    const auto covered = covered_ids(clustering);
    for (const ProcessItem& p : processes) {
        if (!covered.count(p.id)) cover_process(clustering, processes, p);
    }
    clustering.uncovered.clear();

    // (b) undersized themes
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < clustering.clusters.size(); ++i) {
            if (clustering.clusters[i].members.size() >= 2) continue;
            if (clustering.clusters.size() == 1) break;  // nothing to merge into

            const ThemeCluster doomed = clustering.clusters[i];
            size_t best = SIZE_MAX;
            size_t best_overlap = 0;
            for (size_t j = 0; j < clustering.clusters.size(); ++j) {
                if (j == i) continue;
                size_t overlap = 0;
                for (const std::string& m : doomed.members) {
                    const auto& other = clustering.clusters[j].members;
                    if (std::find(other.begin(), other.end(), m) != other.end()) ++overlap;
                }
                if (overlap > best_overlap) {
                    best_overlap = overlap;
                    best = j;
                }
            }
            clustering.clusters.erase(clustering.clusters.begin() + i);
            auto& diag = clustering.diagnostics;
            if (best != SIZE_MAX && best_overlap > 0) {
                const size_t adjusted = best > i ? best - 1 : best;
                for (const std::string& m : doomed.members)
                    add_member(clustering.clusters[adjusted], m);
                diag.repairs.push_back("merged undersized " + doomed.theme_id + " into " +
                                       clustering.clusters[adjusted].theme_id);
            } else {
                diag.repairs.push_back("dropped undersized " + doomed.theme_id);
                diag.dropped_themes.push_back(doomed.label);
                for (const std::string& m : doomed.members) {
                    if (!covered_ids(clustering).count(m))
                        cover_process(clustering, processes, find_process(processes, m));
                }
            }
            changed = true;
            break;
        }
    }

    // (c) degeneracy: one corrective re-query over the full original theme
    // list, else accept with a record
    auto degenerate = [&]() {
        for (const ClusterViolation& v : validate_clustering(clustering, processes))
            if (v.kind == ClusterViolationKind::single_cluster_degeneracy) return true;
        return false;
    };
    if (degenerate() && original_themes.size() >= 2) {
        try {
            CompletionRequest req;
            req.backend = backend_;
            req.prompt = prompts::assign_processes(transcript_, process_entries(processes),
                                                   original_themes, /*corrective=*/true);
            req.schema_id = schemas::kAssign;
            StructuredResponse res = gateway_.complete_structured(req);
            Clustering retried = parse_assignment(res.parsed, processes, &original_themes);
            retried.diagnostics = clustering.diagnostics;
            retried.diagnostics.repairs.push_back("corrective re-query for degeneracy");
            if (retried.uncovered.empty() &&
                validate_clustering(retried, processes).empty()) {
                clustering = std::move(retried);
            }
        } catch (const Error&) {
            // keep the degenerate clustering, recorded below
        }
    }
    if (degenerate()) {
        for (const ClusterViolation& v : validate_clustering(clustering, processes))
            if (v.kind == ClusterViolationKind::single_cluster_degeneracy)
                clustering.diagnostics.accepted_violations.push_back(v.message);
    }

    // Post-repair contract check (degeneracy may be accepted, nothing else).
    for (const ClusterViolation& v : validate_clustering(clustering, processes)) {
        if (v.kind == ClusterViolationKind::single_cluster_degeneracy) continue;
        throw ValidationError("repair_clustering: unresolvable violation: " + v.message);
    }
    return clustering;
}

std::string clustering_to_json(const Clustering& clustering,
                               const std::vector<ProcessItem>& processes,
                               const std::string& session_id, const std::string& strategy) {
    ordered_json doc;
    doc["version"] = "1";
    doc["session_id"] = session_id;
    doc["strategy"] = strategy;
    doc["themes"] = ordered_json::array();
    for (const ThemeCluster& theme : clustering.clusters) {
        ordered_json t;
        t["theme_id"] = theme.theme_id;
        t["label"] = theme.label;
        t["members"] = theme.members;
        doc["themes"].push_back(std::move(t));
    }
    doc["processes"] = ordered_json::array();
    for (const ProcessItem& p : processes) {
        ordered_json entry;
        entry["id"] = p.id;
        entry["text"] = p.text;
        entry["dimensions"] = dimension_names(p.dimensions);
        entry["source_utterance_index"] = p.source_utterance_index;
        doc["processes"].push_back(std::move(entry));
    }
    doc["uncovered"] = clustering.uncovered;
    doc["multi_membership_rate"] = multi_membership_rate(clustering);
    ordered_json diag;
    diag["violations"] = clustering.diagnostics.violations;
    diag["repairs"] = clustering.diagnostics.repairs;
    diag["dropped_members"] = clustering.diagnostics.dropped_members;
    diag["dropped_themes"] = clustering.diagnostics.dropped_themes;
    diag["accepted_violations"] = clustering.diagnostics.accepted_violations;
    doc["diagnostics"] = std::move(diag);
    return doc.dump(2) + "\n";
}

void load_clustering(const std::string& path, Clustering& clustering,
                     std::vector<ProcessItem>& processes, std::string& session_id,
                     std::string& strategy) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open clustering file: " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ParseError("clustering file: invalid JSON in " + path);
    try {
        session_id = doc.at("session_id").get<std::string>();
        strategy = doc.value("strategy", std::string("two_step"));
        clustering = {};
        processes.clear();
        for (const json& t : doc.at("themes")) {
            ThemeCluster theme;
            theme.theme_id = t.at("theme_id").get<std::string>();
            theme.label = t.at("label").get<std::string>();
            theme.members = t.at("members").get<std::vector<std::string>>();
            clustering.clusters.push_back(std::move(theme));
        }
        for (const json& p : doc.at("processes")) {
            ProcessItem item;
            item.id = p.at("id").get<std::string>();
            item.text = p.at("text").get<std::string>();
            for (const json& d : p.at("dimensions")) {
                auto label = parse_dimension(d.get<std::string>());
                if (!label)
                    throw ParseError("clustering file: unknown dimension '" +
                                     d.get<std::string>() + "'");
                item.dimensions.insert(*label);
            }
            item.source_utterance_index = p.value("source_utterance_index", -1);
            processes.push_back(std::move(item));
        }
        if (doc.contains("uncovered"))
            clustering.uncovered = doc["uncovered"].get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw ParseError("clustering file " + path + ": " + e.what());
    }
}

}  // namespace procnet
