#include "procnet/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "procnet/detect.hpp"
#include "procnet/errors.hpp"

namespace procnet {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string resolve(const std::string& base_dir, const std::string& path) {
    if (path.empty() || base_dir.empty() || fs::path(path).is_absolute()) return path;
    return (fs::path(base_dir) / path).string();
}

BackendSpec parse_backend(const json& entry, size_t position) {
    const std::string key = "backends[" + std::to_string(position) + "]";
    BackendSpec spec;
    if (!entry.is_object()) throw ValidationError(key + ": must be an object");
    if (!entry.contains("name") || !entry["name"].is_string())
        throw ValidationError(key + ".name: required string");
    spec.name = entry["name"].get<std::string>();
    const std::string kind = entry.value("kind", std::string("mock"));
    if (kind == "mock")
        spec.kind = BackendKind::mock;
    else if (kind == "http")
        spec.kind = BackendKind::http;
    else
        throw ValidationError(key + ".kind: must be \"http\" or \"mock\"");
    spec.model_id = entry.value("model_id", spec.name);
    spec.endpoint_url = entry.value("endpoint_url", std::string());
    if (spec.kind == BackendKind::http && spec.endpoint_url.empty())
        throw ValidationError(key + ".endpoint_url: required for http backends");
    spec.temperature = entry.value("temperature", 0.0);
    if (spec.temperature < 0.0 || spec.temperature > 2.0)
        throw ValidationError(key + ".temperature: out of [0, 2]");
    if (entry.contains("seed")) spec.seed = entry["seed"].get<int>();
    return spec;
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& doc, const std::string& base_dir) {
    if (!doc.is_object()) throw ValidationError("config: root must be an object");
    PipelineConfig config;

    if (!doc.contains("backends") || !doc["backends"].is_array() || doc["backends"].empty())
        throw ValidationError("backends: at least one backend is required");
    std::set<std::string> names;
    for (size_t i = 0; i < doc["backends"].size(); ++i) {
        BackendSpec spec = parse_backend(doc["backends"][i], i);
        if (!names.insert(spec.name).second)
            throw ValidationError("backends: duplicate name '" + spec.name + "'");
        config.roster.push_back(std::move(spec));
    }

    config.mock_rules_path = resolve(base_dir, doc.value("mock_rules", std::string()));

    if (doc.contains("detection")) {
        const json& d = doc["detection"];
        config.detection.k = d.value("k", 0);
        config.detection.runs = d.value("runs", 1);
        config.detection.example_pool_size = d.value("example_pool_size", 200);
        config.detection.pool_path = resolve(base_dir, d.value("pool", std::string()));
        config.detection.seed = d.value("seed", 0);
        config.detection.backend = d.value("backend", std::string());
        config.detection.aggregate_runs = d.value("aggregate_runs", false);
    }
    if (!valid_k(config.detection.k))
        throw ValidationError("detection.k: must be one of {0,1,5,10,50,100}");
    if (config.detection.runs < 1) throw ValidationError("detection.runs: must be >= 1");
    if (config.detection.example_pool_size < config.detection.k)
        throw ValidationError("detection.example_pool_size: must be >= detection.k");
    if (config.detection.backend.empty() && !config.roster.empty())
        config.detection.backend = config.roster.front().name;
    if (!names.count(config.detection.backend))
        throw ValidationError("detection.backend: unknown backend '" +
                              config.detection.backend + "'");

    if (doc.contains("clustering")) {
        const json& c = doc["clustering"];
        config.clustering.strategy = c.value("strategy", std::string("two_step"));
        config.clustering.repair = c.value("repair", true);
        config.clustering.backend = c.value("backend", std::string());
    }
    if (config.clustering.strategy != "two_step" && config.clustering.strategy != "single_step")
        throw ValidationError("clustering.strategy: must be \"two_step\" or \"single_step\"");
    if (config.clustering.backend.empty()) config.clustering.backend = config.detection.backend;
    if (!names.count(config.clustering.backend))
        throw ValidationError("clustering.backend: unknown backend '" +
                              config.clustering.backend + "'");

    if (doc.contains("links")) {
        const json& l = doc["links"];
        if (l.contains("strategy")) {
            auto kind = parse_ensemble_kind(l["strategy"].get<std::string>());
            if (!kind)
                throw ValidationError("links.strategy: must be prompt_based, model_based, or "
                                      "temperature_based");
            config.links.strategy = *kind;
        }
        if (l.contains("backends"))
            config.links.backends = l["backends"].get<std::vector<std::string>>();
        config.links.seed = l.value("seed", 0);
    }
    if (config.links.backends.empty()) config.links.backends = {config.clustering.backend};
    for (size_t i = 0; i < config.links.backends.size(); ++i) {
        if (!names.count(config.links.backends[i]))
            throw ValidationError("links.backends[" + std::to_string(i) + "]: unknown backend '" +
                                  config.links.backends[i] + "'");
    }
    if (config.links.strategy == EnsembleKind::model_based) {
        if (config.links.backends.size() != 3)
            throw ValidationError("links.backends: model_based needs exactly 3 backends");
    } else if (config.links.backends.size() != 1) {
        throw ValidationError("links.backends: prompt/temperature strategies take exactly 1");
    }

    if (doc.contains("segmentation")) {
        const json& s = doc["segmentation"];
        config.segmentation.lead_min = s.value("lead_min", 15.0);
        config.segmentation.tail_min = s.value("tail_min", 5.0);
        if (config.segmentation.lead_min <= 0)
            throw ValidationError("segmentation.lead_min: must be positive");
        if (config.segmentation.tail_min < 0)
            throw ValidationError("segmentation.tail_min: must be non-negative");
    }

    // Input paths resolve against the config file; output and cache paths
    // stay relative to the working directory.
    config.cache_dir = doc.value("cache_dir", std::string());
    config.output_dir = doc.value("output_dir", std::string("out"));

    bool any_mock = false;
    for (const BackendSpec& b : config.roster) any_mock |= b.kind == BackendKind::mock;
    if (any_mock && config.mock_rules_path.empty())
        throw ValidationError("mock_rules: required when the roster has mock backends");
    return config;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ParseError("config: invalid JSON in " + path);
    return from_json(doc, fs::path(path).parent_path().string());
}

json PipelineConfig::snapshot() const {
    json doc;
    doc["backends"] = json::array();
    for (const BackendSpec& b : roster) {
        json entry;
        entry["name"] = b.name;
        entry["kind"] = b.kind == BackendKind::mock ? "mock" : "http";
        entry["model_id"] = b.model_id;
        if (!b.endpoint_url.empty()) entry["endpoint_url"] = b.endpoint_url;
        entry["temperature"] = b.temperature;
        if (b.seed) entry["seed"] = *b.seed;
        doc["backends"].push_back(std::move(entry));
    }
    if (!mock_rules_path.empty()) doc["mock_rules"] = mock_rules_path;
    doc["detection"] = {{"k", detection.k},
                        {"runs", detection.runs},
                        {"example_pool_size", detection.example_pool_size},
                        {"pool", detection.pool_path},
                        {"seed", detection.seed},
                        {"backend", detection.backend},
                        {"aggregate_runs", detection.aggregate_runs}};
    doc["clustering"] = {{"strategy", clustering.strategy},
                         {"repair", clustering.repair},
                         {"backend", clustering.backend}};
    doc["links"] = {{"strategy", ensemble_kind_name(links.strategy)},
                    {"backends", links.backends},
                    {"seed", links.seed}};
    doc["segmentation"] = {{"lead_min", segmentation.lead_min},
                           {"tail_min", segmentation.tail_min}};
    doc["cache_dir"] = cache_dir;
    doc["output_dir"] = output_dir;
    return doc;
}

const BackendSpec& PipelineConfig::backend(const std::string& name) const {
    for (const BackendSpec& b : roster)
        if (b.name == name) return b;
    throw ValidationError("unknown backend '" + name + "'");
}

EnsembleStrategy PipelineConfig::link_strategy() const {
    switch (links.strategy) {
        case EnsembleKind::prompt_based:
            return EnsembleStrategy::prompt_based(backend(links.backends.front()));
        case EnsembleKind::model_based: {
            std::vector<BackendSpec> members;
            for (const std::string& name : links.backends) members.push_back(backend(name));
            return EnsembleStrategy::model_based(members);
        }
        case EnsembleKind::temperature_based:
            return EnsembleStrategy::temperature_based(backend(links.backends.front()));
    }
    throw ValidationError("links.strategy: unknown kind");
}

void PipelineConfig::force_mock() {
    for (BackendSpec& b : roster) {
        b.kind = BackendKind::mock;
        b.endpoint_url.clear();
    }
    if (mock_rules_path.empty())
        throw ValidationError("mock_rules: required to run with --mock");
}

}  // namespace procnet
