#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "procnet/gateway.hpp"
#include "procnet/links.hpp"

namespace procnet {

struct DetectionSettings {
    int k = 0;
    int runs = 1;
    int example_pool_size = 200;
    std::string pool_path;
    uint64_t seed = 0;
    std::string backend;
    bool aggregate_runs = false;  // multi-run majority, off by default
};

struct ClusteringSettings {
    std::string strategy = "two_step";  // or "single_step"
    bool repair = true;
    std::string backend;
};

struct LinkSettings {
    EnsembleKind strategy = EnsembleKind::prompt_based;
    std::vector<std::string> backends;  // 1 name, or 3 for model_based
    uint64_t seed = 0;
};

struct SegmentationSettings {
    double lead_min = 15.0;
    double tail_min = 5.0;
};

struct PipelineConfig {
    std::vector<BackendSpec> roster;
    std::string mock_rules_path;
    DetectionSettings detection;
    ClusteringSettings clustering;
    LinkSettings links;
    SegmentationSettings segmentation;
    std::string cache_dir;
    std::string output_dir = "out";

    // Validation errors name the offending key. Relative paths are resolved
    // against the config file's directory.
    static PipelineConfig load(const std::string& path);
    static PipelineConfig from_json(const nlohmann::json& doc, const std::string& base_dir = "");

    nlohmann::json snapshot() const;  // resolved form, embedded in manifests

    const BackendSpec& backend(const std::string& name) const;
    EnsembleStrategy link_strategy() const;

    // Replaces every backend with a mock twin (same name/model/temperature).
    void force_mock();
};

}  // namespace procnet
