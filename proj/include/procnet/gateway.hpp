#pragma once

#include <nlohmann/json.hpp>

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace procnet {

enum class BackendKind { http, mock };

struct BackendSpec {
    std::string name;
    BackendKind kind = BackendKind::mock;
    std::string model_id;
    std::string endpoint_url;  // http only
    double temperature = 0.0;  // in [0, 2]
    std::optional<int> seed;
};

struct CompletionRequest {
    BackendSpec backend;
    std::string prompt;
    int max_tokens = 2048;
    std::string schema_id;
};

struct StructuredResponse {
    std::string raw_text;
    nlohmann::json parsed;
    int attempts = 1;
};

// One entry of the mock backend's rule table. A request matches when every
// set predicate matches: schema_id, model_id, temperature, and all `contains`
// substrings of the prompt. First matching rule wins. `responses` is a
// scripted sequence consumed call by call (last entry repeats); `response`
// is the stateless single-answer form.
struct MockRule {
    std::string schema_id;
    std::string model_id;
    std::optional<double> temperature;
    std::vector<std::string> contains;
    nlohmann::json response;
    std::vector<nlohmann::json> responses;
};

class MockRules {
public:
    MockRules() = default;
    static MockRules from_json(const nlohmann::json& doc);
    static MockRules from_file(const std::string& path);

    void add(MockRule rule);
    bool empty() const { return rules_.empty(); }

    // Returns the canned text for this request; throws TransportError when no
    // rule matches. Sequence rules advance their cursor.
    std::string respond(const CompletionRequest& req);

private:
    std::vector<MockRule> rules_;
    std::vector<size_t> cursors_;
};

struct GatewayOptions {
    std::string cache_dir;  // empty disables the response cache
    double timeout_s = 60.0;
};

// Uniform access to completion backends. Responses are cached on disk by
// content hash when a cache directory is configured; cache hits never touch
// a backend. Safe for concurrent calls.
class Gateway {
public:
    explicit Gateway(GatewayOptions options = {});

    void set_mock_rules(MockRules rules);

    std::string complete(const CompletionRequest& req);

    // Extracts the first schema-conformant JSON value from the completion.
    // On failure, re-prompts with the validator's message appended, up to
    // `retries` extra times, then throws SchemaError carrying all raw
    // attempts.
    StructuredResponse complete_structured(const CompletionRequest& req, int retries = 2);

    // Stable content hash over (model_id, temperature, seed, prompt,
    // schema_id). Identical inputs give identical keys on every platform.
    static std::string cache_key(const CompletionRequest& req);

    // Number of actual backend invocations (cache hits excluded).
    long long backend_calls() const;

private:
    std::string call_backend(const CompletionRequest& req);
    std::string http_complete(const CompletionRequest& req);
    std::optional<std::string> cache_load(const std::string& key) const;
    void cache_store(const std::string& key, const std::string& text) const;

    GatewayOptions options_;
    MockRules mock_;
    std::unique_ptr<std::mutex> mutex_ = std::make_unique<std::mutex>();
    long long backend_calls_ = 0;
};

// Scans text for the first JSON value (object or array) that parses; used by
// the structured path. Returns all parseable candidates in scan order.
std::vector<nlohmann::json> extract_json_candidates(const std::string& text);

}  // namespace procnet
