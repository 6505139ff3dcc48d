#include "procnet/gateway.hpp"

#include <httplib.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "procnet/errors.hpp"
#include "procnet/schemas.hpp"
#include "procnet/sha256.hpp"
#include "procnet/textutil.hpp"

namespace procnet {

using nlohmann::json;
namespace fs = std::filesystem;

MockRules MockRules::from_json(const json& doc) {
    MockRules rules;
    if (!doc.is_object() || !doc.contains("rules") || !doc["rules"].is_array())
        throw ParseError("mock rules: expected an object with a 'rules' list");
    for (const json& entry : doc["rules"]) {
        MockRule rule;
        if (entry.contains("schema_id")) rule.schema_id = entry["schema_id"].get<std::string>();
        if (entry.contains("model_id")) rule.model_id = entry["model_id"].get<std::string>();
        if (entry.contains("temperature")) rule.temperature = entry["temperature"].get<double>();
        if (entry.contains("contains"))
            rule.contains = entry["contains"].get<std::vector<std::string>>();
        if (entry.contains("response")) rule.response = entry["response"];
        if (entry.contains("responses"))
            rule.responses = entry["responses"].get<std::vector<json>>();
        if (rule.response.is_null() && rule.responses.empty())
            throw ParseError("mock rules: rule without 'response' or 'responses'");
        rules.add(std::move(rule));
    }
    return rules;
}

MockRules MockRules::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open mock rules file: " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ParseError("mock rules: invalid JSON in " + path);
    return from_json(doc);
}

void MockRules::add(MockRule rule) {
    rules_.push_back(std::move(rule));
    cursors_.push_back(0);
}

namespace {

std::string render_response(const json& value) {
    return value.is_string() ? value.get<std::string>() : value.dump();
}

}  // namespace

std::string MockRules::respond(const CompletionRequest& req) {
    for (size_t i = 0; i < rules_.size(); ++i) {
        const MockRule& rule = rules_[i];
        if (!rule.schema_id.empty() && rule.schema_id != req.schema_id) continue;
        if (!rule.model_id.empty() && rule.model_id != req.backend.model_id) continue;
        if (rule.temperature && std::fabs(*rule.temperature - req.backend.temperature) > 1e-9)
            continue;
        bool all = true;
        for (const std::string& needle : rule.contains) {
            if (!contains(req.prompt, needle)) {
                all = false;
                break;
            }
        }
        if (!all) continue;
        if (!rule.responses.empty()) {
            size_t at = std::min(cursors_[i], rule.responses.size() - 1);
            ++cursors_[i];
            return render_response(rule.responses[at]);
        }
        return render_response(rule.response);
    }
    throw TransportError("mock backend '" + req.backend.name + "': no rule matches schema '" +
                         req.schema_id + "'");
}

Gateway::Gateway(GatewayOptions options) : options_(std::move(options)) {
    if (!options_.cache_dir.empty()) fs::create_directories(options_.cache_dir);
}

void Gateway::set_mock_rules(MockRules rules) {
    std::lock_guard lock(*mutex_);
    mock_ = std::move(rules);
}

std::string Gateway::cache_key(const CompletionRequest& req) {
    json key;
    key["model_id"] = req.backend.model_id;
    key["temperature"] = req.backend.temperature;
    if (req.backend.seed)
        key["seed"] = *req.backend.seed;
    else
        key["seed"] = nullptr;
    key["prompt"] = req.prompt;
    key["schema_id"] = req.schema_id;
    return sha256_hex(key.dump());
}

std::optional<std::string> Gateway::cache_load(const std::string& key) const {
    if (options_.cache_dir.empty()) return std::nullopt;
    fs::path path = fs::path(options_.cache_dir) / (key + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void Gateway::cache_store(const std::string& key, const std::string& text) const {
    if (options_.cache_dir.empty()) return;
    fs::path final_path = fs::path(options_.cache_dir) / (key + ".txt");
    fs::path tmp_path = fs::path(options_.cache_dir) / (key + ".tmp");
    {
        std::ofstream out(tmp_path, std::ios::binary);
        out << text;
    }
    fs::rename(tmp_path, final_path);
}

std::string Gateway::complete(const CompletionRequest& req) {
    if (trim(req.prompt).empty()) throw ValidationError("complete: empty prompt");
    if (req.backend.temperature < 0.0 || req.backend.temperature > 2.0)
        throw ValidationError("complete: temperature out of [0, 2] for backend '" +
                              req.backend.name + "'");
    if (req.backend.kind == BackendKind::http && req.backend.endpoint_url.empty())
        throw ValidationError("complete: backend '" + req.backend.name +
                              "' is http but has no endpoint_url");

    const std::string key = cache_key(req);
    if (auto cached = cache_load(key)) return *cached;

    const std::string text = call_backend(req);
    cache_store(key, text);
    return text;
}

std::string Gateway::call_backend(const CompletionRequest& req) {
    std::lock_guard lock(*mutex_);
    ++backend_calls_;
    if (req.backend.kind == BackendKind::mock) return mock_.respond(req);
    return http_complete(req);
}

std::string Gateway::http_complete(const CompletionRequest& req) {
    // Accepts "http://host:port" (the standard path is appended) or a full
    // ".../chat/completions" URL.
    std::string url = req.backend.endpoint_url;
    std::string path = "/v1/chat/completions";
    const size_t scheme = url.find("://");
    const size_t slash = scheme == std::string::npos ? url.find('/') : url.find('/', scheme + 3);
    if (slash != std::string::npos) {
        path = url.substr(slash);
        url = url.substr(0, slash);
    }

    httplib::Client client(url);
    const auto timeout_ms = static_cast<int>(options_.timeout_s * 1000);
    client.set_connection_timeout(0, timeout_ms * 1000);
    client.set_read_timeout(0, timeout_ms * 1000);

    json body;
    body["model"] = req.backend.model_id;
    body["messages"] = json::array({json{{"role", "user"}, {"content", req.prompt}}});
    body["temperature"] = req.backend.temperature;
    body["max_tokens"] = req.max_tokens;
    if (req.backend.seed) body["seed"] = *req.backend.seed;

    auto res = client.Post(path, body.dump(), "application/json");
    if (!res)
        throw TransportError("backend '" + req.backend.name + "': transport failure (" +
                             httplib::to_string(res.error()) + ")");
    if (res->status < 200 || res->status >= 300)
        throw TransportError("backend '" + req.backend.name + "': HTTP status " +
                             std::to_string(res->status));

    json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("choices") || !reply["choices"].is_array() ||
        reply["choices"].empty() || !reply["choices"][0].contains("message") ||
        !reply["choices"][0]["message"].contains("content"))
        throw ParseError("backend '" + req.backend.name + "': malformed completions response");
    return reply["choices"][0]["message"]["content"].get<std::string>();
}

std::vector<json> extract_json_candidates(const std::string& text) {
    std::vector<json> candidates;
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '{' && text[i] != '[') continue;
        // Find the matching close bracket, honoring strings and escapes.
        std::vector<char> stack;
        bool in_string = false;
        bool escaped = false;
        size_t end = std::string::npos;
        for (size_t j = i; j < text.size(); ++j) {
            const char c = text[j];
            if (in_string) {
                if (escaped)
                    escaped = false;
                else if (c == '\\')
                    escaped = true;
                else if (c == '"')
                    in_string = false;
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{' || c == '[') {
                stack.push_back(c);
            } else if (c == '}' || c == ']') {
                if (stack.empty() || (c == '}' && stack.back() != '{') ||
                    (c == ']' && stack.back() != '['))
                    break;  // mismatched; not a JSON value starting at i
                stack.pop_back();
                if (stack.empty()) {
                    end = j;
                    break;
                }
            }
        }
        if (end == std::string::npos) continue;
        json value = json::parse(text.substr(i, end - i + 1), nullptr, false);
        if (!value.is_discarded()) candidates.push_back(std::move(value));
    }
    return candidates;
}

StructuredResponse Gateway::complete_structured(const CompletionRequest& req, int retries) {
    if (!schemas::registered(req.schema_id))
        throw ValidationError("complete_structured: schema '" + req.schema_id +
                              "' is not registered");

    std::vector<std::string> raw_attempts;
    std::string error = "no JSON value found in the response";
    for (int attempt = 1; attempt <= retries + 1; ++attempt) {
        CompletionRequest attempt_req = req;
        if (attempt > 1) {
            attempt_req.prompt = req.prompt +
                                 "\n\nYour previous response was invalid: " + error +
                                 "\nRespond with only a valid JSON value in the required format." +
                                 " (repair attempt " + std::to_string(attempt - 1) + ")";
        }
        const std::string raw = complete(attempt_req);
        raw_attempts.push_back(raw);

        bool found_json = false;
        for (json& candidate : extract_json_candidates(raw)) {
            found_json = true;
            auto verdict = schemas::validate(req.schema_id, candidate);
            if (!verdict) {
                StructuredResponse out;
                out.raw_text = raw;
                out.parsed = std::move(candidate);
                out.attempts = attempt;
                return out;
            }
            error = *verdict;
        }
        if (!found_json) error = "no JSON value found in the response";
    }
    throw SchemaError("structured output still invalid after " + std::to_string(retries + 1) +
                          " attempts (schema '" + req.schema_id + "'): " + error,
                      std::move(raw_attempts));
}

long long Gateway::backend_calls() const {
    std::lock_guard lock(*mutex_);
    return backend_calls_;
}

}  // namespace procnet
