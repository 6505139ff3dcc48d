#include "procnet/detect.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "procnet/errors.hpp"
#include "procnet/prompts.hpp"
#include "procnet/rng.hpp"
#include "procnet/schemas.hpp"
#include "procnet/textutil.hpp"

namespace procnet {

using nlohmann::json;
using nlohmann::ordered_json;

bool valid_k(int k) { return k == 0 || k == 1 || k == 5 || k == 10 || k == 50 || k == 100; }

std::vector<LabeledExample> sample_examples(const std::vector<LabeledExample>& pool, int k,
                                            uint64_t seed) {
    if (k < 0) throw ValidationError("sample_examples: negative K");
    if (k > static_cast<int>(pool.size()))
        throw ValidationError("sample_examples: K=" + std::to_string(k) + " exceeds pool of " +
                              std::to_string(pool.size()));
    if (k == 0) return {};

    std::vector<LabeledExample> positives;
    std::vector<LabeledExample> negatives;
    for (const LabeledExample& ex : pool)
        (ex.gold.is_process ? positives : negatives).push_back(ex);

    Rng rng(seed);
    rng.shuffle(positives);
    rng.shuffle(negatives);

    int want_pos = (k + 1) / 2;
    int want_neg = k / 2;
    // Take the shortfall from the other side when the pool is lopsided.
    if (want_pos > static_cast<int>(positives.size())) {
        want_neg += want_pos - static_cast<int>(positives.size());
        want_pos = static_cast<int>(positives.size());
    }
    if (want_neg > static_cast<int>(negatives.size())) {
        want_pos += want_neg - static_cast<int>(negatives.size());
        want_neg = static_cast<int>(negatives.size());
    }

    std::vector<LabeledExample> picked;
    picked.reserve(k);
    picked.insert(picked.end(), positives.begin(), positives.begin() + want_pos);
    picked.insert(picked.end(), negatives.begin(), negatives.begin() + want_neg);
    rng.shuffle(picked);
    return picked;
}

std::string render_context(const ContextWindow& window) {
    std::vector<std::string> parts;
    for (const Utterance& u : window.before)
        parts.push_back(std::string(speaker_name(u.speaker)) + ": " + u.text);
    for (const Utterance& u : window.after)
        parts.push_back(std::string(speaker_name(u.speaker)) + ": " + u.text);
    return join(parts, " | ");
}

std::string build_detection_prompt(const std::vector<LabeledExample>& examples,
                                   const ContextWindow& window) {
    std::vector<prompts::DetectionExample> blocks;
    blocks.reserve(examples.size());
    for (const LabeledExample& ex : examples) {
        prompts::DetectionExample block;
        block.utterance = ex.text;
        block.context = ex.context;
        block.is_process = ex.gold.is_process;
        block.types = dimension_names(ex.gold.dimensions);
        blocks.push_back(std::move(block));
    }
    return prompts::detection(blocks, window.target.text, render_context(window));
}

namespace {

ProcessAnnotation annotation_from_json(const json& parsed, int utterance_index) {
    ProcessAnnotation annotation;
    annotation.utterance_index = utterance_index;
    annotation.is_process = parsed.at("is_process").get<bool>();
    if (parsed.contains("types")) {
        for (const json& t : parsed["types"]) {
            auto label = parse_dimension(t.get<std::string>());
            if (!label)
                throw ParseError("unknown process type '" + t.get<std::string>() + "'");
            annotation.dimensions.insert(*label);
        }
    }
    return annotation;
}

}  // namespace

Detector::Detector(Gateway& gateway, std::vector<LabeledExample> pool)
    : gateway_(gateway), pool_(std::move(pool)) {}

// The experiment pool: a seeded random subsample of example_pool_size
// annotated examples, fixed across the runs of one experiment.
std::vector<LabeledExample> Detector::experiment_pool(const DetectionConfig& config) const {
    if (config.example_pool_size <= 0)
        throw ValidationError("detection: example_pool_size must be positive");
    if (config.k > config.example_pool_size)
        throw ValidationError("detection: K exceeds example_pool_size");
    if (static_cast<size_t>(config.example_pool_size) >= pool_.size()) return pool_;
    std::vector<LabeledExample> subset = pool_;
    Rng rng(derive_seed(config.rng_seed, "example-pool"));
    rng.shuffle(subset);
    subset.resize(config.example_pool_size);
    return subset;
}

ProcessAnnotation Detector::call_and_parse(const std::vector<LabeledExample>& examples,
                                           const ContextWindow& window,
                                           const BackendSpec& backend) {
    CompletionRequest req;
    req.backend = backend;
    req.prompt = build_detection_prompt(examples, window);
    req.schema_id = schemas::kDetect;
    StructuredResponse res = gateway_.complete_structured(req);
    return annotation_from_json(res.parsed, window.target.index);
}

ProcessAnnotation Detector::detect_one(const ContextWindow& window, const DetectionConfig& config,
                                       const BackendSpec& backend) {
    if (!valid_k(config.k))
        throw ValidationError("detect_one: K must be one of {0,1,5,10,50,100}");
    auto examples = sample_examples(experiment_pool(config), config.k, config.rng_seed);
    return call_and_parse(examples, window, backend);
}

DetectionOutcome Detector::detect_session(const Session& session, const DetectionConfig& config,
                                          const BackendSpec& backend, double lead_min,
                                          double tail_min) {
    if (!valid_k(config.k))
        throw ValidationError("detect_session: K must be one of {0,1,5,10,50,100}");
    if (config.runs < 1) throw ValidationError("detect_session: runs must be >= 1");

    DetectionOutcome outcome;
    WorkingPhase phase = working_phase(session, lead_min, tail_min);
    outcome.phase_too_short = phase.too_short;

    const auto pool = experiment_pool(config);
    for (int run = 0; run < config.runs; ++run) {
        auto examples = sample_examples(pool, config.k, config.rng_seed + run);
        std::vector<ProcessAnnotation> annotations;
        annotations.reserve(phase.utterances.size());
        for (const Utterance& u : phase.utterances) {
            if (u.speaker == Speaker::therapist) {
                // Only patient processes are classified.
                ProcessAnnotation skip;
                skip.utterance_index = u.index;
                annotations.push_back(skip);
                continue;
            }
            ContextWindow window = context_window(session, u.index);
            try {
                annotations.push_back(call_and_parse(examples, window, backend));
            } catch (const Error& e) {
                ProcessAnnotation failed;
                failed.utterance_index = u.index;
                failed.error = e.what();
                annotations.push_back(failed);
                outcome.errors.push_back("run " + std::to_string(run) + ", utterance " +
                                         std::to_string(u.index) + ": " + e.what());
            }
        }
        outcome.runs.push_back(std::move(annotations));
    }
    return outcome;
}

ProcessAnnotation majority_annotation(const std::vector<ProcessAnnotation>& across_runs) {
    if (across_runs.empty()) throw ValidationError("majority_annotation: no runs");
    ProcessAnnotation out;
    out.utterance_index = across_runs.front().utterance_index;
    int positive = 0;
    for (const ProcessAnnotation& a : across_runs) {
        if (a.utterance_index != out.utterance_index)
            throw ValidationError("majority_annotation: mixed utterance indices");
        if (a.is_process) ++positive;
    }
    const int n = static_cast<int>(across_runs.size());
    out.is_process = 2 * positive > n || (2 * positive == n && positive > 0);
    if (!out.is_process) return out;

    DimensionSet union_set;
    for (DimensionLabel label : kAllDimensions) {
        int hits = 0;
        for (const ProcessAnnotation& a : across_runs)
            if (a.is_process && a.dimensions.count(label)) ++hits;
        if (hits > 0) union_set.insert(label);
        if (2 * hits >= positive) {
            if (hits > 0) out.dimensions.insert(label);
        }
    }
    if (out.dimensions.empty()) out.dimensions = union_set;
    return out;
}

std::string annotations_to_jsonl(const std::vector<AnnotationRecord>& records) {
    std::string out;
    for (const AnnotationRecord& record : records) {
        ordered_json line;
        line["utterance_index"] = record.annotation.utterance_index;
        line["is_process"] = record.annotation.is_process;
        line["dimensions"] = dimension_names(record.annotation.dimensions);
        line["run_id"] = record.run_id;
        if (record.annotation.error) line["error"] = *record.annotation.error;
        if (!record.rater_id.empty()) line["rater_id"] = record.rater_id;
        out += line.dump();
        out += '\n';
    }
    return out;
}

std::vector<AnnotationRecord> parse_annotations_jsonl(const std::string& jsonl,
                                                      const std::string& origin) {
    std::vector<AnnotationRecord> records;
    std::istringstream in(jsonl);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json doc = json::parse(line, nullptr, false);
        if (doc.is_discarded())
            throw ParseError(origin + ":" + std::to_string(line_no) + ": invalid JSON");
        AnnotationRecord record;
        try {
            record.annotation.utterance_index = doc.at("utterance_index").get<int>();
            record.annotation.is_process = doc.at("is_process").get<bool>();
            for (const json& d : doc.at("dimensions")) {
                auto label = parse_dimension(d.get<std::string>());
                if (!label)
                    throw ParseError(origin + ":" + std::to_string(line_no) +
                                     ": unknown dimension '" + d.get<std::string>() + "'");
                record.annotation.dimensions.insert(*label);
            }
        } catch (const json::exception& e) {
            throw ParseError(origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (doc.contains("run_id")) record.run_id = doc["run_id"].get<int>();
        if (doc.contains("error")) record.annotation.error = doc["error"].get<std::string>();
        if (doc.contains("rater_id")) record.rater_id = doc["rater_id"].get<std::string>();
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<AnnotationRecord> load_annotations(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open annotations file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_annotations_jsonl(buf.str(), path);
}

void save_annotations(const std::vector<AnnotationRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write annotations file: " + path);
    out << annotations_to_jsonl(records);
}

std::vector<LabeledExample> load_example_pool(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open example pool: " + path);
    std::vector<LabeledExample> pool;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json doc = json::parse(line, nullptr, false);
        if (doc.is_discarded())
            throw ParseError(path + ":" + std::to_string(line_no) + ": invalid JSON");
        LabeledExample ex;
        try {
            ex.text = doc.at("text").get<std::string>();
            ex.gold.is_process = doc.at("is_process").get<bool>();
            for (const json& d : doc.at("dimensions")) {
                auto label = parse_dimension(d.get<std::string>());
                if (!label)
                    throw ParseError(path + ":" + std::to_string(line_no) +
                                     ": unknown dimension '" + d.get<std::string>() + "'");
                ex.gold.dimensions.insert(*label);
            }
        } catch (const json::exception& e) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (doc.contains("context")) ex.context = doc["context"].get<std::string>();
        if (doc.contains("utterance_index"))
            ex.gold.utterance_index = doc["utterance_index"].get<int>();
        if (ex.gold.is_process && ex.gold.dimensions.empty())
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": positive example without dimensions");
        if (!ex.gold.is_process && !ex.gold.dimensions.empty())
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": negative example with dimensions");
        pool.push_back(std::move(ex));
    }
    if (pool.empty()) throw ValidationError("example pool is empty: " + path);
    return pool;
}

}  // namespace procnet
