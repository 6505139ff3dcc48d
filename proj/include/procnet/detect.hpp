#pragma once

#include <optional>
#include <string>
#include <vector>

#include "procnet/dimensions.hpp"
#include "procnet/gateway.hpp"
#include "procnet/transcript.hpp"

namespace procnet {

struct ProcessAnnotation {
    int utterance_index = 0;
    bool is_process = false;
    DimensionSet dimensions;
    // Set when the backend failed for this utterance and the annotation was
    // degraded to a marked negative instead of aborting the session.
    std::optional<std::string> error;

    bool operator==(const ProcessAnnotation&) const = default;
};

struct DetectionConfig {
    int k = 0;             // in {0, 1, 5, 10, 50, 100}
    int runs = 1;          // 3 for evaluation protocols
    int example_pool_size = 200;
    uint64_t rng_seed = 0;
};

bool valid_k(int k);

struct LabeledExample {
    std::string text;
    std::string context;
    ProcessAnnotation gold;
};

// Draws K examples balanced across positive/negative is_process as evenly as
// K allows (odd K gives the extra slot to positives), then shuffles. Same
// seed, same sequence.
std::vector<LabeledExample> sample_examples(const std::vector<LabeledExample>& pool, int k,
                                            uint64_t seed);

std::string build_detection_prompt(const std::vector<LabeledExample>& examples,
                                   const ContextWindow& window);

// Speaker-tagged rendering of a context window's neighbors, in session order.
std::string render_context(const ContextWindow& window);

// Line-delimited annotation records: utterance_index, is_process, dimensions,
// run_id (plus error when a call failed, rater_id on gold files).
struct AnnotationRecord {
    ProcessAnnotation annotation;
    int run_id = 0;
    std::string rater_id;
};

std::string annotations_to_jsonl(const std::vector<AnnotationRecord>& records);
std::vector<AnnotationRecord> parse_annotations_jsonl(const std::string& jsonl,
                                                      const std::string& origin = "<memory>");
std::vector<AnnotationRecord> load_annotations(const std::string& path);
void save_annotations(const std::vector<AnnotationRecord>& records, const std::string& path);

// Example pools are annotation records carrying the source text and context
// inline so they can be rendered into prompts.
std::vector<LabeledExample> load_example_pool(const std::string& path);

struct DetectionOutcome {
    // One complete annotation list per run, ordered by utterance index.
    std::vector<std::vector<ProcessAnnotation>> runs;
    std::vector<std::string> errors;
    bool phase_too_short = false;
};

class Detector {
public:
    Detector(Gateway& gateway, std::vector<LabeledExample> pool);

    const std::vector<LabeledExample>& pool() const { return pool_; }

    // Classifies one utterance-with-context. Backend errors propagate.
    ProcessAnnotation detect_one(const ContextWindow& window, const DetectionConfig& config,
                                 const BackendSpec& backend);

    // Classifies every patient utterance in the session's working phase.
    // Therapist utterances get an is_process=false annotation without a
    // backend call. Each run samples a fresh example set (seed + run index).
    // Per-utterance failures degrade to marked negatives.
    DetectionOutcome detect_session(const Session& session, const DetectionConfig& config,
                                    const BackendSpec& backend, double lead_min = 15.0,
                                    double tail_min = 5.0);

private:
    std::vector<LabeledExample> experiment_pool(const DetectionConfig& config) const;
    ProcessAnnotation call_and_parse(const std::vector<LabeledExample>& examples,
                                     const ContextWindow& window, const BackendSpec& backend);

    Gateway& gateway_;
    std::vector<LabeledExample> pool_;
};

// Majority aggregation across runs (off by default in the CLI): is_process by
// majority; dimensions that appear in at least half of the positive runs,
// falling back to the union when that leaves none.
ProcessAnnotation majority_annotation(const std::vector<ProcessAnnotation>& across_runs);

}  // namespace procnet
